// Copyright 2026 The qlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLAB_SUITE_HPP
#define QLAB_SUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/maps.hpp"
#include "qlab/serialize.hpp"

namespace qlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double gap = 0.0;        // headline number the check's bound applies to
  double runtime_ms = 0.0; // wall clock; never part of the report payload
  std::string detail;
};

// The built-in dim-2 map taxonomy the equivalence/audit biconditional is
// exercised against, with the expected "breaks equivalence" flag per map.
struct TaxonomyEntry {
  std::string name;
  DynamicalMap map;
  bool expected_to_break = false;
};
std::vector<TaxonomyEntry> builtin_taxonomy(std::uint64_t seed);

// Runs every bundled check deterministically from the seed. With
// negative_control set, a deliberately non-trace-preserving Kraus descriptor
// is injected into the invariant gate, which must then fail.
std::vector<CheckResult> run_paper_suite(std::uint64_t seed,
                                         bool negative_control = false);

bool suite_all_pass(const std::vector<CheckResult>& results);

// Deterministic report payload: check names, statuses and gaps only. Wall
// times stay out so reruns with one seed are byte-identical.
Json suite_payload(const std::vector<CheckResult>& results,
                   std::uint64_t seed);

}  // namespace qlab

#endif  // QLAB_SUITE_HPP
