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

#ifndef QLAB_SERIALIZE_HPP
#define QLAB_SERIALIZE_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "qlab/maps.hpp"
#include "qlab/measurements.hpp"
#include "qlab/states.hpp"
#include "qlab/wigner.hpp"

namespace qlab {

using Json = nlohmann::json;

// Wire formats, shared between the library and the CLI:
//   complex number    [re, im]
//   matrix            array of rows, each an array of [re, im] pairs
//   density matrix    {"d": n, "entries": [[re, im], ...]}   (row-major flat)
//   ensemble          [{"weight": w, "state": <density>}, ...]
//   povm              {"id", "effects": [<matrix>...], "outcome_labels": [...]}
//   map descriptor    {"kind", "dim", "parameters": {...}}
// Parsers are strict: unknown object fields are rejected ("bad-config").

// Rejects members of `obj` outside required+optional; rejects missing
// required members.
void expect_fields(const Json& obj, const std::vector<std::string>& required,
                   const std::vector<std::string>& optional,
                   const std::string& where);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);

Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

Json ensemble_to_json(const Ensemble& e);
Json state_or_ensemble_to_json(const StateOrEnsemble& s);
// A one-element list parses to the bare state, per the mixture convention.
StateOrEnsemble mixture_from_json(const Json& j);

Json povm_to_json(const Povm& m);
Povm povm_from_json(const Json& j);

Json distribution_to_json(const OutcomeDistribution& d);
OutcomeDistribution distribution_from_json(const Json& j);

// Config-level measurement descriptor:
//   {"type": "computational"} | {"type": "ic", "seed": n} |
//   {"type": "explicit", ...povm fields...}
Povm povm_from_config(const Json& j, int dim);

Json map_to_json(const DynamicalMap& map);
DynamicalMap map_from_json(const Json& j);

Json audit_report_to_json(const AuditReport& report);
Json ld_report_to_json(const LdReport& report);

// SHA-256 hex digest; config hashes are taken over the canonical
// (sorted-key, no-whitespace) JSON dump.
std::string sha256_hex(const std::string& bytes);
std::string config_hash(const Json& config);

}  // namespace qlab

#endif  // QLAB_SERIALIZE_HPP
