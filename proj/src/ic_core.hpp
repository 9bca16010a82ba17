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

#ifndef QLAB_SRC_IC_CORE_HPP
#define QLAB_SRC_IC_CORE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "qlab/linalg.hpp"

namespace qlab::detail {

// d^2 effects resolving the identity whose Gram matrix (Hilbert-Schmidt
// inner products) has full rank d^2; the spectrum extremes are kept so
// downstream code can reason about frame conditioning.
struct IcFrame {
  std::vector<ComplexMatrix> effects;
  double gram_min = 0.0;
  double gram_max = 0.0;
};

// Gram spectrum extremes (min, max eigenvalue) of an effect list.
std::pair<double, double> gram_extremes(
    const std::vector<ComplexMatrix>& effects);

// Seeded random-frame construction: d^2 Haar kets |psi_i>, F = sum
// |psi_i><psi_i|, effects F^{-1/2} |psi_i><psi_i| F^{-1/2}. Retries with
// seed+1, seed+2, ... (at most max_retries retries) until the Gram matrix
// has rank d^2 with condition number < 1e6; throws "ic-construction-failed"
// once retries are exhausted.
//
// check_conditioning=false skips the Gram-spectrum gate (and its O(d^6)
// cost): a Haar frame is informationally complete with probability 1, which
// is all the internal merge criterion needs. Measurement construction keeps
// the gate.
IcFrame make_ic_frame(int dim, std::uint64_t seed, int max_retries = 16,
                      bool check_conditioning = true);

// Fixed-seed frame shared by everyone who needs a statistical identity test
// without carrying a measurement around (ensemble duplicate merging).
// Cached per dimension.
const IcFrame& canonical_frame(int dim);

// max_i |tr(a Pi_i) - tr(b Pi_i)| over the canonical frame of the common
// dimension.
double canonical_prob_gap(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qlab::detail

#endif  // QLAB_SRC_IC_CORE_HPP
