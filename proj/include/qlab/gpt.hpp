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

#ifndef QLAB_GPT_HPP
#define QLAB_GPT_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qlab/maps.hpp"
#include "qlab/measurements.hpp"

namespace qlab {

// The abstract layer works on IC probability vectors only: a state is its
// outcome distribution for the distinguished IC measurement, and a dynamical
// map acts on those vectors by reconstruct -> apply -> re-measure.

// A dynamical map read at the probability-vector level, against a fixed IC
// measurement.
struct InducedMap {
  DynamicalMap underlying;
  std::string ic_ref;
};

// Reconstructs the state behind `p` (linear inversion, eigenvalue clipping
// at -1e-8 with trace renormalization), applies the map, and measures the IC
// again. Throws "not-a-state-vector" when p is not the signature of any
// state, "ic-mismatch" when p was generated by a different measurement.
ProbVector induce(const DynamicalMap& map, const Povm& ic,
                  const ProbVector& p);

// State reconstruction with the clipping policy above.
DensityMatrix reconstruct_state(const ProbVector& p, const Povm& ic);

// Samples random convex mixtures of IC probability vectors and compares
// T(sum lambda p_k) against sum lambda T(p_k) in max norm. Same report
// shape and confidence caveat as the density-matrix-level audit.
AuditReport gpt_convex_linearity_check(const DynamicalMap& map, const Povm& ic,
                                       int trials, std::uint64_t seed,
                                       double tol = 1e-8);

// One side of an equivalence pair: either a bare state or a state decorated
// with the decomposition a quasi-linear map is entitled to read.
using CertificateState = std::variant<DensityMatrix, DecoratedState>;

struct CertificatePair {
  std::string name;
  CertificateState state;
  Ensemble ensemble;
};

struct PairOutcome {
  std::string name;
  bool preserved = false;
  double post_gap = 0.0;  // IC max-norm gap between the mapped sides
};

struct PreservationReport {
  std::vector<PairOutcome> pairs;
  bool all_preserved = true;
};

// For each pre-equivalent (state, ensemble) pair — checked, else
// "not-equivalent-input" — maps both sides (component-wise on the ensemble)
// and reports whether the images still sit in one equivalence class.
PreservationReport equivalence_preservation_certificate(
    const DynamicalMap& map, const Povm& ic,
    const std::vector<CertificatePair>& pairs, double tol = kEquivalenceTol);

// The built-in pair set the biconditional is exercised against: collapsed
// ensembles treated as states, plus decorated variants with asymmetric
// weights (the cases that expose decomposition reweighting).
std::vector<CertificatePair> standard_certificate_pairs(int dim,
                                                        std::uint64_t seed,
                                                        int n_random = 4);

// Lower bound on how much of a trace-distance gap must survive as an IC
// probability gap: 2 sqrt(gram_min) / d^(3/2).
double frame_constant(const Povm& ic);

// Runs the density-matrix audit and the probability-vector check over the
// SAME seeded mixtures and verifies they agree: every matrix-level gap above
// tol shows up at the probability level above tol * frame_constant, and the
// two verdicts coincide.
bool quantum_reduction_check(const DynamicalMap& map, const Povm& ic,
                             int trials, std::uint64_t seed,
                             double tol = 1e-8);

}  // namespace qlab

#endif  // QLAB_GPT_HPP
