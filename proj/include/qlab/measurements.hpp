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

#ifndef QLAB_MEASUREMENTS_HPP
#define QLAB_MEASUREMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/states.hpp"

namespace qlab {

// Default max-norm tolerance for declaring two IC probability vectors (hence
// two state assignments) statistically equivalent. Well above float noise,
// far below any effect size this library studies.
inline constexpr double kEquivalenceTol = 1e-9;

// Measurement as a list of effects: each Hermitian and PSD within 1e-10,
// summing to the identity within 1e-9. The Gram spectrum of the effects is
// computed once at construction so informational completeness is a stored
// fact rather than a repeated calculation.
class Povm {
 public:
  Povm(std::vector<ComplexMatrix> effects, std::vector<int> outcome_labels,
       std::string id);

  int dim() const { return static_cast<int>(effects_.front().rows()); }
  std::size_t size() const { return effects_.size(); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const std::vector<int>& outcome_labels() const { return outcome_labels_; }
  const std::string& id() const { return id_; }

  // Full Gram rank d^2 with condition number < 1e6.
  bool informationally_complete() const { return informationally_complete_; }
  double gram_min() const { return gram_min_; }
  double gram_max() const { return gram_max_; }

 private:
  std::vector<ComplexMatrix> effects_;
  std::vector<int> outcome_labels_;
  std::string id_;
  double gram_min_ = 0.0;
  double gram_max_ = 0.0;
  bool informationally_complete_ = false;
};

// Projectors onto the computational basis; doubles as the pointer
// measurement and as the classical measurement of a lab system.
Povm computational_povm(int dim);

// Seeded random-frame IC measurement: d^2 Haar kets dressed by the inverse
// square root of their frame operator. Deterministic in the seed; retries
// with incremented seeds on conditioning failure and throws
// "ic-construction-failed" when the budget is exhausted.
Povm build_ic_povm(int dim, std::uint64_t seed);

class OutcomeDistribution {
 public:
  OutcomeDistribution(std::vector<double> probabilities,
                      std::vector<int> labels);

  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::vector<double> probabilities_;
  std::vector<int> labels_;
};

// Pr(k) = tr(rho M_k).
OutcomeDistribution born(const DensityMatrix& state, const Povm& m);

// Component statistics weighted by the epistemic likelihoods.
OutcomeDistribution born_ensemble(const Ensemble& e, const Povm& m);
OutcomeDistribution born_any(const StateOrEnsemble& s, const Povm& m);

// Total variation distance between two distributions over the same outcomes.
double tv_distance(const OutcomeDistribution& a, const OutcomeDistribution& b);

// A state's IC outcome probabilities: the coordinates in which the abstract
// layer reasons. Entries clamped to [0,1] (inputs outside [-1e-12, 1+1e-12]
// rejected), sum checked to 1e-9.
class ProbVector {
 public:
  ProbVector(std::vector<double> entries, std::string ic_ref);

  const std::vector<double>& entries() const { return entries_; }
  const std::string& ic_ref() const { return ic_ref_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<double> entries_;
  std::string ic_ref_;
};

// p_S = {tr(rho Pi_i)}_i; requires an informationally complete measurement
// ("not-informationally-complete" otherwise).
ProbVector prob_vector(const DensityMatrix& state, const Povm& ic);
ProbVector prob_vector_any(const StateOrEnsemble& s, const Povm& ic);

// Linear-inversion tomography: the Hermitian operator whose IC
// probabilities are `probs`. No positivity enforcement here; callers decide
// their own projection policy. Throws "not-a-state-vector" when the
// probabilities are inconsistent with any Hermitian operator.
ComplexMatrix reconstruct_hermitian(const std::vector<double>& probs,
                                    const Povm& ic);

// True iff the IC probability vectors of the two assignments agree within
// tol in max norm, i.e. they belong to the same statistical equivalence
// class.
bool same_equivalence_class(const StateOrEnsemble& a, const StateOrEnsemble& b,
                            const Povm& ic, double tol = kEquivalenceTol);

// max-norm gap between the two assignments' IC probabilities.
double equivalence_gap(const StateOrEnsemble& a, const StateOrEnsemble& b,
                       const Povm& ic);

// A state (never an ensemble: enforced by the signature) that assigns
// non-negligible probability to two or more outcomes of the classical
// measurement. `classical` must consist of mutually orthogonal projectors
// ("not-classical-measurement" otherwise).
bool is_quasi_superposition(const DensityMatrix& state, const Povm& classical,
                            double threshold = 1e-6);

}  // namespace qlab

#endif  // QLAB_MEASUREMENTS_HPP
