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

#include "qlab/measurements.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "src/ic_core.hpp"

namespace qlab {
namespace {

constexpr double kEffectTol = 1e-10;
constexpr double kCompletenessTol = 1e-9;
constexpr double kMaxCondition = 1e6;

std::vector<double> raw_probs(const DensityMatrix& state, const Povm& m) {
  if (state.dim() != m.dim())
    fail("dim-mismatch", "state dim " + std::to_string(state.dim()) +
                             " vs measurement dim " + std::to_string(m.dim()));
  std::vector<double> p;
  p.reserve(m.size());
  for (const ComplexMatrix& e : m.effects())
    p.push_back(trace_product(state.matrix(), e).real());
  return p;
}

}  // namespace

Povm::Povm(std::vector<ComplexMatrix> effects, std::vector<int> outcome_labels,
           std::string id)
    : effects_(std::move(effects)),
      outcome_labels_(std::move(outcome_labels)),
      id_(std::move(id)) {
  if (effects_.empty()) fail("invalid-povm", "no effects");
  if (outcome_labels_.size() != effects_.size())
    fail("invalid-povm", "label count does not match effect count");
  const auto d = effects_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& e : effects_) {
    if (e.rows() != d || e.cols() != d)
      fail("invalid-povm", "effects have unequal dimensions");
    if (!all_finite(e)) fail("invalid-povm", "non-finite effect entries");
    if (!is_hermitian(e, kEffectTol))
      fail("invalid-povm", "effect is not Hermitian");
    const EigResult eig = eig_hermitian(e);
    if (eig.eigenvalues[0] < -kEffectTol)
      fail("invalid-povm", "effect has negative eigenvalue " +
                               std::to_string(eig.eigenvalues[0]));
    sum += e;
  }
  if (max_abs(sum - identity(static_cast<int>(d))) >= kCompletenessTol)
    fail("invalid-povm", "effects do not sum to the identity");

  const auto [lo, hi] = detail::gram_extremes(effects_);
  gram_min_ = lo;
  gram_max_ = hi;
  informationally_complete_ =
      effects_.size() >= static_cast<std::size_t>(d * d) && lo > 0.0 &&
      hi / lo < kMaxCondition;
}

Povm computational_povm(int dim) {
  if (dim < 1) fail("invalid-povm", "dimension must be positive");
  std::vector<ComplexMatrix> effects;
  std::vector<int> labels;
  for (int k = 0; k < dim; ++k) {
    effects.push_back(basis_projector(dim, k));
    labels.push_back(k);
  }
  return Povm(std::move(effects), std::move(labels),
              "comp-d" + std::to_string(dim));
}

Povm build_ic_povm(int dim, std::uint64_t seed) {
  if (dim < 2) fail("ic-construction-failed", "dimension must be >= 2");
  detail::IcFrame frame = detail::make_ic_frame(dim, seed);
  std::vector<int> labels(frame.effects.size());
  std::iota(labels.begin(), labels.end(), 0);
  return Povm(std::move(frame.effects), std::move(labels),
              "ic-d" + std::to_string(dim) + "-s" + std::to_string(seed));
}

OutcomeDistribution::OutcomeDistribution(std::vector<double> probabilities,
                                         std::vector<int> labels)
    : probabilities_(std::move(probabilities)), labels_(std::move(labels)) {
  if (probabilities_.empty())
    fail("invalid-distribution", "no outcomes");
  if (labels_.size() != probabilities_.size())
    fail("invalid-distribution", "label count mismatch");
  double sum = 0.0;
  for (double& p : probabilities_) {
    if (!(p > -1e-12) || !(p < 1.0 + 1e-12))
      fail("invalid-distribution",
           "probability " + std::to_string(p) + " outside [0,1]");
    p = std::min(std::max(p, 0.0), 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("invalid-distribution",
         "probabilities sum to " + std::to_string(sum));
}

OutcomeDistribution born(const DensityMatrix& state, const Povm& m) {
  return OutcomeDistribution(raw_probs(state, m), m.outcome_labels());
}

OutcomeDistribution born_ensemble(const Ensemble& e, const Povm& m) {
  std::vector<double> acc(m.size(), 0.0);
  for (const auto& c : e.components()) {
    const std::vector<double> p = raw_probs(c.state, m);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.weight * p[i];
  }
  return OutcomeDistribution(std::move(acc), m.outcome_labels());
}

OutcomeDistribution born_any(const StateOrEnsemble& s, const Povm& m) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return born(*state, m);
  return born_ensemble(std::get<Ensemble>(s), m);
}

double tv_distance(const OutcomeDistribution& a,
                   const OutcomeDistribution& b) {
  if (a.labels() != b.labels())
    fail("dim-mismatch", "distributions over different outcome sets");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.probabilities().size(); ++i)
    sum += std::abs(a.probabilities()[i] - b.probabilities()[i]);
  return 0.5 * sum;
}

ProbVector::ProbVector(std::vector<double> entries, std::string ic_ref)
    : entries_(std::move(entries)), ic_ref_(std::move(ic_ref)) {
  if (entries_.empty()) fail("invalid-prob-vector", "no entries");
  double sum = 0.0;
  for (double& p : entries_) {
    if (!(p > -1e-12) || !(p < 1.0 + 1e-12))
      fail("invalid-prob-vector",
           "entry " + std::to_string(p) + " outside [0,1]");
    p = std::min(std::max(p, 0.0), 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("invalid-prob-vector", "entries sum to " + std::to_string(sum));
}

ProbVector prob_vector(const DensityMatrix& state, const Povm& ic) {
  if (!ic.informationally_complete())
    fail("not-informationally-complete",
         "measurement '" + ic.id() + "' cannot fix a state");
  return ProbVector(raw_probs(state, ic), ic.id());
}

ProbVector prob_vector_any(const StateOrEnsemble& s, const Povm& ic) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return prob_vector(*state, ic);
  const OutcomeDistribution d = born_ensemble(std::get<Ensemble>(s), ic);
  if (!ic.informationally_complete())
    fail("not-informationally-complete",
         "measurement '" + ic.id() + "' cannot fix a state");
  return ProbVector(d.probabilities(), ic.id());
}

ComplexMatrix reconstruct_hermitian(const std::vector<double>& probs,
                                    const Povm& ic) {
  if (!ic.informationally_complete())
    fail("not-informationally-complete",
         "measurement '" + ic.id() + "' cannot invert probabilities");
  if (probs.size() != ic.size())
    fail("dim-mismatch", "probability count does not match effect count");
  const int d = ic.dim();
  const int n = d * d;

  // Real parametrization of a Hermitian unknown: d diagonal entries, then
  // (Re, Im) per upper off-diagonal pair.
  Eigen::MatrixXd design(static_cast<Eigen::Index>(ic.size()), n);
  for (std::size_t r = 0; r < ic.size(); ++r) {
    const ComplexMatrix& e = ic.effects()[r];
    int col = 0;
    for (int a = 0; a < d; ++a) design(static_cast<Eigen::Index>(r), col++) = e(a, a).real();
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        design(static_cast<Eigen::Index>(r), col++) = 2.0 * e(i, j).real();
        design(static_cast<Eigen::Index>(r), col++) = 2.0 * e(i, j).imag();
      }
  }
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i)
    rhs[static_cast<Eigen::Index>(i)] = probs[i];

  const Eigen::VectorXd x = design.colPivHouseholderQr().solve(rhs);
  const double residual = (design * x - rhs).lpNorm<Eigen::Infinity>();
  if (residual > 1e-8)
    fail("not-a-state-vector",
         "linear inversion residual " + std::to_string(residual));

  ComplexMatrix m(d, d);
  int col = 0;
  for (int a = 0; a < d; ++a) m(a, a) = x[col++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = x[col++];
      const double im = x[col++];
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return m;
}

double equivalence_gap(const StateOrEnsemble& a, const StateOrEnsemble& b,
                       const Povm& ic) {
  const ProbVector pa = prob_vector_any(a, ic);
  const ProbVector pb = prob_vector_any(b, ic);
  double gap = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i)
    gap = std::max(gap, std::abs(pa.entries()[i] - pb.entries()[i]));
  return gap;
}

bool same_equivalence_class(const StateOrEnsemble& a, const StateOrEnsemble& b,
                            const Povm& ic, double tol) {
  if (dim_of(a) != dim_of(b))
    fail("dim-mismatch", "cannot compare assignments of unequal dimension");
  return equivalence_gap(a, b, ic) < tol;
}

bool is_quasi_superposition(const DensityMatrix& state, const Povm& classical,
                            double threshold) {
  // The classical measurement must mutually perfectly distinguish its
  // outcome states: pairwise orthogonal projectors.
  for (std::size_t i = 0; i < classical.size(); ++i) {
    const ComplexMatrix& e = classical.effects()[i];
    if (max_abs(e * e - e) >= 1e-9)
      fail("not-classical-measurement", "effect is not a projector");
    for (std::size_t j = i + 1; j < classical.size(); ++j)
      if (max_abs(e * classical.effects()[j]) >= 1e-9)
        fail("not-classical-measurement", "effects are not orthogonal");
  }
  const OutcomeDistribution d = born(state, classical);
  int nontrivial = 0;
  for (double p : d.probabilities())
    if (p > threshold) ++nontrivial;
  return nontrivial >= 2;
}

}  // namespace qlab
