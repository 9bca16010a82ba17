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

#include "qlab/states.hpp"

#include <cmath>
#include <string>

#include "src/ic_core.hpp"

namespace qlab {
namespace {

constexpr double kNormTol = 1e-10;
constexpr double kAmpZero = 1e-10;  // amplitudes below this count as zero

// Gauge fix: rotate so the first non-negligible amplitude is real >= 0.
void canonicalize_phase(ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > kAmpZero) {
      const Complex rot = std::conj(v[i]) / mag;
      v *= rot;
      v[i] = mag;  // kill residual imaginary dust
      return;
    }
  }
}

}  // namespace

PureState::PureState(ComplexVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0)
    fail("invalid-pure-state", "amplitude vector is empty");
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const Complex& z = amplitudes_[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail("invalid-pure-state", "non-finite amplitude");
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) >= kNormTol)
    fail("invalid-pure-state",
         "norm^2 = " + std::to_string(norm2) + " is not 1");
  canonicalize_phase(amplitudes_);
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (n < 1e-12)
    fail("invalid-pure-state", "cannot normalize a (near-)zero vector");
  return PureState(amplitudes / n);
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix,
                             std::optional<std::string> label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    fail("invalid-density-matrix", "matrix must be square and non-empty");
  if (!all_finite(matrix_))
    fail("invalid-density-matrix", "non-finite entries");
  if (!is_hermitian(matrix_))
    fail("invalid-density-matrix", "not Hermitian within 1e-10");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) >= kNormTol)
    fail("invalid-density-matrix", "trace = " + std::to_string(tr));
  const EigResult eig = eig_hermitian(matrix_);
  if (eig.eigenvalues[0] < -kNormTol)
    fail("invalid-density-matrix",
         "min eigenvalue = " + std::to_string(eig.eigenvalues[0]));
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(projector(psi.amplitudes()));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

StateOrEnsemble make_mixture(std::vector<Ensemble::Component> components) {
  if (components.empty())
    fail("invalid-ensemble", "a mixture needs at least one component");
  const int d = components.front().state.dim();

  double total = 0.0;
  for (const auto& c : components) {
    if (c.state.dim() != d)
      fail("dim-mismatch", "mixture components have unequal dimensions");
    if (c.weight < -kWeightFloor)
      fail("invalid-ensemble", "negative weight " + std::to_string(c.weight));
    if (c.weight > kWeightFloor) total += c.weight;
  }
  if (total <= 0.0)
    fail("invalid-ensemble", "all weights are negligible");

  // Merge statistical duplicates: same canonical IC probabilities => same
  // state for every purpose in this framework.
  std::vector<Ensemble::Component> merged;
  for (auto& c : components) {
    if (c.weight <= kWeightFloor) continue;
    const double w = c.weight / total;
    bool found = false;
    for (auto& m : merged) {
      if (detail::canonical_prob_gap(m.state.matrix(), c.state.matrix()) <
          kMergeTol) {
        m.weight += w;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back({w, std::move(c.state)});
  }

  if (merged.size() == 1) return std::move(merged.front().state);

  // Exact renormalization after merging keeps the weight-sum invariant tight.
  double sum = 0.0;
  for (const auto& m : merged) sum += m.weight;
  for (auto& m : merged) m.weight /= sum;
  return Ensemble(std::move(merged));
}

DensityMatrix collapse_to_density(const Ensemble& e) {
  ComplexMatrix acc = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& c : e.components()) acc += c.weight * c.state.matrix();
  return DensityMatrix(std::move(acc));
}

DensityMatrix collapse(const StateOrEnsemble& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s)) return *state;
  return collapse_to_density(std::get<Ensemble>(s));
}

std::vector<Ensemble::Component> components_of(const StateOrEnsemble& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return {{1.0, *state}};
  return std::get<Ensemble>(s).components();
}

int dim_of(const StateOrEnsemble& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s)) return state->dim();
  return std::get<Ensemble>(s).dim();
}

PureState superpose(
    const std::vector<std::pair<Complex, PureState>>& terms) {
  if (terms.empty()) fail("null-superposition", "no terms");
  const int d = terms.front().second.dim();
  ComplexVector acc = ComplexVector::Zero(d);
  for (const auto& [amp, psi] : terms) {
    if (psi.dim() != d)
      fail("dim-mismatch", "superposition terms have unequal dimensions");
    acc += amp * psi.amplitudes();
  }
  if (acc.norm() <= 1e-12)
    fail("null-superposition", "terms cancel to the zero vector");
  return PureState::normalized(std::move(acc));
}

PureState lab_superposition(const std::vector<double>& weights,
                            int pointer_dim,
                            const std::vector<Complex>& phases) {
  const int k_count = static_cast<int>(weights.size());
  if (k_count < 1) fail("invalid-scenario", "no outcomes");
  if (pointer_dim < k_count)
    fail("pointer-too-small",
         "pointer dim " + std::to_string(pointer_dim) + " < " +
             std::to_string(k_count) + " outcomes");

  double sum = 0.0;
  for (double w : weights) {
    if (w < -kWeightFloor)
      fail("invalid-scenario", "negative weight");
    sum += std::max(w, 0.0);
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("invalid-scenario", "weights sum to " + std::to_string(sum));

  if (!phases.empty()) {
    if (static_cast<int>(phases.size()) != k_count)
      fail("invalid-scenario", "phase vector length mismatch");
    for (const Complex& p : phases)
      if (std::abs(std::abs(p) - 1.0) >= 1e-12)
        fail("invalid-scenario", "phases must have unit modulus");
  }

  ComplexVector v = ComplexVector::Zero(
      static_cast<Eigen::Index>(k_count) * pointer_dim);
  for (int k = 0; k < k_count; ++k) {
    const Complex phase = phases.empty() ? Complex(1.0, 0.0) : phases[k];
    v[static_cast<Eigen::Index>(k) * pointer_dim + k] =
        phase * std::sqrt(std::max(weights[k], 0.0) / sum);
  }
  return PureState::normalized(std::move(v));
}

StateOrEnsemble flatten(
    const std::vector<std::pair<double, StateOrEnsemble>>& meta) {
  if (meta.empty()) fail("invalid-ensemble", "empty meta-mixture");
  double psum = 0.0;
  for (const auto& [p, child] : meta) {
    (void)child;
    if (p < -kWeightFloor) fail("invalid-ensemble", "negative meta-weight");
    psum += std::max(p, 0.0);
  }
  if (std::abs(psum - 1.0) >= 1e-9)
    fail("invalid-ensemble", "meta-weights sum to " + std::to_string(psum));

  std::vector<Ensemble::Component> pool;
  for (const auto& [p, child] : meta) {
    if (p <= kWeightFloor) continue;
    for (const auto& c : components_of(child))
      pool.push_back({p / psum * c.weight, c.state});
  }
  return make_mixture(std::move(pool));
}

StateOrEnsemble reduced_ensemble(const Ensemble& e, std::pair<int, int> dims,
                                 int keep) {
  std::vector<Ensemble::Component> out;
  out.reserve(e.size());
  for (const auto& c : e.components())
    out.push_back(
        {c.weight, DensityMatrix(partial_trace(c.state.matrix(), dims, keep))});
  return make_mixture(std::move(out));
}

StateOrEnsemble reduced(const StateOrEnsemble& s, std::pair<int, int> dims,
                        int keep) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return DensityMatrix(partial_trace(state->matrix(), dims, keep));
  return reduced_ensemble(std::get<Ensemble>(s), dims, keep);
}

}  // namespace qlab
