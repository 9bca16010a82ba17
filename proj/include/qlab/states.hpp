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

#ifndef QLAB_STATES_HPP
#define QLAB_STATES_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qlab/linalg.hpp"

namespace qlab {

// Mixture weights below this are dropped and the remainder renormalized.
inline constexpr double kWeightFloor = 1e-12;

// Two mixture components are treated as the same state (and merged by weight
// addition) when their canonical IC outcome probabilities agree to this
// max-norm tolerance. Statistical identity, not matrix identity, is the
// merge criterion.
inline constexpr double kMergeTol = 1e-9;

// Unit vector of amplitudes. Canonical gauge: the first non-negligible
// amplitude is real and non-negative; constructors normalize the phase but
// reject vectors whose norm is off by more than 1e-10.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  // Divides by the norm first; throws "invalid-pure-state" on (near-)zero
  // input.
  static PureState normalized(ComplexVector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

// Improper mixed state: Hermitian, positive semidefinite, unit trace.
// Whatever indefiniteness a DensityMatrix carries is not attributed to
// anyone's ignorance; epistemic uncertainty lives in Ensemble instead, and
// the two are kept apart at the type level because non-linear maps treat
// them differently.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix matrix,
                         std::optional<std::string> label = std::nullopt);

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int d);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::optional<std::string>& label() const { return label_; }

 private:
  ComplexMatrix matrix_;
  std::optional<std::string> label_;
};

// Strictly epistemic mixture: we are certain the correct assignment is one
// of the components and the weights are our probabilities for each. An
// Ensemble always has >= 2 components; a one-component mixture is by
// convention just a state, which is why construction goes through
// make_mixture below rather than a public constructor.
class Ensemble {
 public:
  struct Component {
    double weight;
    DensityMatrix state;
  };

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  int dim() const { return components_.front().state.dim(); }

 private:
  explicit Ensemble(std::vector<Component> components)
      : components_(std::move(components)) {}

  friend std::variant<DensityMatrix, Ensemble> make_mixture(
      std::vector<Component> components);

  std::vector<Component> components_;
};

// A state assignment is either one state or an epistemic ensemble of them.
using StateOrEnsemble = std::variant<DensityMatrix, Ensemble>;

// The one constructor for epistemic mixtures: drops negligible weights,
// renormalizes, merges statistically duplicate components by weight
// addition, and returns the bare state when a single component remains.
// Throws "invalid-ensemble" on empty or negative input, "dim-mismatch" on
// unequal component dimensions.
StateOrEnsemble make_mixture(std::vector<Ensemble::Component> components);

// rho(E) = sum_k lambda_k rho_k: the unique density operator reproducing the
// ensemble's statistics for every measurement.
DensityMatrix collapse_to_density(const Ensemble& e);
DensityMatrix collapse(const StateOrEnsemble& s);

// Component view with a bare state read as the trivial one-element mixture.
std::vector<Ensemble::Component> components_of(const StateOrEnsemble& s);
int dim_of(const StateOrEnsemble& s);

// Normalized coherent sum of same-dimension pure states. Throws
// "null-superposition" when the terms cancel (norm <= 1e-12).
PureState superpose(
    const std::vector<std::pair<Complex, PureState>>& terms);

// sum_k phase_k sqrt(weights_k) |k>|k>, the entangled record of K outcomes
// against an orthonormal pointer basis of dimension pointer_dim >= K
// ("pointer-too-small" otherwise). Default phases are all +1; squared
// amplitudes equal the weights either way.
PureState lab_superposition(const std::vector<double>& weights,
                            int pointer_dim,
                            const std::vector<Complex>& phases = {});

// Uncertainty about which ensemble applies is again an ensemble: the
// weighted union of the children's components, merged as usual.
StateOrEnsemble flatten(
    const std::vector<std::pair<double, StateOrEnsemble>>& meta);

// Partial-traces every component against the declared factor dimensions,
// weights unchanged; merges afterwards (identical reduced components
// combine, possibly down to a bare state).
StateOrEnsemble reduced_ensemble(const Ensemble& e, std::pair<int, int> dims,
                                 int keep);
StateOrEnsemble reduced(const StateOrEnsemble& s, std::pair<int, int> dims,
                        int keep);

}  // namespace qlab

#endif  // QLAB_STATES_HPP
