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

#ifndef QLAB_MAPS_HPP
#define QLAB_MAPS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/rng.hpp"
#include "qlab/states.hpp"

namespace qlab {

enum class MapKind {
  kUnitary,
  kKraus,
  kNonlinearPurify,
  kNonlinearMeanField,
  kQuasiLinear,
  kStochastic,
};

const char* map_kind_name(MapKind kind);

// d rho/dt = -i [h0 + g tr(rho a) a, rho], integrated by RK4 over [0, tau]
// with step size near `step` (the interval is divided evenly).
struct MeanFieldParams {
  ComplexMatrix h0;
  ComplexMatrix a;
  double g = 0.0;
  double tau = 1.0;
  double step = 1e-3;
};

// Tagged transformation. Unitary and Kraus maps are the convex-linear
// population; purification and mean-field flow are the deterministic
// non-linear representatives; quasi-linear maps reweight decompositions
// (see DecoratedState); stochastic maps emit ensembles of branch outputs.
class DynamicalMap {
 public:
  static DynamicalMap unitary(ComplexMatrix u);
  static DynamicalMap identity_map(int dim);
  static DynamicalMap kraus(std::vector<ComplexMatrix> operators);
  static DynamicalMap purify(int dim);
  static DynamicalMap mean_field(MeanFieldParams params);
  static DynamicalMap quasi_linear(DynamicalMap base, double gamma);
  static DynamicalMap stochastic(
      std::vector<std::pair<double, DynamicalMap>> branches);

  // Skips invariant validation; exists so a deliberately broken descriptor
  // can be fed to validate() as a negative control.
  static DynamicalMap kraus_unchecked(std::vector<ComplexMatrix> operators);

  MapKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool deterministic() const { return kind_ != MapKind::kStochastic; }
  std::string label() const;

  // Re-checks the construction invariants (recursively for composite
  // kinds); throws "invalid-map" on violation.
  void validate() const;

  const ComplexMatrix& unitary_matrix() const;
  const std::vector<ComplexMatrix>& kraus_operators() const;
  const MeanFieldParams& mean_field_params() const;
  const DynamicalMap& base() const;  // quasi-linear component map
  double gamma() const;
  const std::vector<std::pair<double, DynamicalMap>>& branches() const;

 private:
  struct Payload;
  DynamicalMap(MapKind kind, int dim, std::shared_ptr<const Payload> payload)
      : kind_(kind), dim_(dim), payload_(std::move(payload)) {}

  MapKind kind_;
  int dim_;
  std::shared_ptr<const Payload> payload_;
};

// Density matrix together with a chosen convex decomposition. The
// decomposition is extra ontological data: two DecoratedStates with equal
// densities but different decompositions are different states as far as
// decomposition-sensitive (quasi-linear) dynamics is concerned.
class DecoratedState {
 public:
  DecoratedState(DensityMatrix density,
                 std::vector<Ensemble::Component> decomposition);

  // Decoration by the spectral decomposition (eigenvalues as weights;
  // negligible eigenvalues dropped). The default reading of a bare density
  // matrix when a quasi-linear map needs parameters.
  static DecoratedState spectral(const DensityMatrix& density);

  const DensityMatrix& density() const { return density_; }
  const std::vector<Ensemble::Component>& decomposition() const {
    return decomposition_;
  }
  int dim() const { return density_.dim(); }

 private:
  DensityMatrix density_;
  std::vector<Ensemble::Component> decomposition_;
};

// Output of a stochastic map: an epistemic ensemble over branch outputs
// (or the bare state, when the branches agree).
struct StochasticOutcome {
  StateOrEnsemble result;
};

// Deterministic action on one state. Unitary: U rho U^dag; Kraus: sum
// K rho K^dag; purify: rho^2 / tr(rho^2); mean-field: RK4 flow; quasi-
// linear: action on the spectral decoration. Stochastic maps are rejected
// here ("not-deterministic-map") since their output is an ensemble. Any
// output that violates the density-matrix invariants surfaces as
// "map-broke-state".
DensityMatrix apply(const DynamicalMap& map, const DensityMatrix& state);

// Component-wise action with the epistemic weights left untouched (the
// weights are beliefs; dynamics has no business updating them). Duplicates
// merged afterwards. Stochastic maps distribute branch weights through each
// component instead.
StateOrEnsemble apply_ensemble(const DynamicalMap& map, const Ensemble& e);

// Dispatch on the assignment kind.
StateOrEnsemble apply_any(const DynamicalMap& map, const StateOrEnsemble& s);

// {lambda_k : T_k(state)} for a stochastic map, duplicates merged.
StochasticOutcome apply_stochastic(const DynamicalMap& map,
                                   const DensityMatrix& state);

// Quasi-linear action: components mapped by the base map, weights reweighted
// to lambda_k^gamma (normalized), density recomputed from the new
// decomposition. gamma = 1 reduces to the plain convex-linear action.
DecoratedState apply_quasilinear(const DynamicalMap& map,
                                 const DecoratedState& s);

// Whatever the map produces, collapsed to the density operator that carries
// its statistics.
DensityMatrix apply_collapsed(const DynamicalMap& map,
                              const DensityMatrix& state);

struct AuditWitness {
  Ensemble ensemble;
  double gap = 0.0;
};

struct AuditReport {
  bool convex_linear = true;
  double max_gap = 0.0;
  int trials = 0;
  double tol = 0.0;
  std::optional<AuditWitness> witness;  // present iff a gap exceeded tol
};

// Samples seeded random ensembles (2-4 components, full-rank Wishart-like
// states) and compares T(rho(E)) against rho(T(E)) in trace distance. A
// witness certifies non-convex-linearity; the convex-linear verdict is
// inductive, i.e. holds at audit confidence only.
AuditReport audit_convex_linearity(const DynamicalMap& map, int dim,
                                   int trials, std::uint64_t seed,
                                   double tol = 1e-8);

// Seeded samplers shared by audits and test harnesses.
DensityMatrix random_density(int dim, Rng& rng);
Ensemble random_ensemble(int dim, Rng& rng);
ComplexMatrix random_unitary(int dim, Rng& rng);
DynamicalMap random_kraus_map(int dim, int n_operators, Rng& rng);

}  // namespace qlab

#endif  // QLAB_MAPS_HPP
