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

#ifndef QLAB_WIGNER_HPP
#define QLAB_WIGNER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlab/gpt.hpp"
#include "qlab/maps.hpp"
#include "qlab/measurements.hpp"

namespace qlab {

// The sealed laboratory: K possible pointer records over a system of
// dimension d1 = K, a pointer of dimension d2 >= K, outside weights lambda
// for the records, and optional relative phases for the entangled reading.
class LabScenario {
 public:
  LabScenario(std::vector<double> weights, int pointer_dim,
              std::vector<Complex> phases = {});

  static LabScenario uniform(int outcome_count);

  int outcome_count() const { return static_cast<int>(weights_.size()); }
  int system_dim() const { return outcome_count(); }
  int pointer_dim() const { return pointer_dim_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Complex>& phases() const { return phases_; }

 private:
  std::vector<double> weights_;
  int pointer_dim_;
  std::vector<Complex> phases_;  // empty means all +1
};

// The two readings of the sealed lab: the epistemic ensemble over definite
// records, and the entangled quasi-superposition.
struct ScenarioStates {
  StateOrEnsemble ensemble;     // {lambda_k : |k><k| (x) |k><k|}
  DensityMatrix superposition;  // projector onto sum phase_k sqrt(lambda_k)|k>|k>
};

ScenarioStates build_scenario(const LabScenario& s);

// max |Pr(i | reduced ensemble) - Pr(i | reduced superposition)| over the IC
// outcomes: the marginal-equality gap that must vanish for every scenario.
double marginal_equality_gap(const LabScenario& s, const Povm& ic);

struct LdReport {
  double tv_distance = 0.0;
  std::string map_label;
  std::string povm_id;
  double threshold = 1e-6;
  bool ld_violated = false;
};

// The friend's strongest move: a transformation on the system followed by a
// measurement on the system (nothing touches the pointer). Compares the
// final statistics of the ensemble reading against the superposition
// reading.
LdReport run_friend_protocol(const LabScenario& s, const DynamicalMap& t1,
                             const Povm& m1, double threshold = 1e-6);

// One-parameter protocol families the search sweeps over.
class ProtocolFamily {
 public:
  enum class Kind { kUnitary, kMeanField, kQuasiLinear };

  // exp(-i theta generator) over the grid of angles.
  static ProtocolFamily unitary_rotation(ComplexMatrix generator,
                                         std::vector<double> grid);
  // Mean-field flow with coupling g swept over the grid.
  static ProtocolFamily mean_field(ComplexMatrix h0, ComplexMatrix a,
                                   double tau, double step,
                                   std::vector<double> grid);
  // Quasi-linear reweighting with exponent gamma swept over the grid.
  static ProtocolFamily quasi_linear(DynamicalMap base,
                                     std::vector<double> grid);

  Kind kind() const { return kind_; }
  const std::vector<double>& grid() const { return grid_; }
  int dim() const { return dim_; }
  std::string name() const;

  // Map for one parameter value; throws "empty-search-space" on invalid
  // parameters only at construction time (the search treats them as dead
  // points).
  DynamicalMap instantiate(double parameter) const;
  bool parameter_valid(double parameter) const;

 private:
  ProtocolFamily(Kind kind, int dim, std::vector<double> grid)
      : kind_(kind), dim_(dim), grid_(std::move(grid)) {}

  Kind kind_;
  int dim_;
  std::vector<double> grid_;
  ComplexMatrix generator_;
  ComplexMatrix h0_, a_;
  double tau_ = 1.0, step_ = 1e-3;
  std::shared_ptr<const DynamicalMap> base_;
};

struct ProtocolEvaluation {
  std::string family;
  double parameter = 0.0;
  std::string povm_id;
  double tv_distance = 0.0;
  bool ld_violated = false;
};

struct SearchResult {
  LdReport best;
  double best_parameter = 0.0;
  std::optional<DynamicalMap> best_map;
  std::vector<ProtocolEvaluation> evaluations;  // grid then refinement, in order
};

// Grid sweep capped at `budget` evaluations, then Nelder-Mead refinement
// (at most 200 iterations, simplex size tolerance 1e-10) from the best grid
// point with its measurement fixed. Deterministic given scenario, family,
// candidates and budget. Throws "empty-search-space" when there is nothing
// to evaluate.
SearchResult search_best_protocol(const LabScenario& s,
                                  const ProtocolFamily& family,
                                  const std::vector<Povm>& m_candidates,
                                  int budget, double threshold = 1e-6);

}  // namespace qlab

#endif  // QLAB_WIGNER_HPP
