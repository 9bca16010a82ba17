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

#include "qlab/wigner.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <string>

namespace qlab {
namespace {

constexpr int kRefineMaxIter = 200;
constexpr double kRefineSizeTol = 1e-10;

// Reduced assignments on the system factor for both readings of the lab.
struct ReducedSides {
  StateOrEnsemble ensemble_side;
  DensityMatrix superposition_side;
};

ReducedSides reduce_scenario(const LabScenario& s) {
  const ScenarioStates states = build_scenario(s);
  const std::pair<int, int> dims{s.system_dim(), s.pointer_dim()};
  return {reduced(states.ensemble, dims, 0),
          DensityMatrix(
              partial_trace(states.superposition.matrix(), dims, 0))};
}

struct RefineContext {
  const ProtocolFamily* family;
  const LabScenario* scenario;
  const Povm* povm;
  double threshold;
  std::vector<ProtocolEvaluation>* log;
};

double negative_tv(const gsl_vector* x, void* raw) {
  auto* ctx = static_cast<RefineContext*>(raw);
  const double parameter = gsl_vector_get(x, 0);
  if (!ctx->family->parameter_valid(parameter)) return 1.0;  // dead point
  // The simplex explores parameters nobody vetted; a map that breaks down
  // there (e.g. integrator drift past the state invariants) is a dead point
  // too, not a fatal error.
  try {
    const LdReport report = run_friend_protocol(
        *ctx->scenario, ctx->family->instantiate(parameter), *ctx->povm,
        ctx->threshold);
    ctx->log->push_back({ctx->family->name(), parameter, ctx->povm->id(),
                         report.tv_distance, report.ld_violated});
    return -report.tv_distance;
  } catch (const Error&) {
    return 1.0;
  }
}

}  // namespace

LabScenario::LabScenario(std::vector<double> weights, int pointer_dim,
                         std::vector<Complex> phases)
    : weights_(std::move(weights)),
      pointer_dim_(pointer_dim),
      phases_(std::move(phases)) {
  if (weights_.empty()) fail("invalid-scenario", "no outcomes");
  if (pointer_dim_ < outcome_count())
    fail("pointer-too-small",
         "pointer dim " + std::to_string(pointer_dim_) + " < " +
             std::to_string(outcome_count()) + " outcomes");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < -kWeightFloor) fail("invalid-scenario", "negative weight");
    sum += std::max(w, 0.0);
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("invalid-scenario", "weights sum to " + std::to_string(sum));
  for (double& w : weights_) w = std::max(w, 0.0) / sum;
  if (!phases_.empty()) {
    if (phases_.size() != weights_.size())
      fail("invalid-scenario", "phase vector length mismatch");
    for (const Complex& p : phases_)
      if (std::abs(std::abs(p) - 1.0) >= 1e-12)
        fail("invalid-scenario", "phases must have unit modulus");
  }
}

LabScenario LabScenario::uniform(int outcome_count) {
  if (outcome_count < 1) fail("invalid-scenario", "no outcomes");
  return LabScenario(
      std::vector<double>(static_cast<std::size_t>(outcome_count),
                          1.0 / outcome_count),
      outcome_count);
}

ScenarioStates build_scenario(const LabScenario& s) {
  const int k_count = s.outcome_count();
  const int d2 = s.pointer_dim();

  std::vector<Ensemble::Component> components;
  for (int k = 0; k < k_count; ++k) {
    if (s.weights()[static_cast<std::size_t>(k)] <= kWeightFloor) continue;
    components.push_back(
        {s.weights()[static_cast<std::size_t>(k)],
         DensityMatrix(tensor(basis_projector(k_count, k),
                              basis_projector(d2, k)))});
  }

  const PureState entangled =
      lab_superposition(s.weights(), d2, s.phases());
  return {make_mixture(std::move(components)),
          DensityMatrix::pure(entangled)};
}

double marginal_equality_gap(const LabScenario& s, const Povm& ic) {
  if (ic.dim() != s.system_dim())
    fail("dim-mismatch", "IC measurement must act on the system factor");
  const ReducedSides sides = reduce_scenario(s);
  const OutcomeDistribution pe = born_any(sides.ensemble_side, ic);
  const OutcomeDistribution ps = born(sides.superposition_side, ic);
  double gap = 0.0;
  for (std::size_t i = 0; i < pe.probabilities().size(); ++i)
    gap = std::max(gap,
                   std::abs(pe.probabilities()[i] - ps.probabilities()[i]));
  return gap;
}

LdReport run_friend_protocol(const LabScenario& s, const DynamicalMap& t1,
                             const Povm& m1, double threshold) {
  if (t1.dim() != s.system_dim() || m1.dim() != s.system_dim())
    fail("dim-mismatch",
         "friend operations are confined to the system factor");
  const ReducedSides sides = reduce_scenario(s);

  const StateOrEnsemble ensemble_final = apply_any(t1, sides.ensemble_side);
  const StateOrEnsemble superposition_final =
      apply_any(t1, StateOrEnsemble(sides.superposition_side));

  const double tv = tv_distance(born_any(ensemble_final, m1),
                                born_any(superposition_final, m1));
  LdReport report;
  report.tv_distance = tv;
  report.map_label = t1.label();
  report.povm_id = m1.id();
  report.threshold = threshold;
  report.ld_violated = tv > threshold;
  return report;
}

ProtocolFamily ProtocolFamily::unitary_rotation(ComplexMatrix generator,
                                                std::vector<double> grid) {
  if (!is_hermitian(generator))
    fail("invalid-map", "rotation generator must be Hermitian");
  ProtocolFamily f(Kind::kUnitary, static_cast<int>(generator.rows()),
                   std::move(grid));
  f.generator_ = std::move(generator);
  return f;
}

ProtocolFamily ProtocolFamily::mean_field(ComplexMatrix h0, ComplexMatrix a,
                                          double tau, double step,
                                          std::vector<double> grid) {
  ProtocolFamily f(Kind::kMeanField, static_cast<int>(h0.rows()),
                   std::move(grid));
  f.h0_ = std::move(h0);
  f.a_ = std::move(a);
  f.tau_ = tau;
  f.step_ = step;
  // Validate the fixed parts once via a throwaway instance.
  DynamicalMap::mean_field({f.h0_, f.a_, 0.0, f.tau_, f.step_});
  return f;
}

ProtocolFamily ProtocolFamily::quasi_linear(DynamicalMap base,
                                            std::vector<double> grid) {
  ProtocolFamily f(Kind::kQuasiLinear, base.dim(), std::move(grid));
  f.base_ = std::make_shared<const DynamicalMap>(std::move(base));
  return f;
}

std::string ProtocolFamily::name() const {
  switch (kind_) {
    case Kind::kUnitary: return "unitary";
    case Kind::kMeanField: return "meanfield";
    case Kind::kQuasiLinear: return "quasilinear";
  }
  return "unknown";
}

bool ProtocolFamily::parameter_valid(double parameter) const {
  if (!std::isfinite(parameter)) return false;
  if (kind_ == Kind::kQuasiLinear) return parameter > 0.0;
  return true;
}

DynamicalMap ProtocolFamily::instantiate(double parameter) const {
  switch (kind_) {
    case Kind::kUnitary:
      return DynamicalMap::unitary(evolution_unitary(generator_, parameter));
    case Kind::kMeanField:
      return DynamicalMap::mean_field({h0_, a_, parameter, tau_, step_});
    case Kind::kQuasiLinear:
      return DynamicalMap::quasi_linear(*base_, parameter);
  }
  fail("empty-search-space", "unknown family kind");
}

SearchResult search_best_protocol(const LabScenario& s,
                                  const ProtocolFamily& family,
                                  const std::vector<Povm>& m_candidates,
                                  int budget, double threshold) {
  if (family.grid().empty() || m_candidates.empty() || budget < 1)
    fail("empty-search-space",
         "need a non-empty grid, measurement candidates, and budget >= 1");
  if (family.dim() != s.system_dim())
    fail("dim-mismatch", "family dimension must match the system factor");

  SearchResult result;
  int evaluations = 0;
  double best_tv = -1.0;
  double best_parameter = 0.0;
  const Povm* best_povm = nullptr;

  for (double parameter : family.grid()) {
    if (evaluations >= budget) break;
    if (!family.parameter_valid(parameter)) continue;
    const DynamicalMap map = family.instantiate(parameter);
    for (const Povm& m : m_candidates) {
      if (evaluations >= budget) break;
      const LdReport report = run_friend_protocol(s, map, m, threshold);
      ++evaluations;
      result.evaluations.push_back({family.name(), parameter, m.id(),
                                    report.tv_distance, report.ld_violated});
      if (report.tv_distance > best_tv) {
        best_tv = report.tv_distance;
        best_parameter = parameter;
        best_povm = &m;
      }
    }
  }
  if (best_povm == nullptr)
    fail("empty-search-space", "no evaluable grid point within budget");

  // Derivative-free refinement around the best grid point; the measurement
  // stays fixed. Robust to the purification map's kinks at degenerate
  // spectra.
  RefineContext ctx{&family, &s, best_povm, threshold, &result.evaluations};
  gsl_multimin_function objective;
  objective.n = 1;
  objective.f = &negative_tv;
  objective.params = &ctx;

  double span = 0.0;
  for (double g : family.grid())
    span = std::max(span, std::abs(g - best_parameter));
  const double initial_step = std::max(1e-3, span > 0.0 ? span * 0.1 : 0.1);

  gsl_vector* x = gsl_vector_alloc(1);
  gsl_vector* step = gsl_vector_alloc(1);
  gsl_vector_set(x, 0, best_parameter);
  gsl_vector_set(step, 0, initial_step);

  gsl_multimin_fminimizer* minimizer = gsl_multimin_fminimizer_alloc(
      gsl_multimin_fminimizer_nmsimplex2, 1);
  gsl_multimin_fminimizer_set(minimizer, &objective, x, step);

  double refined_parameter = best_parameter;
  double refined_tv = best_tv;
  for (int iter = 0; iter < kRefineMaxIter; ++iter) {
    if (gsl_multimin_fminimizer_iterate(minimizer) != 0) break;
    if (-minimizer->fval > refined_tv) {
      refined_tv = -minimizer->fval;
      refined_parameter = gsl_vector_get(minimizer->x, 0);
    }
    if (gsl_multimin_fminimizer_size(minimizer) < kRefineSizeTol) break;
  }
  gsl_multimin_fminimizer_free(minimizer);
  gsl_vector_free(step);
  gsl_vector_free(x);

  result.best_parameter = refined_parameter;
  result.best_map = family.instantiate(refined_parameter);
  result.best = run_friend_protocol(s, *result.best_map, *best_povm, threshold);
  return result;
}

}  // namespace qlab
