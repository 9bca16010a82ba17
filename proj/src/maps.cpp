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

#include "qlab/maps.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "qlab/parallel.hpp"

namespace qlab {

struct DynamicalMap::Payload {
  ComplexMatrix unitary;
  std::vector<ComplexMatrix> kraus;
  MeanFieldParams mean_field;
  std::shared_ptr<const DynamicalMap> base;
  double gamma = 1.0;
  std::vector<std::pair<double, DynamicalMap>> branches;
};

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kKrausTol = 1e-9;

void check_unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0)
    fail("invalid-map", "unitary must be square");
  if (!all_finite(u)) fail("invalid-map", "non-finite unitary entries");
  if (max_abs(u.adjoint() * u - identity(static_cast<int>(u.rows()))) >=
      kUnitaryTol)
    fail("invalid-map", "matrix is not unitary within 1e-10");
}

void check_kraus(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) fail("invalid-map", "empty Kraus set");
  const auto d = ops.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& k : ops) {
    if (k.rows() != d || k.cols() != d)
      fail("invalid-map", "Kraus operators have unequal dimensions");
    if (!all_finite(k)) fail("invalid-map", "non-finite Kraus entries");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - identity(static_cast<int>(d))) >= kKrausTol)
    fail("invalid-map", "Kraus set is not trace preserving within 1e-9");
}

DensityMatrix guarded_density(ComplexMatrix m, const char* who) {
  try {
    return DensityMatrix(std::move(m));
  } catch (const Error& e) {
    fail("map-broke-state",
         std::string(who) + " produced an invalid state: " + e.what());
  }
}

// RK4 with Hermitian symmetrization and trace renormalization every step;
// keeps drift over 10^3 steps below 1e-8 at desk scale.
ComplexMatrix mean_field_flow(const MeanFieldParams& p,
                              const ComplexMatrix& rho0) {
  const auto commutator_rhs = [&p](const ComplexMatrix& rho) -> ComplexMatrix {
    const double field = trace_product(rho, p.a).real();
    const ComplexMatrix h = p.h0 + (p.g * field) * p.a;
    return Complex(0.0, -1.0) * (h * rho - rho * h);
  };

  const long long n = std::max<long long>(1, std::llround(p.tau / p.step));
  const double h = p.tau / static_cast<double>(n);
  ComplexMatrix rho = rho0;
  for (long long i = 0; i < n; ++i) {
    const ComplexMatrix k1 = commutator_rhs(rho);
    const ComplexMatrix k2 = commutator_rhs(rho + (0.5 * h) * k1);
    const ComplexMatrix k3 = commutator_rhs(rho + (0.5 * h) * k2);
    const ComplexMatrix k4 = commutator_rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
  }
  return rho;
}

}  // namespace

const char* map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::kUnitary: return "unitary";
    case MapKind::kKraus: return "kraus";
    case MapKind::kNonlinearPurify: return "nonlinear_purify";
    case MapKind::kNonlinearMeanField: return "nonlinear_meanfield";
    case MapKind::kQuasiLinear: return "quasi_linear";
    case MapKind::kStochastic: return "stochastic";
  }
  return "unknown";
}

DynamicalMap DynamicalMap::unitary(ComplexMatrix u) {
  check_unitary(u);
  auto payload = std::make_shared<Payload>();
  const int d = static_cast<int>(u.rows());
  payload->unitary = std::move(u);
  return DynamicalMap(MapKind::kUnitary, d, std::move(payload));
}

DynamicalMap DynamicalMap::identity_map(int dim) {
  return unitary(identity(dim));
}

DynamicalMap DynamicalMap::kraus(std::vector<ComplexMatrix> operators) {
  check_kraus(operators);
  auto payload = std::make_shared<Payload>();
  const int d = static_cast<int>(operators.front().rows());
  payload->kraus = std::move(operators);
  return DynamicalMap(MapKind::kKraus, d, std::move(payload));
}

DynamicalMap DynamicalMap::kraus_unchecked(
    std::vector<ComplexMatrix> operators) {
  if (operators.empty()) fail("invalid-map", "empty Kraus set");
  auto payload = std::make_shared<Payload>();
  const int d = static_cast<int>(operators.front().rows());
  payload->kraus = std::move(operators);
  return DynamicalMap(MapKind::kKraus, d, std::move(payload));
}

DynamicalMap DynamicalMap::purify(int dim) {
  if (dim < 1) fail("invalid-map", "dimension must be positive");
  return DynamicalMap(MapKind::kNonlinearPurify, dim,
                      std::make_shared<Payload>());
}

DynamicalMap DynamicalMap::mean_field(MeanFieldParams params) {
  if (params.h0.rows() != params.h0.cols() ||
      params.a.rows() != params.a.cols() ||
      params.h0.rows() != params.a.rows())
    fail("invalid-map", "mean-field operators must be square and same-dim");
  if (!is_hermitian(params.h0) || !is_hermitian(params.a))
    fail("invalid-map", "mean-field operators must be Hermitian");
  if (!(params.tau >= 0.0) || !(params.step > 0.0))
    fail("invalid-map", "mean-field needs tau >= 0 and step > 0");
  auto payload = std::make_shared<Payload>();
  const int d = static_cast<int>(params.h0.rows());
  payload->mean_field = std::move(params);
  return DynamicalMap(MapKind::kNonlinearMeanField, d, std::move(payload));
}

DynamicalMap DynamicalMap::quasi_linear(DynamicalMap base, double gamma) {
  if (!(gamma > 0.0)) fail("bad-exponent", "gamma must be positive");
  if (!base.deterministic())
    fail("invalid-map", "quasi-linear base map must be deterministic");
  auto payload = std::make_shared<Payload>();
  const int d = base.dim();
  payload->base = std::make_shared<const DynamicalMap>(std::move(base));
  payload->gamma = gamma;
  return DynamicalMap(MapKind::kQuasiLinear, d, std::move(payload));
}

DynamicalMap DynamicalMap::stochastic(
    std::vector<std::pair<double, DynamicalMap>> branches) {
  if (branches.empty()) fail("bad-branch-weights", "no branches");
  const int d = branches.front().second.dim();
  double sum = 0.0;
  for (const auto& [w, t] : branches) {
    if (t.dim() != d)
      fail("invalid-map", "branch maps have unequal dimensions");
    if (!t.deterministic())
      fail("invalid-map", "branch maps must be deterministic");
    if (w < -kWeightFloor)
      fail("bad-branch-weights", "negative branch weight");
    sum += std::max(w, 0.0);
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("bad-branch-weights",
         "branch weights sum to " + std::to_string(sum));
  auto payload = std::make_shared<Payload>();
  payload->branches = std::move(branches);
  return DynamicalMap(MapKind::kStochastic, d, std::move(payload));
}

std::string DynamicalMap::label() const {
  std::ostringstream out;
  out << map_kind_name(kind_);
  switch (kind_) {
    case MapKind::kNonlinearMeanField:
      out << "(g=" << payload_->mean_field.g
          << ",tau=" << payload_->mean_field.tau << ")";
      break;
    case MapKind::kQuasiLinear:
      out << "(gamma=" << payload_->gamma << ",base=" << base().label() << ")";
      break;
    case MapKind::kStochastic: {
      out << "(";
      bool first = true;
      for (const auto& [w, t] : payload_->branches) {
        if (!first) out << ",";
        first = false;
        out << w << ":" << t.label();
      }
      out << ")";
      break;
    }
    default:
      break;
  }
  return out.str();
}

void DynamicalMap::validate() const {
  switch (kind_) {
    case MapKind::kUnitary:
      check_unitary(payload_->unitary);
      break;
    case MapKind::kKraus:
      check_kraus(payload_->kraus);
      break;
    case MapKind::kNonlinearPurify:
      break;
    case MapKind::kNonlinearMeanField:
      if (!is_hermitian(payload_->mean_field.h0) ||
          !is_hermitian(payload_->mean_field.a))
        fail("invalid-map", "mean-field operators must be Hermitian");
      break;
    case MapKind::kQuasiLinear:
      if (!(payload_->gamma > 0.0))
        fail("bad-exponent", "gamma must be positive");
      base().validate();
      break;
    case MapKind::kStochastic: {
      double sum = 0.0;
      for (const auto& [w, t] : payload_->branches) {
        sum += w;
        t.validate();
      }
      if (std::abs(sum - 1.0) >= 1e-9)
        fail("bad-branch-weights", "branch weights do not sum to 1");
      break;
    }
  }
}

const ComplexMatrix& DynamicalMap::unitary_matrix() const {
  if (kind_ != MapKind::kUnitary) fail("invalid-map", "not a unitary map");
  return payload_->unitary;
}

const std::vector<ComplexMatrix>& DynamicalMap::kraus_operators() const {
  if (kind_ != MapKind::kKraus) fail("invalid-map", "not a Kraus map");
  return payload_->kraus;
}

const MeanFieldParams& DynamicalMap::mean_field_params() const {
  if (kind_ != MapKind::kNonlinearMeanField)
    fail("invalid-map", "not a mean-field map");
  return payload_->mean_field;
}

const DynamicalMap& DynamicalMap::base() const {
  if (kind_ != MapKind::kQuasiLinear)
    fail("invalid-map", "not a quasi-linear map");
  return *payload_->base;
}

double DynamicalMap::gamma() const {
  if (kind_ != MapKind::kQuasiLinear)
    fail("invalid-map", "not a quasi-linear map");
  return payload_->gamma;
}

const std::vector<std::pair<double, DynamicalMap>>& DynamicalMap::branches()
    const {
  if (kind_ != MapKind::kStochastic)
    fail("invalid-map", "not a stochastic map");
  return payload_->branches;
}

DecoratedState::DecoratedState(DensityMatrix density,
                               std::vector<Ensemble::Component> decomposition)
    : density_(std::move(density)), decomposition_(std::move(decomposition)) {
  if (decomposition_.empty())
    fail("invalid-decorated-state", "empty decomposition");
  double sum = 0.0;
  ComplexMatrix acc =
      ComplexMatrix::Zero(density_.dim(), density_.dim());
  for (auto& c : decomposition_) {
    if (c.state.dim() != density_.dim())
      fail("dim-mismatch", "decomposition component dimension mismatch");
    if (!(c.weight > 0.0))
      fail("invalid-decorated-state", "weights must be strictly positive");
    sum += c.weight;
    acc += c.weight * c.state.matrix();
  }
  if (std::abs(sum - 1.0) >= 1e-9)
    fail("invalid-decorated-state",
         "weights sum to " + std::to_string(sum));
  for (auto& c : decomposition_) c.weight /= sum;
  if (max_abs(acc / sum - density_.matrix()) >= 1e-10)
    fail("invalid-decorated-state",
         "decomposition does not reproduce the density matrix");
}

DecoratedState DecoratedState::spectral(const DensityMatrix& density) {
  const EigResult eig = eig_hermitian(density.matrix());
  std::vector<Ensemble::Component> decomposition;
  for (int i = 0; i < density.dim(); ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda <= kWeightFloor) continue;
    decomposition.push_back(
        {lambda, DensityMatrix(projector(eig.eigenvectors.col(i)))});
  }
  return DecoratedState(density, std::move(decomposition));
}

DensityMatrix apply(const DynamicalMap& map, const DensityMatrix& state) {
  if (map.dim() != state.dim())
    fail("dim-mismatch", "map dim " + std::to_string(map.dim()) +
                             " vs state dim " + std::to_string(state.dim()));
  switch (map.kind()) {
    case MapKind::kUnitary: {
      const ComplexMatrix& u = map.unitary_matrix();
      return guarded_density(u * state.matrix() * u.adjoint(), "unitary");
    }
    case MapKind::kKraus: {
      ComplexMatrix acc = ComplexMatrix::Zero(state.dim(), state.dim());
      for (const ComplexMatrix& k : map.kraus_operators())
        acc += k * state.matrix() * k.adjoint();
      return guarded_density(std::move(acc), "kraus");
    }
    case MapKind::kNonlinearPurify: {
      const ComplexMatrix sq = state.matrix() * state.matrix();
      const double purity = sq.trace().real();
      return guarded_density(sq / purity, "nonlinear_purify");
    }
    case MapKind::kNonlinearMeanField:
      return guarded_density(
          mean_field_flow(map.mean_field_params(), state.matrix()),
          "nonlinear_meanfield");
    case MapKind::kQuasiLinear:
      // A bare density matrix carries no decomposition parameters; the
      // spectral decomposition is the canonical decoration.
      return apply_quasilinear(map, DecoratedState::spectral(state)).density();
    case MapKind::kStochastic:
      fail("not-deterministic-map",
           "stochastic maps produce ensembles; use apply_stochastic");
  }
  fail("invalid-map", "unreachable map kind");
}

StateOrEnsemble apply_ensemble(const DynamicalMap& map, const Ensemble& e) {
  std::vector<Ensemble::Component> out;
  if (map.deterministic()) {
    out.reserve(e.size());
    for (const auto& c : e.components())
      out.push_back({c.weight, apply(map, c.state)});
    // Structural contract: component-wise action never touches the weights.
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].weight != e.components()[i].weight)
        fail("map-broke-state", "ensemble weights changed under a map");
  } else {
    for (const auto& c : e.components())
      for (const auto& [w, t] : map.branches())
        out.push_back({c.weight * w, apply(t, c.state)});
  }
  return make_mixture(std::move(out));
}

StateOrEnsemble apply_any(const DynamicalMap& map, const StateOrEnsemble& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s)) {
    if (map.deterministic()) return apply(map, *state);
    return apply_stochastic(map, *state).result;
  }
  return apply_ensemble(map, std::get<Ensemble>(s));
}

StochasticOutcome apply_stochastic(const DynamicalMap& map,
                                   const DensityMatrix& state) {
  if (map.kind() != MapKind::kStochastic)
    fail("invalid-map", "apply_stochastic needs a stochastic map");
  std::vector<Ensemble::Component> out;
  out.reserve(map.branches().size());
  for (const auto& [w, t] : map.branches()) {
    if (w <= kWeightFloor) continue;
    out.push_back({w, apply(t, state)});
  }
  return {make_mixture(std::move(out))};
}

DecoratedState apply_quasilinear(const DynamicalMap& map,
                                 const DecoratedState& s) {
  if (map.kind() != MapKind::kQuasiLinear)
    fail("invalid-map", "apply_quasilinear needs a quasi-linear map");
  const double gamma = map.gamma();
  if (!(gamma > 0.0)) fail("bad-exponent", "gamma must be positive");
  if (map.dim() != s.dim())
    fail("dim-mismatch", "map/state dimension mismatch");

  double norm = 0.0;
  std::vector<double> reweighted;
  reweighted.reserve(s.decomposition().size());
  for (const auto& c : s.decomposition()) {
    const double w = std::pow(c.weight, gamma);
    reweighted.push_back(w);
    norm += w;
  }

  std::vector<Ensemble::Component> mapped;
  mapped.reserve(s.decomposition().size());
  ComplexMatrix acc = ComplexMatrix::Zero(s.dim(), s.dim());
  for (std::size_t i = 0; i < s.decomposition().size(); ++i) {
    DensityMatrix image = apply(map.base(), s.decomposition()[i].state);
    const double w = reweighted[i] / norm;
    acc += w * image.matrix();
    mapped.push_back({w, std::move(image)});
  }
  return DecoratedState(guarded_density(std::move(acc), "quasi_linear"),
                        std::move(mapped));
}

DensityMatrix apply_collapsed(const DynamicalMap& map,
                              const DensityMatrix& state) {
  if (map.deterministic()) return apply(map, state);
  return collapse(apply_stochastic(map, state).result);
}

DensityMatrix random_density(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  ComplexMatrix w = g * g.adjoint();
  w = 0.5 * (w + w.adjoint());
  return DensityMatrix(w / w.trace().real());
}

Ensemble random_ensemble(int dim, Rng& rng) {
  // Full-rank components are distinct with probability 1, so the mixture
  // survives merging; re-draw in the measure-zero alternative.
  for (;;) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const std::vector<double> weights = rng.simplex_point(n);
    std::vector<Ensemble::Component> comps;
    comps.reserve(n);
    for (int i = 0; i < n; ++i)
      comps.push_back({weights[static_cast<std::size_t>(i)],
                       random_density(dim, rng)});
    StateOrEnsemble mix = make_mixture(std::move(comps));
    if (auto* e = std::get_if<Ensemble>(&mix)) return std::move(*e);
  }
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar.
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

DynamicalMap random_kraus_map(int dim, int n_operators, Rng& rng) {
  std::vector<ComplexMatrix> raw;
  raw.reserve(n_operators);
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < n_operators; ++i) {
    ComplexMatrix a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = rng.complex_normal();
    raw.push_back(a);
    sum += a.adjoint() * a;
  }
  const ComplexMatrix dress = inv_sqrt_psd(0.5 * (sum + sum.adjoint()), 1e-9);
  std::vector<ComplexMatrix> ops;
  ops.reserve(raw.size());
  for (const ComplexMatrix& a : raw) ops.push_back(a * dress);
  return DynamicalMap::kraus(std::move(ops));
}

AuditReport audit_convex_linearity(const DynamicalMap& map, int dim,
                                   int trials, std::uint64_t seed,
                                   double tol) {
  if (trials < 1) fail("invalid-audit", "need at least one trial");
  if (map.dim() != dim) fail("dim-mismatch", "map/audit dimension mismatch");

  struct Trial {
    double gap = 0.0;
    std::optional<Ensemble> ensemble;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));

  parallel_for(trials, [&](int t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    Ensemble e = random_ensemble(dim, rng);
    const DensityMatrix state_side = apply_collapsed(map, collapse_to_density(e));
    const DensityMatrix ensemble_side = collapse(apply_ensemble(map, e));
    results[static_cast<std::size_t>(t)] = {
        trace_distance(state_side.matrix(), ensemble_side.matrix()),
        std::move(e)};
  });

  AuditReport report;
  report.trials = trials;
  report.tol = tol;
  int best = 0;
  for (int t = 0; t < trials; ++t) {
    if (results[static_cast<std::size_t>(t)].gap > report.max_gap) {
      report.max_gap = results[static_cast<std::size_t>(t)].gap;
      best = t;
    }
  }
  if (report.max_gap > tol) {
    report.convex_linear = false;
    report.witness = AuditWitness{
        std::move(*results[static_cast<std::size_t>(best)].ensemble),
        report.max_gap};
  }
  return report;
}

}  // namespace qlab
