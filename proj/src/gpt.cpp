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

#include "qlab/gpt.hpp"

#include <cmath>
#include <string>

#include "qlab/parallel.hpp"

namespace qlab {
namespace {

constexpr double kClipFloor = -1e-8;

DensityMatrix clip_to_state(const ComplexMatrix& hermitian) {
  const EigResult eig = eig_hermitian(hermitian);
  const int d = static_cast<int>(eig.eigenvalues.size());
  if (eig.eigenvalues[0] < kClipFloor)
    fail("not-a-state-vector",
         "reconstructed operator has eigenvalue " +
             std::to_string(eig.eigenvalues[0]));
  RealVector clipped(d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    clipped[i] = std::max(eig.eigenvalues[i], 0.0);
    total += clipped[i];
  }
  if (!(total > 0.0))
    fail("not-a-state-vector", "reconstructed operator has zero trace");
  clipped /= total;
  ComplexMatrix out = eig.eigenvectors *
                      clipped.cast<Complex>().asDiagonal() *
                      eig.eigenvectors.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

double max_norm_gap(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

StateOrEnsemble map_certificate_state(const DynamicalMap& map,
                                      const CertificateState& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return apply_any(map, *state);
  const DecoratedState& decorated = std::get<DecoratedState>(s);
  if (map.kind() == MapKind::kQuasiLinear)
    return apply_quasilinear(map, decorated).density();
  // Every other kind is insensitive to the decoration parameters.
  return apply_any(map, decorated.density());
}

StateOrEnsemble certificate_state_as_assignment(const CertificateState& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s)) return *state;
  return std::get<DecoratedState>(s).density();
}

}  // namespace

DensityMatrix reconstruct_state(const ProbVector& p, const Povm& ic) {
  if (!p.ic_ref().empty() && p.ic_ref() != ic.id())
    fail("ic-mismatch", "probability vector was generated by '" + p.ic_ref() +
                            "', not '" + ic.id() + "'");
  const ComplexMatrix hermitian = reconstruct_hermitian(p.entries(), ic);
  const double tr = hermitian.trace().real();
  if (std::abs(tr - 1.0) > 1e-8)
    fail("not-a-state-vector",
         "reconstructed trace " + std::to_string(tr));
  return clip_to_state(hermitian);
}

ProbVector induce(const DynamicalMap& map, const Povm& ic,
                  const ProbVector& p) {
  const DensityMatrix rho = reconstruct_state(p, ic);
  if (map.deterministic()) return prob_vector(apply(map, rho), ic);
  return prob_vector_any(apply_stochastic(map, rho).result, ic);
}

AuditReport gpt_convex_linearity_check(const DynamicalMap& map, const Povm& ic,
                                       int trials, std::uint64_t seed,
                                       double tol) {
  if (trials < 1) fail("invalid-audit", "need at least one trial");
  if (map.dim() != ic.dim())
    fail("dim-mismatch", "map/measurement dimension mismatch");
  const int dim = ic.dim();

  struct Trial {
    double gap = 0.0;
    std::optional<Ensemble> mixture;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));

  parallel_for(trials, [&](int t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    Ensemble e = random_ensemble(dim, rng);

    // Mixture of the component probability vectors...
    std::vector<double> mixed(ic.size(), 0.0);
    std::vector<std::vector<double>> images;
    images.reserve(e.size());
    for (const auto& c : e.components()) {
      const ProbVector pk = prob_vector(c.state, ic);
      for (std::size_t i = 0; i < mixed.size(); ++i)
        mixed[i] += c.weight * pk.entries()[i];
      images.push_back(induce(map, ic, pk).entries());
    }
    // ... pushed through the induced map, versus the mixture of images.
    const std::vector<double> lhs =
        induce(map, ic, ProbVector(mixed, ic.id())).entries();
    std::vector<double> rhs(ic.size(), 0.0);
    for (std::size_t k = 0; k < images.size(); ++k)
      for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] += e.components()[k].weight * images[k][i];

    results[static_cast<std::size_t>(t)] = {max_norm_gap(lhs, rhs),
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
        std::move(*results[static_cast<std::size_t>(best)].mixture),
        report.max_gap};
  }
  return report;
}

PreservationReport equivalence_preservation_certificate(
    const DynamicalMap& map, const Povm& ic,
    const std::vector<CertificatePair>& pairs, double tol) {
  PreservationReport report;
  report.pairs.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const StateOrEnsemble pre_state =
        certificate_state_as_assignment(pair.state);
    if (!same_equivalence_class(pre_state, pair.ensemble, ic, tol))
      fail("not-equivalent-input",
           "pair '" + pair.name + "' is not equivalent before the map");

    const StateOrEnsemble mapped_state = map_certificate_state(map, pair.state);
    const StateOrEnsemble mapped_ensemble = apply_ensemble(map, pair.ensemble);
    const double gap = equivalence_gap(mapped_state, mapped_ensemble, ic);
    const bool preserved = gap < tol;
    report.pairs.push_back({pair.name, preserved, gap});
    report.all_preserved = report.all_preserved && preserved;
  }
  return report;
}

std::vector<CertificatePair> standard_certificate_pairs(int dim,
                                                        std::uint64_t seed,
                                                        int n_random) {
  std::vector<CertificatePair> pairs;

  auto pair_from_ensemble = [](std::string name, Ensemble e) {
    DensityMatrix rho = collapse_to_density(e);
    return CertificatePair{std::move(name), std::move(rho), std::move(e)};
  };

  auto two_state = [&](double w0, const ComplexMatrix& a,
                       const ComplexMatrix& b) {
    StateOrEnsemble mix = make_mixture(
        {{w0, DensityMatrix(a)}, {1.0 - w0, DensityMatrix(b)}});
    return std::get<Ensemble>(std::move(mix));
  };

  if (dim == 2) {
    const ComplexMatrix p0 = basis_projector(2, 0);
    const ComplexMatrix p1 = basis_projector(2, 1);
    const ComplexMatrix pplus =
        projector(PureState::normalized((basis_ket(2, 0) + basis_ket(2, 1)))
                      .amplitudes());

    pairs.push_back(pair_from_ensemble("uniform-pointer",
                                       two_state(0.5, p0, p1)));
    pairs.push_back(pair_from_ensemble("tilted-pointer",
                                       two_state(0.25, p0, p1)));
    pairs.push_back(pair_from_ensemble("pointer-vs-plus",
                                       two_state(0.5, p0, pplus)));

    // Decorated variants: equal densities, explicit decomposition choices.
    Ensemble tilted = two_state(0.25, p0, p1);
    DensityMatrix tilted_rho = collapse_to_density(tilted);
    std::vector<Ensemble::Component> tilted_decomp(tilted.components());
    pairs.push_back({"decorated-tilted-pointer",
                     DecoratedState(tilted_rho, std::move(tilted_decomp)),
                     std::move(tilted)});

    Ensemble uniform = two_state(0.5, p0, p1);
    DensityMatrix half = DensityMatrix::maximally_mixed(2);
    std::vector<Ensemble::Component> pointer_decomp(uniform.components());
    pairs.push_back({"decorated-maximally-mixed",
                     DecoratedState(half, std::move(pointer_decomp)),
                     std::move(uniform)});
  }

  Rng rng(seed);
  for (int i = 0; i < n_random; ++i) {
    Ensemble e = random_ensemble(dim, rng);
    pairs.push_back(
        pair_from_ensemble("random-" + std::to_string(i), std::move(e)));
  }
  return pairs;
}

double frame_constant(const Povm& ic) {
  if (!ic.informationally_complete())
    fail("not-informationally-complete",
         "frame constant needs an IC measurement");
  const double d = static_cast<double>(ic.dim());
  return 2.0 * std::sqrt(std::max(ic.gram_min(), 0.0)) / std::pow(d, 1.5);
}

bool quantum_reduction_check(const DynamicalMap& map, const Povm& ic,
                             int trials, std::uint64_t seed, double tol) {
  if (trials < 1) fail("invalid-audit", "need at least one trial");
  if (map.dim() != ic.dim())
    fail("dim-mismatch", "map/measurement dimension mismatch");
  const int dim = ic.dim();
  const double c = frame_constant(ic);

  double max_matrix_gap = 0.0;
  double max_prob_gap = 0.0;
  bool pointwise_ok = true;

  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    const Ensemble e = random_ensemble(dim, rng);

    const DensityMatrix lhs = apply_collapsed(map, collapse_to_density(e));
    const DensityMatrix rhs = collapse(apply_ensemble(map, e));
    const double matrix_gap = trace_distance(lhs.matrix(), rhs.matrix());

    const double prob_gap =
        max_norm_gap(prob_vector(lhs, ic).entries(),
                     prob_vector(rhs, ic).entries());

    max_matrix_gap = std::max(max_matrix_gap, matrix_gap);
    max_prob_gap = std::max(max_prob_gap, prob_gap);
    if (matrix_gap > tol && !(prob_gap > tol * c)) pointwise_ok = false;
  }

  const bool verdicts_agree =
      (max_matrix_gap > tol) == (max_prob_gap > tol * c);
  return pointwise_ok && verdicts_agree;
}

}  // namespace qlab
