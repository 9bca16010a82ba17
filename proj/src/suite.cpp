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

#include "qlab/suite.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "qlab/gpt.hpp"
#include "qlab/wigner.hpp"

namespace qlab {
namespace {

using Clock = std::chrono::steady_clock;

CheckResult timed_check(const std::string& name,
                        const std::function<CheckResult()>& body) {
  const auto start = Clock::now();
  CheckResult result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result.pass = false;
    result.gap = std::nan("");
    result.detail = std::string("exception: ") + e.what();
  }
  result.name = name;
  result.runtime_ms = std::chrono::duration<double, std::milli>(
                          Clock::now() - start)
                          .count();
  return result;
}

DynamicalMap amplitude_damping(double eta) {
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - eta);
  k1 << 0, std::sqrt(eta), 0, 0;
  return DynamicalMap::kraus({k0, k1});
}

Ensemble two_projector_ensemble(double w0, const ComplexMatrix& a,
                                const ComplexMatrix& b) {
  StateOrEnsemble mix =
      make_mixture({{w0, DensityMatrix(a)}, {1.0 - w0, DensityMatrix(b)}});
  return std::get<Ensemble>(std::move(mix));
}

ComplexMatrix plus_projector() {
  return projector(
      PureState::normalized(basis_ket(2, 0) + basis_ket(2, 1)).amplitudes());
}

LabScenario seeded_scenario(std::uint64_t seed, int index) {
  const int k_count = 2 + (index % 4);
  Rng rng(seed + 2000 + static_cast<std::uint64_t>(index));
  std::vector<double> weights = rng.simplex_point(k_count);
  std::vector<Complex> phases;
  phases.reserve(k_count);
  for (int k = 0; k < k_count; ++k) {
    const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    phases.emplace_back(std::cos(theta), std::sin(theta));
  }
  return LabScenario(std::move(weights), k_count, std::move(phases));
}

CheckResult check_map_invariants(std::uint64_t seed, bool negative_control) {
  std::vector<TaxonomyEntry> taxonomy = builtin_taxonomy(seed);
  int failures = 0;
  std::ostringstream detail;
  if (negative_control) {
    // Mislabeled descriptor: claims to be a channel but is not trace
    // preserving. The gate below must reject it.
    taxonomy.push_back({"bad-kraus",
                        DynamicalMap::kraus_unchecked(
                            {ComplexMatrix(0.9 * identity(2))}),
                        false});
  }
  for (const TaxonomyEntry& entry : taxonomy) {
    try {
      entry.map.validate();
    } catch (const Error& e) {
      ++failures;
      detail << entry.name << " invalid (" << e.code() << "); ";
    }
  }
  CheckResult r;
  r.pass = failures == 0;
  r.gap = static_cast<double>(failures);
  r.detail = failures == 0 ? "all taxonomy maps satisfy their invariants"
                           : detail.str();
  return r;
}

CheckResult check_marginal_equality(std::uint64_t seed) {
  std::map<int, Povm> ics;
  for (int d = 2; d <= 5; ++d)
    ics.emplace(d, build_ic_povm(d, seed + 1000 + static_cast<std::uint64_t>(d)));
  double max_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LabScenario s = seeded_scenario(seed, i);
    max_gap = std::max(max_gap, marginal_equality_gap(s, ics.at(s.system_dim())));
  }
  CheckResult r;
  r.pass = max_gap < 1e-10;
  r.gap = max_gap;
  r.detail = "100 scenarios, K in 2..5, random weights and phases";
  return r;
}

CheckResult check_linear_audit(std::uint64_t seed) {
  double max_gap = 0.0;
  bool all_linear = true;
  for (int i = 0; i < 100; ++i) {
    const int dim = 2 + (i % 3);
    Rng rng(seed + 3000 + static_cast<std::uint64_t>(i));
    const DynamicalMap map =
        (i % 2 == 0)
            ? DynamicalMap::unitary(random_unitary(dim, rng))
            : random_kraus_map(dim, 2 + static_cast<int>(rng.next_u64() % 2),
                               rng);
    const AuditReport report = audit_convex_linearity(
        map, dim, 20, seed + 4000 + static_cast<std::uint64_t>(i), 1e-9);
    all_linear = all_linear && report.convex_linear;
    max_gap = std::max(max_gap, report.max_gap);
  }
  CheckResult r;
  r.pass = all_linear && max_gap < 1e-9;
  r.gap = max_gap;
  r.detail = "100 seeded unitary/kraus maps, dims 2-4, 20 audit trials each";
  return r;
}

CheckResult check_purification_witness(std::uint64_t /*seed*/) {
  const Ensemble witness =
      two_projector_ensemble(0.5, basis_projector(2, 0), plus_projector());
  const DynamicalMap purify = DynamicalMap::purify(2);
  const double delta =
      trace_distance(apply(purify, collapse_to_density(witness)).matrix(),
                     collapse(apply_ensemble(purify, witness)).matrix());
  const double expected = std::sqrt(2.0) / 12.0;
  CheckResult r;
  r.gap = std::abs(delta - expected);
  r.pass = r.gap < 1e-10;
  std::ostringstream detail;
  detail << "witness gap " << delta << " vs sqrt(2)/12";
  r.detail = detail.str();
  return r;
}

CheckResult check_preservation_biconditional(std::uint64_t seed) {
  const std::vector<TaxonomyEntry> taxonomy = builtin_taxonomy(seed);
  const Povm ic = build_ic_povm(2, seed + 5000);
  const std::vector<CertificatePair> pairs =
      standard_certificate_pairs(2, seed + 6000);

  bool consistent = true;
  double linear_gap = 0.0;
  std::ostringstream detail;
  for (const TaxonomyEntry& entry : taxonomy) {
    const AuditReport audit =
        audit_convex_linearity(entry.map, 2, 50, seed + 7000, 1e-8);
    const PreservationReport cert =
        equivalence_preservation_certificate(entry.map, ic, pairs);
    const bool breaks = !cert.all_preserved;
    const bool ok =
        breaks == !audit.convex_linear && breaks == entry.expected_to_break;
    consistent = consistent && ok;
    detail << entry.name << (breaks ? ":breaks " : ":preserves ");
    if (!entry.expected_to_break) {
      linear_gap = std::max(linear_gap, audit.max_gap);
      for (const PairOutcome& p : cert.pairs)
        linear_gap = std::max(linear_gap, p.post_gap);
    }
  }
  CheckResult r;
  r.pass = consistent;
  r.gap = linear_gap;
  r.detail = detail.str();
  return r;
}

CheckResult check_friend_protocol(std::uint64_t seed) {
  std::map<int, Povm> ics;
  std::map<int, std::vector<DynamicalMap>> linear_maps;
  for (int d = 2; d <= 5; ++d) {
    ics.emplace(d, build_ic_povm(d, seed + 1000 + static_cast<std::uint64_t>(d)));
    Rng rng(seed + 11000 + static_cast<std::uint64_t>(d));
    linear_maps.emplace(
        d, std::vector<DynamicalMap>{
               DynamicalMap::identity_map(d),
               DynamicalMap::unitary(random_unitary(d, rng)),
               random_kraus_map(d, 2, rng)});
  }

  double linear_tv = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LabScenario s = seeded_scenario(seed, i);
    for (const DynamicalMap& map : linear_maps.at(s.system_dim())) {
      const LdReport report =
          run_friend_protocol(s, map, ics.at(s.system_dim()));
      linear_tv = std::max(linear_tv, report.tv_distance);
    }
  }

  const LabScenario tilted({0.25, 0.75}, 2);
  const LdReport nonlinear = run_friend_protocol(
      tilted, DynamicalMap::purify(2), computational_povm(2));

  CheckResult r;
  r.pass = linear_tv < 1e-8 && nonlinear.tv_distance >= 0.15 - 1e-6 &&
           nonlinear.ld_violated;
  r.gap = linear_tv;
  std::ostringstream detail;
  detail << "max linear TV " << linear_tv << "; purify TV "
         << nonlinear.tv_distance << " (oracle 0.15)";
  r.detail = detail.str();
  return r;
}

CheckResult check_quasilinear_reduction(std::uint64_t seed) {
  double max_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + (i % 2);
    Rng rng(seed + 8000 + static_cast<std::uint64_t>(i));
    const DynamicalMap base = DynamicalMap::unitary(random_unitary(dim, rng));
    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const std::vector<double> weights = rng.simplex_point(n);
    std::vector<Ensemble::Component> comps;
    ComplexMatrix density = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < n; ++k) {
      comps.push_back({weights[static_cast<std::size_t>(k)],
                       random_density(dim, rng)});
      density += comps.back().weight * comps.back().state.matrix();
    }
    const DecoratedState decorated(DensityMatrix(density), comps);

    const DecoratedState image = apply_quasilinear(
        DynamicalMap::quasi_linear(base, 1.0), decorated);
    max_err = std::max(
        max_err, max_abs(image.density().matrix() -
                         apply(base, decorated.density()).matrix()));
    for (int k = 0; k < n; ++k)
      max_err = std::max(
          max_err,
          std::abs(image.decomposition()[static_cast<std::size_t>(k)].weight -
                   comps[static_cast<std::size_t>(k)].weight));
  }

  // Same density, two decompositions: gamma != 1 must tell them apart.
  const DensityMatrix half = DensityMatrix::maximally_mixed(2);
  const DecoratedState pointer_split(
      half, {{0.5, DensityMatrix(basis_projector(2, 0))},
             {0.5, DensityMatrix(basis_projector(2, 1))}});
  const ComplexMatrix pplus = plus_projector();
  const ComplexMatrix complement =
      (half.matrix() - 0.25 * pplus) / 0.75;
  const DecoratedState tilted_split(
      half, {{0.25, DensityMatrix(pplus)}, {0.75, DensityMatrix(complement)}});

  const DynamicalMap gamma2 =
      DynamicalMap::quasi_linear(DynamicalMap::identity_map(2), 2.0);
  const double witness_gap = trace_distance(
      apply_quasilinear(gamma2, pointer_split).density().matrix(),
      apply_quasilinear(gamma2, tilted_split).density().matrix());

  CheckResult r;
  r.pass = max_err < 1e-12 && witness_gap > 1e-3;
  r.gap = max_err;
  std::ostringstream detail;
  detail << "gamma=1 max deviation " << max_err
         << "; gamma=2 decomposition witness gap " << witness_gap;
  r.detail = detail.str();
  return r;
}

CheckResult check_stochastic_sweep(std::uint64_t /*seed*/) {
  const LabScenario tilted({0.25, 0.75}, 2);
  const Povm pointer = computational_povm(2);
  std::vector<double> tvs;
  for (const double w : {0.01, 0.5, 0.99}) {
    const DynamicalMap map = DynamicalMap::stochastic(
        {{w, DynamicalMap::purify(2)},
         {1.0 - w, DynamicalMap::identity_map(2)}});
    tvs.push_back(run_friend_protocol(tilted, map, pointer).tv_distance);
  }
  CheckResult r;
  r.pass = tvs[0] > 1e-4 && tvs[0] < tvs[1] && tvs[1] < tvs[2];
  r.gap = tvs[0];
  std::ostringstream detail;
  detail << "TV(w=0.01)=" << tvs[0] << " TV(0.5)=" << tvs[1]
         << " TV(0.99)=" << tvs[2];
  r.detail = detail.str();
  return r;
}

CheckResult check_tomography(std::uint64_t seed) {
  double max_err = 0.0;
  for (int d = 2; d <= 4; ++d) {
    const Povm ic = build_ic_povm(d, seed + 9000 + static_cast<std::uint64_t>(d));
    for (int i = 0; i < 100; ++i) {
      Rng rng(seed + 10000 + static_cast<std::uint64_t>(100 * d + i));
      const DensityMatrix rho = random_density(d, rng);
      const ProbVector p = prob_vector(rho, ic);
      const ComplexMatrix rec = reconstruct_hermitian(p.entries(), ic);
      max_err = std::max(max_err, max_abs(rec - rho.matrix()));
    }
  }
  CheckResult r;
  r.pass = max_err < 1e-8;
  r.gap = max_err;
  r.detail = "100 states per dim in {2,3,4}, linear-inversion roundtrip";
  return r;
}

}  // namespace

std::vector<TaxonomyEntry> builtin_taxonomy(std::uint64_t seed) {
  Rng rng_u1(seed + 11);
  Rng rng_u2(seed + 12);
  Rng rng_k2(seed + 13);
  const DynamicalMap u1 = DynamicalMap::unitary(random_unitary(2, rng_u1));

  std::vector<TaxonomyEntry> taxonomy;
  taxonomy.push_back({"unitary-1", u1, false});
  taxonomy.push_back(
      {"unitary-2", DynamicalMap::unitary(random_unitary(2, rng_u2)), false});
  taxonomy.push_back({"kraus-damping", amplitude_damping(0.3), false});
  taxonomy.push_back({"kraus-random", random_kraus_map(2, 3, rng_k2), false});
  taxonomy.push_back({"purify", DynamicalMap::purify(2), true});
  taxonomy.push_back(
      {"meanfield-g0.5",
       DynamicalMap::mean_field({pauli_z(), pauli_z(), 0.5, 1.0, 1e-3}),
       true});
  taxonomy.push_back(
      {"quasilinear-gamma1", DynamicalMap::quasi_linear(u1, 1.0), false});
  taxonomy.push_back(
      {"quasilinear-gamma2", DynamicalMap::quasi_linear(u1, 2.0), true});
  return taxonomy;
}

std::vector<CheckResult> run_paper_suite(std::uint64_t seed,
                                         bool negative_control) {
  std::vector<CheckResult> results;
  results.push_back(timed_check("map-invariants", [&] {
    return check_map_invariants(seed, negative_control);
  }));
  results.push_back(
      timed_check("reduced-marginal-equality", [&] { return check_marginal_equality(seed); }));
  results.push_back(timed_check("linear-maps-audit",
                                [&] { return check_linear_audit(seed); }));
  results.push_back(timed_check("purification-witness",
                                [&] { return check_purification_witness(seed); }));
  results.push_back(timed_check("preservation-audit-biconditional",
                                [&] { return check_preservation_biconditional(seed); }));
  results.push_back(timed_check("friend-protocol-bounds",
                                [&] { return check_friend_protocol(seed); }));
  results.push_back(timed_check("quasilinear-reduction",
                                [&] { return check_quasilinear_reduction(seed); }));
  results.push_back(timed_check("stochastic-branch-sweep",
                                [&] { return check_stochastic_sweep(seed); }));
  results.push_back(timed_check("ic-tomography-roundtrip",
                                [&] { return check_tomography(seed); }));
  return results;
}

bool suite_all_pass(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

Json suite_payload(const std::vector<CheckResult>& results,
                   std::uint64_t seed) {
  Json checks = Json::array();
  for (const CheckResult& r : results)
    checks.push_back(Json{{"check_name", r.name},
                          {"status", r.pass ? "pass" : "fail"},
                          {"gap", r.gap},
                          {"detail", r.detail}});
  return Json{{"format", "qlab-paper-suite/1"},
              {"seed", seed},
              {"all_pass", suite_all_pass(results)},
              {"checks", std::move(checks)}};
}

}  // namespace qlab
