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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>

#include "qlab/gpt.hpp"
#include "qlab/rng.hpp"
#include "qlab/suite.hpp"

using namespace qlab;

namespace {

DensityMatrix pure_basis(int d, int k) {
  return DensityMatrix(basis_projector(d, k));
}

DensityMatrix plus_density() {
  return DensityMatrix::pure(
      PureState::normalized(basis_ket(2, 0) + basis_ket(2, 1)));
}

bool throws_code(const std::function<void()>& f, const std::string& code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("induce: identity, invariant state, purify composition") {
  const Povm ic = build_ic_povm(2, 11);

  Rng rng(1);
  const DensityMatrix rho = random_density(2, rng);
  const ProbVector p = prob_vector(rho, ic);

  const ProbVector same = induce(DynamicalMap::identity_map(2), ic, p);
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(std::abs(same.entries()[i] - p.entries()[i]) < 1e-10);

  // I/2 is invariant under every unitary.
  const ProbVector mixed =
      prob_vector(DensityMatrix::maximally_mixed(2), ic);
  Rng urng(2);
  const ProbVector rotated = induce(
      DynamicalMap::unitary(random_unitary(2, urng)), ic, mixed);
  for (std::size_t i = 0; i < mixed.size(); ++i)
    CHECK(std::abs(rotated.entries()[i] - mixed.entries()[i]) < 1e-10);

  // Induced purification agrees with the matrix-level composition.
  ComplexMatrix oblique(2, 2);
  oblique << 0.75, 0.25, 0.25, 0.25;
  const DensityMatrix in(oblique);
  const ProbVector image =
      induce(DynamicalMap::purify(2), ic, prob_vector(in, ic));
  const ProbVector direct =
      prob_vector(apply(DynamicalMap::purify(2), in), ic);
  for (std::size_t i = 0; i < image.size(); ++i)
    CHECK(std::abs(image.entries()[i] - direct.entries()[i]) < 1e-9);
}

TEST_CASE("reconstruct_state rejects non-state probability vectors") {
  const Povm ic = build_ic_povm(2, 11);
  // A unit-trace Hermitian operator with a -1e-6 eigenvalue: its outcome
  // probabilities are still a valid distribution, but no state is behind
  // them (the eigenvalue sits below the -1e-8 clipping floor).
  ComplexMatrix fake(2, 2);
  fake << 1.0 + 1e-6, 0, 0, -1e-6;
  std::vector<double> entries;
  for (const ComplexMatrix& e : ic.effects())
    entries.push_back(trace_product(fake, e).real());
  const ProbVector p(entries, ic.id());
  CHECK(throws_code([&] { reconstruct_state(p, ic); }, "not-a-state-vector"));

  CHECK(throws_code(
      [&] {
        reconstruct_state(prob_vector(pure_basis(2, 0), ic),
                          build_ic_povm(2, 12));
      },
      "ic-mismatch"));
}

TEST_CASE("gpt_convex_linearity_check: kraus passes, purify and gamma=2 fail") {
  const Povm ic = build_ic_povm(2, 21);

  Rng rng(3);
  const AuditReport kraus_report = gpt_convex_linearity_check(
      random_kraus_map(2, 2, rng), ic, 20, 31);
  CHECK(kraus_report.convex_linear);
  CHECK(kraus_report.max_gap < 1e-9);

  const AuditReport purify_report = gpt_convex_linearity_check(
      DynamicalMap::purify(2), ic, 20, 32);
  CHECK_FALSE(purify_report.convex_linear);
  CHECK(purify_report.max_gap > 0.01);

  const DynamicalMap gamma1 = DynamicalMap::quasi_linear(
      DynamicalMap::identity_map(2), 1.0);
  const AuditReport ql_report = gpt_convex_linearity_check(gamma1, ic, 20, 33);
  CHECK(ql_report.convex_linear);
  CHECK(ql_report.max_gap < 1e-9);
}

TEST_CASE("certificate: unitary preserves, purify breaks the tilted pair") {
  const Povm ic = build_ic_povm(2, 41);

  // (I/2, {1/2:|0>, 1/2:|1>}) under a unitary: preserved.
  const Ensemble uniform = std::get<Ensemble>(
      make_mixture({{0.5, pure_basis(2, 0)}, {0.5, pure_basis(2, 1)}}));
  Rng rng(4);
  const DynamicalMap u = DynamicalMap::unitary(random_unitary(2, rng));
  std::vector<CertificatePair> pairs;
  pairs.push_back({"uniform", DensityMatrix::maximally_mixed(2), uniform});
  const PreservationReport unitary_report =
      equivalence_preservation_certificate(u, ic, pairs);
  CHECK(unitary_report.all_preserved);

  // The tilted pair: state side purifies diag(3/4, 1/4) to diag(0.9, 0.1),
  // ensemble side stays put; the pointer statistics gap is 0.15.
  const Ensemble tilted = std::get<Ensemble>(
      make_mixture({{0.75, pure_basis(2, 0)}, {0.25, pure_basis(2, 1)}}));
  std::vector<CertificatePair> tilted_pairs;
  tilted_pairs.push_back(
      {"tilted", collapse_to_density(tilted), tilted});
  const PreservationReport purify_report =
      equivalence_preservation_certificate(DynamicalMap::purify(2), ic,
                                           tilted_pairs);
  CHECK_FALSE(purify_report.all_preserved);

  const DensityMatrix mapped_state =
      apply(DynamicalMap::purify(2), collapse_to_density(tilted));
  CHECK(mapped_state.matrix()(0, 0).real() ==
        doctest::Approx(0.9).epsilon(1e-12));
  const double pointer_gap = trace_distance(
      mapped_state.matrix(),
      collapse(apply_ensemble(DynamicalMap::purify(2), tilted)).matrix());
  CHECK(pointer_gap == doctest::Approx(0.15).epsilon(1e-12));

  // Non-equivalent inputs are rejected.
  std::vector<CertificatePair> bad;
  bad.push_back({"bad", pure_basis(2, 0), tilted});
  CHECK(throws_code(
      [&] { equivalence_preservation_certificate(u, ic, bad); },
      "not-equivalent-input"));
}

TEST_CASE("certificate: decorated pairs expose gamma=2, spare gamma=1") {
  const Povm ic = build_ic_povm(2, 51);

  const Ensemble tilted = std::get<Ensemble>(
      make_mixture({{0.25, pure_basis(2, 0)}, {0.75, pure_basis(2, 1)}}));
  const DensityMatrix rho = collapse_to_density(tilted);
  std::vector<CertificatePair> pairs;
  pairs.push_back({"decorated",
                   DecoratedState(rho, tilted.components()), tilted});

  const DynamicalMap gamma2 = DynamicalMap::quasi_linear(
      DynamicalMap::identity_map(2), 2.0);
  const PreservationReport broken =
      equivalence_preservation_certificate(gamma2, ic, pairs);
  CHECK_FALSE(broken.all_preserved);

  const DynamicalMap gamma1 = DynamicalMap::quasi_linear(
      DynamicalMap::identity_map(2), 1.0);
  const PreservationReport preserved =
      equivalence_preservation_certificate(gamma1, ic, pairs);
  CHECK(preserved.all_preserved);

  // Symmetric weights survive gamma=2.
  const Ensemble uniform = std::get<Ensemble>(
      make_mixture({{0.5, pure_basis(2, 0)}, {0.5, pure_basis(2, 1)}}));
  std::vector<CertificatePair> symmetric;
  symmetric.push_back({"symmetric",
                       DecoratedState(DensityMatrix::maximally_mixed(2),
                                      uniform.components()),
                       uniform});
  CHECK(equivalence_preservation_certificate(gamma2, ic, symmetric)
            .all_preserved);
}

TEST_CASE("quantum_reduction_check over the taxonomy and random channels") {
  const Povm ic = build_ic_povm(2, 61);

  CHECK(quantum_reduction_check(DynamicalMap::purify(2), ic, 10, 71));

  Rng rng(5);
  CHECK(quantum_reduction_check(
      DynamicalMap::unitary(random_unitary(2, rng)), ic, 10, 72));

  // 50 random kraus maps across dims 2-4 agree at both levels.
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + (i % 3);
    Rng mrng(200 + static_cast<std::uint64_t>(i));
    const Povm icd = build_ic_povm(dim, 80 + static_cast<std::uint64_t>(dim));
    const DynamicalMap k =
        random_kraus_map(dim, 2 + static_cast<int>(mrng.next_u64() % 2), mrng);
    CHECK(quantum_reduction_check(k, icd, 5,
                                  300 + static_cast<std::uint64_t>(i)));
  }
}

TEST_CASE("verdicts are frame independent") {
  const Povm frame_a = build_ic_povm(2, 1001);
  const Povm frame_b = build_ic_povm(2, 2002);
  for (const TaxonomyEntry& entry : builtin_taxonomy(9)) {
    const AuditReport ra =
        gpt_convex_linearity_check(entry.map, frame_a, 20, 55);
    const AuditReport rb =
        gpt_convex_linearity_check(entry.map, frame_b, 20, 55);
    CHECK(ra.convex_linear == rb.convex_linear);
    CHECK(ra.convex_linear == !entry.expected_to_break);
  }
}
