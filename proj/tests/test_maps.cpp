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

#include "qlab/maps.hpp"
#include "qlab/rng.hpp"

using namespace qlab;

namespace {

DensityMatrix pure_basis(int d, int k) {
  return DensityMatrix(basis_projector(d, k));
}

DensityMatrix plus_density() {
  return DensityMatrix::pure(
      PureState::normalized(basis_ket(2, 0) + basis_ket(2, 1)));
}

Ensemble witness_ensemble() {
  return std::get<Ensemble>(
      make_mixture({{0.5, pure_basis(2, 0)}, {0.5, plus_density()}}));
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

TEST_CASE("apply: identity, purify fixed point, purify on the oblique state") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const DynamicalMap id = DynamicalMap::identity_map(2);
  CHECK(max_abs(apply(id, mixed).matrix() - mixed.matrix()) < 1e-14);

  const DynamicalMap purify = DynamicalMap::purify(2);
  CHECK(max_abs(apply(purify, mixed).matrix() - mixed.matrix()) < 1e-14);

  ComplexMatrix oblique(2, 2);
  oblique << 0.75, 0.25, 0.25, 0.25;
  ComplexMatrix expected(2, 2);
  expected << 5.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  CHECK(max_abs(apply(purify, DensityMatrix(oblique)).matrix() - expected) <
        1e-12);

  CHECK(throws_code(
      [&] {
        apply(DynamicalMap::stochastic({{1.0, id}}), mixed);
      },
      "not-deterministic-map"));
}

TEST_CASE("map constructors enforce their invariants") {
  ComplexMatrix not_unitary(2, 2);
  not_unitary << 1, 1, 0, 1;
  CHECK(throws_code([&] { DynamicalMap::unitary(not_unitary); },
                    "invalid-map"));

  CHECK(throws_code(
      [&] { DynamicalMap::kraus({ComplexMatrix(0.9 * identity(2))}); },
      "invalid-map"));

  CHECK(throws_code(
      [&] {
        DynamicalMap::quasi_linear(DynamicalMap::identity_map(2), 0.0);
      },
      "bad-exponent"));

  CHECK(throws_code(
      [&] {
        DynamicalMap::stochastic(
            {{0.7, DynamicalMap::identity_map(2)},
             {0.7, DynamicalMap::purify(2)}});
      },
      "bad-branch-weights"));

  // The unchecked escape hatch defers the failure to validate().
  const DynamicalMap bad =
      DynamicalMap::kraus_unchecked({ComplexMatrix(0.9 * identity(2))});
  CHECK(throws_code([&] { bad.validate(); }, "invalid-map"));

  // A decomposition must actually reproduce its density matrix.
  CHECK(throws_code(
      [&] {
        DecoratedState{DensityMatrix::maximally_mixed(2),
                       {{0.5, pure_basis(2, 0)}, {0.5, pure_basis(2, 0)}}};
      },
      "invalid-decorated-state"));
}

TEST_CASE("mean-field flow: g=0 matches the bare unitary") {
  Rng rng(3);
  const DensityMatrix rho = random_density(2, rng);
  const MeanFieldParams params{pauli_z(), pauli_x(), 0.0, 1.0, 1e-3};
  const DensityMatrix flowed =
      apply(DynamicalMap::mean_field(params), rho);
  const ComplexMatrix u = evolution_unitary(pauli_z(), 1.0);
  const ComplexMatrix direct = u * rho.matrix() * u.adjoint();
  CHECK(max_abs(flowed.matrix() - direct) < 1e-6);
}

TEST_CASE("apply_ensemble: weights preserved, purify fixes pure components") {
  Rng rng(8);
  const Ensemble e = random_ensemble(2, rng);
  const DynamicalMap u = DynamicalMap::unitary(random_unitary(2, rng));
  const StateOrEnsemble mapped = apply_ensemble(u, e);
  REQUIRE(std::holds_alternative<Ensemble>(mapped));
  const Ensemble& me = std::get<Ensemble>(mapped);
  REQUIRE(me.size() == e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(me.components()[i].weight == e.components()[i].weight);
    const ComplexMatrix direct = u.unitary_matrix() *
                                 e.components()[i].state.matrix() *
                                 u.unitary_matrix().adjoint();
    CHECK(max_abs(me.components()[i].state.matrix() - direct) < 1e-12);
  }

  // Projectors are fixed points of purification, so the witness ensemble is
  // untouched.
  const Ensemble w = witness_ensemble();
  const StateOrEnsemble fixed = apply_ensemble(DynamicalMap::purify(2), w);
  REQUIRE(std::holds_alternative<Ensemble>(fixed));
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(max_abs(std::get<Ensemble>(fixed).components()[i].state.matrix() -
                  w.components()[i].state.matrix()) < 1e-12);
}

TEST_CASE("apply_quasilinear: identity at gamma=1, reweighting at gamma=2") {
  const DecoratedState tilted(
      DensityMatrix(ComplexMatrix(0.25 * basis_projector(2, 0) +
                                  0.75 * basis_projector(2, 1))),
      {{0.25, pure_basis(2, 0)}, {0.75, pure_basis(2, 1)}});

  const DynamicalMap gamma1 =
      DynamicalMap::quasi_linear(DynamicalMap::identity_map(2), 1.0);
  const DecoratedState same = apply_quasilinear(gamma1, tilted);
  CHECK(max_abs(same.density().matrix() - tilted.density().matrix()) < 1e-14);
  CHECK(same.decomposition()[0].weight == doctest::Approx(0.25).epsilon(1e-14));

  // Symmetric weights are invariant under any exponent.
  const DecoratedState half(
      DensityMatrix::maximally_mixed(2),
      {{0.5, pure_basis(2, 0)}, {0.5, pure_basis(2, 1)}});
  const DynamicalMap gamma2 =
      DynamicalMap::quasi_linear(DynamicalMap::identity_map(2), 2.0);
  const DecoratedState still_half = apply_quasilinear(gamma2, half);
  CHECK(still_half.decomposition()[0].weight ==
        doctest::Approx(0.5).epsilon(1e-14));

  // (1/4, 3/4) -> (1/16, 9/16)/norm = (0.1, 0.9).
  const DecoratedState reweighted = apply_quasilinear(gamma2, tilted);
  CHECK(reweighted.decomposition()[0].weight ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(reweighted.decomposition()[1].weight ==
        doctest::Approx(0.9).epsilon(1e-12));
  ComplexMatrix expected(2, 2);
  expected << 0.1, 0, 0, 0.9;
  CHECK(max_abs(reweighted.density().matrix() - expected) < 1e-12);
}

TEST_CASE("quasilinear gamma=1 equals component-wise linear action") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + (trial % 2);
    const DynamicalMap base = DynamicalMap::unitary(random_unitary(dim, rng));
    const DynamicalMap gamma1 = DynamicalMap::quasi_linear(base, 1.0);

    const int n = 2 + static_cast<int>(rng.next_u64() % 2);
    const std::vector<double> ws = rng.simplex_point(n);
    std::vector<Ensemble::Component> comps;
    ComplexMatrix density = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < n; ++k) {
      comps.push_back({ws[static_cast<std::size_t>(k)],
                       random_density(dim, rng)});
      density += comps.back().weight * comps.back().state.matrix();
    }
    const DecoratedState s(DensityMatrix(density), comps);
    const DecoratedState image = apply_quasilinear(gamma1, s);
    CHECK(max_abs(image.density().matrix() -
                  apply(base, s.density()).matrix()) < 1e-12);
  }
}

TEST_CASE("quasilinear decomposition dependence at gamma != 1") {
  // Equal densities, different decompositions, distinguishable images.
  const DensityMatrix half = DensityMatrix::maximally_mixed(2);
  const DecoratedState pointer_split(
      half, {{0.5, pure_basis(2, 0)}, {0.5, pure_basis(2, 1)}});
  const ComplexMatrix pplus = plus_density().matrix();
  const DecoratedState oblique_split(
      half, {{0.25, DensityMatrix(pplus)},
             {0.75, DensityMatrix(
                        ComplexMatrix((half.matrix() - 0.25 * pplus) / 0.75))}});

  const DynamicalMap gamma2 =
      DynamicalMap::quasi_linear(DynamicalMap::identity_map(2), 2.0);
  const double gap = trace_distance(
      apply_quasilinear(gamma2, pointer_split).density().matrix(),
      apply_quasilinear(gamma2, oblique_split).density().matrix());
  CHECK(gap > 1e-3);
  CHECK(gap == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("apply_stochastic: single branch, bit flip, dominant nonlinear branch") {
  const DynamicalMap id = DynamicalMap::identity_map(2);

  // One branch is just the branch map's output.
  const StochasticOutcome single =
      apply_stochastic(DynamicalMap::stochastic({{1.0, id}}),
                       pure_basis(2, 0));
  CHECK(std::holds_alternative<DensityMatrix>(single.result));

  const DynamicalMap flip = DynamicalMap::unitary(pauli_x());
  const StochasticOutcome flipped = apply_stochastic(
      DynamicalMap::stochastic({{0.5, flip}, {0.5, id}}), pure_basis(2, 0));
  REQUIRE(std::holds_alternative<Ensemble>(flipped.result));
  const Ensemble& fe = std::get<Ensemble>(flipped.result);
  REQUIRE(fe.size() == 2);
  CHECK(max_abs(fe.components()[0].state.matrix() - basis_projector(2, 1)) <
        1e-14);
  CHECK(max_abs(fe.components()[1].state.matrix() - basis_projector(2, 0)) <
        1e-14);

  // A 0.99-weight purify branch keeps nearly the whole witness gap.
  const DynamicalMap mostly_purify = DynamicalMap::stochastic(
      {{0.99, DynamicalMap::purify(2)}, {0.01, id}});
  const Ensemble w = witness_ensemble();
  const double gap = trace_distance(
      apply_collapsed(mostly_purify, collapse_to_density(w)).matrix(),
      collapse(apply_ensemble(mostly_purify, w)).matrix());
  CHECK(gap > 0.1);
}

TEST_CASE("audit: unitary and kraus pass, purify fails with the known witness") {
  Rng rng(31);
  const DynamicalMap u = DynamicalMap::unitary(random_unitary(3, rng));
  const AuditReport unitary_report = audit_convex_linearity(u, 3, 30, 5);
  CHECK(unitary_report.convex_linear);
  CHECK(unitary_report.max_gap < 1e-10);

  const DynamicalMap k = random_kraus_map(3, 3, rng);
  const AuditReport kraus_report = audit_convex_linearity(k, 3, 30, 6);
  CHECK(kraus_report.convex_linear);
  CHECK(kraus_report.max_gap < 1e-10);

  // The canonical witness gap, checked against the closed form sqrt(2)/12.
  const Ensemble w = witness_ensemble();
  const DynamicalMap purify = DynamicalMap::purify(2);
  const double gap =
      trace_distance(apply(purify, collapse_to_density(w)).matrix(),
                     collapse(apply_ensemble(purify, w)).matrix());
  CHECK(gap == doctest::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-12));

  const AuditReport purify_report = audit_convex_linearity(purify, 2, 50, 7);
  CHECK_FALSE(purify_report.convex_linear);
  REQUIRE(purify_report.witness.has_value());
  CHECK(purify_report.witness->gap > 1e-3);
}

TEST_CASE("audit: quasi-linear maps fail iff gamma != 1 (dims 2-4)") {
  for (int dim = 2; dim <= 4; ++dim) {
    Rng rng(40 + static_cast<std::uint64_t>(dim));
    const DynamicalMap base = DynamicalMap::unitary(random_unitary(dim, rng));

    const AuditReport linear = audit_convex_linearity(
        DynamicalMap::quasi_linear(base, 1.0), dim, 50, 8);
    CHECK(linear.convex_linear);

    const AuditReport nonlinear = audit_convex_linearity(
        DynamicalMap::quasi_linear(base, 2.0), dim, 50, 9);
    CHECK_FALSE(nonlinear.convex_linear);
    CHECK(nonlinear.max_gap > 1e-3);
  }
}

TEST_CASE("audit trials are schedule independent") {
  const DynamicalMap purify = DynamicalMap::purify(2);
  const AuditReport a = audit_convex_linearity(purify, 2, 16, 123);
  const AuditReport b = audit_convex_linearity(purify, 2, 16, 123);
  CHECK(a.max_gap == b.max_gap);
}
