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

#include "qlab/rng.hpp"
#include "qlab/states.hpp"

using namespace qlab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState ket(int d, int k) { return PureState(basis_ket(d, k)); }

PureState plus_state() {
  return PureState::normalized(basis_ket(2, 0) + basis_ket(2, 1));
}

PureState minus_state() {
  return PureState::normalized(basis_ket(2, 0) - basis_ket(2, 1));
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

TEST_CASE("PureState: normalization and phase gauge") {
  // Global phase is stripped: e^{i phi}|1> and |1> are one state.
  ComplexVector v = basis_ket(2, 1) * std::exp(Complex(0, 1.3));
  const PureState canon(v);
  CHECK(std::abs(canon.amplitudes()[1] - Complex(1.0, 0.0)) < 1e-14);

  CHECK(throws_code([] { PureState(ComplexVector(2.0 * basis_ket(2, 0))); },
                    "invalid-pure-state"));
}

TEST_CASE("DensityMatrix: invariants enforced at construction") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
  CHECK_NOTHROW(DensityMatrix::pure(plus_state()));

  ComplexMatrix not_unit_trace = 2.0 * identity(2);
  CHECK(throws_code([&] { DensityMatrix{not_unit_trace}; },
                    "invalid-density-matrix"));

  ComplexMatrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK(throws_code([&] { DensityMatrix{negative}; },
                    "invalid-density-matrix"));
}

TEST_CASE("superpose: single term, plus state, basis change") {
  const PureState same = superpose({{1.0, ket(2, 0)}});
  CHECK(max_abs(ComplexMatrix(same.amplitudes() - basis_ket(2, 0))) < 1e-14);

  const PureState plus =
      superpose({{kInvSqrt2, ket(2, 0)}, {kInvSqrt2, ket(2, 1)}});
  CHECK(std::abs(plus.amplitudes()[0] - kInvSqrt2) < 1e-12);
  CHECK(std::abs(plus.amplitudes()[1] - kInvSqrt2) < 1e-12);

  // (|+> - |->)/sqrt(2) = |1>, modulo the phase gauge.
  const PureState one =
      superpose({{kInvSqrt2, plus_state()}, {-kInvSqrt2, minus_state()}});
  CHECK(std::abs(one.amplitudes()[0]) < 1e-12);
  CHECK(std::abs(one.amplitudes()[1] - 1.0) < 1e-12);

  CHECK(throws_code(
      [&] { superpose({{1.0, ket(2, 0)}, {-1.0, ket(2, 0)}}); },
      "null-superposition"));
}

TEST_CASE("lab_superposition: degenerate, Bell, tilted weights") {
  // lambda = (1, 0) degenerates to the product record |0>|0>.
  const PureState product = lab_superposition({1.0, 0.0}, 2);
  CHECK(std::abs(product.amplitudes()[0] - 1.0) < 1e-14);

  const PureState bell = lab_superposition({0.5, 0.5}, 2);
  CHECK(std::abs(bell.amplitudes()[0] - kInvSqrt2) < 1e-13);
  CHECK(std::abs(bell.amplitudes()[3] - kInvSqrt2) < 1e-13);

  const PureState tilted = lab_superposition({0.25, 0.75}, 2);
  CHECK(std::abs(tilted.amplitudes()[0] - 0.5) < 1e-13);
  CHECK(std::abs(tilted.amplitudes()[3] - std::sqrt(3.0) / 2.0) < 1e-13);

  // Squared amplitudes reproduce the weights even with phases.
  const PureState phased =
      lab_superposition({0.25, 0.75}, 2, {Complex(0, 1), Complex(1, 0)});
  CHECK(std::abs(std::norm(phased.amplitudes()[0]) - 0.25) < 1e-13);
  CHECK(std::abs(std::norm(phased.amplitudes()[3]) - 0.75) < 1e-13);

  CHECK(throws_code([] { lab_superposition({0.5, 0.5, 0.0}, 2); },
                    "pointer-too-small"));
}

TEST_CASE("make_mixture: merge, drop, collapse to bare state") {
  const DensityMatrix p0 = DensityMatrix::pure(ket(2, 0));
  const DensityMatrix p1 = DensityMatrix::pure(ket(2, 1));

  // Repeated elements combine: {l: rho, 1-l: rho} is just rho.
  StateOrEnsemble merged = make_mixture({{0.3, p0}, {0.7, p0}});
  CHECK(std::holds_alternative<DensityMatrix>(merged));

  StateOrEnsemble proper = make_mixture({{0.5, p0}, {0.5, p1}});
  REQUIRE(std::holds_alternative<Ensemble>(proper));
  CHECK(std::get<Ensemble>(proper).size() == 2);

  // Negligible weights are dropped and the rest renormalized.
  StateOrEnsemble dropped = make_mixture({{1.0 - 1e-13, p0}, {1e-13, p1}});
  CHECK(std::holds_alternative<DensityMatrix>(dropped));

  CHECK(throws_code([&] { make_mixture({{-0.2, p0}, {1.2, p1}}); },
                    "invalid-ensemble"));
}

TEST_CASE("collapse_to_density: orthogonal mixture, oblique mixture, merge rule") {
  const DensityMatrix p0 = DensityMatrix::pure(ket(2, 0));
  const DensityMatrix p1 = DensityMatrix::pure(ket(2, 1));
  const DensityMatrix pp = DensityMatrix::pure(plus_state());

  const Ensemble half =
      std::get<Ensemble>(make_mixture({{0.5, p0}, {0.5, p1}}));
  CHECK(max_abs(collapse_to_density(half).matrix() - 0.5 * identity(2)) <
        1e-14);

  const Ensemble oblique =
      std::get<Ensemble>(make_mixture({{0.5, p0}, {0.5, pp}}));
  ComplexMatrix expected(2, 2);
  expected << 0.75, 0.25, 0.25, 0.25;
  CHECK(max_abs(collapse_to_density(oblique).matrix() - expected) < 1e-14);
}

TEST_CASE("flatten: certainty, weighted union with merge, repeated state") {
  const DensityMatrix a = DensityMatrix::pure(ket(3, 0));
  const DensityMatrix b = DensityMatrix::pure(ket(3, 1));
  const DensityMatrix c = DensityMatrix::pure(ket(3, 2));

  const StateOrEnsemble e1 = make_mixture({{0.5, a}, {0.5, b}});
  const StateOrEnsemble e2 = make_mixture({{0.5, b}, {0.5, c}});

  // Certainty about the ensemble returns the ensemble itself.
  const StateOrEnsemble same = flatten({{1.0, e1}});
  REQUIRE(std::holds_alternative<Ensemble>(same));
  CHECK(std::get<Ensemble>(same).size() == 2);

  const StateOrEnsemble fused = flatten({{0.5, e1}, {0.5, e2}});
  REQUIRE(std::holds_alternative<Ensemble>(fused));
  const Ensemble& fe = std::get<Ensemble>(fused);
  REQUIRE(fe.size() == 3);
  // Weights {1/4 : a, 1/2 : b, 1/4 : c}, in first-seen order.
  CHECK(fe.components()[0].weight == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fe.components()[1].weight == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fe.components()[2].weight == doctest::Approx(0.25).epsilon(1e-12));

  // {p : {1:A}, 1-p : {1:A}} is the state A.
  const StateOrEnsemble trivial =
      flatten({{0.3, StateOrEnsemble(a)}, {0.7, StateOrEnsemble(a)}});
  CHECK(std::holds_alternative<DensityMatrix>(trivial));

  // Meta-weights must be a probability vector.
  CHECK(throws_code([&] { flatten({{0.4, e1}, {0.4, e2}}); },
                    "invalid-ensemble"));
}

TEST_CASE("flatten is linear under collapse") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<double, StateOrEnsemble>> meta;
    const std::vector<double> ps = rng.simplex_point(3);
    std::vector<DensityMatrix> collapsed;
    for (int i = 0; i < 3; ++i) {
      std::vector<Ensemble::Component> comps;
      const std::vector<double> ws = rng.simplex_point(2);
      for (int k = 0; k < 2; ++k) {
        ComplexMatrix g(2, 2);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) g(r, c) = rng.complex_normal();
        ComplexMatrix w = g * g.adjoint();
        comps.push_back({ws[static_cast<std::size_t>(k)],
                         DensityMatrix(w / w.trace().real())});
      }
      StateOrEnsemble child = make_mixture(comps);
      collapsed.push_back(collapse(child));
      meta.emplace_back(ps[static_cast<std::size_t>(i)], std::move(child));
    }
    const DensityMatrix lhs = collapse(flatten(meta));
    ComplexMatrix rhs = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i)
      rhs += ps[static_cast<std::size_t>(i)] *
             collapsed[static_cast<std::size_t>(i)].matrix();
    CHECK(max_abs(lhs.matrix() - rhs) < 1e-12);
  }
}

TEST_CASE("reduced_ensemble: lab records, product component, merging") {
  // {lambda_k : |k><k| (x) |k><k|} reduces to {lambda_k : |k><k|}.
  std::vector<Ensemble::Component> joint;
  const double lambdas[2] = {0.25, 0.75};
  for (int k = 0; k < 2; ++k)
    joint.push_back({lambdas[k],
                     DensityMatrix(tensor(basis_projector(2, k),
                                          basis_projector(2, k)))});
  const Ensemble e = std::get<Ensemble>(make_mixture(joint));
  const StateOrEnsemble r = reduced_ensemble(e, {2, 2}, 0);
  REQUIRE(std::holds_alternative<Ensemble>(r));
  const Ensemble& re = std::get<Ensemble>(r);
  CHECK(re.components()[0].weight == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(max_abs(re.components()[0].state.matrix() - basis_projector(2, 0)) <
        1e-14);

  // Identical reduced components merge down to the bare state.
  const DensityMatrix rho = DensityMatrix::pure(ket(2, 0));
  const DensityMatrix sigma = DensityMatrix::maximally_mixed(2);
  const DensityMatrix tau = DensityMatrix::pure(ket(2, 1));
  const Ensemble products = std::get<Ensemble>(make_mixture(
      {{0.5, DensityMatrix(tensor(rho.matrix(), sigma.matrix()))},
       {0.5, DensityMatrix(tensor(rho.matrix(), tau.matrix()))}}));
  const StateOrEnsemble merged = reduced_ensemble(products, {2, 2}, 0);
  REQUIRE(std::holds_alternative<DensityMatrix>(merged));
  CHECK(max_abs(std::get<DensityMatrix>(merged).matrix() - rho.matrix()) <
        1e-14);

  CHECK(throws_code([&] { reduced_ensemble(e, {3, 2}, 0); },
                    "bad-factorization"));
}

TEST_CASE("lab_superposition marginal equals collapsed reduced ensemble") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int k_count = 2 + static_cast<int>(rng.next_u64() % 3);
    const std::vector<double> lambda = rng.simplex_point(k_count);

    std::vector<Ensemble::Component> joint;
    for (int k = 0; k < k_count; ++k)
      joint.push_back({lambda[static_cast<std::size_t>(k)],
                       DensityMatrix(tensor(basis_projector(k_count, k),
                                            basis_projector(k_count, k)))});
    const Ensemble e = std::get<Ensemble>(make_mixture(joint));

    const PureState psi = lab_superposition(lambda, k_count);
    const ComplexMatrix reduced_sup = partial_trace(
        projector(psi.amplitudes()), {k_count, k_count}, 0);
    const DensityMatrix reduced_ens =
        collapse(reduced_ensemble(e, {k_count, k_count}, 0));
    CHECK(max_abs(reduced_sup - reduced_ens.matrix()) < 1e-12);
  }
}
