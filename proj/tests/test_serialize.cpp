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

#include <functional>
#include <string>

#include "qlab/rng.hpp"
#include "qlab/serialize.hpp"

using namespace qlab;

namespace {

bool throws_code(const std::function<void()>& f, const std::string& code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("roundtrip property: states, ensembles, povms, map descriptors") {
  Rng rng(14);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 2 + (trial % 3);

    const DensityMatrix rho = random_density(dim, rng);
    const DensityMatrix rho2 = density_from_json(density_to_json(rho));
    CHECK(max_abs(rho.matrix() - rho2.matrix()) == 0.0);

    const Ensemble e = random_ensemble(dim, rng);
    const StateOrEnsemble e2 = mixture_from_json(ensemble_to_json(e));
    REQUIRE(std::holds_alternative<Ensemble>(e2));
    const Ensemble& back = std::get<Ensemble>(e2);
    REQUIRE(back.size() == e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(back.components()[i].weight ==
            doctest::Approx(e.components()[i].weight).epsilon(1e-15));
      CHECK(max_abs(back.components()[i].state.matrix() -
                    e.components()[i].state.matrix()) == 0.0);
    }

    const Povm ic = build_ic_povm(dim, 500 + static_cast<std::uint64_t>(trial));
    const Povm ic2 = povm_from_json(povm_to_json(ic));
    CHECK(ic2.id() == ic.id());
    for (std::size_t i = 0; i < ic.size(); ++i)
      CHECK(max_abs(ic.effects()[i] - ic2.effects()[i]) == 0.0);

    const OutcomeDistribution d = born(rho, ic);
    const OutcomeDistribution d2 = distribution_from_json(distribution_to_json(d));
    CHECK(d2.labels() == d.labels());
    for (std::size_t i = 0; i < d.probabilities().size(); ++i)
      CHECK(d2.probabilities()[i] == d.probabilities()[i]);

    const DynamicalMap u = DynamicalMap::unitary(random_unitary(dim, rng));
    const DynamicalMap u2 = map_from_json(map_to_json(u));
    CHECK(max_abs(u.unitary_matrix() - u2.unitary_matrix()) == 0.0);

    const DynamicalMap k = random_kraus_map(dim, 2, rng);
    const DynamicalMap k2 = map_from_json(map_to_json(k));
    REQUIRE(k2.kraus_operators().size() == k.kraus_operators().size());
  }

  // Composite kinds keep their structure through the wire format.
  const DynamicalMap ql = DynamicalMap::quasi_linear(
      DynamicalMap::identity_map(2), 2.0);
  const DynamicalMap ql2 = map_from_json(map_to_json(ql));
  CHECK(ql2.gamma() == 2.0);
  CHECK(ql2.base().kind() == MapKind::kUnitary);

  const DynamicalMap st = DynamicalMap::stochastic(
      {{0.25, DynamicalMap::purify(2)},
       {0.75, DynamicalMap::identity_map(2)}});
  const DynamicalMap st2 = map_from_json(map_to_json(st));
  REQUIRE(st2.branches().size() == 2);
  CHECK(st2.branches()[0].first == 0.25);
}

TEST_CASE("strict schemas: unknown fields and malformed values are rejected") {
  Json density = density_to_json(DensityMatrix::maximally_mixed(2));
  density["comment"] = "sneaky";
  CHECK(throws_code([&] { density_from_json(density); }, "bad-config"));

  Json map = map_to_json(DynamicalMap::purify(2));
  map["parameters"]["extra"] = 1;
  CHECK(throws_code([&] { map_from_json(map); }, "bad-config"));

  Json bad_kind = map_to_json(DynamicalMap::purify(2));
  bad_kind["kind"] = "teleport";
  CHECK(throws_code([&] { map_from_json(bad_kind); }, "bad-config"));

  // Descriptor-level validation still applies: a non-trace-preserving
  // operator list is not a channel.
  Json bad_kraus{{"kind", "kraus"},
                 {"dim", 2},
                 {"parameters",
                  Json{{"operators",
                        Json::array({matrix_to_json(
                            ComplexMatrix(0.9 * identity(2)))})}}}};
  CHECK(throws_code([&] { map_from_json(bad_kraus); }, "invalid-map"));
}

TEST_CASE("povm config descriptors") {
  const Povm comp = povm_from_config(Json{{"type", "computational"}}, 3);
  CHECK(comp.size() == 3);

  const Povm ic = povm_from_config(Json{{"type", "ic"}, {"seed", 7}}, 2);
  CHECK(ic.informationally_complete());
  const Povm direct = build_ic_povm(2, 7);
  for (std::size_t i = 0; i < ic.size(); ++i)
    CHECK(max_abs(ic.effects()[i] - direct.effects()[i]) == 0.0);

  CHECK(throws_code(
      [] { povm_from_config(Json{{"type", "mystery"}}, 2); }, "bad-config"));
}

TEST_CASE("config hash: stable, key-order independent, content sensitive") {
  const Json a{{"seed", 1}, {"dim", 2}};
  const Json b{{"dim", 2}, {"seed", 1}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);

  const Json c{{"dim", 2}, {"seed", 2}};
  CHECK(config_hash(a) != config_hash(c));

  // Pinned digest of the empty object: guards the canonicalization.
  CHECK(sha256_hex("{}") ==
        "44136fa355b3678a1146ad16f7e8649e94fb4fc21fe77e8310c060f61caaff8a");
}
