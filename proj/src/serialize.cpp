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

#include "qlab/serialize.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace qlab {
namespace {

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("bad-config", where + ": complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_field(const Json& obj, const std::string& key,
                    const std::string& where) {
  if (!obj.at(key).is_number())
    fail("bad-config", where + ": '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

}  // namespace

void expect_fields(const Json& obj, const std::vector<std::string>& required,
                   const std::vector<std::string>& optional,
                   const std::string& where) {
  if (!obj.is_object())
    fail("bad-config", where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known)
      fail("bad-config", where + ": unknown field '" + key + "'");
  }
  for (const std::string& key : required)
    if (!obj.contains(key))
      fail("bad-config", where + ": missing field '" + key + "'");
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail("bad-config", where + ": matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0)
    fail("bad-config", where + ": matrix rows must be non-empty arrays");
  ComplexMatrix m(static_cast<Eigen::Index>(j.size()),
                  static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail("bad-config", where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], where);
  }
  if (!all_finite(m)) fail("bad-config", where + ": non-finite entries");
  return m;
}

Json density_to_json(const DensityMatrix& rho) {
  Json entries = Json::array();
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(complex_to_json(m(i, j)));
  return Json{{"d", rho.dim()}, {"entries", std::move(entries)}};
}

DensityMatrix density_from_json(const Json& j) {
  expect_fields(j, {"d", "entries"}, {}, "density matrix");
  if (!j["d"].is_number_integer() || j["d"].get<int>() < 1)
    fail("bad-config", "density matrix: 'd' must be a positive integer");
  const int d = j["d"].get<int>();
  const Json& entries = j["entries"];
  if (!entries.is_array() ||
      entries.size() != static_cast<std::size_t>(d) * d)
    fail("bad-config", "density matrix: expected d*d entries");
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c)
      m(i, c) = complex_from_json(entries[static_cast<std::size_t>(i) * d + c],
                                  "density matrix");
  return DensityMatrix(std::move(m));
}

Json ensemble_to_json(const Ensemble& e) {
  Json out = Json::array();
  for (const auto& c : e.components())
    out.push_back(
        Json{{"weight", c.weight}, {"state", density_to_json(c.state)}});
  return out;
}

Json state_or_ensemble_to_json(const StateOrEnsemble& s) {
  if (const auto* state = std::get_if<DensityMatrix>(&s))
    return Json::array({Json{{"weight", 1.0}, {"state", density_to_json(*state)}}});
  return ensemble_to_json(std::get<Ensemble>(s));
}

StateOrEnsemble mixture_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    fail("bad-config", "ensemble: expected a non-empty array of components");
  std::vector<Ensemble::Component> components;
  components.reserve(j.size());
  for (const Json& item : j) {
    expect_fields(item, {"weight", "state"}, {}, "ensemble component");
    components.push_back({number_field(item, "weight", "ensemble component"),
                          density_from_json(item["state"])});
  }
  return make_mixture(std::move(components));
}

Json povm_to_json(const Povm& m) {
  Json effects = Json::array();
  for (const ComplexMatrix& e : m.effects())
    effects.push_back(matrix_to_json(e));
  return Json{{"id", m.id()},
              {"effects", std::move(effects)},
              {"outcome_labels", m.outcome_labels()}};
}

Povm povm_from_json(const Json& j) {
  expect_fields(j, {"effects"}, {"id", "outcome_labels"}, "povm");
  if (!j["effects"].is_array() || j["effects"].empty())
    fail("bad-config", "povm: 'effects' must be a non-empty array");
  std::vector<ComplexMatrix> effects;
  effects.reserve(j["effects"].size());
  for (const Json& e : j["effects"])
    effects.push_back(matrix_from_json(e, "povm effect"));
  std::vector<int> labels;
  if (j.contains("outcome_labels")) {
    labels = j["outcome_labels"].get<std::vector<int>>();
  } else {
    labels.resize(effects.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      labels[i] = static_cast<int>(i);
  }
  std::string id;
  if (j.contains("id")) {
    id = j["id"].get<std::string>();
  } else {
    id = "povm-" + sha256_hex(j.dump()).substr(0, 8);
  }
  return Povm(std::move(effects), std::move(labels), std::move(id));
}

Json distribution_to_json(const OutcomeDistribution& d) {
  return Json{{"probabilities", d.probabilities()}, {"labels", d.labels()}};
}

OutcomeDistribution distribution_from_json(const Json& j) {
  expect_fields(j, {"probabilities", "labels"}, {}, "outcome distribution");
  return OutcomeDistribution(j["probabilities"].get<std::vector<double>>(),
                             j["labels"].get<std::vector<int>>());
}

Povm povm_from_config(const Json& j, int dim) {
  if (j.is_object() && j.contains("type")) {
    const std::string type = j["type"].get<std::string>();
    if (type == "computational") {
      expect_fields(j, {"type"}, {}, "povm config");
      return computational_povm(dim);
    }
    if (type == "ic") {
      expect_fields(j, {"type", "seed"}, {}, "povm config");
      if (!j["seed"].is_number_integer())
        fail("bad-config", "povm config: 'seed' must be an integer");
      return build_ic_povm(dim, j["seed"].get<std::uint64_t>());
    }
    if (type == "explicit") {
      Json inner = j;
      inner.erase("type");
      Povm m = povm_from_json(inner);
      if (m.dim() != dim)
        fail("bad-config", "povm config: effect dimension mismatch");
      return m;
    }
    fail("bad-config", "povm config: unknown type '" + type + "'");
  }
  Povm m = povm_from_json(j);
  if (m.dim() != dim)
    fail("bad-config", "povm config: effect dimension mismatch");
  return m;
}

Json map_to_json(const DynamicalMap& map) {
  Json parameters = Json::object();
  switch (map.kind()) {
    case MapKind::kUnitary:
      parameters["matrix"] = matrix_to_json(map.unitary_matrix());
      break;
    case MapKind::kKraus: {
      Json ops = Json::array();
      for (const ComplexMatrix& k : map.kraus_operators())
        ops.push_back(matrix_to_json(k));
      parameters["operators"] = std::move(ops);
      break;
    }
    case MapKind::kNonlinearPurify:
      break;
    case MapKind::kNonlinearMeanField: {
      const MeanFieldParams& p = map.mean_field_params();
      parameters["h0"] = matrix_to_json(p.h0);
      parameters["a"] = matrix_to_json(p.a);
      parameters["g"] = p.g;
      parameters["tau"] = p.tau;
      parameters["step"] = p.step;
      break;
    }
    case MapKind::kQuasiLinear:
      parameters["gamma"] = map.gamma();
      parameters["base"] = map_to_json(map.base());
      break;
    case MapKind::kStochastic: {
      Json branches = Json::array();
      for (const auto& [w, t] : map.branches())
        branches.push_back(Json{{"weight", w}, {"map", map_to_json(t)}});
      parameters["branches"] = std::move(branches);
      break;
    }
  }
  return Json{{"kind", map_kind_name(map.kind())},
              {"dim", map.dim()},
              {"parameters", std::move(parameters)}};
}

DynamicalMap map_from_json(const Json& j) {
  expect_fields(j, {"kind", "dim", "parameters"}, {}, "map descriptor");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    fail("bad-config", "map descriptor: 'dim' must be a positive integer");
  const int dim = j["dim"].get<int>();
  const std::string kind = j["kind"].get<std::string>();
  const Json& p = j["parameters"];

  auto check_dim = [&](const ComplexMatrix& m, const char* what) {
    if (m.rows() != dim || m.cols() != dim)
      fail("bad-config",
           std::string("map descriptor: ") + what + " must be dim x dim");
  };

  if (kind == "unitary") {
    expect_fields(p, {"matrix"}, {}, "unitary parameters");
    ComplexMatrix u = matrix_from_json(p["matrix"], "unitary matrix");
    check_dim(u, "matrix");
    return DynamicalMap::unitary(std::move(u));
  }
  if (kind == "kraus") {
    expect_fields(p, {"operators"}, {}, "kraus parameters");
    if (!p["operators"].is_array() || p["operators"].empty())
      fail("bad-config", "map descriptor: 'operators' must be non-empty");
    std::vector<ComplexMatrix> ops;
    for (const Json& op : p["operators"]) {
      ops.push_back(matrix_from_json(op, "kraus operator"));
      check_dim(ops.back(), "operators");
    }
    return DynamicalMap::kraus(std::move(ops));
  }
  if (kind == "nonlinear_purify") {
    expect_fields(p, {}, {}, "purify parameters");
    return DynamicalMap::purify(dim);
  }
  if (kind == "nonlinear_meanfield") {
    expect_fields(p, {"h0", "a", "g", "tau"}, {"step"},
                  "mean-field parameters");
    MeanFieldParams params;
    params.h0 = matrix_from_json(p["h0"], "mean-field h0");
    params.a = matrix_from_json(p["a"], "mean-field a");
    check_dim(params.h0, "h0");
    check_dim(params.a, "a");
    params.g = number_field(p, "g", "mean-field parameters");
    params.tau = number_field(p, "tau", "mean-field parameters");
    params.step = p.contains("step")
                      ? number_field(p, "step", "mean-field parameters")
                      : params.tau / 1000.0;
    return DynamicalMap::mean_field(std::move(params));
  }
  if (kind == "quasi_linear") {
    expect_fields(p, {"gamma"}, {"base"}, "quasi-linear parameters");
    const double gamma = number_field(p, "gamma", "quasi-linear parameters");
    DynamicalMap base = p.contains("base")
                            ? map_from_json(p["base"])
                            : DynamicalMap::identity_map(dim);
    if (base.dim() != dim)
      fail("bad-config", "map descriptor: base map dimension mismatch");
    return DynamicalMap::quasi_linear(std::move(base), gamma);
  }
  if (kind == "stochastic") {
    expect_fields(p, {"branches"}, {}, "stochastic parameters");
    if (!p["branches"].is_array() || p["branches"].empty())
      fail("bad-config", "map descriptor: 'branches' must be non-empty");
    std::vector<std::pair<double, DynamicalMap>> branches;
    for (const Json& b : p["branches"]) {
      expect_fields(b, {"weight", "map"}, {}, "stochastic branch");
      branches.emplace_back(number_field(b, "weight", "stochastic branch"),
                            map_from_json(b["map"]));
      if (branches.back().second.dim() != dim)
        fail("bad-config", "map descriptor: branch dimension mismatch");
    }
    return DynamicalMap::stochastic(std::move(branches));
  }
  fail("bad-config", "map descriptor: unknown kind '" + kind + "'");
}

Json audit_report_to_json(const AuditReport& report) {
  Json out{{"verdict",
            report.convex_linear ? "convex-linear" : "non-convex-linear"},
           {"max_gap", report.max_gap},
           {"trials", report.trials},
           {"tol", report.tol}};
  if (report.witness) {
    out["witness"] = Json{{"ensemble", ensemble_to_json(report.witness->ensemble)},
                          {"gap", report.witness->gap}};
  }
  return out;
}

Json ld_report_to_json(const LdReport& report) {
  return Json{{"tv_distance", report.tv_distance},
              {"protocol", Json{{"map", report.map_label},
                                {"measurement", report.povm_id}}},
              {"threshold", report.threshold},
              {"verdict", report.ld_violated ? "LD-violated" : "LD-holds"}};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1)
    fail("internal-error", "SHA-256 digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i)
    out << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  return out.str();
}

std::string config_hash(const Json& config) {
  return sha256_hex(config.dump());
}

}  // namespace qlab
