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

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qlab/serialize.hpp"
#include "qlab/suite.hpp"
#include "qlab/wigner.hpp"

namespace {

using qlab::Json;

// Exit codes: 0 success/pass, 1 scientific violation found, 2 operational
// error, 64 usage error.
constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;
constexpr int kExitUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) qlab::fail("io-error", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    qlab::fail("bad-config", "'" + path + "' is not valid JSON: " + e.what());
  }
}

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) qlab::fail("io-error", "cannot write '" + tmp + "'");
    out << data;
  }
  std::filesystem::rename(tmp, path);
}

// Payloads carry no timestamps; reruns with one seed are byte-identical.
void emit_payload(const Json& payload, const std::string& out_path) {
  const std::string text = payload.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%FT%TZ", std::gmtime(&now));
  return buffer;
}

qlab::ComplexMatrix embedded_pauli(int dim, const qlab::ComplexMatrix& p) {
  qlab::ComplexMatrix m = qlab::ComplexMatrix::Zero(dim, dim);
  m.block(0, 0, 2, 2) = p;
  return m;
}

qlab::Povm povm_from_config_with_fallback(const Json& cfg, int dim,
                                          bool have_seed,
                                          std::uint64_t fallback_seed) {
  if (cfg.is_object() && cfg.contains("type") &&
      cfg["type"].get<std::string>() == "ic" && !cfg.contains("seed")) {
    if (!have_seed)
      qlab::fail("bad-config",
                 "povm config of type 'ic' needs a seed (inline or top-level)");
    Json patched = cfg;
    patched["seed"] = fallback_seed;
    return qlab::povm_from_config(patched, dim);
  }
  return qlab::povm_from_config(cfg, dim);
}

int cmd_ic_build(int dim, std::uint64_t seed, const std::string& out_path) {
  const qlab::Povm povm = qlab::build_ic_povm(dim, seed);
  Json payload = qlab::povm_to_json(povm);
  payload["config_hash"] = qlab::config_hash(
      Json{{"command", "ic-build"}, {"dim", dim}, {"seed", seed}});
  emit_payload(payload, out_path);
  return kExitPass;
}

int cmd_map_audit(const std::string& map_path, int trials, std::uint64_t seed,
                  double tol, const std::string& out_path) {
  const Json descriptor = parse_json_file(map_path);
  const qlab::DynamicalMap map = qlab::map_from_json(descriptor);
  const qlab::AuditReport report =
      qlab::audit_convex_linearity(map, map.dim(), trials, seed, tol);

  Json payload = qlab::audit_report_to_json(report);
  payload["map"] = map.label();
  payload["config_hash"] = qlab::config_hash(Json{{"command", "map-audit"},
                                                  {"map", descriptor},
                                                  {"trials", trials},
                                                  {"seed", seed},
                                                  {"tol", tol}});
  emit_payload(payload, out_path);
  return report.convex_linear ? kExitPass : kExitViolation;
}

int cmd_gpt_check(const std::string& map_path, int dim, int trials,
                  std::uint64_t seed, double tol,
                  const std::string& out_path) {
  const Json descriptor = parse_json_file(map_path);
  const qlab::DynamicalMap map = qlab::map_from_json(descriptor);
  if (map.dim() != dim)
    qlab::fail("bad-config", "map dim " + std::to_string(map.dim()) +
                                 " does not match --dim " +
                                 std::to_string(dim));
  const qlab::Povm ic = qlab::build_ic_povm(dim, seed);
  const qlab::AuditReport report =
      qlab::gpt_convex_linearity_check(map, ic, trials, seed, tol);

  Json payload = qlab::audit_report_to_json(report);
  payload["map"] = map.label();
  payload["ic"] = ic.id();
  payload["config_hash"] = qlab::config_hash(Json{{"command", "gpt-check"},
                                                  {"map", descriptor},
                                                  {"dim", dim},
                                                  {"trials", trials},
                                                  {"seed", seed},
                                                  {"tol", tol}});
  emit_payload(payload, out_path);
  return report.convex_linear ? kExitPass : kExitViolation;
}

std::string csv_escape_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

qlab::ProtocolFamily family_from_config(const Json& cfg, int dim) {
  qlab::expect_fields(cfg,
                      {"family", "grid", "budget"},
                      {"h0", "a", "tau", "step", "generator", "base", "povms"},
                      "search config");
  const std::string family = cfg["family"].get<std::string>();
  const std::vector<double> grid = cfg["grid"].get<std::vector<double>>();

  if (family == "unitary") {
    qlab::ComplexMatrix generator =
        cfg.contains("generator")
            ? qlab::matrix_from_json(cfg["generator"], "search generator")
            : embedded_pauli(dim, qlab::pauli_y());
    return qlab::ProtocolFamily::unitary_rotation(std::move(generator), grid);
  }
  if (family == "meanfield") {
    qlab::ComplexMatrix h0 =
        cfg.contains("h0") ? qlab::matrix_from_json(cfg["h0"], "search h0")
                           : embedded_pauli(dim, qlab::pauli_z());
    qlab::ComplexMatrix a =
        cfg.contains("a") ? qlab::matrix_from_json(cfg["a"], "search a")
                          : embedded_pauli(dim, qlab::pauli_z());
    const double tau = cfg.contains("tau") ? cfg["tau"].get<double>() : 1.0;
    const double step =
        cfg.contains("step") ? cfg["step"].get<double>() : tau / 1000.0;
    return qlab::ProtocolFamily::mean_field(std::move(h0), std::move(a), tau,
                                            step, grid);
  }
  if (family == "quasilinear") {
    qlab::DynamicalMap base = cfg.contains("base")
                                  ? qlab::map_from_json(cfg["base"])
                                  : qlab::DynamicalMap::identity_map(dim);
    return qlab::ProtocolFamily::quasi_linear(std::move(base), grid);
  }
  qlab::fail("bad-config", "unknown search family '" + family + "'");
}

int cmd_scenario_run(const std::string& config_path,
                     const std::string& out_path, std::string csv_path) {
  const Json cfg = parse_json_file(config_path);
  qlab::expect_fields(
      cfg, {"K", "lambda"},
      {"phases", "threshold", "map", "povm", "search", "seed"},
      "scenario config");

  const int k_count = cfg["K"].get<int>();
  const std::vector<double> lambda = cfg["lambda"].get<std::vector<double>>();
  if (static_cast<int>(lambda.size()) != k_count)
    qlab::fail("bad-config", "'lambda' must have K entries");
  std::vector<qlab::Complex> phases;
  if (cfg.contains("phases")) {
    if (!cfg["phases"].is_array())
      qlab::fail("bad-config", "'phases' must be an array of [re, im] pairs");
    for (const Json& p : cfg["phases"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number())
        qlab::fail("bad-config", "phases entries must be [re, im]");
      phases.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  const double threshold =
      cfg.contains("threshold") ? cfg["threshold"].get<double>() : 1e-6;
  const bool have_seed = cfg.contains("seed");
  const std::uint64_t seed =
      have_seed ? cfg["seed"].get<std::uint64_t>() : 0;

  const qlab::LabScenario scenario(lambda, k_count, phases);

  if (cfg.contains("map") == cfg.contains("search"))
    qlab::fail("bad-config",
               "scenario config needs exactly one of 'map' or 'search'");

  if (cfg.contains("map")) {
    if (!cfg.contains("povm"))
      qlab::fail("bad-config", "single-protocol config needs 'povm'");
    const qlab::DynamicalMap map = qlab::map_from_json(cfg["map"]);
    const qlab::Povm povm = povm_from_config_with_fallback(
        cfg["povm"], scenario.system_dim(), have_seed, seed);
    const qlab::LdReport report =
        qlab::run_friend_protocol(scenario, map, povm, threshold);

    Json payload = qlab::ld_report_to_json(report);
    payload["config_hash"] = qlab::config_hash(cfg);
    emit_payload(payload, out_path);
    return report.ld_violated ? kExitViolation : kExitPass;
  }

  // Sweep mode: grid + refinement over one protocol family.
  const Json& search = cfg["search"];
  const qlab::ProtocolFamily family =
      family_from_config(search, scenario.system_dim());
  const int budget = search["budget"].get<int>();
  std::vector<qlab::Povm> candidates;
  if (search.contains("povms")) {
    for (const Json& p : search["povms"])
      candidates.push_back(povm_from_config_with_fallback(
          p, scenario.system_dim(), have_seed, seed));
  } else {
    candidates.push_back(qlab::computational_povm(scenario.system_dim()));
  }

  const qlab::SearchResult result = qlab::search_best_protocol(
      scenario, family, candidates, budget, threshold);

  Json payload = qlab::ld_report_to_json(result.best);
  payload["best_parameter"] = result.best_parameter;
  payload["evaluations"] = static_cast<int>(result.evaluations.size());
  payload["config_hash"] = qlab::config_hash(cfg);
  emit_payload(payload, out_path);

  if (csv_path.empty() && !out_path.empty()) csv_path = out_path + ".csv";
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "family,parameter,povm,tv_distance,verdict\n";
    for (const qlab::ProtocolEvaluation& row : result.evaluations)
      csv << row.family << "," << csv_escape_double(row.parameter) << ","
          << row.povm_id << "," << csv_escape_double(row.tv_distance) << ","
          << (row.ld_violated ? "LD-violated" : "LD-holds") << "\n";
    write_file_atomic(csv_path, csv.str());
  }
  return result.best.ld_violated ? kExitViolation : kExitPass;
}

int cmd_paper_suite(std::uint64_t seed, const std::string& out_path,
                    bool negative_control) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<qlab::CheckResult> results =
      qlab::run_paper_suite(seed, negative_control);
  const double total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();

  Json payload = qlab::suite_payload(results, seed);
  payload["config_hash"] = qlab::config_hash(
      Json{{"command", "paper-suite"},
           {"seed", seed},
           {"negative_control", negative_control}});
  emit_payload(payload, out_path);

  // Wall-clock info goes to stderr and the sidecar log, never the payload.
  std::ostringstream log;
  log << iso_timestamp() << " paper-suite seed=" << seed << "\n";
  for (const qlab::CheckResult& r : results)
    log << "  " << (r.pass ? "pass" : "FAIL") << " " << r.name << " ("
        << r.runtime_ms << " ms)\n";
  log << "  total " << total_ms << " ms\n";
  std::cerr << log.str();
  if (!out_path.empty()) write_file_atomic(out_path + ".log", log.str());

  return qlab::suite_all_pass(results) ? kExitPass : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: epistemic ensembles, dynamical-map audits, and "
               "sealed-lab scenarios"};
  app.require_subcommand(1);

  // ic build
  CLI::App* ic = app.add_subcommand("ic", "informationally complete POVMs");
  ic->require_subcommand(1);
  CLI::App* ic_build =
      ic->add_subcommand("build", "construct a seeded IC POVM");
  int ic_dim = 0;
  std::uint64_t ic_seed = 0;
  std::string ic_out;
  ic_build->add_option("--dim", ic_dim, "system dimension")->required();
  ic_build->add_option("--seed", ic_seed, "construction seed")->required();
  ic_build->add_option("--out", ic_out, "output path (default stdout)");

  // map audit
  CLI::App* map_cmd = app.add_subcommand("map", "dynamical map tools");
  map_cmd->require_subcommand(1);
  CLI::App* map_audit =
      map_cmd->add_subcommand("audit", "convex-linearity audit");
  std::string audit_map_path, audit_out;
  int audit_trials = 50;
  std::uint64_t audit_seed = 0;
  double audit_tol = 1e-8;
  map_audit->add_option("--map", audit_map_path, "map descriptor JSON file")
      ->required();
  map_audit->add_option("--trials", audit_trials, "number of sampled ensembles");
  map_audit->add_option("--seed", audit_seed, "sampling seed")->required();
  map_audit->add_option("--tol", audit_tol, "gap tolerance");
  map_audit->add_option("--out", audit_out, "output path (default stdout)");

  // gpt check
  CLI::App* gpt_cmd = app.add_subcommand("gpt", "probability-vector layer");
  gpt_cmd->require_subcommand(1);
  CLI::App* gpt_check = gpt_cmd->add_subcommand(
      "check", "convex-linearity at the probability level");
  std::string gpt_map_path, gpt_out;
  int gpt_dim = 0, gpt_trials = 50;
  std::uint64_t gpt_seed = 0;
  double gpt_tol = 1e-8;
  gpt_check->add_option("--map", gpt_map_path, "map descriptor JSON file")
      ->required();
  gpt_check->add_option("--dim", gpt_dim, "system dimension")->required();
  gpt_check->add_option("--trials", gpt_trials, "number of sampled mixtures");
  gpt_check->add_option("--seed", gpt_seed, "sampling seed")->required();
  gpt_check->add_option("--tol", gpt_tol, "gap tolerance");
  gpt_check->add_option("--out", gpt_out, "output path (default stdout)");

  // scenario run
  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "sealed-laboratory scenarios");
  scenario_cmd->require_subcommand(1);
  CLI::App* scenario_run = scenario_cmd->add_subcommand(
      "run", "run a friend protocol or a protocol sweep");
  std::string scenario_config, scenario_out, scenario_csv;
  scenario_run->add_option("--config", scenario_config, "scenario JSON config")
      ->required();
  scenario_run->add_option("--out", scenario_out, "output path (default stdout)");
  scenario_run->add_option("--csv", scenario_csv,
                           "sweep CSV path (default: <out>.csv)");

  // paper-suite
  CLI::App* suite_cmd = app.add_subcommand(
      "paper-suite", "run every bundled check and report pass/fail");
  std::uint64_t suite_seed = 1;
  std::string suite_out;
  bool negative_control = false;
  suite_cmd->add_option("--seed", suite_seed, "suite seed (default 1)");
  suite_cmd->add_option("--out", suite_out, "output path (default stdout)");
  suite_cmd->add_flag("--negative-control", negative_control,
                      "inject a broken map descriptor; the suite must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ic_build->parsed()) {
      if (ic_dim < 2) {
        std::cerr << "usage error: --dim must be >= 2\n";
        return kExitUsage;
      }
      return cmd_ic_build(ic_dim, ic_seed, ic_out);
    }
    if (map_audit->parsed()) {
      if (audit_trials < 1) {
        std::cerr << "usage error: --trials must be >= 1\n";
        return kExitUsage;
      }
      return cmd_map_audit(audit_map_path, audit_trials, audit_seed, audit_tol,
                           audit_out);
    }
    if (gpt_check->parsed()) {
      if (gpt_dim < 2 || gpt_trials < 1) {
        std::cerr << "usage error: --dim must be >= 2 and --trials >= 1\n";
        return kExitUsage;
      }
      return cmd_gpt_check(gpt_map_path, gpt_dim, gpt_trials, gpt_seed,
                           gpt_tol, gpt_out);
    }
    if (scenario_run->parsed())
      return cmd_scenario_run(scenario_config, scenario_out, scenario_csv);
    if (suite_cmd->parsed())
      return cmd_paper_suite(suite_seed, suite_out, negative_control);
  } catch (const qlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cerr << "usage error: no subcommand\n";
  return kExitUsage;
}
