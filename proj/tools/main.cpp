// Copyright 2026 The sdirng Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"
#include "json.hpp"
#include "sdirng/sdirng.h"
#include "svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdirng::tools;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitNoOutput = 3;
constexpr int kExitIo = 4;

struct Failure {
  int status;
  std::string message;
};

void check(int status, const std::string& what) {
  if (status != SDIRNG_OK)
    throw Failure{status, what + ": " + sdirng_status_string(status) + ": " + sdirng_last_error()};
}

int exit_code_for(int status) { return status == SDIRNG_ERR_IO ? kExitIo : kExitUsage; }

struct IoError {
  std::string message;
};

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError{"cannot open " + p.string() + " for writing"};
  f << text;
  f.close();
  if (!f) throw IoError{"write failed for " + p.string()};
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError{"cannot open " + p.string()};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path sibling(const fs::path& csv, const std::string& suffix) {
  fs::path p = csv;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

struct Manifest {
  std::string command;
  json config = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
};

void write_manifest(const fs::path& path, const Manifest& m, std::chrono::steady_clock::time_point start,
                    const std::string& replay_config) {
  json j;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["version"] = sdirng_version();
  j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> outs = m.outputs;
  outs.push_back(path.string());
  j["outputs"] = outs;
  j["replay_config"] = replay_config;
  write_file(path, j.dump(2) + "\n");
}

int parse_extractor(const std::string& s) {
  if (s == "single" || s == "xor" || s == "single-bit") return SDIRNG_SINGLE_BIT;
  if (s == "multi" || s == "mul" || s == "multi-bit") return SDIRNG_MULTI_BIT;
  throw Failure{SDIRNG_ERR_INVALID_ARGUMENT, "unknown extractor '" + s + "'"};
}

json certificate_json(const sdirng_certificate& c) {
  std::size_t need = 0;
  check(sdirng_certificate_to_json(&c, nullptr, 0, &need), "certificate");
  std::string buf(need, '\0');
  check(sdirng_certificate_to_json(&c, buf.data(), buf.size(), &need), "certificate");
  buf.resize(need - 1);
  return json::parse(buf);
}

sdirng_behavior noisy_family(double delta, double gamma) {
  sdirng_behavior b, out;
  check(sdirng_family_behavior(delta, &b), "behavior");
  check(sdirng_apply_uniform_noise(&b, gamma, &out), "noise");
  return out;
}

// CSV, SVG from the written CSV, certificates, manifest
void emit_table(const fs::path& csv_path, const CsvTable& t, const std::vector<std::string>& certs,
                Manifest& m) {
  const std::string text = write_csv(t);
  write_file(csv_path, text);
  m.outputs.push_back(csv_path.string());
  const fs::path svg_path = sibling(csv_path, ".svg");
  write_file(svg_path, render_svg(plot_from_csv(parse_csv(read_file(csv_path)))));
  m.outputs.push_back(svg_path.string());
  std::string jsonl;
  for (const auto& c : certs) jsonl += c + "\n";
  const fs::path cert_path = sibling(csv_path, ".certificates.jsonl");
  write_file(cert_path, jsonl);
  m.outputs.push_back(cert_path.string());
}

struct Globals {
  unsigned workers = 0;
};

unsigned resolve_workers(unsigned w) {
  if (w > 0) return w;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// pguess

struct PguessOpts {
  std::vector<double> grid;
  unsigned points = 41;
  double gamma = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_pguess(const PguessOpts& o, unsigned workers, Manifest& m) {
  std::vector<double> grid = o.grid;
  if (grid.empty()) {
    if (o.points < 2) throw Failure{SDIRNG_ERR_INVALID_ARGUMENT, "--grid-points must be at least 2"};
    for (unsigned i = 0; i < o.points; ++i) grid.push_back(static_cast<double>(i) / (o.points - 1));
  }
  sdirng_sweep_spec spec;
  sdirng_sweep_spec_default(&spec);
  spec.kind = SDIRNG_SWEEP_PGUESS;
  spec.deltas = grid.data();
  spec.n_deltas = grid.size();
  spec.gammas = &o.gamma;
  spec.n_gammas = 1;
  spec.seed = o.seed;
  spec.workers = workers;
  sdirng_table* table = nullptr;
  check(sdirng_sweep(&spec, &table), "pguess sweep");
  CsvTable t;
  t.header = {"kind", "delta", "primal_lower", "dual_upper", "gap", "primal_residual", "certificate_id", "seed"};
  std::vector<std::string> certs;
  for (std::size_t i = 0; i < sdirng_table_rows(table); ++i) {
    sdirng_row r;
    check(sdirng_table_row(table, i, &r), "row");
    t.rows.push_back({r.kind, format_number(r.delta), format_number(r.primal), format_number(r.dual),
                      format_number(r.dual - r.primal), format_number(r.primal_residual), r.certificate_id,
                      format_count(r.seed)});
    certs.push_back(json{{"certificate_id", r.certificate_id}, {"data", json::parse(r.certificate_json)}}.dump());
  }
  sdirng_table_free(table);
  m.config = {{"delta_grid", grid}, {"gamma", o.gamma}, {"seed", o.seed}, {"out", o.out}};
  m.seed = o.seed;
  emit_table(o.out, t, certs, m);
  std::cout << "wrote " << t.rows.size() << " rows to " << o.out << "\n";
  return kExitOk;
}

// rates

struct RatesOpts {
  std::vector<double> deltas{0.5};
  std::vector<std::uint64_t> ns{7000};
  std::vector<double> gammas;
  double epsilon = 1e-6;
  std::string pe = "auto";
  std::size_t samples = 0;
  std::string extractor = "multi";
  std::string kind = "auto";
  bool tune_pe = false;
  bool no_asymptotic = false;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_rates(const RatesOpts& o, unsigned workers, Manifest& m) {
  sdirng_sweep_spec spec;
  sdirng_sweep_spec_default(&spec);
  if (o.kind == "auto")
    spec.kind = o.gammas.empty() ? SDIRNG_SWEEP_RATE_BY_DELTA : SDIRNG_SWEEP_RATE_BY_GAMMA;
  else if (o.kind == "rate-vs-n-by-delta")
    spec.kind = SDIRNG_SWEEP_RATE_BY_DELTA;
  else if (o.kind == "rate-vs-n-by-gamma")
    spec.kind = SDIRNG_SWEEP_RATE_BY_GAMMA;
  else
    throw Failure{SDIRNG_ERR_INVALID_ARGUMENT, "unknown --kind '" + o.kind + "'"};
  const std::vector<double> gammas = o.gammas.empty() ? std::vector<double>{0.0} : o.gammas;
  std::size_t samples = o.samples;
  if (samples == 0) {
    std::uint64_t nmax = 0;
    for (auto n : o.ns) nmax = std::max(nmax, n);
    samples = nmax <= 100000 ? 100 : 10;
  }
  spec.deltas = o.deltas.data();
  spec.n_deltas = o.deltas.size();
  spec.gammas = gammas.data();
  spec.n_gammas = gammas.size();
  spec.ns = o.ns.data();
  spec.n_ns = o.ns.size();
  if (o.pe != "auto") {
    std::size_t used = 0;
    try {
      spec.p_e = std::stod(o.pe, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != o.pe.size()) throw Failure{SDIRNG_ERR_INVALID_ARGUMENT, "--pe must be 'auto' or a number"};
  }
  spec.tune_finite_pe = o.tune_pe ? 1 : 0;
  spec.epsilon = o.epsilon;
  spec.extractor = parse_extractor(o.extractor);
  spec.samples = samples;
  spec.seed = o.seed;
  spec.workers = workers;
  spec.include_asymptotic = o.no_asymptotic ? 0 : 1;
  sdirng_table* table = nullptr;
  check(sdirng_sweep(&spec, &table), "rates sweep");
  CsvTable t;
  t.header = {"kind",       "delta",     "gamma",          "n",   "p_e", "epsilon", "samples", "mean_rate",
              "std_error",  "certificate_id", "seed"};
  std::vector<std::string> certs;
  for (std::size_t i = 0; i < sdirng_table_rows(table); ++i) {
    sdirng_row r;
    check(sdirng_table_row(table, i, &r), "row");
    t.rows.push_back({r.kind, format_number(r.delta), format_number(r.gamma), format_count(r.n),
                      format_number(r.p_e), format_number(r.epsilon), format_count(r.samples),
                      format_number(r.mean_rate), format_number(r.std_error), r.certificate_id,
                      format_count(r.seed)});
    certs.push_back(json{{"certificate_id", r.certificate_id}, {"data", json::parse(r.certificate_json)}}.dump());
  }
  sdirng_table_free(table);
  m.config = {{"delta", o.deltas},     {"n_grid", o.ns},           {"gamma", gammas},
              {"epsilon", o.epsilon},  {"pe", o.pe},               {"samples", samples},
              {"extractor", o.extractor}, {"kind", spec.kind == SDIRNG_SWEEP_RATE_BY_GAMMA ? "rate-vs-n-by-gamma" : "rate-vs-n-by-delta"},
              {"tune_pe", o.tune_pe},  {"asymptotic", !o.no_asymptotic}, {"seed", o.seed}, {"out", o.out}};
  m.seed = o.seed;
  emit_table(o.out, t, certs, m);
  std::cout << "wrote " << t.rows.size() << " rows to " << o.out << "\n";
  return kExitOk;
}

// extractor

struct BuildOpts {
  unsigned nr = 8, m = 2;
  std::uint64_t seed = 1;
  std::uint64_t max_attempts = 1000;
  std::string kind = "random";
  std::uint32_t value = 0;
  std::string out;
};

json check_report(const sdirng_property_check& pc) {
  return {{"holds", pc.holds != 0}, {"k", pc.k}, {"r", pc.r}, {"value", pc.value}, {"bound", pc.bound}};
}

int cmd_extractor_build(const BuildOpts& o, unsigned workers, Manifest& m) {
  sdirng_extractor* g = nullptr;
  std::uint64_t attempts = 0;
  json report = {{"kind", o.kind}, {"n_r", o.nr}, {"m", o.m}};
  if (o.kind == "random") {
    const int rc = sdirng_extractor_build(o.nr, o.m, o.max_attempts, o.seed, workers, &g, &attempts);
    if (rc == SDIRNG_ERR_EXHAUSTED) {
      std::cerr << "no table passed within " << o.max_attempts << " attempts\n";
      return kExitNoOutput;
    }
    check(rc, "extractor build");
    report["attempts"] = attempts;
  } else if (o.kind == "constant") {
    check(sdirng_extractor_constant(o.nr, o.m, o.value, &g), "extractor constant");
  } else if (o.kind == "parity") {
    check(sdirng_extractor_parity(o.nr, &g), "extractor parity");
  } else {
    throw Failure{SDIRNG_ERR_INVALID_ARGUMENT, "unknown --kind '" + o.kind + "'"};
  }
  sdirng_property_check pc;
  const int rc = sdirng_extractor_check(g, workers, &pc);
  if (rc == SDIRNG_OK) {
    report["check"] = check_report(pc);
    const int rs = sdirng_extractor_save(g, o.out.c_str());
    sdirng_extractor_free(g);
    check(rs, "extractor save");
  } else {
    sdirng_extractor_free(g);
    check(rc, "extractor check");
  }
  report["file"] = o.out;
  std::cout << report.dump() << "\n";
  m.config = {{"nr", o.nr}, {"m", o.m}, {"seed", o.seed}, {"max_attempts", o.max_attempts},
              {"kind", o.kind}, {"value", o.value}, {"out", o.out}};
  m.seed = o.seed;
  m.outputs.push_back(o.out);
  return kExitOk;
}

int cmd_extractor_check(const std::string& file, unsigned workers) {
  sdirng_extractor* g = nullptr;
  check(sdirng_extractor_load(file.c_str(), &g), "extractor load");
  unsigned nr = 0, mm = 0;
  int verified = 0;
  std::uint64_t seed = 0;
  sdirng_extractor_info(g, &nr, &mm, &verified, &seed);
  sdirng_property_check pc;
  const int rc = sdirng_extractor_check(g, workers, &pc);
  sdirng_extractor_free(g);
  check(rc, "extractor check");
  json report = check_report(pc);
  report["n_r"] = nr;
  report["m"] = mm;
  report["stored_verified"] = verified != 0;
  report["seed"] = seed;
  std::cout << report.dump() << "\n";
  if (!pc.holds) {
    std::cerr << "property violated at k=" << pc.k << " r=" << pc.r << ": " << pc.value << " > " << pc.bound
              << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// validate

struct ValidateOpts {
  std::string suite;
  std::size_t instances = 100;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_validate(const ValidateOpts& o, Manifest& m) {
  sdirng_validation_summary s;
  std::size_t need = 0;
  check(sdirng_validate(o.suite.c_str(), o.instances, o.seed, &s, nullptr, 0, &need), "validate");
  std::string offending;
  if (need > 1) {
    // rerun is deterministic; fetch the replay record
    std::string buf(need, '\0');
    check(sdirng_validate(o.suite.c_str(), o.instances, o.seed, &s, buf.data(), buf.size(), &need), "validate");
    buf.resize(need - 1);
    offending = buf;
  }
  json report = {{"suite", o.suite},         {"instances", s.instances}, {"worst", s.worst},
                 {"threshold", s.threshold}, {"upper_limit", s.upper_limit != 0}, {"passed", s.passed != 0},
                 {"seed", o.seed}};
  if (!offending.empty()) report["offending"] = json::parse(offending);
  std::cout << report.dump() << "\n";
  m.config = {{"suite", o.suite}, {"instances", o.instances}, {"seed", o.seed}};
  m.seed = o.seed;
  if (!o.out.empty()) {
    write_file(o.out, report.dump(2) + "\n");
    m.outputs.push_back(o.out);
  }
  if (!s.passed) {
    std::cerr << "violation: worst " << s.worst << (s.upper_limit ? " > " : " < ") << s.threshold << "\n";
    if (!offending.empty()) std::cerr << offending << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

// protocol

struct ProtocolOpts {
  double delta = 0.5, gamma = 0;
  std::uint64_t n = 1000;
  double pe = 0.5, epsilon = 1e-6;
  std::string extractor = "multi";
  std::uint64_t seed = 1;
  std::string table_file, transcript, out;
  std::uint64_t max_attempts = 1000;
  bool uncapped = false;
};

// largest n_r for which an extractor is built on demand
constexpr unsigned kOnDemandMaxInput = 16;

int cmd_protocol(const ProtocolOpts& o, unsigned workers, Manifest& m) {
  sdirng_protocol_config cfg;
  sdirng_protocol_config_default(&cfg);
  cfg.n = o.n;
  cfg.p_e = o.pe;
  cfg.epsilon = o.epsilon;
  cfg.extractor = parse_extractor(o.extractor);
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  cfg.cap_constructible = o.uncapped ? 0 : 1;
  const sdirng_behavior b = noisy_family(o.delta, o.gamma);
  sdirng_extractor* g = nullptr;
  if (!o.table_file.empty()) check(sdirng_extractor_load(o.table_file.c_str(), &g), "extractor load");
  const char* tpath = o.transcript.empty() ? nullptr : o.transcript.c_str();
  sdirng_protocol_result r;
  int rc = sdirng_run_protocol(&cfg, &b, g, tpath, &r);
  std::string note;
  if (rc == SDIRNG_OK && g == nullptr && cfg.extractor == SDIRNG_MULTI_BIT && r.m_out > 0) {
    if (r.n_r <= kOnDemandMaxInput) {
      std::uint64_t attempts = 0;
      const int rb = sdirng_extractor_build(static_cast<unsigned>(r.n_r), static_cast<unsigned>(r.m_out),
                                            o.max_attempts, o.seed, workers, &g, &attempts);
      if (rb == SDIRNG_OK)
        rc = sdirng_run_protocol(&cfg, &b, g, tpath, &r);
      else
        note = std::string("extractor construction failed: ") + sdirng_last_error();
    } else {
      note = "no extractor for n_r=" + std::to_string(r.n_r) + "; pass --table-file";
    }
  }
  sdirng_extractor_free(g);
  check(rc, "protocol");
  json j = {{"n", o.n},
            {"n_e", r.n_e},
            {"n_r", r.n_r},
            {"counts", {{"c00", r.counts[0][0]}, {"c01", r.counts[0][1]}, {"c10", r.counts[1][0]}, {"c11", r.counts[1][1]}}},
            {"objective", r.objective},
            {"m_out", r.m_out},
            {"feasible", r.feasible != 0},
            {"residual", r.residual},
            {"beta", r.beta},
            {"alpha", {{r.alpha[0][0], r.alpha[0][1]}, {r.alpha[1][0], r.alpha[1][1]}}},
            {"certificate", certificate_json(r.certificate)}};
  if (r.has_output) j["output"] = r.output;
  if (!note.empty()) j["note"] = note;
  std::cout << j.dump() << "\n";
  m.config = {{"delta", o.delta}, {"gamma", o.gamma},   {"n", o.n},         {"pe", o.pe},
              {"epsilon", o.epsilon}, {"extractor", o.extractor}, {"seed", o.seed},
              {"table_file", o.table_file}, {"transcript", o.transcript}, {"max_attempts", o.max_attempts},
              {"uncapped", o.uncapped}};
  m.seed = o.seed;
  if (tpath) m.outputs.push_back(o.transcript);
  if (!o.out.empty()) {
    write_file(o.out, j.dump(2) + "\n");
    m.outputs.push_back(o.out);
  }
  return r.has_output ? kExitOk : kExitNoOutput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdirng: semi-device-independent randomness certification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (TOML or INI, keys as flags)");
  app.set_version_flag("--version", std::string(sdirng_version()));
  Globals gl;
  app.add_option("--workers", gl.workers, "worker threads (0 = all cores)")->envname("SDIRNG_WORKERS");
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "run manifest path (default next to the primary output)");

  PguessOpts pg;
  auto* pguess = app.add_subcommand("pguess", "guessing-probability bounds over a delta grid");
  pguess->add_option("--delta-grid", pg.grid, "delta values (default: evenly spaced)")
      ->check(CLI::Range(0.0, 1.0));
  pguess->add_option("--grid-points", pg.points, "points in the default grid")->capture_default_str();
  pguess->add_option("--gamma", pg.gamma, "uniform noise")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pguess->add_option("--seed", pg.seed)->capture_default_str();
  pguess->add_option("--out", pg.out, "CSV path")->required();

  RatesOpts ro;
  auto* rates = app.add_subcommand("rates", "finite and asymptotic rate sweeps");
  rates->add_option("--delta", ro.deltas)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  rates->add_option("--n-grid", ro.ns)->capture_default_str();
  rates->add_option("--gamma", ro.gammas, "noise levels (selects the noise sweep)")->check(CLI::Range(0.0, 1.0));
  rates->add_option("--epsilon", ro.epsilon)->capture_default_str();
  rates->add_option("--pe", ro.pe, "auto or a value in (0,1)")->capture_default_str();
  rates->add_option("--samples", ro.samples, "samples per point (0: 100 up to n=1e5, else 10)")
      ->capture_default_str();
  rates->add_option("--extractor", ro.extractor, "multi or single")->capture_default_str();
  rates->add_option("--kind", ro.kind, "auto, rate-vs-n-by-delta, rate-vs-n-by-gamma")->capture_default_str();
  rates->add_flag("--tune-pe", ro.tune_pe, "choose p_e per n from expected counts");
  rates->add_flag("--no-asymptotic", ro.no_asymptotic, "omit asymptotic rows");
  rates->add_option("--seed", ro.seed)->capture_default_str();
  rates->add_option("--out", ro.out, "CSV path")->required();

  auto* extractor = app.add_subcommand("extractor", "build or check extractor tables");
  extractor->require_subcommand(1);
  BuildOpts bo;
  auto* build = extractor->add_subcommand("build", "construct and verify a table");
  build->add_option("--nr", bo.nr)->capture_default_str();
  build->add_option("--m", bo.m)->capture_default_str();
  build->add_option("--seed", bo.seed)->capture_default_str();
  build->add_option("--max-attempts", bo.max_attempts)->capture_default_str();
  build->add_option("--kind", bo.kind, "random, constant, parity")->capture_default_str();
  build->add_option("--value", bo.value, "output of the constant table")->capture_default_str();
  build->add_option("--out,--table-file", bo.out, "table file")->required();
  std::string check_file;
  auto* chk = extractor->add_subcommand("check", "verify a table file");
  chk->add_option("--table-file", check_file)->required();

  ValidateOpts vo;
  auto* validate = app.add_subcommand("validate", "randomized theorem-validation suites");
  validate->add_option("--suite", vo.suite)
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3", "thm4", "identities"}));
  validate->add_option("--instances", vo.instances)->capture_default_str();
  validate->add_option("--seed", vo.seed)->capture_default_str();
  validate->add_option("--out", vo.out, "report JSON path");

  ProtocolOpts po;
  auto* protocol = app.add_subcommand("protocol", "simulate one protocol run");
  protocol->add_option("--delta", po.delta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  protocol->add_option("--gamma", po.gamma)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  protocol->add_option("--n", po.n)->capture_default_str();
  protocol->add_option("--pe", po.pe)->capture_default_str();
  protocol->add_option("--epsilon", po.epsilon)->capture_default_str();
  protocol->add_option("--extractor", po.extractor, "multi or single")->capture_default_str();
  protocol->add_option("--seed", po.seed)->capture_default_str();
  protocol->add_option("--table-file", po.table_file, "extractor for multi-bit output");
  protocol->add_option("--max-attempts", po.max_attempts, "on-demand extractor attempts")->capture_default_str();
  protocol->add_flag("--uncapped", po.uncapped, "allow m_out = n_r");
  protocol->add_option("--transcript", po.transcript, "transcript file");
  protocol->add_option("--out", po.out, "result JSON path");

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "render an SVG from a CSV table");
  plot->add_option("--csv", plot_in)->required();
  plot->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  const unsigned workers = resolve_workers(gl.workers);
  Manifest m;
  fs::path primary;
  int rc = kExitOk;
  try {
    if (*pguess) {
      m.command = "pguess";
      primary = pg.out;
      rc = cmd_pguess(pg, workers, m);
    } else if (*rates) {
      m.command = "rates";
      primary = ro.out;
      rc = cmd_rates(ro, workers, m);
    } else if (*build) {
      m.command = "extractor build";
      primary = bo.out;
      rc = cmd_extractor_build(bo, workers, m);
    } else if (*chk) {
      return cmd_extractor_check(check_file, workers);
    } else if (*validate) {
      m.command = "validate";
      primary = vo.out;
      rc = cmd_validate(vo, m);
    } else if (*protocol) {
      m.command = "protocol";
      primary = !po.out.empty() ? fs::path(po.out) : fs::path(po.transcript);
      rc = cmd_protocol(po, workers, m);
    } else if (*plot) {
      write_file(plot_out, render_svg(plot_from_csv(parse_csv(read_file(plot_in)))));
      return kExitOk;
    }
    m.config["workers"] = workers;
    fs::path mpath = manifest_path;
    if (mpath.empty() && !primary.empty()) mpath = sibling(primary, ".manifest.json");
    if (!mpath.empty()) write_manifest(mpath, m, start, app.config_to_str(false, false));
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code_for(f.status);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}
