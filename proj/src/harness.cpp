// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#include "harness.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "parallel.hpp"
#include "rng.hpp"

namespace srbeam::harness {

using channel::ChannelRealization;
using channel::SystemParams;
using nlohmann::json;

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kRateRegion: return "rate_region";
    case Scenario::kSnrSweep: return "snr_sweep";
    case Scenario::kTpmEpsCSweep: return "tpm_eps_c_sweep";
    case Scenario::kTpmEpsSSweep: return "tpm_eps_s_sweep";
    case Scenario::kValidate: return "validate";
  }
  throw std::logic_error("unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "rate_region") return Scenario::kRateRegion;
  if (name == "snr_sweep") return Scenario::kSnrSweep;
  if (name == "tpm_eps_c_sweep") return Scenario::kTpmEpsCSweep;
  if (name == "tpm_eps_s_sweep") return Scenario::kTpmEpsSSweep;
  if (name == "validate") return Scenario::kValidate;
  throw std::invalid_argument("unknown scenario: " + name);
}

namespace {

std::vector<double> default_rho_grid() {
  std::vector<double> g(21);
  for (int i = 0; i < 21; ++i) g[i] = i / 20.0;
  return g;
}

std::vector<double> default_snr_grid() {
  return {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
}

std::vector<double> default_eps_grid() {
  return {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
}

void require_increasing(const std::vector<double>& g, const char* what) {
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1]))
      throw std::invalid_argument(std::string(what) +
                                  ": grid must be strictly increasing");
}

json params_to_json(const SystemParams& p) {
  return json{{"antennas", p.antennas},
              {"transmit_power", p.transmit_power},
              {"noise_power", p.noise_power},
              {"reflection", p.reflection},
              {"spreading", p.spreading},
              {"weight", p.weight}};
}

json solver_to_json(const beamform::SolverConfig& s) {
  return json{{"xi_steps", s.xi_steps},
              {"xi_refine_tol", s.xi_refine_tol},
              {"rand_trials", s.rand_trials},
              {"rank_one_tol", s.rank_one_tol},
              {"saa_samples", s.saa_samples},
              {"grid_t", s.grid_t},
              {"grid_phi", s.grid_phi},
              {"grid_refine_rounds", s.grid_refine_rounds},
              {"seed", s.seed}};
}

}  // namespace

void ExperimentConfig::validate() const {
  params.validate();
  solver.validate();
  if (realizations < 1)
    throw std::invalid_argument("config: realizations must be >= 1");
  require_increasing(rho_grid, "rho_grid");
  require_increasing(snr_db_grid, "snr_db_grid");
  require_increasing(eps_grid, "eps_grid");
  for (double r : rho_grid)
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("config: rho_grid outside [0, 1]");
  for (double e : eps_grid)
    if (!(e >= 0.0)) throw std::invalid_argument("config: eps_grid negative");
  if (!(eps_s_fixed >= 0.0) || !(eps_c_fixed >= 0.0))
    throw std::invalid_argument("config: fixed rate targets must be >= 0");
}

std::string ExperimentConfig::canonical_json() const {
  json j{{"scenario", scenario_name(scenario)},
         {"params", params_to_json(params)},
         {"delta_gamma_db", delta_gamma_db},
         {"realizations", realizations},
         {"rho_grid", rho_grid},
         {"snr_db_grid", snr_db_grid},
         {"eps_grid", eps_grid},
         {"eps_s", eps_s_fixed},
         {"eps_c", eps_c_fixed},
         {"seed", seed},
         {"full", full_scale},
         {"solver", solver_to_json(solver)}};
  if (!mutation.empty()) j["mutation"] = mutation;
  return j.dump();  // nlohmann orders keys, so the dump is canonical
}

std::uint64_t ExperimentConfig::config_hash() const {
  // FNV-1a over the canonical form.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

ExperimentConfig config_from_json_obj(const json& j) {
  ExperimentConfig cfg;
  cfg.scenario = scenario_from_name(j.at("scenario").get<std::string>());
  if (j.contains("params")) {
    const json& p = j["params"];
    if (p.contains("antennas")) cfg.params.antennas = p["antennas"].get<int>();
    if (p.contains("transmit_power"))
      cfg.params.transmit_power = p["transmit_power"].get<double>();
    if (p.contains("noise_power"))
      cfg.params.noise_power = p["noise_power"].get<double>();
    if (p.contains("reflection"))
      cfg.params.reflection = p["reflection"].get<double>();
    if (p.contains("spreading")) cfg.params.spreading = p["spreading"].get<int>();
    if (p.contains("weight")) cfg.params.weight = p["weight"].get<double>();
  }
  if (j.contains("snr_db"))
    cfg.params.transmit_power =
        cfg.params.noise_power * std::pow(10.0, j["snr_db"].get<double>() / 10.0);
  if (j.contains("delta_gamma_db"))
    cfg.delta_gamma_db = j["delta_gamma_db"].get<double>();
  if (j.contains("realizations")) cfg.realizations = j["realizations"].get<int>();
  if (j.contains("rho_grid"))
    cfg.rho_grid = j["rho_grid"].get<std::vector<double>>();
  if (j.contains("snr_db_grid"))
    cfg.snr_db_grid = j["snr_db_grid"].get<std::vector<double>>();
  if (j.contains("eps_grid"))
    cfg.eps_grid = j["eps_grid"].get<std::vector<double>>();
  if (j.contains("eps_s")) cfg.eps_s_fixed = j["eps_s"].get<double>();
  if (j.contains("eps_c")) cfg.eps_c_fixed = j["eps_c"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output")) cfg.output_path = j["output"].get<std::string>();
  if (j.contains("full")) cfg.full_scale = j["full"].get<bool>();
  if (j.contains("mutation")) cfg.mutation = j["mutation"].get<std::string>();
  if (j.contains("solver")) {
    const json& s = j["solver"];
    auto& sc = cfg.solver;
    if (s.contains("xi_steps")) sc.xi_steps = s["xi_steps"].get<int>();
    if (s.contains("xi_refine_tol"))
      sc.xi_refine_tol = s["xi_refine_tol"].get<double>();
    if (s.contains("rand_trials")) sc.rand_trials = s["rand_trials"].get<int>();
    if (s.contains("rank_one_tol"))
      sc.rank_one_tol = s["rank_one_tol"].get<double>();
    if (s.contains("saa_samples")) sc.saa_samples = s["saa_samples"].get<int>();
    if (s.contains("grid_t")) sc.grid_t = s["grid_t"].get<int>();
    if (s.contains("grid_phi")) sc.grid_phi = s["grid_phi"].get<int>();
    if (s.contains("grid_refine_rounds"))
      sc.grid_refine_rounds = s["grid_refine_rounds"].get<int>();
    if (s.contains("seed")) sc.seed = s["seed"].get<std::uint64_t>();
  }
  if (cfg.rho_grid.empty()) cfg.rho_grid = default_rho_grid();
  if (cfg.snr_db_grid.empty()) cfg.snr_db_grid = default_snr_grid();
  if (cfg.eps_grid.empty()) cfg.eps_grid = default_eps_grid();
  cfg.solver.seed = Xoshiro256pp::derive(cfg.seed, 0x501e);
  cfg.validate();
  return cfg;
}

// Minimal TOML reader covering the flat config schema: [section] tables,
// key = value with strings, booleans, numbers and single-line numeric
// arrays.  Anything fancier belongs in the JSON form.
json toml_to_json(const std::string& text) {
  json root = json::object();
  json* table = &root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&lineno](const std::string& why) {
    throw std::invalid_argument("toml:" + std::to_string(lineno) + ": " + why);
  };
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  auto parse_scalar = [&fail, &trim](const std::string& raw) -> json {
    const std::string v = trim(raw);
    if (v.empty()) fail("empty value");
    if (v.front() == '"') {
      if (v.size() < 2 || v.back() != '"') fail("unterminated string");
      return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    try {
      std::size_t used = 0;
      if (v.find_first_of(".eE") == std::string::npos) {
        const long long n = std::stoll(v, &used);
        if (used == v.size()) return n;
      }
      const double d = std::stod(v, &used);
      if (used != v.size()) fail("trailing characters after number");
      return d;
    } catch (const std::exception&) {
      fail("unparseable value: " + v);
    }
    return nullptr;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail("empty table name");
      table = &root[name];
      if (table->is_null()) *table = json::object();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') fail("arrays must close on the same line");
      json arr = json::array();
      std::string body = value.substr(1, value.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) arr.push_back(parse_scalar(item));
      }
      (*table)[key] = arr;
    } else {
      (*table)[key] = parse_scalar(value);
    }
  }
  return root;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  return config_from_json_obj(json::parse(text));
}

ExperimentConfig config_from_toml(const std::string& text) {
  return config_from_json_obj(toml_to_json(text));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  if (ext == "toml") return config_from_toml(buf.str());
  return config_from_json(buf.str());
}

std::string RunSummary::to_json() const {
  return json{{"scenario", scenario_name(scenario)},
              {"output", output_path},
              {"rows", rows},
              {"validation_passed", validation_passed}}
      .dump();
}

double power_dbm(double power_linear, double noise_power, double noise_dbm) {
  if (!(power_linear > 0.0) || !(noise_power > 0.0))
    throw std::invalid_argument("power_dbm: powers must be positive");
  return 10.0 * std::log10(power_linear / noise_power) + noise_dbm;
}

// ---------------------------------------------------------------------------
// Scenario runners
// ---------------------------------------------------------------------------
namespace {

struct Accumulator {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : std::nan(""); }
  double se() const {
    if (n < 2) return std::nan("");
    const double m = mean();
    const double var = std::max(0.0, (sumsq - m * m * n) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

std::ofstream open_output(const ExperimentConfig& cfg, const char* columns) {
  if (cfg.output_path.empty())
    throw std::invalid_argument("config: output path required");
  std::ofstream out(cfg.output_path);
  if (!out) throw std::runtime_error("cannot open output: " + cfg.output_path);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(cfg.config_hash()));
  json header{{"scenario", scenario_name(cfg.scenario)},
              {"seed", cfg.seed},
              {"config_hash", std::string(hash)},
              {"version", SRBEAM_VERSION},
              {"config", json::parse(cfg.canonical_json())}};
  out << "# " << header.dump() << "\n" << columns << "\n";
  out.precision(12);
  return out;
}

beamform::SolverConfig solver_for(const ExperimentConfig& cfg,
                                  std::size_t realization) {
  beamform::SolverConfig sc = cfg.solver;
  // Common random numbers across grid points: the stream depends on the
  // realization only, so sweeps stay smooth in the grid variable.
  sc.seed = Xoshiro256pp::derive(cfg.seed, 0x7000 + realization);
  return sc;
}

rates::RatePair rates_at(const ChannelRealization& ch, const SystemParams& p,
                         const channel::cvec& w) {
  const auto bw = channel::Beamformer::canonical(w, ch);
  rates::RatePair out;
  if (p.psr()) {
    out.setup = rates::Setup::kPsr;
    out.primary = rates::psr_primary_rate(ch, bw, p);
    out.bd = rates::psr_bd_rate(ch, bw, p);
  } else {
    out.setup = rates::Setup::kCsr;
    out.primary = rates::csr_primary_rate(ch, bw, p);
    out.bd = rates::csr_bd_rate(ch, bw, p);
  }
  return out;
}

RunSummary run_rate_region(const ExperimentConfig& cfg) {
  const int n_real = cfg.effective_realizations();
  const int n_rho = static_cast<int>(cfg.rho_grid.size());
  std::vector<rates::RatePair> cells(
      static_cast<std::size_t>(n_real) * n_rho);

  parallel_for(static_cast<std::size_t>(n_real), [&](std::size_t r) {
    const ChannelRealization ch = channel::generate(
        cfg.params, cfg.delta_gamma_db, Xoshiro256pp::derive(cfg.seed, r));
    const beamform::SolverConfig sc = solver_for(cfg, r);
    for (int i = 0; i < n_rho; ++i) {
      SystemParams p = cfg.params;
      p.weight = cfg.rho_grid[i];
      const auto rep = p.psr() ? beamform::solve_wsrm_psr(ch, p, sc)
                               : beamform::solve_wsrm_csr(ch, p, sc);
      cells[r * n_rho + i] = rates_at(ch, p, rep.w);
    }
  });

  auto out = open_output(cfg,
                         "kind,rho,primary_rate_mean,primary_rate_se,"
                         "bd_rate_mean,bd_rate_se");
  int rows = 0;
  std::vector<std::pair<double, double>> endpoints(2);
  for (int i = 0; i < n_rho; ++i) {
    Accumulator as, ac;
    for (int r = 0; r < n_real; ++r) {
      as.add(cells[static_cast<std::size_t>(r) * n_rho + i].primary);
      ac.add(cells[static_cast<std::size_t>(r) * n_rho + i].bd);
    }
    out << "pareto," << cfg.rho_grid[i] << ',' << as.mean() << ',' << as.se()
        << ',' << ac.mean() << ',' << ac.se() << "\n";
    ++rows;
    if (i == 0) endpoints[0] = {as.mean(), ac.mean()};
    if (i == n_rho - 1) endpoints[1] = {as.mean(), ac.mean()};
  }
  // Axis extensions from the frontier endpoints.
  out << "extension," << cfg.rho_grid.back() << ',' << endpoints[1].first
      << ",0,0,0\n";
  out << "extension," << cfg.rho_grid.front() << ",0,0," << endpoints[0].second
      << ",0\n";
  rows += 2;
  return {cfg.scenario, cfg.output_path, rows, true};
}

RunSummary run_snr_sweep(const ExperimentConfig& cfg) {
  const int n_real = cfg.effective_realizations();
  const int n_snr = static_cast<int>(cfg.snr_db_grid.size());
  constexpr int kMethods = 4;  // psr, csr, csr-lc, miso-baseline
  static const char* kMethodName[kMethods] = {"psr", "csr", "csr-lc",
                                              "miso-baseline"};
  std::vector<rates::RatePair> cells(
      static_cast<std::size_t>(n_real) * n_snr * kMethods);

  parallel_for(static_cast<std::size_t>(n_real), [&](std::size_t r) {
    const ChannelRealization ch = channel::generate(
        cfg.params, cfg.delta_gamma_db, Xoshiro256pp::derive(cfg.seed, r));
    const beamform::SolverConfig sc = solver_for(cfg, r);
    for (int i = 0; i < n_snr; ++i) {
      const double snr_lin = std::pow(10.0, cfg.snr_db_grid[i] / 10.0);
      SystemParams base = cfg.params;
      base.transmit_power = base.noise_power * snr_lin;
      auto* row = &cells[(r * n_snr + i) * kMethods];

      SystemParams psr = base;
      psr.spreading = 1;
      row[0] = rates_at(ch, psr, beamform::solve_wsrm_psr(ch, psr, sc).w);

      SystemParams csr = base;
      if (csr.spreading == 1) csr.spreading = 128;
      row[1] = rates_at(ch, csr, beamform::solve_wsrm_csr(ch, csr, sc).w);
      row[2] = rates_at(ch, csr, beamform::grid_search_wsrm(ch, csr, sc).w);

      const double mrt_snr =
          base.transmit_power * ch.direct.squaredNorm() / base.noise_power;
      row[3] = {std::log2(1.0 + mrt_snr), 0.0, rates::Setup::kCsr};
    }
  });

  auto out = open_output(
      cfg,
      "snr_db,method,primary_rate_mean,primary_rate_se,bd_rate_mean,"
      "bd_rate_se,sum_rate_mean,sum_rate_se");
  int rows = 0;
  for (int i = 0; i < n_snr; ++i) {
    for (int m = 0; m < kMethods; ++m) {
      Accumulator as, ac, sum;
      for (int r = 0; r < n_real; ++r) {
        const auto& cell =
            cells[(static_cast<std::size_t>(r) * n_snr + i) * kMethods + m];
        as.add(cell.primary);
        ac.add(cell.bd);
        sum.add(cell.primary + cell.bd);
      }
      out << cfg.snr_db_grid[i] << ',' << kMethodName[m] << ',' << as.mean()
          << ',' << as.se() << ',' << ac.mean() << ',' << ac.se() << ','
          << sum.mean() << ',' << sum.se() << "\n";
      ++rows;
    }
  }
  return {cfg.scenario, cfg.output_path, rows, true};
}

RunSummary run_tpm_sweep(const ExperimentConfig& cfg) {
  const bool sweep_eps_c = cfg.scenario == Scenario::kTpmEpsCSweep;
  const int n_real = cfg.effective_realizations();
  const int n_eps = static_cast<int>(cfg.eps_grid.size());

  struct Cell {
    double power = std::nan("");
    rates::RatePair achieved;
    bool feasible = false;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(n_real) * n_eps);

  parallel_for(static_cast<std::size_t>(n_real), [&](std::size_t r) {
    const ChannelRealization ch = channel::generate(
        cfg.params, cfg.delta_gamma_db, Xoshiro256pp::derive(cfg.seed, r));
    const beamform::SolverConfig sc = solver_for(cfg, r);
    for (int i = 0; i < n_eps; ++i) {
      const double eps_s = sweep_eps_c ? cfg.eps_s_fixed : cfg.eps_grid[i];
      const double eps_c = sweep_eps_c ? cfg.eps_grid[i] : cfg.eps_c_fixed;
      Cell& cell = cells[r * n_eps + i];
      try {
        const auto rep =
            cfg.params.psr()
                ? beamform::solve_tpm_psr(ch, eps_s, eps_c, cfg.params, sc)
                : beamform::solve_tpm_csr(ch, eps_s, eps_c, cfg.params, sc);
        cell.power = rep.objective;
        cell.feasible = true;
        SystemParams achieved = cfg.params;
        achieved.transmit_power = std::max(rep.objective, 1e-300);
        cell.achieved = rates_at(ch, achieved, rep.w);
      } catch (const beamform::InfeasibleError&) {
        cell.feasible = false;  // row keeps an explicit infeasible count
      }
    }
  });

  std::string columns = sweep_eps_c ? "eps_c," : "eps_s,";
  columns +=
      "min_power_db,min_power_linear_mean,min_power_linear_se,"
      "primary_rate_mean,bd_rate_mean,infeasible_count";
  auto out = open_output(cfg, columns.c_str());
  int rows = 0;
  for (int i = 0; i < n_eps; ++i) {
    Accumulator power, rs, rc;
    int infeasible = 0;
    for (int r = 0; r < n_real; ++r) {
      const Cell& cell = cells[static_cast<std::size_t>(r) * n_eps + i];
      if (!cell.feasible) {
        ++infeasible;
        continue;
      }
      power.add(cell.power);
      rs.add(cell.achieved.primary);
      rc.add(cell.achieved.bd);
    }
    const double mean_p = power.mean();
    const double db = mean_p > 0.0 ? 10.0 * std::log10(mean_p) : std::nan("");
    out << cfg.eps_grid[i] << ',' << db << ',' << mean_p << ',' << power.se()
        << ',' << rs.mean() << ',' << rc.mean() << ',' << infeasible << "\n";
    ++rows;
  }
  return {cfg.scenario, cfg.output_path, rows, true};
}

RunSummary run_validate(const ExperimentConfig& cfg) {
  const ValidationReport report = run_validation(cfg);
  RunSummary summary{cfg.scenario, cfg.output_path,
                     static_cast<int>(report.checks.size()),
                     report.all_passed};
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot open output: " + cfg.output_path);
    out << report.to_json() << "\n";
  }
  return summary;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::kRateRegion: return run_rate_region(cfg);
    case Scenario::kSnrSweep: return run_snr_sweep(cfg);
    case Scenario::kTpmEpsCSweep:
    case Scenario::kTpmEpsSSweep: return run_tpm_sweep(cfg);
    case Scenario::kValidate: return run_validate(cfg);
  }
  throw std::logic_error("unknown scenario");
}

std::string ValidationReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back(json{{"name", c.name},
                       {"passed", c.passed},
                       {"tolerance", c.tolerance},
                       {"measured", c.measured},
                       {"details", c.details}});
  return json{{"all_passed", all_passed},
              {"version", SRBEAM_VERSION},
              {"checks", arr}}
      .dump(2);
}

}  // namespace srbeam::harness
