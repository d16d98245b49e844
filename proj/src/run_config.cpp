#include "truncmc/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "truncmc/mcmc.hpp"

namespace truncmc {
namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  // list values are separated by spaces or semicolons (observable names can
  // contain commas)
  std::vector<std::string> out;
  std::string cur;
  for (char ch : value) {
    if (ch == ' ' || ch == '\t' || ch == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      out.push_back(std::stod(cur));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + cur + "' for key " + key);
    }
    cur.clear();
  };
  for (char ch : value) {
    if (ch == ',' || ch == ' ' || ch == '\t')
      flush();
    else
      cur += ch;
  }
  flush();
  if (out.empty()) throw std::invalid_argument("empty value for key " + key);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + value + "' for key " + key);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + value + "' for key " + key);
  }
}

const std::set<std::string> kKnownKeys = {
    "physics.potential", "physics.coupling", "physics.m_squared",
    "physics.dims", "physics.extent",
    "digitization.lambda", "digitization.r", "digitization.a_dig",
    "digitization.r_over_a",
    "trotter.delta", "trotter.beta", "trotter.temperature",
    "trotter.max_step_ratio", "trotter.b_max", "trotter.b_max_fraction",
    "schedule.sweeps", "schedule.streams", "schedule.seed",
    "schedule.measure_every",
    "observables", "output.dir", "analyze.runs",
};

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    if (!kKnownKeys.count(key))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    kv[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

}  // namespace

ResolvedGrid resolve_grid(int lambda, double r, double a_dig, double r_over_a) {
  auto consistent = [](double a, double b) { return std::fabs(a - b) <= 1e-9 * std::fabs(b); };

  ResolvedGrid g;
  if (lambda > 0 && r > 0.0) {
    g.lambda = lambda;
    g.r = r;
    g.a_dig = 2.0 * r / (lambda - 1);
  } else if (lambda > 0 && a_dig > 0.0) {
    g.lambda = lambda;
    g.a_dig = a_dig;
    g.r = 0.5 * a_dig * (lambda - 1);
  } else if (a_dig > 0.0 && r_over_a > 0.0) {
    const double lam = 2.0 * r_over_a + 1.0;
    if (std::fabs(lam - std::llround(lam)) > 1e-9)
      throw std::invalid_argument(
          "digitization.r_over_a must make 2*r_over_a + 1 an integer point count");
    g.lambda = static_cast<int>(std::llround(lam));
    g.a_dig = a_dig;
    g.r = r_over_a * a_dig;
  } else {
    throw std::invalid_argument(
        "digitization underdetermined: give (lambda, r), (lambda, a_dig), or "
        "(a_dig, r_over_a)");
  }
  if (g.lambda < 2) throw std::invalid_argument("digitization.lambda must be >= 2");

  // cross checks when the input was over-determined
  if (a_dig > 0.0 && !consistent(g.a_dig, a_dig))
    throw std::invalid_argument("digitization.a_dig inconsistent with lambda and r");
  if (r > 0.0 && !consistent(g.r, r))
    throw std::invalid_argument("digitization.r inconsistent with the other grid keys");
  if (r_over_a > 0.0 && !consistent(g.r, r_over_a * g.a_dig))
    throw std::invalid_argument("digitization.r_over_a inconsistent with the other grid keys");
  if (lambda > 0 && lambda != g.lambda)
    throw std::invalid_argument("digitization.lambda inconsistent with the other grid keys");
  return g;
}

ResolvedTrotter resolve_trotter(double beta, double delta, double max_step_ratio,
                                long long b_max, double b_max_fraction,
                                double a_dig) {
  if (!(beta > 0.0)) throw std::invalid_argument("trotter: beta must be positive");
  ResolvedTrotter t;
  t.beta = beta;
  if (delta > 0.0) {
    const long long k = std::llround(beta / delta);
    if (k < 1 || std::fabs(k * delta - beta) > 1e-9 * beta)
      throw std::invalid_argument(
          "trotter.delta must divide beta (|k*delta - beta| <= 1e-9*beta)");
    t.delta = delta;
    t.k = static_cast<int>(k);
  } else if (max_step_ratio > 0.0) {
    const long long k = static_cast<long long>(
        std::ceil(beta / (2.0 * a_dig * a_dig * max_step_ratio) - 1e-12));
    t.k = static_cast<int>(std::max(1LL, k));
    t.delta = beta / t.k;
  } else {
    throw std::invalid_argument("give trotter.delta or trotter.max_step_ratio");
  }
  if (b_max > 0) {
    if (b_max > t.k)
      throw std::invalid_argument("trotter.b_max must be <= k = " + std::to_string(t.k));
    t.b_max = static_cast<int>(b_max);
  } else {
    if (!(b_max_fraction > 0.0) || b_max_fraction > 1.0)
      throw std::invalid_argument("trotter.b_max_fraction must be in (0, 1]");
    t.b_max = static_cast<int>(std::llround(b_max_fraction * t.k));
    if (t.b_max < 1) t.b_max = 1;
    if (t.b_max > t.k) t.b_max = t.k;
  }
  return t;
}

const char* mode_name(RunConfig::Mode mode) {
  switch (mode) {
    case RunConfig::Mode::exact_diag: return "exact-diag";
    case RunConfig::Mode::mc_single: return "mc-single";
    case RunConfig::Mode::mc_lattice: return "mc-lattice";
    case RunConfig::Mode::analyze: return "analyze";
  }
  return "?";
}

RunConfig parse_config(RunConfig::Mode mode, const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> kv;
  if (!config_path.empty()) kv = read_key_values(config_path);
  for (const auto& [key, value] : overrides) {
    if (!kKnownKeys.count(key))
      throw std::invalid_argument("unknown key '" + key + "'");
    kv[key] = value;
  }

  RunConfig cfg;
  cfg.mode = mode;

  auto take = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = take("physics.potential")) {
    if (*v != "quartic" && *v != "lattice")
      throw std::invalid_argument("physics.potential must be 'quartic' or 'lattice'");
    cfg.potential_kind = *v;
  } else {
    cfg.potential_kind = (mode == RunConfig::Mode::mc_lattice) ? "lattice" : "quartic";
  }
  if (mode == RunConfig::Mode::mc_lattice && cfg.potential_kind != "lattice")
    throw std::invalid_argument("mc-lattice needs physics.potential = lattice");
  if ((mode == RunConfig::Mode::mc_single || mode == RunConfig::Mode::exact_diag) &&
      cfg.potential_kind != "quartic")
    throw std::invalid_argument(std::string(mode_name(mode)) +
                                " needs physics.potential = quartic");

  if (const auto* v = take("physics.coupling")) cfg.coupling = parse_double("physics.coupling", *v);
  if (cfg.potential_kind == "lattice") cfg.coupling = 0.0;

  if (const auto* v = take("physics.m_squared"))
    cfg.m_squared = parse_double_list("physics.m_squared", *v);
  else
    cfg.m_squared = {1.0};
  if (cfg.m_squared.size() > 1 && mode != RunConfig::Mode::exact_diag)
    throw std::invalid_argument("physics.m_squared sweeps are exact-diag only");

  if (const auto* v = take("physics.dims"))
    cfg.dims = static_cast<int>(parse_int("physics.dims", *v));
  if (const auto* v = take("physics.extent"))
    cfg.extent = static_cast<int>(parse_int("physics.extent", *v));
  if (cfg.dims < 1 || cfg.extent < 1)
    throw std::invalid_argument("physics.dims and physics.extent must be positive");

  if (const auto* v = take("digitization.lambda"))
    cfg.lambda = static_cast<int>(parse_int("digitization.lambda", *v));
  if (const auto* v = take("digitization.r")) cfg.r = parse_double("digitization.r", *v);
  if (const auto* v = take("digitization.a_dig"))
    cfg.a_dig = parse_double_list("digitization.a_dig", *v);
  if (const auto* v = take("digitization.r_over_a"))
    cfg.r_over_a = parse_double("digitization.r_over_a", *v);
  if (cfg.a_dig.size() > 1 && mode != RunConfig::Mode::exact_diag)
    throw std::invalid_argument("digitization.a_dig sweeps are exact-diag only");

  const auto* beta_v = take("trotter.beta");
  const auto* temp_v = take("trotter.temperature");
  if (beta_v && temp_v)
    throw std::invalid_argument("give exactly one of trotter.beta and trotter.temperature");
  if (beta_v) cfg.beta = parse_double("trotter.beta", *beta_v);
  if (temp_v) {
    const double T = parse_double("trotter.temperature", *temp_v);
    if (!(T > 0.0)) throw std::invalid_argument("trotter.temperature must be positive");
    cfg.beta = 1.0 / T;
  }
  if (const auto* v = take("trotter.delta")) cfg.delta = parse_double("trotter.delta", *v);
  if (const auto* v = take("trotter.max_step_ratio"))
    cfg.max_step_ratio = parse_double("trotter.max_step_ratio", *v);
  if (const auto* v = take("trotter.b_max")) cfg.b_max = parse_int("trotter.b_max", *v);
  if (const auto* v = take("trotter.b_max_fraction"))
    cfg.b_max_fraction = parse_double("trotter.b_max_fraction", *v);

  if (const auto* v = take("schedule.sweeps")) cfg.sweeps = parse_int("schedule.sweeps", *v);
  if (const auto* v = take("schedule.streams"))
    cfg.streams = static_cast<int>(parse_int("schedule.streams", *v));
  if (const auto* v = take("schedule.seed"))
    cfg.seed = static_cast<std::uint64_t>(parse_int("schedule.seed", *v));
  if (const auto* v = take("schedule.measure_every"))
    cfg.measure_every = static_cast<int>(parse_int("schedule.measure_every", *v));
  if (cfg.sweeps < 0) throw std::invalid_argument("schedule.sweeps must be >= 0");
  if (cfg.streams < 1) throw std::invalid_argument("schedule.streams must be >= 1");
  if (cfg.measure_every < 1)
    throw std::invalid_argument("schedule.measure_every must be >= 1");

  if (const auto* v = take("observables")) cfg.observables = split_list(*v);
  if (const auto* v = take("output.dir")) cfg.out_dir = *v;
  if (cfg.out_dir.empty()) {
    if (const char* root = std::getenv("TRUNCMC_OUT"))
      cfg.out_dir = std::string(root) + "/" + mode_name(mode);
    else
      cfg.out_dir = std::string("runs/") + mode_name(mode);
  }
  if (const auto* v = take("analyze.runs")) cfg.analyze_runs = split_list(*v);

  // mode-specific completeness and early validation of physics constraints
  const bool needs_grid = mode != RunConfig::Mode::analyze;
  if (needs_grid) {
    if (cfg.beta <= 0.0)
      throw std::invalid_argument("give trotter.beta or trotter.temperature");
    if (cfg.a_dig.empty()) cfg.a_dig = {0.0};
    for (double a : cfg.a_dig) {
      const ResolvedGrid g = resolve_grid(cfg.lambda, cfg.r, a, cfg.r_over_a);
      if (mode != RunConfig::Mode::exact_diag) {
        // validates the Trotter step and the positivity constraint now
        const PotentialModel model =
            cfg.potential_kind == "quartic"
                ? PotentialModel::quartic(cfg.coupling, cfg.m_squared[0])
                : PotentialModel::lattice_scalar(cfg.m_squared[0], cfg.dims, cfg.extent);
        const ResolvedTrotter t =
            resolve_trotter(cfg.beta, cfg.delta, cfg.max_step_ratio, cfg.b_max,
                            cfg.b_max_fraction, g.a_dig);
        (void)TrotterParams::from_step_count(t.delta, t.k, t.b_max,
                                             DigitizationGrid::make(g.lambda, g.r), model);
      }
    }
  } else if (cfg.analyze_runs.empty()) {
    throw std::invalid_argument("analyze needs analyze.runs (or run directories as arguments)");
  }

  if (cfg.observables.empty()) {
    if (mode == RunConfig::Mode::mc_single) cfg.observables = {"V"};
    if (mode == RunConfig::Mode::mc_lattice) {
      cfg.observables = {"mode_power:0,0"};
      if (cfg.extent % 2 == 0) {
        std::string pi_mode = "mode_power:";
        for (int mu = 0; mu < cfg.dims; ++mu)
          pi_mode += (mu ? "," : "") + std::to_string(cfg.extent / 2);
        cfg.observables.push_back(pi_mode);
      }
    }
  }

  // resolved echo for the manifest
  cfg.echo.emplace_back("mode", mode_name(mode));
  cfg.echo.emplace_back("physics.potential", cfg.potential_kind);
  cfg.echo.emplace_back("physics.coupling", g17(cfg.coupling));
  {
    std::string ms;
    for (std::size_t i = 0; i < cfg.m_squared.size(); ++i)
      ms += (i ? "," : "") + g17(cfg.m_squared[i]);
    cfg.echo.emplace_back("physics.m_squared", ms);
  }
  if (cfg.potential_kind == "lattice") {
    cfg.echo.emplace_back("physics.dims", std::to_string(cfg.dims));
    cfg.echo.emplace_back("physics.extent", std::to_string(cfg.extent));
  }
  return cfg;
}

}  // namespace truncmc
