#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "truncmc/io.hpp"

namespace truncmc {

// Fully validated run description assembled from a config file plus command
// line overrides. Config files are flat "section.key = value" text.
struct RunConfig {
  enum class Mode { exact_diag, mc_single, mc_lattice, analyze };

  Mode mode = Mode::mc_single;

  // physics
  std::string potential_kind;  // "quartic" or "lattice"
  double coupling = 1.0;
  std::vector<double> m_squared;  // several entries only in exact-diag sweeps
  int dims = 2;
  int extent = 4;

  // digitization; several a_dig entries only in exact-diag sweeps
  std::vector<double> a_dig;
  int lambda = 0;
  double r = 0.0;
  double r_over_a = 0.0;

  // trotter
  double beta = 0.0;
  double delta = 0.0;
  double max_step_ratio = 0.0;
  long long b_max = 0;
  double b_max_fraction = 0.5;

  // schedule
  std::int64_t sweeps = 1000;
  int streams = 4;
  std::uint64_t seed = 1;
  int measure_every = 1;

  std::vector<std::string> observables;
  std::string out_dir;
  std::vector<std::string> analyze_runs;

  Manifest echo;  // resolved key/value pairs, written into the run manifest
};

struct ResolvedGrid {
  int lambda = 0;
  double r = 0.0;
  double a_dig = 0.0;
};

// Determines (lambda, r) from any sufficient, consistent subset of
// {lambda, r, a_dig, r_over_a}; zero means unset.
ResolvedGrid resolve_grid(int lambda, double r, double a_dig, double r_over_a);

struct ResolvedTrotter {
  double beta = 0.0;
  double delta = 0.0;
  int k = 0;
  int b_max = 0;
};

// Picks (delta, k) from an explicit delta (k = round(beta/delta), rejected
// when beta is not an integer multiple to 1e-9 relative) or from a target
// step ratio (the largest delta with delta/(2 a^2) <= ratio and beta/delta
// integer). b_max <= 0 falls back to round(b_max_fraction * k).
ResolvedTrotter resolve_trotter(double beta, double delta, double max_step_ratio,
                                long long b_max, double b_max_fraction,
                                double a_dig);

// Parses the config file (optional), applies overrides, validates everything
// that can be checked before the run starts, and records the resolved values
// in the echo manifest. Throws std::invalid_argument / std::runtime_error
// with the offending key in the message.
RunConfig parse_config(RunConfig::Mode mode, const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

const char* mode_name(RunConfig::Mode mode);

}  // namespace truncmc
