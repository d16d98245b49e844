#include "truncmc/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <thread>

#include "truncmc/exact_diag.hpp"
#include "truncmc/kernels.hpp"
#include "truncmc/lattice.hpp"
#include "truncmc/mcmc.hpp"
#include "truncmc/stats.hpp"

namespace truncmc {
namespace fs = std::filesystem;

namespace {

PotentialModel make_model(const RunConfig& cfg, double m_squared) {
  if (cfg.potential_kind == "quartic")
    return PotentialModel::quartic(cfg.coupling, m_squared);
  return PotentialModel::lattice_scalar(m_squared, cfg.dims, cfg.extent);
}

// Coordinate-diagonal observable values over the grid, for the exact oracle.
std::vector<double> diagonal_observable(const ObservableSpec& spec,
                                        const DigitizationGrid& grid,
                                        const PotentialModel& model) {
  std::vector<double> diag(grid.lambda);
  for (int n = 0; n < grid.lambda; ++n) {
    const double x = grid.coordinate_unchecked(n);
    switch (spec.kind) {
      case ObservableSpec::Kind::potential:
        diag[n] = model.energy(std::span<const double>(&x, 1));
        break;
      case ObservableSpec::Kind::mean_coordinate:
        diag[n] = x;
        break;
      case ObservableSpec::Kind::mean_coordinate_squared:
        diag[n] = x * x;
        break;
      case ObservableSpec::Kind::mode_power:
        throw std::invalid_argument("mode_power is not a single-boson observable");
    }
  }
  return diag;
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& ch : out)
    if (ch == ':' || ch == ',') ch = '_';
  return out;
}

int run_exact_diag(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  std::vector<std::string> names = cfg.observables;
  if (names.empty()) names = {"V"};

  std::vector<ExactDiagRow> rows;
  for (double a : cfg.a_dig) {
    const ResolvedGrid rg = resolve_grid(cfg.lambda, cfg.r, a, cfg.r_over_a);
    const DigitizationGrid grid = DigitizationGrid::make(rg.lambda, rg.r);
    for (double m2 : cfg.m_squared) {
      const PotentialModel model = make_model(cfg, m2);
      const EigenSystem es = eigensystem(build_hamiltonian(grid, model));
      for (const std::string& name : names) {
        const ObservableSpec spec = ObservableSpec::parse(name, model);
        const std::vector<double> diag = diagonal_observable(spec, grid, model);
        ExactDiagRow row;
        row.a_dig = rg.a_dig;
        row.m_squared = m2;
        row.beta = cfg.beta;
        row.observable = name;
        row.value = thermal_expectation(es, diag, cfg.beta);
        rows.push_back(row);
      }
    }
  }
  write_exact_diag_csv(dir / "exact_diag.csv", rows);

  Manifest manifest = cfg.echo;
  manifest.emplace_back("trotter.beta", g17(cfg.beta));
  manifest.emplace_back("truncmc.version", kVersion);
  write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

struct PreparedRun {
  DigitizationGrid grid;
  PotentialModel model;
  TrotterParams params;
  std::vector<ObservableSpec> specs;
};

PreparedRun prepare_mc(const RunConfig& cfg) {
  const ResolvedGrid rg =
      resolve_grid(cfg.lambda, cfg.r, cfg.a_dig.empty() ? 0.0 : cfg.a_dig[0],
                   cfg.r_over_a);
  const DigitizationGrid grid = DigitizationGrid::make(rg.lambda, rg.r);
  PotentialModel model = make_model(cfg, cfg.m_squared[0]);
  const ResolvedTrotter t = resolve_trotter(cfg.beta, cfg.delta, cfg.max_step_ratio,
                                            cfg.b_max, cfg.b_max_fraction, rg.a_dig);
  const TrotterParams params =
      TrotterParams::from_step_count(t.delta, t.k, t.b_max, grid, model);
  std::vector<ObservableSpec> specs;
  for (const std::string& name : cfg.observables)
    specs.push_back(ObservableSpec::parse(name, model));
  if (specs.empty()) throw std::invalid_argument("no observables configured");
  return {grid, std::move(model), params, std::move(specs)};
}

void aggregate_and_write(const RunConfig& cfg, const PreparedRun& prep,
                         const std::vector<std::vector<ObservableSeries>>& streams,
                         const fs::path& dir) {
  std::vector<AggregateRow> rows;
  for (std::size_t o = 0; o < prep.specs.size(); ++o) {
    std::vector<ObservableSeries> per_stream;
    for (const auto& s : streams) per_stream.push_back(s[o]);
    AggregateRow row;
    row.a_dig = prep.grid.a_dig;
    row.delta = prep.params.delta;
    row.k = prep.params.k;
    row.observable = prep.specs[o].name();
    row.n_stream = static_cast<int>(streams.size());
    row.n_step = per_stream.empty() ? 0 : static_cast<std::int64_t>(per_stream[0].values.size());
    try {
      const AggregateResult agg = block_and_aggregate(per_stream);
      row.mean = agg.mean;
      row.err = agg.std_error;
      row.d = agg.d;
      if (agg.short_streams)
        std::cerr << "warning: " << row.observable << ": stream sizes are below 2200*d (d = "
                  << agg.d << ")\n";
      rows.push_back(row);
    } catch (const std::exception& e) {
      std::cerr << "warning: no aggregate for " << row.observable << ": " << e.what()
                << "\n";
    }
  }
  write_aggregate_csv(dir / "aggregate.csv", rows);
}

int run_mc(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  const PreparedRun prep = prepare_mc(cfg);
  const Schedule schedule{cfg.sweeps, cfg.measure_every};

  std::vector<ChainResult> results(cfg.streams);
  {
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    const int par = std::min(cfg.streams, hw);
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(par);
    std::vector<std::thread> pool;
    pool.reserve(par);
    for (int t = 0; t < par; ++t) {
      pool.emplace_back([&, t] {
        try {
          int s;
          while ((s = next.fetch_add(1)) < cfg.streams) {
            results[s] = run_chain(prep.params, prep.grid, prep.model, schedule,
                                   prep.specs, stream_seed(cfg.seed, s), s);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<std::vector<ObservableSeries>> stream_series;
  for (int s = 0; s < cfg.streams; ++s) {
    write_series_csv(dir / ("stream_" + std::to_string(s) + ".csv"), results[s].series);
    stream_series.push_back(results[s].series);
  }

  aggregate_and_write(cfg, prep, stream_series, dir);

  Manifest manifest = cfg.echo;
  manifest.emplace_back("digitization.lambda", std::to_string(prep.grid.lambda));
  manifest.emplace_back("digitization.r", g17(prep.grid.r));
  manifest.emplace_back("digitization.a_dig", g17(prep.grid.a_dig));
  manifest.emplace_back("trotter.beta", g17(prep.params.beta));
  manifest.emplace_back("trotter.delta", g17(prep.params.delta));
  manifest.emplace_back("trotter.k", std::to_string(prep.params.k));
  manifest.emplace_back("trotter.b_max", std::to_string(prep.params.b_max));
  manifest.emplace_back("schedule.sweeps", std::to_string(cfg.sweeps));
  manifest.emplace_back("schedule.streams", std::to_string(cfg.streams));
  manifest.emplace_back("schedule.seed", std::to_string(cfg.seed));
  manifest.emplace_back("schedule.measure_every", std::to_string(cfg.measure_every));
  {
    std::string obs;
    for (std::size_t o = 0; o < prep.specs.size(); ++o)
      obs += (o ? " " : "") + prep.specs[o].name();
    manifest.emplace_back("observables", obs);
  }
  manifest.emplace_back("kernels.backend", kernels::backend_name(kernels::active_backend()));
  manifest.emplace_back("truncmc.version", kVersion);
  for (int s = 0; s < cfg.streams; ++s) {
    const std::string prefix = "stream." + std::to_string(s);
    manifest.emplace_back(prefix + ".seed", std::to_string(results[s].seed));
    const UpdateTallies& tal =
        prep.params.b_max > 1 ? results[s].cluster : results[s].single_site;
    manifest.emplace_back(prefix + ".acceptance", g17(tal.acceptance_rate()));
    manifest.emplace_back(prefix + ".auto_rejected",
                          std::to_string(tal.auto_rejected));
  }
  write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

// Rebuilds enough of a finished run from its manifest to re-aggregate it.
struct LoadedRun {
  double a_dig = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  int k = 0;
  double coupling = 0.0;
  double m_squared = 0.0;
  std::string potential_kind;
  int dims = 0, extent = 0;
  int lambda = 0;
  double r = 0.0;
  std::map<std::string, std::vector<ObservableSeries>> by_observable;
};

LoadedRun load_run(const fs::path& dir) {
  const auto manifest = read_manifest(dir / "manifest.txt");
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = manifest.find(key);
    if (it == manifest.end())
      throw std::runtime_error("manifest " + (dir / "manifest.txt").string() +
                               " lacks key " + key);
    return it->second;
  };
  LoadedRun run;
  run.potential_kind = need("physics.potential");
  run.coupling = std::stod(need("physics.coupling"));
  run.m_squared = std::stod(need("physics.m_squared"));
  if (run.potential_kind == "lattice") {
    run.dims = std::stoi(need("physics.dims"));
    run.extent = std::stoi(need("physics.extent"));
  }
  run.lambda = std::stoi(need("digitization.lambda"));
  run.r = std::stod(need("digitization.r"));
  run.a_dig = std::stod(need("digitization.a_dig"));
  run.beta = std::stod(need("trotter.beta"));
  run.delta = std::stod(need("trotter.delta"));
  run.k = std::stoi(need("trotter.k"));

  std::vector<std::pair<int, fs::path>> stream_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("stream_", 0) != 0 || entry.path().extension() != ".csv") continue;
    stream_files.emplace_back(std::stoi(name.substr(7, name.size() - 7 - 4)),
                              entry.path());
  }
  // directory iteration order is unspecified; keep aggregation deterministic
  std::sort(stream_files.begin(), stream_files.end());
  for (const auto& [stream_id, path] : stream_files)
    for (ObservableSeries& s : read_series_csv(path, stream_id))
      run.by_observable[s.name].push_back(std::move(s));
  if (run.by_observable.empty())
    throw std::runtime_error("no stream_*.csv files in " + dir.string());
  return run;
}

int run_analyze(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);

  std::vector<AggregateRow> agg_rows;
  // per observable: (a_dig, aggregate, exact reference)
  std::map<std::string, std::vector<std::pair<double, AggregateResult>>> mc_by_obs;
  std::map<std::string, double> exact_by_obs;

  for (const std::string& run_dir : cfg.analyze_runs) {
    const LoadedRun run = load_run(run_dir);
    const DigitizationGrid grid = DigitizationGrid::make(run.lambda, run.r);
    const PotentialModel model =
        run.potential_kind == "quartic"
            ? PotentialModel::quartic(run.coupling, run.m_squared)
            : PotentialModel::lattice_scalar(run.m_squared, run.dims, run.extent);

    // exact references share the eigensystem across observables
    EigenSystem es;
    bool have_es = false;

    for (const auto& [name, streams] : run.by_observable) {
      AggregateRow row;
      row.a_dig = run.a_dig;
      row.delta = run.delta;
      row.k = run.k;
      row.observable = name;
      row.n_stream = static_cast<int>(streams.size());
      row.n_step = streams.empty() ? 0 : static_cast<std::int64_t>(streams[0].values.size());
      AggregateResult agg;
      try {
        agg = block_and_aggregate(streams);
      } catch (const std::exception& e) {
        std::cerr << "warning: " << run_dir << " " << name << ": " << e.what() << "\n";
        continue;
      }
      row.mean = agg.mean;
      row.err = agg.std_error;
      row.d = agg.d;
      if (agg.short_streams)
        std::cerr << "warning: " << run_dir << " " << name
                  << ": stream sizes are below 2200*d (d = " << agg.d << ")\n";
      agg_rows.push_back(row);

      const ObservableSpec spec = ObservableSpec::parse(name, model);
      double exact = 0.0;
      bool have_exact = false;
      if (spec.kind == ObservableSpec::Kind::mode_power) {
        const MomentumMode mode = MomentumMode::from_integers(model.geometry(), spec.ell);
        exact = thermal_width(mode, run.m_squared, run.beta);
        have_exact = true;
      } else if (model.n_bos() == 1 &&
                 spec.kind != ObservableSpec::Kind::mean_coordinate) {
        if (!have_es) {
          es = eigensystem(build_hamiltonian(grid, model));
          have_es = true;
        }
        exact = thermal_expectation(es, diagonal_observable(spec, grid, model), run.beta);
        have_exact = true;
      }
      if (have_exact && exact != 0.0) {
        mc_by_obs[name].emplace_back(run.a_dig, agg);
        exact_by_obs[name] = exact;
      }
    }
  }

  write_aggregate_csv(dir / "aggregate.csv", agg_rows);
  for (auto& [name, points] : mc_by_obs) {
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<RelativeErrorRow> rows = relative_error_table(points, exact_by_obs[name]);
    write_relative_error_csv(dir / ("rel_err_" + sanitize(name) + ".csv"), rows);
  }

  Manifest manifest = cfg.echo;
  {
    std::string runs;
    for (std::size_t i = 0; i < cfg.analyze_runs.size(); ++i)
      runs += (i ? " " : "") + cfg.analyze_runs[i];
    manifest.emplace_back("analyze.runs", runs);
  }
  manifest.emplace_back("analysis.window_rule", "first non-positive autocorrelation lag");
  manifest.emplace_back("analysis.d_rule", "d = ceil(2*max tau_int over streams)");
  manifest.emplace_back("truncmc.version", kVersion);
  write_manifest(dir / "manifest.txt", manifest);
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunConfig::Mode::exact_diag: return run_exact_diag(cfg);
    case RunConfig::Mode::mc_single:
    case RunConfig::Mode::mc_lattice: return run_mc(cfg);
    case RunConfig::Mode::analyze: return run_analyze(cfg);
  }
  return 1;
}

}  // namespace truncmc
