#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "truncmc/io.hpp"
#include "truncmc/run_config.hpp"
#include "truncmc/runner.hpp"

using namespace truncmc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "truncmc_runner_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_mc_config(const std::string& out_dir, const std::string& seed) {
  // a non-default coupling, so analyze must take it from the manifest
  return parse_config(RunConfig::Mode::mc_single, "",
                      {{"digitization.a_dig", "0.5"},
                       {"digitization.r_over_a", "20"},
                       {"physics.coupling", "0.5"},
                       {"physics.m_squared", "1.0"},
                       {"trotter.beta", "2.0"},
                       {"trotter.delta", "0.01"},
                       {"schedule.sweeps", "800"},
                       {"schedule.streams", "3"},
                       {"schedule.seed", seed},
                       {"observables", "V x2"},
                       {"output.dir", out_dir}});
}

}  // namespace

TEST_CASE("csv round trips") {
  const fs::path dir = fresh_dir("csv");
  SUBCASE("series with comma-bearing names") {
    std::vector<ObservableSeries> series(2);
    series[0].name = "mode_power:0,0";
    series[0].values = {1.0, 2.5, 3.25};
    series[1].name = "V";
    series[1].values = {0.5, 0.25, 0.125};
    write_series_csv(dir / "s.csv", series);
    const auto back = read_series_csv(dir / "s.csv", 3);
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "mode_power:0,0");
    CHECK(back[0].values == series[0].values);
    CHECK(back[1].values == series[1].values);
    CHECK(back[0].stream_id == 3);
  }
  SUBCASE("aggregate rows") {
    std::vector<AggregateRow> rows(1);
    rows[0].a_dig = 0.5;
    rows[0].delta = 0.002;
    rows[0].k = 500;
    rows[0].observable = "mode_power:2,2";
    rows[0].mean = 0.17611;
    rows[0].err = 3e-5;
    rows[0].d = 5;
    rows[0].n_stream = 10;
    rows[0].n_step = 10000000;
    write_aggregate_csv(dir / "a.csv", rows);
    const auto back = read_aggregate_csv(dir / "a.csv");
    REQUIRE(back.size() == 1);
    CHECK(back[0].observable == "mode_power:2,2");
    CHECK(back[0].mean == 0.17611);
    CHECK(back[0].n_step == 10000000);
  }
  SUBCASE("manifest round trip") {
    Manifest m = {{"alpha", "1"}, {"beta.gamma", "x y"}};
    write_manifest(dir / "m.txt", m);
    const auto back = read_manifest(dir / "m.txt");
    CHECK(back.at("alpha") == "1");
    CHECK(back.at("beta.gamma") == "x y");
  }
}

TEST_CASE("exact-diag mode writes the sweep table") {
  const fs::path dir = fresh_dir("exact");
  RunConfig cfg = parse_config(RunConfig::Mode::exact_diag, "",
                               {{"digitization.a_dig", "0.3 0.5"},
                                {"digitization.r_over_a", "40"},
                                {"physics.m_squared", "1.0 -1.0"},
                                {"trotter.temperature", "0.1"},
                                {"output.dir", (dir / "run").string()}});
  REQUIRE(run(cfg) == 0);
  const auto rows = read_exact_diag_csv(dir / "run" / "exact_diag.csv");
  REQUIRE(rows.size() == 4);
  // r_over_a = 40 is already converged at the first digits for these points
  for (const auto& row : rows) {
    CHECK(row.beta == 10.0);
    if (row.a_dig == 0.5 && row.m_squared == 1.0)
      CHECK(row.value == doctest::Approx(0.2539).epsilon(2e-3));
    if (row.a_dig == 0.5 && row.m_squared == -1.0)
      CHECK(row.value == doctest::Approx(-0.06633).epsilon(2e-3));
  }
  CHECK(fs::exists(dir / "run" / "manifest.txt"));
}

TEST_CASE("mc runs are reproducible from their manifest settings") {
  const fs::path dir = fresh_dir("mc");
  const RunConfig cfg1 = small_mc_config((dir / "r1").string(), "20230325");
  const RunConfig cfg2 = small_mc_config((dir / "r2").string(), "20230325");
  REQUIRE(run(cfg1) == 0);
  REQUIRE(run(cfg2) == 0);

  for (int s = 0; s < 3; ++s) {
    const std::string name = "stream_" + std::to_string(s) + ".csv";
    CHECK(slurp(dir / "r1" / name) == slurp(dir / "r2" / name));
  }

  const auto manifest = read_manifest(dir / "r1" / "manifest.txt");
  for (const char* key :
       {"physics.potential", "physics.m_squared", "digitization.lambda",
        "digitization.r", "digitization.a_dig", "trotter.beta", "trotter.delta",
        "trotter.k", "trotter.b_max", "schedule.sweeps", "schedule.streams",
        "schedule.seed", "observables", "kernels.backend", "truncmc.version",
        "stream.0.seed", "stream.0.acceptance"})
    CHECK(manifest.count(key));
  CHECK(manifest.at("trotter.k") == "200");

  const auto agg = read_aggregate_csv(dir / "r1" / "aggregate.csv");
  REQUIRE(agg.size() == 2);  // V and x2
  CHECK(agg[0].n_stream == 3);

  SUBCASE("a different seed changes the data") {
    const RunConfig cfg3 = small_mc_config((dir / "r3").string(), "999");
    REQUIRE(run(cfg3) == 0);
    CHECK(slurp(dir / "r1" / "stream_0.csv") != slurp(dir / "r3" / "stream_0.csv"));
  }
}

TEST_CASE("analyze rebuilds aggregates and reference errors") {
  const fs::path dir = fresh_dir("analyze");
  const RunConfig mc = small_mc_config((dir / "mc").string(), "77");
  REQUIRE(run(mc) == 0);

  const RunConfig an = parse_config(RunConfig::Mode::analyze, "",
                                    {{"analyze.runs", (dir / "mc").string()},
                                     {"output.dir", (dir / "out").string()}});
  REQUIRE(run(an) == 0);

  const auto agg = read_aggregate_csv(dir / "out" / "aggregate.csv");
  REQUIRE(agg.size() == 2);
  // the analyze aggregate must match the one the run wrote
  const auto orig = read_aggregate_csv(dir / "mc" / "aggregate.csv");
  for (std::size_t i = 0; i < agg.size(); ++i) {
    CHECK(agg[i].observable == orig[i].observable);
    CHECK(agg[i].mean == orig[i].mean);
    CHECK(agg[i].err == orig[i].err);
  }
  // exact references exist for V and x2 (quartic single boson)
  CHECK(fs::exists(dir / "out" / "rel_err_V.csv"));
  CHECK(fs::exists(dir / "out" / "rel_err_x2.csv"));
  // the MC estimate should sit near the exact-diagonalization value
  const std::string rel = slurp(dir / "out" / "rel_err_V.csv");
  std::istringstream ss(rel);
  std::string header, row;
  std::getline(ss, header);
  REQUIRE(std::getline(ss, row));
  const double rel_err = std::stod(row.substr(row.find(',') + 1));
  CHECK(std::fabs(rel_err) < 0.2);
}
