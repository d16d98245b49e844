#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "truncmc/series.hpp"

namespace truncmc {

// tau_int = 1/2 + sum_{t=1..W} rho(t), where rho is the normalized empirical
// autocorrelation and W is the first lag with rho <= 0. Throws on series
// shorter than 10 or with zero variance.
double integrated_autocorrelation(std::span<const double> series);

struct AggregateResult {
  double mean = 0.0;
  double std_error = 0.0;
  int d = 0;                    // autocorrelation length used for blocking
  std::int64_t n_samples = 0;   // total block count across streams
  int n_streams = 0;
  bool short_streams = false;   // any stream shorter than 2200*d
};

// Cross-stream aggregation: d = ceil(2 * max tau_int over streams); the first
// 10d entries of each stream are discarded as burn-in and the rest split into
// 10d-long blocks. The result reports the grand mean of the stream means and
// the unbiased standard deviation of the stream means / sqrt(n_streams).
AggregateResult block_and_aggregate(std::span<const ObservableSeries> streams);

struct RelativeErrorRow {
  double inv_a_dig = 0.0;
  double rel_err = 0.0;      // (exact - mc) / exact
  double rel_err_err = 0.0;  // propagated std error
};

std::vector<RelativeErrorRow> relative_error_table(
    std::span<const std::pair<double, AggregateResult>> mc_results,
    double exact_value);

}  // namespace truncmc
