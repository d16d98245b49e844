#include "truncmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace truncmc {

double integrated_autocorrelation(std::span<const double> series) {
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  if (n < 10)
    throw std::invalid_argument("autocorrelation needs at least 10 samples, got " +
                                std::to_string(n));
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  double c0 = 0.0;
  double max_abs = 0.0;
  for (double v : series) {
    c0 += (v - mean) * (v - mean);
    max_abs = std::max(max_abs, std::fabs(v));
  }
  c0 /= static_cast<double>(n);
  // a constant series has variance zero up to summation roundoff
  if (c0 <= 1e-24 * (max_abs * max_abs + 1.0))
    throw std::invalid_argument("autocorrelation of a constant series is undefined");

  double tau = 0.5;
  for (std::int64_t t = 1; t < n; ++t) {
    double ct = 0.0;
    for (std::int64_t s = 0; s + t < n; ++s)
      ct += (series[s] - mean) * (series[s + t] - mean);
    ct /= static_cast<double>(n);
    const double rho = ct / c0;
    tau += rho;
    if (rho <= 0.0) break;  // truncation window: first non-positive lag
  }
  return tau;
}

AggregateResult block_and_aggregate(std::span<const ObservableSeries> streams) {
  if (streams.size() < 2)
    throw std::invalid_argument("aggregation needs at least 2 streams, got " +
                                std::to_string(streams.size()));

  double tau_max = 0.0;
  for (const ObservableSeries& s : streams)
    tau_max = std::max(tau_max, integrated_autocorrelation(s.values));
  const int d = static_cast<int>(std::ceil(2.0 * tau_max));

  const std::int64_t block = 10LL * d;
  AggregateResult out;
  out.d = d;
  out.n_streams = static_cast<int>(streams.size());

  std::vector<double> stream_means;
  stream_means.reserve(streams.size());
  for (const ObservableSeries& s : streams) {
    const std::int64_t len = static_cast<std::int64_t>(s.values.size());
    const std::int64_t usable = len - block;  // burn-in = one block of 10d
    const std::int64_t n_blocks = usable / block;
    if (n_blocks < 2)
      throw std::invalid_argument(
          "stream " + std::to_string(s.stream_id) + " has " + std::to_string(len) +
          " entries; needs at least " + std::to_string(3 * block) +
          " (burn-in of " + std::to_string(block) + " plus two blocks of " +
          std::to_string(block) + ")");
    if (len < 2200LL * d) out.short_streams = true;

    double sum_block_means = 0.0;
    for (std::int64_t bi = 0; bi < n_blocks; ++bi) {
      double bm = 0.0;
      const std::int64_t begin = block + bi * block;
      for (std::int64_t t = begin; t < begin + block; ++t) bm += s.values[t];
      sum_block_means += bm / static_cast<double>(block);
    }
    stream_means.push_back(sum_block_means / static_cast<double>(n_blocks));
    out.n_samples += n_blocks;
  }

  double mean = 0.0;
  for (double m : stream_means) mean += m;
  mean /= static_cast<double>(stream_means.size());

  double var = 0.0;
  for (double m : stream_means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(stream_means.size() - 1);  // unbiased

  out.mean = mean;
  out.std_error = std::sqrt(var / static_cast<double>(stream_means.size()));
  return out;
}

std::vector<RelativeErrorRow> relative_error_table(
    std::span<const std::pair<double, AggregateResult>> mc_results,
    double exact_value) {
  if (exact_value == 0.0)
    throw std::invalid_argument("relative error needs a nonzero exact value");
  std::vector<RelativeErrorRow> rows;
  rows.reserve(mc_results.size());
  for (const auto& [a_dig, agg] : mc_results) {
    RelativeErrorRow row;
    row.inv_a_dig = 1.0 / a_dig;
    row.rel_err = (exact_value - agg.mean) / exact_value;
    row.rel_err_err = agg.std_error / std::fabs(exact_value);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace truncmc
