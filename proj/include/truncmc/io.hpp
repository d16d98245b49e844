#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "truncmc/series.hpp"
#include "truncmc/stats.hpp"

namespace truncmc {

// Full-precision decimal formatting (17 significant digits).
std::string g17(double v);

// Per-stream series file: header "sweep,observable,value", one row per
// (recorded sweep, observable).
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<ObservableSeries>& series);
std::vector<ObservableSeries> read_series_csv(const std::filesystem::path& path,
                                              int stream_id);

struct ExactDiagRow {
  double a_dig = 0.0;
  double m_squared = 0.0;
  double beta = 0.0;
  std::string observable;
  double value = 0.0;
};
void write_exact_diag_csv(const std::filesystem::path& path,
                          const std::vector<ExactDiagRow>& rows);
std::vector<ExactDiagRow> read_exact_diag_csv(const std::filesystem::path& path);

struct AggregateRow {
  double a_dig = 0.0;
  double delta = 0.0;
  int k = 0;
  std::string observable;
  double mean = 0.0;
  double err = 0.0;
  int d = 0;
  int n_stream = 0;
  std::int64_t n_step = 0;
};
void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

void write_relative_error_csv(const std::filesystem::path& path,
                              const std::vector<RelativeErrorRow>& rows);

// Manifest: ordered "key = value" lines, the same format as config files.
using Manifest = std::vector<std::pair<std::string, std::string>>;
void write_manifest(const std::filesystem::path& path, const Manifest& entries);
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

}  // namespace truncmc
