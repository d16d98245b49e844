#include "truncmc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace truncmc {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

double to_double(const std::string& s) { return std::stod(s); }

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<ObservableSeries>& series) {
  std::ofstream out = open_out(path);
  out << "sweep,observable,value\n";
  if (series.empty()) return;
  const std::size_t n = series[0].values.size();
  for (const ObservableSeries& s : series)
    if (s.values.size() != n)
      throw std::invalid_argument("series lengths differ within one stream");
  for (std::size_t t = 0; t < n; ++t)
    for (const ObservableSeries& s : series)
      out << t + 1 << ',' << s.name << ',' << g17(s.values[t]) << '\n';
}

std::vector<ObservableSeries> read_series_csv(const std::filesystem::path& path,
                                              int stream_id) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "sweep,observable,value")
    throw std::runtime_error("bad series header in " + path.string());
  std::vector<ObservableSeries> series;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() < 3) throw std::runtime_error("bad series row in " + path.string());
    // mode names contain commas; the value is the last field
    std::string name = f[1];
    for (std::size_t i = 2; i + 1 < f.size(); ++i) name += "," + f[i];
    const double value = to_double(f.back());
    ObservableSeries* dst = nullptr;
    for (ObservableSeries& s : series)
      if (s.name == name) dst = &s;
    if (!dst) {
      series.emplace_back();
      dst = &series.back();
      dst->name = name;
      dst->stream_id = stream_id;
    }
    dst->values.push_back(value);
  }
  return series;
}

void write_exact_diag_csv(const std::filesystem::path& path,
                          const std::vector<ExactDiagRow>& rows) {
  std::ofstream out = open_out(path);
  out << "a_dig,m_squared,beta,observable,value\n";
  for (const ExactDiagRow& r : rows)
    out << g17(r.a_dig) << ',' << g17(r.m_squared) << ',' << g17(r.beta) << ','
        << r.observable << ',' << g17(r.value) << '\n';
}

std::vector<ExactDiagRow> read_exact_diag_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "a_dig,m_squared,beta,observable,value")
    throw std::runtime_error("bad exact-diag header in " + path.string());
  std::vector<ExactDiagRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() < 5) throw std::runtime_error("bad exact-diag row in " + path.string());
    ExactDiagRow r;
    r.a_dig = to_double(f[0]);
    r.m_squared = to_double(f[1]);
    r.beta = to_double(f[2]);
    r.observable = f[3];
    for (std::size_t i = 4; i + 1 < f.size(); ++i) r.observable += "," + f[i];
    r.value = to_double(f.back());
    rows.push_back(r);
  }
  return rows;
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const std::vector<AggregateRow>& rows) {
  std::ofstream out = open_out(path);
  out << "a_dig,delta,k,observable,mean,err,d,n_stream,n_step\n";
  for (const AggregateRow& r : rows)
    out << g17(r.a_dig) << ',' << g17(r.delta) << ',' << r.k << ',' << r.observable
        << ',' << g17(r.mean) << ',' << g17(r.err) << ',' << r.d << ','
        << r.n_stream << ',' << r.n_step << '\n';
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "a_dig,delta,k,observable,mean,err,d,n_stream,n_step")
    throw std::runtime_error("bad aggregate header in " + path.string());
  std::vector<AggregateRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() < 9) throw std::runtime_error("bad aggregate row in " + path.string());
    AggregateRow r;
    r.a_dig = to_double(f[0]);
    r.delta = to_double(f[1]);
    r.k = std::stoi(f[2]);
    const std::size_t extra = f.size() - 9;  // commas inside the observable name
    r.observable = f[3];
    for (std::size_t i = 4; i < 4 + extra; ++i) r.observable += "," + f[i];
    r.mean = to_double(f[4 + extra]);
    r.err = to_double(f[5 + extra]);
    r.d = std::stoi(f[6 + extra]);
    r.n_stream = std::stoi(f[7 + extra]);
    r.n_step = std::stoll(f[8 + extra]);
    rows.push_back(r);
  }
  return rows;
}

void write_relative_error_csv(const std::filesystem::path& path,
                              const std::vector<RelativeErrorRow>& rows) {
  std::ofstream out = open_out(path);
  out << "inv_a_dig,rel_err,rel_err_err\n";
  for (const RelativeErrorRow& r : rows)
    out << g17(r.inv_a_dig) << ',' << g17(r.rel_err) << ',' << g17(r.rel_err_err)
        << '\n';
}

void write_manifest(const std::filesystem::path& path, const Manifest& entries) {
  std::ofstream out = open_out(path);
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad manifest line in " + path.string() + ": " + t);
    entries[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return entries;
}

}  // namespace truncmc
