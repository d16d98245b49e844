#include "truncmc/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "truncmc/kernels.hpp"

namespace truncmc {
namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

TrotterParams TrotterParams::make(double beta, double delta, int b_max,
                                  const DigitizationGrid& grid,
                                  const PotentialModel& model) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const long long k = std::llround(beta / delta);
  if (k < 1) throw std::invalid_argument("beta/delta rounds to zero slices");
  if (std::fabs(k * delta - beta) > 1e-9 * beta)
    throw std::invalid_argument("beta = " + fmt_g(beta) + " is not an integer multiple of delta = " +
                                fmt_g(delta) + " (k*delta - beta = " + fmt_g(k * delta - beta) + ")");
  return from_step_count(delta, static_cast<int>(k), b_max, grid, model);
}

TrotterParams TrotterParams::from_step_count(double delta, int k, int b_max,
                                             const DigitizationGrid& grid,
                                             const PotentialModel& model) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (b_max < 1 || b_max > k)
    throw std::invalid_argument("b_max must be in [1, k], got " + std::to_string(b_max));
  const double a2 = grid.a_dig * grid.a_dig;
  const double diag = 1.0 - model.n_bos() * delta / a2;
  if (!(diag > 0.0))
    throw std::invalid_argument(
        "positivity violated: 1 - n_bos*delta/a_dig^2 = " + fmt_g(diag) +
        " (n_bos = " + std::to_string(model.n_bos()) + ", delta = " + fmt_g(delta) +
        ", a_dig = " + fmt_g(grid.a_dig) + ")");
  TrotterParams p;
  p.delta = delta;
  p.k = k;
  p.beta = k * delta;
  p.b_max = b_max;
  return p;
}

PathConfiguration PathConfiguration::centered(const DigitizationGrid& grid, int k,
                                              int n_bos) {
  PathConfiguration c;
  c.k = k;
  c.n_bos = n_bos;
  c.indices.assign(static_cast<std::size_t>(k) * n_bos,
                   static_cast<std::int32_t>(grid.center_index()));
  return c;
}

namespace {

enum class LinkKind { diagonal, hop, zero };

// Compares slices ja and jb with an optional +-1 shift applied to one
// coordinate on either side; early-outs as soon as the pair cannot carry
// weight.
LinkKind link_kind(const PathConfiguration& c, int ja, int jb, int coord = -1,
                   int da = 0, int db = 0) {
  int diffs = 0;
  for (int i = 0; i < c.n_bos; ++i) {
    int d = c.at(ja, i) - c.at(jb, i);
    if (i == coord) d += da - db;
    if (d != 0) {
      if (d != 1 && d != -1) return LinkKind::zero;
      if (++diffs > 1) return LinkKind::zero;
    }
  }
  return diffs == 0 ? LinkKind::diagonal : LinkKind::hop;
}

struct BlockRange {
  int count;  // number of shifted slices (deduplicated; at most k)
  int start;
  int len1;  // contiguous run at start
  int len2;  // wrapped-around run at slice 0
};

BlockRange cluster_range(int k, int j, int b) {
  const int count = b + 1;
  if (count >= k) return {k, 0, k, 0};
  const int len1 = std::min(count, k - j);
  return {count, j, len1, count - len1};
}

}  // namespace

bool is_representable(const PathConfiguration& c, const DigitizationGrid& grid) {
  for (std::int32_t n : c.indices)
    if (n < 0 || n >= grid.lambda) return false;
  for (int j = 0; j < c.k; ++j)
    if (link_kind(c, j, (j + 1) % c.k) == LinkKind::zero) return false;
  return true;
}

UpdateContext::UpdateContext(const TrotterParams& params, const DigitizationGrid& grid,
                             const PotentialModel& model)
    : params_(params), grid_(grid), model_(model) {
  const double a = grid.a_dig;
  const double a2 = a * a;
  diag_weight_ = 1.0 - model.n_bos() * params.delta / a2;
  hop_weight_ = params.delta / (2.0 * a2);
  if (!(diag_weight_ > 0.0))
    throw std::invalid_argument("positivity violated for these parameters");

  coord_table_.resize(grid.lambda);
  coord_sq_table_.resize(grid.lambda);
  for (int n = 0; n < grid.lambda; ++n) {
    coord_table_[n] = grid.coordinate_unchecked(n);
    coord_sq_table_[n] = coord_table_[n] * coord_table_[n];
  }

  const double x0 = -grid.r;
  if (model.kind() == PotentialModel::Kind::quartic) {
    const double lam = model.coupling();
    const double m2 = model.m_squared();
    v_table_.resize(grid.lambda);
    for (int n = 0; n < grid.lambda; ++n) {
      const double x2 = coord_sq_table_[n];
      v_table_[n] = 0.25 * lam * x2 * x2 + 0.5 * m2 * x2;
    }
    for (int sidx = 0; sidx < 2; ++sidx) {
      const double h = (sidx == 0 ? -a : a);
      shift_poly_[sidx][3] = lam * h;
      shift_poly_[sidx][2] = 1.5 * lam * h * h;
      shift_poly_[sidx][1] = lam * h * h * h + m2 * h;
      shift_poly_[sidx][0] = 0.25 * lam * h * h * h * h + 0.5 * m2 * h * h;
    }
  } else {
    const LatticeGeometry& g = model.geometry();
    const double m2 = model.m_squared();
    int nonself = 0;
    for (int m = 0; m < 2 * g.dims; ++m)
      if (g.neighbor(0, m % g.dims, m < g.dims) != 0) ++nonself;
    for (int sidx = 0; sidx < 2; ++sidx) {
      const double d = (sidx == 0 ? -a : a);
      lat_kappa_[sidx] = m2 * d * x0 + 0.5 * (m2 + nonself) * d * d;
      lat_alpha_[sidx] = d * a * (m2 + nonself);
      lat_gamma_[sidx] = -d * a;
    }
  }
}

double UpdateContext::slice_potential(const PathConfiguration& c, int j) const {
  if (model_.kind() == PotentialModel::Kind::quartic) return v_table_[c.at(j, 0)];
  const LatticeGeometry& g = model_.geometry();
  const double m2 = model_.m_squared();
  double v = 0.0;
  for (int s = 0; s < c.n_bos; ++s) {
    const double x = coord_table_[c.at(j, s)];
    v += 0.5 * m2 * x * x;
    for (int mu = 0; mu < g.dims; ++mu) {
      const double d = coord_table_[c.at(j, g.neighbor(s, mu, true))] - x;
      v += 0.5 * d * d;
    }
  }
  return v;
}

UpdateContext::BlockEval UpdateContext::shift_block_eval(const PathConfiguration& c,
                                                         int i, int j0, int count,
                                                         int sign) const {
  const int sidx = sign < 0 ? 0 : 1;
  const std::int32_t* row = c.indices.data() + static_cast<std::size_t>(i) * c.k + j0;
  if (model_.kind() == PotentialModel::Kind::quartic) {
    const auto st = kernels::poly3_block_stats(row, count, shift_poly_[sidx], -grid_.r,
                                               grid_.a_dig);
    return {st.sum, st.min, st.max};
  }
  const LatticeGeometry& g = model_.geometry();
  const auto self = kernels::i32_block_stats(row, count);
  std::int64_t nbr_sum = 0;
  for (int m = 0; m < 2 * g.dims; ++m) {
    const std::int32_t w = g.neighbor(i, m % g.dims, m < g.dims);
    if (w == i) continue;
    nbr_sum += kernels::i32_block_sum(
        c.indices.data() + static_cast<std::size_t>(w) * c.k + j0, count);
  }
  const double dv = count * lat_kappa_[sidx] +
                    lat_alpha_[sidx] * static_cast<double>(self.sum) +
                    lat_gamma_[sidx] * static_cast<double>(nbr_sum);
  return {dv, self.min, self.max};
}

double UpdateContext::shift_site_delta_v(const PathConfiguration& c, int i, int j,
                                         int sign) const {
  const int sidx = sign < 0 ? 0 : 1;
  const std::int32_t n = c.at(j, i);
  if (model_.kind() == PotentialModel::Kind::quartic) {
    const double* p = shift_poly_[sidx];
    const double x = -grid_.r + grid_.a_dig * n;
    return ((p[3] * x + p[2]) * x + p[1]) * x + p[0];
  }
  const LatticeGeometry& g = model_.geometry();
  std::int64_t nbr_sum = 0;
  for (int m = 0; m < 2 * g.dims; ++m) {
    const std::int32_t w = g.neighbor(i, m % g.dims, m < g.dims);
    if (w == i) continue;
    nbr_sum += c.at(j, w);
  }
  return lat_kappa_[sidx] + lat_alpha_[sidx] * n +
         lat_gamma_[sidx] * static_cast<double>(nbr_sum);
}

std::string UpdateContext::fingerprint() const {
  return model_.describe() + "|lambda=" + std::to_string(grid_.lambda) +
         ";r=" + fmt_g(grid_.r) + "|delta=" + fmt_g(params_.delta) +
         ";k=" + std::to_string(params_.k) + ";bmax=" + std::to_string(params_.b_max);
}

double link_weight(std::span<const std::int32_t> na, std::span<const std::int32_t> nb,
                   const TrotterParams& params, const DigitizationGrid& grid,
                   const PotentialModel& model) {
  const int n = model.n_bos();
  if (static_cast<int>(na.size()) != n || static_cast<int>(nb.size()) != n)
    throw std::invalid_argument("index vectors must have length n_bos");
  for (int i = 0; i < n; ++i)
    if (na[i] < 0 || na[i] >= grid.lambda || nb[i] < 0 || nb[i] >= grid.lambda)
      throw std::out_of_range("grid index out of range in link_weight");

  int diffs = 0;
  bool zero = false;
  for (int i = 0; i < n && !zero; ++i) {
    const int d = na[i] - nb[i];
    if (d != 0) {
      if (d != 1 && d != -1) zero = true;
      else if (++diffs > 1) zero = true;
    }
  }
  if (zero) return 0.0;

  const double a2 = grid.a_dig * grid.a_dig;
  const double hop_factor = (diffs == 0) ? 1.0 - n * params.delta / a2
                                         : params.delta / (2.0 * a2);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = grid.coordinate_unchecked(nb[i]);
  return hop_factor * std::exp(-params.delta * model.energy(x));
}

double action(const PathConfiguration& c, const UpdateContext& ctx) {
  std::int64_t n_diag = 0, n_hop = 0;
  double pot = 0.0;
  for (int j = 0; j < c.k; ++j) {
    const int jn = (j + 1) % c.k;
    switch (link_kind(c, j, jn)) {
      case LinkKind::diagonal: ++n_diag; break;
      case LinkKind::hop: ++n_hop; break;
      case LinkKind::zero: return std::numeric_limits<double>::infinity();
    }
    pot += ctx.slice_potential(c, jn);
  }
  for (std::int32_t n : c.indices)
    if (n < 0 || n >= ctx.grid().lambda)
      return std::numeric_limits<double>::infinity();
  return -n_diag * std::log(ctx.diag_weight()) - n_hop * std::log(ctx.hop_weight()) +
         ctx.params().delta * pot;
}

double action(const PathConfiguration& c, const TrotterParams& params,
              const DigitizationGrid& grid, const PotentialModel& model) {
  return action(c, UpdateContext(params, grid, model));
}

ProposalEval eval_single_site(const PathConfiguration& c, int j, int i, int sign,
                              const UpdateContext& ctx) {
  const std::int32_t n = c.at(j, i);
  const std::int32_t n2 = n + sign;
  if (n2 < 0 || n2 >= ctx.grid().lambda) return {true, 1.0, 0.0};

  ProposalEval ev;
  ev.potential_delta = ctx.shift_site_delta_v(c, i, j, sign);
  if (c.k == 1) return ev;  // the only link is the slice to itself; stays diagonal

  const int jm = (j == 0) ? c.k - 1 : j - 1;
  const int jp = (j + 1 == c.k) ? 0 : j + 1;
  const LinkKind n1 = link_kind(c, jm, j, i, 0, sign);
  const LinkKind n2k = link_kind(c, j, jp, i, sign, 0);
  if (n1 == LinkKind::zero || n2k == LinkKind::zero) return {true, 1.0, 0.0};
  const LinkKind o1 = link_kind(c, jm, j);
  const LinkKind o2 = link_kind(c, j, jp);

  auto w = [&](LinkKind kind) {
    return kind == LinkKind::diagonal ? ctx.diag_weight() : ctx.hop_weight();
  };
  ev.hop_ratio = (w(n1) * w(n2k)) / (w(o1) * w(o2));
  return ev;
}

ProposalEval eval_cluster(const PathConfiguration& c, int b, int j, int i, int sign,
                          const UpdateContext& ctx) {
  const BlockRange r = cluster_range(c.k, j, b);
  ProposalEval ev;

  if (r.count < c.k) {
    // boundary links; everything inside the block keeps its slice differences
    const int jm = (j == 0) ? c.k - 1 : j - 1;
    const int jend = (j + r.count - 1) % c.k;
    const int jp = (jend + 1 == c.k) ? 0 : jend + 1;
    const LinkKind n1 = link_kind(c, jm, j, i, 0, sign);
    const LinkKind n2 = link_kind(c, jend, jp, i, sign, 0);
    if (n1 == LinkKind::zero || n2 == LinkKind::zero) return {true, 1.0, 0.0};
    const LinkKind o1 = link_kind(c, jm, j);
    const LinkKind o2 = link_kind(c, jend, jp);
    auto w = [&](LinkKind kind) {
      return kind == LinkKind::diagonal ? ctx.diag_weight() : ctx.hop_weight();
    };
    ev.hop_ratio = (w(n1) * w(n2)) / (w(o1) * w(o2));
  }
  // else: every slice shifts, a rigid translation; hop factors are unchanged

  UpdateContext::BlockEval be = ctx.shift_block_eval(c, i, r.start, r.len1, sign);
  if (r.len2 > 0) {
    const UpdateContext::BlockEval be2 = ctx.shift_block_eval(c, i, 0, r.len2, sign);
    be.delta_v += be2.delta_v;
    be.min = std::min(be.min, be2.min);
    be.max = std::max(be.max, be2.max);
  }
  if (sign > 0 ? (be.max >= ctx.grid().lambda - 1) : (be.min <= 0))
    return {true, 1.0, 0.0};

  ev.potential_delta = be.delta_v;
  return ev;
}

double acceptance_probability(const ProposalEval& ev, const UpdateContext& ctx) {
  if (ev.auto_rejected) return 0.0;
  const double p = ev.hop_ratio * std::exp(-ctx.params().delta * ev.potential_delta);
  return p < 1.0 ? p : 1.0;
}

double proposal_delta_action(const ProposalEval& ev, const UpdateContext& ctx) {
  if (ev.auto_rejected) return std::numeric_limits<double>::infinity();
  return ctx.params().delta * ev.potential_delta - std::log(ev.hop_ratio);
}

void apply_single_site(PathConfiguration& c, int j, int i, int sign) {
  c.at(j, i) += sign;
}

void apply_cluster(PathConfiguration& c, int b, int j, int i, int sign) {
  const BlockRange r = cluster_range(c.k, j, b);
  std::int32_t* row = c.indices.data() + static_cast<std::size_t>(i) * c.k;
  for (int l = r.start; l < r.start + r.len1; ++l) row[l] += sign;
  for (int l = 0; l < r.len2; ++l) row[l] += sign;
}

ChainStream::ChainStream(const UpdateContext& ctx, std::uint64_t seed)
    : config(PathConfiguration::centered(ctx.grid(), ctx.params().k,
                                         ctx.model().n_bos())),
      rng(seed) {}

void metropolis_sweep(ChainStream& stream, const UpdateContext& ctx) {
  PathConfiguration& c = stream.config;
  for (int j = 0; j < c.k; ++j) {
    for (int i = 0; i < c.n_bos; ++i) {
      const int sign = stream.rng.sign();
      ++stream.single_site.proposed;
      const ProposalEval ev = eval_single_site(c, j, i, sign, ctx);
      if (ev.auto_rejected) {
        ++stream.single_site.auto_rejected;
        continue;
      }
      const double p = acceptance_probability(ev, ctx);
      if (p >= 1.0 || stream.rng.uniform() < p) {
        apply_single_site(c, j, i, sign);
        ++stream.single_site.accepted;
      }
    }
  }
  ++stream.sweep_count;
}

void cluster_sweep(ChainStream& stream, const UpdateContext& ctx) {
  PathConfiguration& c = stream.config;
  const std::int64_t n_props = static_cast<std::int64_t>(c.k) * c.n_bos;
  const int b_max = ctx.params().b_max;
  for (std::int64_t t = 0; t < n_props; ++t) {
    const int b = 1 + static_cast<int>(stream.rng.below(b_max));
    const int j = static_cast<int>(stream.rng.below(c.k));
    const int i = static_cast<int>(stream.rng.below(c.n_bos));
    const int sign = stream.rng.sign();
    ++stream.cluster.proposed;
    const ProposalEval ev = eval_cluster(c, b, j, i, sign, ctx);
    if (ev.auto_rejected) {
      ++stream.cluster.auto_rejected;
      continue;
    }
    const double p = acceptance_probability(ev, ctx);
    if (p >= 1.0 || stream.rng.uniform() < p) {
      apply_cluster(c, b, j, i, sign);
      ++stream.cluster.accepted;
    }
  }
  ++stream.sweep_count;
}

std::string ObservableSpec::name() const {
  switch (kind) {
    case Kind::potential: return "V";
    case Kind::mean_coordinate: return "x";
    case Kind::mean_coordinate_squared: return "x2";
    case Kind::mode_power: {
      std::string s = "mode_power:";
      for (std::size_t j = 0; j < ell.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(ell[j]);
      }
      return s;
    }
  }
  return "?";
}

ObservableSpec ObservableSpec::parse(const std::string& name,
                                     const PotentialModel& model) {
  ObservableSpec spec;
  if (name == "V") {
    spec.kind = Kind::potential;
    return spec;
  }
  if (name == "x") {
    spec.kind = Kind::mean_coordinate;
    return spec;
  }
  if (name == "x2") {
    spec.kind = Kind::mean_coordinate_squared;
    return spec;
  }
  const std::string prefix = "mode_power:";
  if (name.rfind(prefix, 0) == 0) {
    if (model.kind() != PotentialModel::Kind::lattice_scalar)
      throw std::invalid_argument("observable '" + name + "' needs a lattice model");
    spec.kind = Kind::mode_power;
    std::size_t pos = prefix.size();
    while (pos < name.size()) {
      std::size_t next = name.find(',', pos);
      if (next == std::string::npos) next = name.size();
      try {
        spec.ell.push_back(std::stoi(name.substr(pos, next - pos)));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad mode number in observable '" + name + "'");
      }
      pos = next + 1;
    }
    if (static_cast<int>(spec.ell.size()) != model.geometry().dims)
      throw std::invalid_argument("observable '" + name + "' needs " +
                                  std::to_string(model.geometry().dims) +
                                  " mode numbers");
    return spec;
  }
  throw std::invalid_argument("unknown observable '" + name + "'");
}

namespace {

// Slice-averaged measurement of one observable.
class Measurer {
 public:
  Measurer(const ObservableSpec& spec, const UpdateContext& ctx)
      : spec_(spec), ctx_(ctx) {
    if (spec.kind == ObservableSpec::Kind::mode_power) {
      const LatticeGeometry& g = ctx.model().geometry();
      const MomentumMode mode = MomentumMode::from_integers(g, spec.ell);
      const int n = g.n_sites();
      const double norm = 1.0 / std::sqrt(static_cast<double>(n));
      wc_.resize(n);
      ws_.resize(n);
      for (int s = 0; s < n; ++s) {
        const std::vector<int> coords = g.site_coords(s);
        double phase = 0.0;
        for (int mu = 0; mu < g.dims; ++mu) phase += mode.q[mu] * coords[mu];
        wc_[s] = std::cos(phase) * norm;
        ws_[s] = -std::sin(phase) * norm;
      }
    }
  }

  double measure(const PathConfiguration& c) const {
    const std::vector<double>& xs = ctx_.coordinate_table();
    switch (spec_.kind) {
      case ObservableSpec::Kind::potential: {
        double sum = 0.0;
        for (int j = 0; j < c.k; ++j) sum += ctx_.slice_potential(c, j);
        return sum / c.k;
      }
      case ObservableSpec::Kind::mean_coordinate: {
        double sum = 0.0;
        for (int i = 0; i < c.n_bos; ++i) {
          const auto row = c.worldline(i);
          sum += kernels::indexed_sum(row.data(), c.k, xs.data());
        }
        return sum / (static_cast<double>(c.k) * c.n_bos);
      }
      case ObservableSpec::Kind::mean_coordinate_squared: {
        double sum = 0.0;
        for (int i = 0; i < c.n_bos; ++i) {
          const auto row = c.worldline(i);
          for (int j = 0; j < c.k; ++j) {
            const double x = xs[row[j]];
            sum += x * x;
          }
        }
        return sum / (static_cast<double>(c.k) * c.n_bos);
      }
      case ObservableSpec::Kind::mode_power: {
        double sum = 0.0;
        for (int j = 0; j < c.k; ++j) {
          double re = 0.0, im = 0.0;
          for (int i = 0; i < c.n_bos; ++i) {
            const double x = xs[c.at(j, i)];
            re += wc_[i] * x;
            im += ws_[i] * x;
          }
          sum += re * re + im * im;
        }
        return sum / c.k;
      }
    }
    return 0.0;
  }

 private:
  ObservableSpec spec_;
  const UpdateContext& ctx_;
  std::vector<double> wc_, ws_;
};

}  // namespace

ChainResult run_chain(const TrotterParams& params, const DigitizationGrid& grid,
                      const PotentialModel& model, const Schedule& schedule,
                      std::span<const ObservableSpec> observables,
                      std::uint64_t seed, int stream_id) {
  if (schedule.n_sweeps < 0) throw std::invalid_argument("n_sweeps must be >= 0");
  if (schedule.measure_every < 1)
    throw std::invalid_argument("measure_every must be >= 1");

  const UpdateContext ctx(params, grid, model);
  ChainStream stream(ctx, seed);

  std::vector<Measurer> measurers;
  measurers.reserve(observables.size());
  for (const ObservableSpec& spec : observables) measurers.emplace_back(spec, ctx);

  ChainResult result;
  result.seed = seed;
  result.stream_id = stream_id;
  result.series.resize(observables.size());
  const std::string fp = ctx.fingerprint();
  for (std::size_t o = 0; o < observables.size(); ++o) {
    result.series[o].name = observables[o].name();
    result.series[o].stream_id = stream_id;
    result.series[o].params_fingerprint = fp;
    result.series[o].values.reserve(schedule.n_sweeps / schedule.measure_every);
  }

  const bool use_cluster = params.b_max > 1;
  for (std::int64_t sweep = 1; sweep <= schedule.n_sweeps; ++sweep) {
    if (use_cluster)
      cluster_sweep(stream, ctx);
    else
      metropolis_sweep(stream, ctx);
    if (sweep % schedule.measure_every == 0)
      for (std::size_t o = 0; o < measurers.size(); ++o)
        result.series[o].values.push_back(measurers[o].measure(stream.config));
  }

  result.single_site = stream.single_site;
  result.cluster = stream.cluster;
  return result;
}

BruteForceResult brute_force_detail(const TrotterParams& params,
                                    const DigitizationGrid& grid,
                                    const PotentialModel& model,
                                    const ObservableSpec& observable,
                                    std::int64_t max_terms) {
  const int n_digits = params.k * model.n_bos();
  const double est = std::pow(static_cast<double>(grid.lambda), n_digits);
  if (!(est <= static_cast<double>(max_terms)))
    throw std::runtime_error("brute force enumeration of lambda^(k*n_bos) = " +
                             std::to_string(grid.lambda) + "^" +
                             std::to_string(n_digits) + " ~ " + fmt_g(est) +
                             " configurations exceeds the budget of " +
                             std::to_string(max_terms));

  const UpdateContext ctx(params, grid, model);
  const Measurer measurer(observable, ctx);

  PathConfiguration c;
  c.k = params.k;
  c.n_bos = model.n_bos();
  c.indices.assign(static_cast<std::size_t>(n_digits), 0);

  BruteForceResult out;
  double num = 0.0;
  for (;;) {
    // weight of this configuration
    std::int64_t n_diag = 0, n_hop = 0;
    bool zero = false;
    double pot = 0.0;
    for (int j = 0; j < c.k && !zero; ++j) {
      switch (link_kind(c, j, (j + 1) % c.k)) {
        case LinkKind::diagonal: ++n_diag; break;
        case LinkKind::hop: ++n_hop; break;
        case LinkKind::zero: zero = true; break;
      }
      pot += ctx.slice_potential(c, j);
    }
    if (!zero) {
      const double w = std::pow(ctx.diag_weight(), static_cast<double>(n_diag)) *
                       std::pow(ctx.hop_weight(), static_cast<double>(n_hop)) *
                       std::exp(-params.delta * pot);
      out.partition += w;
      num += w * measurer.measure(c);
      ++out.n_positive;
    }
    // odometer
    int pos = 0;
    while (pos < n_digits) {
      if (++c.indices[pos] < grid.lambda) break;
      c.indices[pos] = 0;
      ++pos;
    }
    if (pos == n_digits) break;
  }
  out.expectation = num / out.partition;
  return out;
}

double brute_force_expectation(const TrotterParams& params,
                               const DigitizationGrid& grid,
                               const PotentialModel& model,
                               const ObservableSpec& observable,
                               std::int64_t max_terms) {
  return brute_force_detail(params, grid, model, observable, max_terms).expectation;
}

}  // namespace truncmc
