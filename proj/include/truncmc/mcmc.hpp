#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "truncmc/digitization.hpp"
#include "truncmc/potential.hpp"
#include "truncmc/rng.hpp"
#include "truncmc/series.hpp"

namespace truncmc {

// Trotter discretization of Tr exp(-beta H) into k slices of step delta.
// Construction validates the positivity of the diagonal hop weight,
// 1 - n_bos * delta / a_dig^2 > 0, which makes every link weight nonnegative.
struct TrotterParams {
  double delta = 0.0;
  double beta = 0.0;  // always k * delta exactly
  int k = 0;
  int b_max = 0;  // largest cluster size, in [1, k]

  static TrotterParams make(double beta, double delta, int b_max,
                            const DigitizationGrid& grid, const PotentialModel& model);
  static TrotterParams from_step_count(double delta, int k, int b_max,
                                       const DigitizationGrid& grid,
                                       const PotentialModel& model);
};

// k x n_bos array of grid indices; the chain state. Stored boson-major so a
// boson's worldline is contiguous in memory.
struct PathConfiguration {
  int k = 0;
  int n_bos = 0;
  std::vector<std::int32_t> indices;

  static PathConfiguration centered(const DigitizationGrid& grid, int k, int n_bos);

  std::int32_t at(int j, int i) const {
    return indices[static_cast<std::size_t>(i) * k + j];
  }
  std::int32_t& at(int j, int i) {
    return indices[static_cast<std::size_t>(i) * k + j];
  }
  std::span<const std::int32_t> worldline(int i) const {
    return {indices.data() + static_cast<std::size_t>(i) * k,
            static_cast<std::size_t>(k)};
  }
  std::span<std::int32_t> worldline(int i) {
    return {indices.data() + static_cast<std::size_t>(i) * k,
            static_cast<std::size_t>(k)};
  }
};

// True when all entries are in range and every adjacent slice pair (mod k) is
// equal or differs by one step in exactly one coordinate.
bool is_representable(const PathConfiguration& config, const DigitizationGrid& grid);

// Precomputed tables shared by updates, measurements, action evaluation, and
// the brute-force oracle.
class UpdateContext {
 public:
  UpdateContext(const TrotterParams& params, const DigitizationGrid& grid,
                const PotentialModel& model);

  const TrotterParams& params() const { return params_; }
  const DigitizationGrid& grid() const { return grid_; }
  const PotentialModel& model() const { return model_; }
  double diag_weight() const { return diag_weight_; }
  double hop_weight() const { return hop_weight_; }
  const std::vector<double>& coordinate_table() const { return coord_table_; }

  // Potential energy of slice j.
  double slice_potential(const PathConfiguration& config, int j) const;

  struct BlockEval {
    double delta_v = 0.0;  // sum over the block of V(shifted) - V(current)
    std::int32_t min = 0;  // min/max of boson i's indices in the block
    std::int32_t max = 0;
  };
  // Evaluates a +-1 shift of boson i over the contiguous slice range
  // [j0, j0 + count) in one pass (kernels module).
  BlockEval shift_block_eval(const PathConfiguration& config, int i, int j0,
                             int count, int sign) const;
  double shift_site_delta_v(const PathConfiguration& config, int i, int j,
                            int sign) const;

  std::string fingerprint() const;

 private:
  TrotterParams params_;
  DigitizationGrid grid_;
  PotentialModel model_;
  double diag_weight_ = 0.0;
  double hop_weight_ = 0.0;
  std::vector<double> coord_table_;     // x(n)
  std::vector<double> coord_sq_table_;  // x(n)^2
  std::vector<double> v_table_;         // quartic: V(x(n))
  double shift_poly_[2][4] = {};        // quartic dV cubic in x; [0]: s=-1, [1]: s=+1
  // lattice shift coefficients per sign: dV = kappa + alpha*n_self + gamma*sum(n_nbr)
  double lat_kappa_[2] = {};
  double lat_alpha_[2] = {};
  double lat_gamma_[2] = {};
};

// <na| exp(-Delta p^2/2) |nb> exp(-Delta V(x(nb))) to first order in Delta:
// diagonal weight for na == nb, hop weight for unit neighbors, zero otherwise.
double link_weight(std::span<const std::int32_t> na, std::span<const std::int32_t> nb,
                   const TrotterParams& params, const DigitizationGrid& grid,
                   const PotentialModel& model);

// S = -sum_j log w(n^(j) -> n^(j+1 mod k)); +infinity when any link weight is
// zero (the configuration is not representable as chain state).
double action(const PathConfiguration& config, const UpdateContext& ctx);
double action(const PathConfiguration& config, const TrotterParams& params,
              const DigitizationGrid& grid, const PotentialModel& model);

struct ProposalEval {
  bool auto_rejected = false;
  double hop_ratio = 1.0;       // product of new/old boundary hop factors
  double potential_delta = 0.0; // sum over shifted slices of V(new) - V(old)
};

// Single-site move: n_i^(j) -> n_i^(j) + sign.
ProposalEval eval_single_site(const PathConfiguration& config, int j, int i,
                              int sign, const UpdateContext& ctx);
// Cluster move: shift n_i^(l) by sign for l = j, ..., j+b (mod k). Blocks that
// cover every slice are a rigid translation of boson i's worldline and leave
// all hop factors unchanged.
ProposalEval eval_cluster(const PathConfiguration& config, int b, int j, int i,
                          int sign, const UpdateContext& ctx);

// min(1, hop_ratio * exp(-delta * potential_delta)); 0 when auto-rejected.
double acceptance_probability(const ProposalEval& ev, const UpdateContext& ctx);
// delta * potential_delta - log(hop_ratio); +infinity when auto-rejected.
double proposal_delta_action(const ProposalEval& ev, const UpdateContext& ctx);

void apply_single_site(PathConfiguration& config, int j, int i, int sign);
void apply_cluster(PathConfiguration& config, int b, int j, int i, int sign);

struct UpdateTallies {
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t auto_rejected = 0;

  double acceptance_rate() const {
    return proposed ? static_cast<double>(accepted) / proposed : 0.0;
  }
};

// One Markov chain with its own generator state; two streams with identical
// seeds produce identical trajectories.
struct ChainStream {
  PathConfiguration config;
  Rng rng;
  std::uint64_t sweep_count = 0;
  UpdateTallies single_site;
  UpdateTallies cluster;

  ChainStream(const UpdateContext& ctx, std::uint64_t seed);
};

// k * n_bos single-site proposals in lexicographic (j, i) order.
void metropolis_sweep(ChainStream& stream, const UpdateContext& ctx);
// k * n_bos cluster proposals at uniformly random (b, j, i).
void cluster_sweep(ChainStream& stream, const UpdateContext& ctx);

struct ObservableSpec {
  enum class Kind { potential, mean_coordinate, mean_coordinate_squared, mode_power };

  Kind kind = Kind::potential;
  std::vector<int> ell;  // mode_power only: integer mode numbers

  std::string name() const;
  // Accepts "V", "x", "x2", "mode_power:l1,...,ld" (mode_power needs a lattice model).
  static ObservableSpec parse(const std::string& name, const PotentialModel& model);
};

struct Schedule {
  std::int64_t n_sweeps = 0;
  int measure_every = 1;
};

struct ChainResult {
  std::vector<ObservableSeries> series;
  UpdateTallies single_site;
  UpdateTallies cluster;
  std::uint64_t seed = 0;
  int stream_id = 0;
};

// Runs one chain from the all-center start. b_max == 1 runs plain single-site
// sweeps; otherwise sweeps are random-site cluster proposals. Observables are
// measured once per recorded sweep, averaged over all k slices.
ChainResult run_chain(const TrotterParams& params, const DigitizationGrid& grid,
                      const PotentialModel& model, const Schedule& schedule,
                      std::span<const ObservableSpec> observables,
                      std::uint64_t seed, int stream_id = 0);

struct BruteForceResult {
  double expectation = 0.0;
  double partition = 0.0;
  std::int64_t n_positive = 0;  // configurations with nonzero weight
};

// Exhaustive sum over all lambda^(k*n_bos) configurations; refuses when the
// enumeration would exceed max_terms.
BruteForceResult brute_force_detail(const TrotterParams& params,
                                    const DigitizationGrid& grid,
                                    const PotentialModel& model,
                                    const ObservableSpec& observable,
                                    std::int64_t max_terms = 10'000'000);
double brute_force_expectation(const TrotterParams& params,
                               const DigitizationGrid& grid,
                               const PotentialModel& model,
                               const ObservableSpec& observable,
                               std::int64_t max_terms = 10'000'000);

}  // namespace truncmc
