#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "truncmc/kernels.hpp"
#include "truncmc/rng.hpp"

using namespace truncmc;
namespace k = truncmc::kernels;

namespace {

struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

std::vector<std::int32_t> random_indices(Rng& rng, std::int64_t n, int lambda) {
  std::vector<std::int32_t> v(n);
  for (auto& x : v) x = static_cast<std::int32_t>(rng.below(lambda));
  return v;
}

const std::vector<std::int64_t> kSizes = {0, 1, 2, 3, 7, 8, 9, 15, 31, 64, 65, 1000, 4097};

}  // namespace

TEST_CASE("poly3_block_stats matches a long-double reference") {
  Rng rng(11);
  const double c[4] = {0.125, -0.5, 0.75, 0.03125};
  for (std::int64_t n : kSizes) {
    const auto idx = random_indices(rng, n, 2001);
    long double ref = 0.0;
    std::int32_t mn = std::numeric_limits<std::int32_t>::max();
    std::int32_t mx = std::numeric_limits<std::int32_t>::min();
    for (std::int32_t i : idx) {
      const long double x = -500.0L + 0.5L * i;
      ref += ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
      mn = std::min(mn, i);
      mx = std::max(mx, i);
    }
    const auto st = k::poly3_block_stats(idx.data(), n, c, -500.0, 0.5);
    CHECK(st.min == mn);
    CHECK(st.max == mx);
    CHECK(st.sum == doctest::Approx(static_cast<double>(ref)).epsilon(1e-11));
  }
}

TEST_CASE("integer block reductions are exact") {
  Rng rng(12);
  for (std::int64_t n : kSizes) {
    const auto v = random_indices(rng, n, 1 << 20);
    std::int64_t sum = 0;
    std::int32_t mn = std::numeric_limits<std::int32_t>::max();
    std::int32_t mx = std::numeric_limits<std::int32_t>::min();
    for (std::int32_t x : v) {
      sum += x;
      mn = std::min(mn, x);
      mx = std::max(mx, x);
    }
    const auto st = k::i32_block_stats(v.data(), n);
    CHECK(st.sum == sum);
    CHECK(st.min == mn);
    CHECK(st.max == mx);
    CHECK(k::i32_block_sum(v.data(), n) == sum);
  }
}

TEST_CASE("indexed_sum gathers the right entries") {
  Rng rng(13);
  std::vector<double> table(513);
  for (auto& t : table) t = rng.uniform() - 0.5;
  for (std::int64_t n : kSizes) {
    const auto idx = random_indices(rng, n, static_cast<int>(table.size()));
    long double ref = 0.0;
    for (std::int32_t i : idx) ref += table[i];
    CHECK(k::indexed_sum(idx.data(), n, table.data()) ==
          doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }
}

TEST_CASE("apply_givens rotates and preserves norms") {
  Rng rng(14);
  for (std::int64_t n : kSizes) {
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const double theta = 0.7345;
    const double c = std::cos(theta), s = std::sin(theta);

    double norm_before = 0.0;
    for (std::int64_t i = 0; i < n; ++i) norm_before += x[i] * x[i] + y[i] * y[i];

    std::vector<double> xr = x, yr = y;
    k::apply_givens(xr.data(), yr.data(), c, s, n);

    double norm_after = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      CHECK(xr[i] == doctest::Approx(c * x[i] - s * y[i]).epsilon(1e-13));
      CHECK(yr[i] == doctest::Approx(s * x[i] + c * y[i]).epsilon(1e-13));
      norm_after += xr[i] * xr[i] + yr[i] * yr[i];
    }
    if (n > 0)
      CHECK(norm_after == doctest::Approx(norm_before).epsilon(1e-13));
  }
}

TEST_CASE("scalar and simd variants agree") {
  if (!k::backend_supported(k::Backend::avx2)) {
    MESSAGE("avx2 not supported on this machine; equivalence check skipped");
    return;
  }
  BackendGuard guard;
  Rng rng(15);
  const double c[4] = {1.0, -0.25, 3.5, -0.007};
  std::vector<double> table(2048);
  for (auto& t : table) t = rng.normal();

  for (std::int64_t n : kSizes) {
    const auto idx = random_indices(rng, n, 2001);
    std::vector<double> gx(n), gy(n);
    for (auto& v : gx) v = rng.normal();
    for (auto& v : gy) v = rng.normal();

    k::set_backend(k::Backend::scalar);
    const auto p_s = k::poly3_block_stats(idx.data(), n, c, -300.0, 0.3);
    const auto i_s = k::i32_block_stats(idx.data(), n);
    const double t_s = k::indexed_sum(idx.data(), n, table.data());
    std::vector<double> gx_s = gx, gy_s = gy;
    k::apply_givens(gx_s.data(), gy_s.data(), 0.8, 0.6, n);

    k::set_backend(k::Backend::avx2);
    const auto p_v = k::poly3_block_stats(idx.data(), n, c, -300.0, 0.3);
    const auto i_v = k::i32_block_stats(idx.data(), n);
    const double t_v = k::indexed_sum(idx.data(), n, table.data());
    std::vector<double> gx_v = gx, gy_v = gy;
    k::apply_givens(gx_v.data(), gy_v.data(), 0.8, 0.6, n);

    CHECK(p_v.min == p_s.min);
    CHECK(p_v.max == p_s.max);
    CHECK(p_v.sum == doctest::Approx(p_s.sum).epsilon(1e-12));
    CHECK(i_v.sum == i_s.sum);
    CHECK(i_v.min == i_s.min);
    CHECK(i_v.max == i_s.max);
    CHECK(t_v == doctest::Approx(t_s).epsilon(1e-12));
    CHECK(k::i32_block_sum(idx.data(), n) == i_s.sum);
    for (std::int64_t i = 0; i < n; ++i) {
      CHECK(gx_v[i] == doctest::Approx(gx_s[i]).epsilon(1e-13));
      CHECK(gy_v[i] == doctest::Approx(gy_s[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("empty blocks are well defined") {
  const auto st = k::i32_block_stats(nullptr, 0);
  CHECK(st.sum == 0);
  CHECK(st.min == std::numeric_limits<std::int32_t>::max());
  CHECK(st.max == std::numeric_limits<std::int32_t>::min());
  const double c[4] = {1, 1, 1, 1};
  CHECK(k::poly3_block_stats(nullptr, 0, c, 0.0, 1.0).sum == 0.0);
}

TEST_CASE("unsupported backend selection is rejected") {
  if (k::backend_supported(k::Backend::avx2)) return;
  CHECK_THROWS_AS(k::set_backend(k::Backend::avx2), std::invalid_argument);
}
