#include "truncmc/kernels.hpp"

#include <limits>

// Reference kernels. Kept free of manual vectorization so they stay an
// independent check on the SIMD variants.
namespace truncmc::kernels::detail {
namespace {

PolyBlockStats poly3_scalar(const std::int32_t* idx, std::int64_t count,
                            const double* c, double x0, double a) {
  double sum = 0.0;
  std::int32_t mn = std::numeric_limits<std::int32_t>::max();
  std::int32_t mx = std::numeric_limits<std::int32_t>::min();
  for (std::int64_t l = 0; l < count; ++l) {
    const std::int32_t n = idx[l];
    if (n < mn) mn = n;
    if (n > mx) mx = n;
    const double x = x0 + a * static_cast<double>(n);
    sum += ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  }
  return {sum, mn, mx};
}

I32BlockStats i32_stats_scalar(const std::int32_t* v, std::int64_t count) {
  std::int64_t sum = 0;
  std::int32_t mn = std::numeric_limits<std::int32_t>::max();
  std::int32_t mx = std::numeric_limits<std::int32_t>::min();
  for (std::int64_t l = 0; l < count; ++l) {
    const std::int32_t n = v[l];
    sum += n;
    if (n < mn) mn = n;
    if (n > mx) mx = n;
  }
  return {sum, mn, mx};
}

std::int64_t i32_sum_scalar(const std::int32_t* v, std::int64_t count) {
  std::int64_t sum = 0;
  for (std::int64_t l = 0; l < count; ++l) sum += v[l];
  return sum;
}

double indexed_sum_scalar(const std::int32_t* idx, std::int64_t count,
                          const double* table) {
  double sum = 0.0;
  for (std::int64_t l = 0; l < count; ++l) sum += table[idx[l]];
  return sum;
}

void apply_givens_scalar(double* x, double* y, double c, double s,
                         std::int64_t count) {
  for (std::int64_t k = 0; k < count; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      poly3_scalar, i32_stats_scalar, i32_sum_scalar,
      indexed_sum_scalar, apply_givens_scalar,
  };
  return table;
}

}  // namespace truncmc::kernels::detail
