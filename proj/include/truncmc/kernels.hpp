#pragma once

#include <cstdint>

// Data-parallel inner-loop kernels with a scalar reference implementation and
// an AVX2 variant selected at runtime. The active backend can be forced with
// set_backend() or the TRUNCMC_KERNELS environment variable ("scalar"/"avx2");
// by default the best supported backend is used. Scalar and SIMD variants are
// equivalence-tested against each other in the test suite.
namespace truncmc::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend b);
void set_backend(Backend b);  // throws std::invalid_argument if unsupported here
const char* backend_name(Backend b);

struct PolyBlockStats {
  double sum;        // sum of the cubic over the block
  std::int32_t min;  // min of idx (INT32_MAX when count == 0)
  std::int32_t max;  // max of idx (INT32_MIN when count == 0)
};

struct I32BlockStats {
  std::int64_t sum;
  std::int32_t min;  // INT32_MAX when count == 0
  std::int32_t max;  // INT32_MIN when count == 0
};

// One pass over idx[0..count): accumulates p(x0 + a*idx[l]) for the cubic
// p(x) = c[0] + c[1] x + c[2] x^2 + c[3] x^3 and tracks min/max of idx.
PolyBlockStats poly3_block_stats(const std::int32_t* idx, std::int64_t count,
                                 const double c[4], double x0, double a);

I32BlockStats i32_block_stats(const std::int32_t* v, std::int64_t count);

std::int64_t i32_block_sum(const std::int32_t* v, std::int64_t count);

// sum of table[idx[l]] over the block; idx entries must be valid table offsets
double indexed_sum(const std::int32_t* idx, std::int64_t count, const double* table);

// In-place plane rotation of two vectors:
//   x[k] <- c*x[k] - s*y[k]
//   y[k] <- s*x[k] + c*y[k]
void apply_givens(double* x, double* y, double c, double s, std::int64_t count);

namespace detail {

struct KernelTable {
  PolyBlockStats (*poly3_block_stats)(const std::int32_t*, std::int64_t,
                                      const double*, double, double);
  I32BlockStats (*i32_block_stats)(const std::int32_t*, std::int64_t);
  std::int64_t (*i32_block_sum)(const std::int32_t*, std::int64_t);
  double (*indexed_sum)(const std::int32_t*, std::int64_t, const double*);
  void (*apply_givens)(double*, double*, double, double, std::int64_t);
};

const KernelTable& scalar_table();
#if defined(TRUNCMC_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace detail

}  // namespace truncmc::kernels
