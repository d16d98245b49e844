#include "truncmc/kernels.hpp"

#if defined(TRUNCMC_HAVE_AVX2)

#include <immintrin.h>

#include <limits>

namespace truncmc::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline std::int32_t hmin(__m256i v) {
  __m128i m = _mm_min_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  m = _mm_min_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
  m = _mm_min_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(m);
}

inline std::int32_t hmax(__m256i v) {
  __m128i m = _mm_max_epi32(_mm256_castsi256_si128(v), _mm256_extracti128_si256(v, 1));
  m = _mm_max_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(1, 0, 3, 2)));
  m = _mm_max_epi32(m, _mm_shuffle_epi32(m, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(m);
}

inline std::int64_t hsum64(__m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i s = _mm_add_epi64(lo, hi);
  return _mm_cvtsi128_si64(s) + _mm_extract_epi64(s, 1);
}

PolyBlockStats poly3_avx2(const std::int32_t* idx, std::int64_t count,
                          const double* c, double x0, double a) {
  const __m256d vc0 = _mm256_set1_pd(c[0]);
  const __m256d vc1 = _mm256_set1_pd(c[1]);
  const __m256d vc2 = _mm256_set1_pd(c[2]);
  const __m256d vc3 = _mm256_set1_pd(c[3]);
  const __m256d vx0 = _mm256_set1_pd(x0);
  const __m256d va = _mm256_set1_pd(a);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256i vmin = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::max());
  __m256i vmax = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::min());

  std::int64_t l = 0;
  for (; l + 8 <= count; l += 8) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + l));
    vmin = _mm256_min_epi32(vmin, v);
    vmax = _mm256_max_epi32(vmax, v);
    const __m256d nlo = _mm256_cvtepi32_pd(_mm256_castsi256_si128(v));
    const __m256d nhi = _mm256_cvtepi32_pd(_mm256_extracti128_si256(v, 1));
    const __m256d xlo = _mm256_fmadd_pd(nlo, va, vx0);
    const __m256d xhi = _mm256_fmadd_pd(nhi, va, vx0);
    __m256d plo = _mm256_fmadd_pd(vc3, xlo, vc2);
    __m256d phi = _mm256_fmadd_pd(vc3, xhi, vc2);
    plo = _mm256_fmadd_pd(plo, xlo, vc1);
    phi = _mm256_fmadd_pd(phi, xhi, vc1);
    plo = _mm256_fmadd_pd(plo, xlo, vc0);
    phi = _mm256_fmadd_pd(phi, xhi, vc0);
    acc0 = _mm256_add_pd(acc0, plo);
    acc1 = _mm256_add_pd(acc1, phi);
  }

  double sum = hsum(_mm256_add_pd(acc0, acc1));
  std::int32_t mn = hmin(vmin);
  std::int32_t mx = hmax(vmax);
  for (; l < count; ++l) {
    const std::int32_t n = idx[l];
    if (n < mn) mn = n;
    if (n > mx) mx = n;
    const double x = x0 + a * static_cast<double>(n);
    sum += ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  }
  return {sum, mn, mx};
}

I32BlockStats i32_stats_avx2(const std::int32_t* v, std::int64_t count) {
  __m256i acc = _mm256_setzero_si256();
  __m256i vmin = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::max());
  __m256i vmax = _mm256_set1_epi32(std::numeric_limits<std::int32_t>::min());
  std::int64_t l = 0;
  for (; l + 8 <= count; l += 8) {
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + l));
    vmin = _mm256_min_epi32(vmin, w);
    vmax = _mm256_max_epi32(vmax, w);
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(w)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(w, 1)));
  }
  std::int64_t sum = hsum64(acc);
  std::int32_t mn = hmin(vmin);
  std::int32_t mx = hmax(vmax);
  for (; l < count; ++l) {
    const std::int32_t n = v[l];
    sum += n;
    if (n < mn) mn = n;
    if (n > mx) mx = n;
  }
  return {sum, mn, mx};
}

std::int64_t i32_sum_avx2(const std::int32_t* v, std::int64_t count) {
  __m256i acc = _mm256_setzero_si256();
  std::int64_t l = 0;
  for (; l + 8 <= count; l += 8) {
    const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + l));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_castsi256_si128(w)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepi32_epi64(_mm256_extracti128_si256(w, 1)));
  }
  std::int64_t sum = hsum64(acc);
  for (; l < count; ++l) sum += v[l];
  return sum;
}

double indexed_sum_avx2(const std::int32_t* idx, std::int64_t count,
                        const double* table) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::int64_t l = 0;
  for (; l + 8 <= count; l += 8) {
    const __m128i ilo = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + l));
    const __m128i ihi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + l + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_i32gather_pd(table, ilo, 8));
    acc1 = _mm256_add_pd(acc1, _mm256_i32gather_pd(table, ihi, 8));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; l < count; ++l) sum += table[idx[l]];
  return sum;
}

void apply_givens_avx2(double* x, double* y, double c, double s,
                       std::int64_t count) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::int64_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d xv = _mm256_loadu_pd(x + k);
    const __m256d yv = _mm256_loadu_pd(y + k);
    _mm256_storeu_pd(x + k, _mm256_fmsub_pd(vc, xv, _mm256_mul_pd(vs, yv)));
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(vs, xv, _mm256_mul_pd(vc, yv)));
  }
  for (; k < count; ++k) {
    const double xk = x[k];
    const double yk = y[k];
    x[k] = c * xk - s * yk;
    y[k] = s * xk + c * yk;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      poly3_avx2, i32_stats_avx2, i32_sum_avx2,
      indexed_sum_avx2, apply_givens_avx2,
  };
  return table;
}

}  // namespace truncmc::kernels::detail

#endif  // TRUNCMC_HAVE_AVX2
