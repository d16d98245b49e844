#include "truncmc/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace truncmc::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(TRUNCMC_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table();
    case Backend::avx2:
#if defined(TRUNCMC_HAVE_AVX2)
      return &detail::avx2_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend pick_default() {
  if (const char* env = std::getenv("TRUNCMC_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

struct Active {
  Backend backend;
  const detail::KernelTable* table;
  Active() : backend(pick_default()), table(table_for(backend)) {}
};

Active& active() {
  static Active a;
  return a;
}

}  // namespace

Backend active_backend() { return active().backend; }

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_has_avx2();
}

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument(std::string("kernel backend not supported on this CPU: ") +
                                backend_name(b));
  active().backend = b;
  active().table = table_for(b);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

PolyBlockStats poly3_block_stats(const std::int32_t* idx, std::int64_t count,
                                 const double c[4], double x0, double a) {
  return active().table->poly3_block_stats(idx, count, c, x0, a);
}

I32BlockStats i32_block_stats(const std::int32_t* v, std::int64_t count) {
  return active().table->i32_block_stats(v, count);
}

std::int64_t i32_block_sum(const std::int32_t* v, std::int64_t count) {
  return active().table->i32_block_sum(v, count);
}

double indexed_sum(const std::int32_t* idx, std::int64_t count, const double* table) {
  return active().table->indexed_sum(idx, count, table);
}

void apply_givens(double* x, double* y, double c, double s, std::int64_t count) {
  active().table->apply_givens(x, y, c, s, count);
}

}  // namespace truncmc::kernels
