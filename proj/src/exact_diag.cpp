#include "truncmc/exact_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "truncmc/kernels.hpp"

namespace truncmc {

TridiagonalHamiltonian build_hamiltonian(const DigitizationGrid& grid,
                                         const PotentialModel& model) {
  if (model.n_bos() != 1)
    throw std::invalid_argument(
        "exact diagonalization handles single-boson models only (n_bos = " +
        std::to_string(model.n_bos()) + ")");
  TridiagonalHamiltonian h;
  h.grid = grid;
  const double inv_a2 = 1.0 / (grid.a_dig * grid.a_dig);
  h.diag.resize(grid.lambda);
  for (int n = 0; n < grid.lambda; ++n) {
    const double x = grid.coordinate_unchecked(n);
    h.diag[n] = inv_a2 + model.energy(std::span<const double>(&x, 1));
  }
  h.offdiag.assign(grid.lambda - 1, -0.5 * inv_a2);
  return h;
}

namespace {

// Implicit QL with Wilkinson shifts for a symmetric tridiagonal matrix,
// following the classic Handbook/EISPACK scheme. d holds the diagonal on
// entry and eigenvalues on exit; e[i] couples i and i+1 (e[n-1] is scratch);
// z is a column-major n x n matrix whose columns get rotated in place.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e,
                    std::vector<double>& z, int n) {
  if (n <= 1) return;
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  auto col = [&](int c) { return z.data() + static_cast<std::size_t>(c) * n; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 50)
        throw EigensolverError("tridiagonal QL did not converge in 50 iterations", l);

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool collapsed = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          // rotation chain hit an exact zero; deflate and restart this sweep
          d[i + 1] -= p;
          e[m] = 0.0;
          collapsed = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        kernels::apply_givens(col(i), col(i + 1), c, s, n);
      }
      if (collapsed) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

}  // namespace

EigenSystem eigensystem(const TridiagonalHamiltonian& h) {
  const int n = static_cast<int>(h.diag.size());
  if (n < 1) throw std::invalid_argument("empty Hamiltonian");
  if (h.offdiag.size() + 1 != h.diag.size())
    throw std::invalid_argument("offdiagonal length must be diagonal length - 1");

  std::vector<double> d = h.diag;
  std::vector<double> e(n, 0.0);
  std::copy(h.offdiag.begin(), h.offdiag.end(), e.begin());

  std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;

  tridiagonal_ql(d, e, z, n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return d[a] < d[b]; });

  EigenSystem es;
  es.n = n;
  es.energies.resize(n);
  es.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    es.energies[k] = d[order[k]];
    std::copy_n(z.begin() + static_cast<std::size_t>(order[k]) * n, n,
                es.vectors.begin() + static_cast<std::size_t>(k) * n);
  }
  return es;
}

double thermal_expectation(const EigenSystem& es,
                           std::span<const double> observable_diag, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("beta must be positive, got " + std::to_string(beta));
  if (static_cast<int>(observable_diag.size()) != es.n)
    throw std::invalid_argument("observable length does not match Hilbert dimension");

  // Boltzmann weights with the ground energy subtracted first; diagonal
  // entries can be O(1/a^2) and beta * E would underflow otherwise.
  const double e0 = es.energies[0];
  double num = 0.0, den = 0.0;
  for (int k = 0; k < es.n; ++k) {
    const double w = std::exp(-beta * (es.energies[k] - e0));
    if (w == 0.0) break;  // energies ascend; the rest cannot contribute
    const std::span<const double> v = es.eigenvector(k);
    double ov = 0.0;
    for (int i = 0; i < es.n; ++i) ov += observable_diag[i] * v[i] * v[i];
    num += w * ov;
    den += w;
  }
  return num / den;
}

}  // namespace truncmc
