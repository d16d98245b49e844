#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "truncmc/exact_diag.hpp"
#include "truncmc/rng.hpp"

using namespace truncmc;

namespace {

std::vector<double> potential_diag(const DigitizationGrid& grid,
                                   const PotentialModel& model) {
  std::vector<double> v(grid.lambda);
  for (int n = 0; n < grid.lambda; ++n) {
    const double x = grid.coordinate_unchecked(n);
    v[n] = model.energy(std::span<const double>(&x, 1));
  }
  return v;
}

std::string sig4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double residual_bound(const TridiagonalHamiltonian& h) {
  // infinity norm of H
  double norm = 0.0;
  const int n = static_cast<int>(h.diag.size());
  for (int i = 0; i < n; ++i) {
    double row = std::fabs(h.diag[i]);
    if (i > 0) row += std::fabs(h.offdiag[i - 1]);
    if (i + 1 < n) row += std::fabs(h.offdiag[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

void check_contract(const TridiagonalHamiltonian& h, const EigenSystem& es,
                    double tol_scale = 1e-10) {
  const int n = es.n;
  const double norm = residual_bound(h);
  for (int k = 0; k < n; ++k) {
    const auto v = es.eigenvector(k);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      double hv = h.diag[i] * v[i];
      if (i > 0) hv += h.offdiag[i - 1] * v[i - 1];
      if (i + 1 < n) hv += h.offdiag[i] * v[i + 1];
      const double r = hv - es.energies[k] * v[i];
      res += r * r;
    }
    CHECK(std::sqrt(res) <= tol_scale * norm);
  }
  for (int k = 1; k < n; ++k) CHECK(es.energies[k] >= es.energies[k - 1]);
}

}  // namespace

TEST_CASE("hamiltonian entries follow the digitized kinetic term") {
  SUBCASE("free particle, three points") {
    const DigitizationGrid g = DigitizationGrid::make(3, 1.0);
    const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(0.0, 0.0));
    CHECK(h.diag == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(h.offdiag == std::vector<double>{-0.5, -0.5});
  }
  SUBCASE("free particle, two points") {
    const DigitizationGrid g = DigitizationGrid::make(2, 1.0);
    const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(0.0, 0.0));
    CHECK(h.diag == std::vector<double>{0.25, 0.25});
    CHECK(h.offdiag == std::vector<double>{-0.125});
  }
  SUBCASE("quartic potential on the diagonal") {
    const DigitizationGrid g = DigitizationGrid::make(3, 1.0);
    const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(1.0, 1.0));
    CHECK(h.diag[0] == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(h.diag[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.diag[2] == doctest::Approx(1.75).epsilon(1e-15));
  }
  SUBCASE("multi-boson models are rejected") {
    const DigitizationGrid g = DigitizationGrid::make(3, 1.0);
    CHECK_THROWS_AS(build_hamiltonian(g, PotentialModel::lattice_scalar(1.0, 2, 4)),
                    std::invalid_argument);
  }
}

TEST_CASE("two-point free spectrum is analytic") {
  DigitizationGrid g = DigitizationGrid::make(2, 1.0);
  g.a_dig = 1.0;  // H = [[1, -1/2], [-1/2, 1]]
  g.r = 0.5;
  const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(0.0, 0.0));
  const EigenSystem es = eigensystem(h);
  CHECK(es.energies[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(es.energies[1] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("eigensystem agrees with a dense solver and satisfies its contract") {
  Rng rng(41);
  for (int rep = 0; rep < 8; ++rep) {
    const int lambda = 5 + static_cast<int>(rng.below(120));
    const double r = 1.0 + 5.0 * rng.uniform();
    const double m2 = (rep % 2 == 0) ? 1.0 : -1.0;
    const double lam = 0.2 + 2.0 * rng.uniform();
    const DigitizationGrid g = DigitizationGrid::make(lambda, r);
    const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(lam, m2));
    const EigenSystem es = eigensystem(h);
    check_contract(h, es);

    // independent dense symmetric eigensolver on the same matrix
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(lambda, lambda);
    for (int i = 0; i < lambda; ++i) {
      dense(i, i) = h.diag[i];
      if (i + 1 < lambda) {
        dense(i, i + 1) = h.offdiag[i];
        dense(i + 1, i) = h.offdiag[i];
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(dense);
    REQUIRE(oracle.info() == Eigen::Success);
    const double scale = residual_bound(h);
    for (int k = 0; k < lambda; ++k)
      CHECK(es.energies[k] ==
            doctest::Approx(oracle.eigenvalues()[k]).epsilon(1e-12).scale(scale));
  }
}

TEST_CASE("orthonormality of eigenvectors") {
  const DigitizationGrid g = DigitizationGrid::make(301, 12.0);
  const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(1.0, -1.0));
  const EigenSystem es = eigensystem(h);
  for (int a = 0; a < es.n; a += 7) {
    for (int b = 0; b <= a; b += 7) {
      const auto va = es.eigenvector(a);
      const auto vb = es.eigenvector(b);
      double dot = 0.0;
      for (int i = 0; i < es.n; ++i) dot += va[i] * vb[i];
      CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
    }
  }
}

TEST_CASE("spectral decomposition reconstructs the matrix") {
  const DigitizationGrid g = DigitizationGrid::make(41, 2.0);
  const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(1.0, 1.0));
  const EigenSystem es = eigensystem(h);
  const int n = es.n;
  // reconstruct sum_k E_k v_k v_k^T and compare entrywise
  std::vector<double> recon(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    const auto v = es.eigenvector(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        recon[static_cast<std::size_t>(i) * n + j] += es.energies[k] * v[i] * v[j];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double expect = 0.0;
      if (i == j) expect = h.diag[i];
      else if (std::abs(i - j) == 1) expect = h.offdiag[std::min(i, j)];
      CHECK(recon[static_cast<std::size_t>(i) * n + j] ==
            doctest::Approx(expect).epsilon(1e-9).scale(residual_bound(h)));
    }
  }
}

TEST_CASE("harmonic oscillator ground state approaches 1/2") {
  const double a = 0.05, r = 10.0;
  const int lambda = static_cast<int>(std::lround(2.0 * r / a)) + 1;
  const DigitizationGrid g = DigitizationGrid::make(lambda, r);
  const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(0.0, 1.0));
  const EigenSystem es = eigensystem(h);
  CHECK(std::fabs(es.energies[0] - 0.5) < 1e-3);
}

TEST_CASE("eigenvectors of even potentials carry definite parity") {
  for (double m2 : {1.0, -1.0}) {
    const DigitizationGrid g = DigitizationGrid::make(41, 2.0);
    const TridiagonalHamiltonian h = build_hamiltonian(g, PotentialModel::quartic(1.0, m2));
    const EigenSystem es = eigensystem(h);
    for (int k = 0; k < es.n; ++k) {
      const auto v = es.eigenvector(k);
      double xexp = 0.0;
      for (int i = 0; i < es.n; ++i)
        xexp += g.coordinate_unchecked(i) * v[i] * v[i];
      CHECK(std::fabs(xexp) <= 1e-10);
    }
  }
}

TEST_CASE("thermal expectation basics") {
  const DigitizationGrid g = DigitizationGrid::make(101, 5.0);
  const PotentialModel model = PotentialModel::quartic(1.0, 1.0);
  const TridiagonalHamiltonian h = build_hamiltonian(g, model);
  const EigenSystem es = eigensystem(h);

  SUBCASE("identity observable normalizes to one") {
    const std::vector<double> ones(es.n, 1.0);
    for (double beta : {0.1, 1.0, 10.0, 100.0})
      CHECK(thermal_expectation(es, ones, beta) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("invalid beta") {
    const std::vector<double> ones(es.n, 1.0);
    CHECK_THROWS_AS(thermal_expectation(es, ones, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(thermal_expectation(es, ones, -1.0), std::invalid_argument);
  }
  SUBCASE("shift invariance under a constant added to all energies") {
    const std::vector<double> obs = potential_diag(g, model);
    Rng rng(42);
    const double base = thermal_expectation(es, obs, 7.5);
    for (int rep = 0; rep < 5; ++rep) {
      EigenSystem shifted = es;
      const double c = 2000.0 * (rng.uniform() - 0.5);
      for (double& e : shifted.energies) e += c;
      CHECK(thermal_expectation(shifted, obs, 7.5) ==
            doctest::Approx(base).epsilon(1e-12));
    }
  }
  SUBCASE("large beta converges to the ground-state matrix element") {
    const std::vector<double> obs = potential_diag(g, model);
    const auto v0 = es.eigenvector(0);
    double ground = 0.0;
    for (int i = 0; i < es.n; ++i) ground += obs[i] * v0[i] * v0[i];
    // gap is O(1), so beta = 100 suppresses excited states below 1e-30
    CHECK(thermal_expectation(es, obs, 100.0) ==
          doctest::Approx(ground).epsilon(1e-12));
  }
}

TEST_CASE("table of reference thermal averages at beta = 10") {
  // four-significant-digit values, grid r = 500 * a_dig (lambda = 1001);
  // the acceptance suite repeats this at lambda = 2001 with the halved-r check
  const struct {
    double a_dig, m2, expect;
  } rows[] = {
      {0.3, 1.0, 0.2618},  {0.5, 1.0, 0.2539},  {0.7, 1.0, 0.2414},
      {0.3, -1.0, -0.06354}, {0.5, -1.0, -0.06633}, {0.7, -1.0, -0.07024},
  };
  for (const auto& row : rows) {
    const DigitizationGrid g = DigitizationGrid::make(1001, 500.0 * row.a_dig);
    const PotentialModel model = PotentialModel::quartic(1.0, row.m2);
    const EigenSystem es = eigensystem(build_hamiltonian(g, model));
    const double v = thermal_expectation(es, potential_diag(g, model), 10.0);
    CHECK(sig4(v) == sig4(row.expect));
  }
}
