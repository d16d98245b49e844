#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "truncmc/digitization.hpp"
#include "truncmc/potential.hpp"

namespace truncmc {

// Single-boson Hamiltonian p^2/2 + V(x) in the truncated coordinate basis:
// symmetric tridiagonal with diag 1/a^2 + V(x(n)) and offdiag -1/(2 a^2).
struct TridiagonalHamiltonian {
  std::vector<double> diag;
  std::vector<double> offdiag;  // length lambda - 1
  DigitizationGrid grid;
};

TridiagonalHamiltonian build_hamiltonian(const DigitizationGrid& grid,
                                         const PotentialModel& model);

class EigensolverError : public std::runtime_error {
 public:
  EigensolverError(const std::string& msg, int index)
      : std::runtime_error(msg + " (eigenvalue index " + std::to_string(index) + ")"),
        index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

struct EigenSystem {
  int n = 0;
  std::vector<double> energies;  // ascending
  std::vector<double> vectors;   // column-major; column k is eigenvector k

  std::span<const double> eigenvector(int k) const {
    return {vectors.data() + static_cast<std::size_t>(k) * n,
            static_cast<std::size_t>(n)};
  }
};

// Full spectrum via implicit QL with shifts; eigenvector rotations go through
// the kernels module. Throws EigensolverError when an eigenvalue does not
// converge within the iteration budget.
EigenSystem eigensystem(const TridiagonalHamiltonian& h);

// Thermal average of a coordinate-diagonal observable:
//   sum_k <v_k|O|v_k> exp(-beta (E_k - E_0)) / sum_k exp(-beta (E_k - E_0))
double thermal_expectation(const EigenSystem& es,
                           std::span<const double> observable_diag, double beta);

}  // namespace truncmc
