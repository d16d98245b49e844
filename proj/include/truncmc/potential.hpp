#pragma once

#include <optional>
#include <span>
#include <string>

#include "truncmc/lattice.hpp"

namespace truncmc {

// Potential energy V over a coordinate vector of length n_bos. Two kinds:
//  - quartic single boson: (coupling/4) x^4 + (m^2/2) x^2
//  - lattice scalar: gradient + mass terms on a periodic lattice, n_bos = L^d
// Evaluation is a pure function of the coordinate vector.
class PotentialModel {
 public:
  enum class Kind { quartic, lattice_scalar };

  static PotentialModel quartic(double coupling, double m_squared);
  static PotentialModel lattice_scalar(double m_lat_squared, int dims, int extent);

  Kind kind() const { return kind_; }
  int n_bos() const { return n_bos_; }
  double coupling() const { return coupling_; }
  double m_squared() const { return m_squared_; }
  const LatticeGeometry& geometry() const;

  double energy(std::span<const double> x) const;

  // V(x with x[site] replaced by x_new) - V(x), computed from the terms that
  // contain x[site] only. Must agree with the full-evaluation difference.
  double site_energy_delta(std::span<const double> x, int site, double x_new) const;

  std::string describe() const;

 private:
  PotentialModel() = default;
  void check_length(std::size_t len) const;

  Kind kind_ = Kind::quartic;
  int n_bos_ = 1;
  double coupling_ = 0.0;
  double m_squared_ = 0.0;
  std::optional<LatticeGeometry> geometry_;
};

}  // namespace truncmc
