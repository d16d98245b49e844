#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace truncmc {

// Periodic square lattice in d dimensions with L sites per direction.
// Sites are indexed row-major (last coordinate fastest).
struct LatticeGeometry {
  int dims = 0;
  int extent = 0;
  // [site * 2*dims + m]: m in [0, dims) forward neighbor along m,
  // m in [dims, 2*dims) backward neighbor along m - dims.
  std::vector<std::int32_t> neighbors;

  static LatticeGeometry make(int dims, int extent);

  int n_sites() const;
  int site_index(std::span<const int> coords) const;
  std::vector<int> site_coords(int site) const;
  std::int32_t neighbor(int site, int mu, bool forward) const {
    return neighbors[static_cast<std::size_t>(site) * 2 * dims + mu + (forward ? 0 : dims)];
  }
};

// Momentum q with components q_j = 2*pi*ell_j/L.
struct MomentumMode {
  std::vector<int> ell;
  std::vector<double> q;

  static MomentumMode from_integers(const LatticeGeometry& geom, std::span<const int> ell);
  std::string label() const;  // "ell_1,...,ell_d"
};

// sum over sites of (1/2) sum_mu (phi_{n+mu} - phi_n)^2 + (m^2/2) phi_n^2,
// periodic in every direction.
double lattice_potential(const LatticeGeometry& geom, double m_lat_squared,
                         std::span<const double> phi);

// |L^{-d/2} sum_n exp(-i q.n) phi_n|^2 for a real field phi.
double fourier_mode_power(const LatticeGeometry& geom, std::span<const double> phi,
                          const MomentumMode& mode);

// omega^2 = m^2 + 4 sum_mu sin^2(q_mu/2); throws when not positive
// (a massless zero mode has divergent width).
double free_dispersion(const MomentumMode& mode, double m_lat_squared);

// 1 / (2 omega tanh(beta omega / 2))
double thermal_width(const MomentumMode& mode, double m_lat_squared, double beta);

}  // namespace truncmc
