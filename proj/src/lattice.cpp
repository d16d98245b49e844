#include "truncmc/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace truncmc {

LatticeGeometry LatticeGeometry::make(int dims, int extent) {
  if (dims < 1) throw std::invalid_argument("lattice dims must be >= 1");
  if (extent < 1) throw std::invalid_argument("lattice extent must be >= 1");
  LatticeGeometry g;
  g.dims = dims;
  g.extent = extent;
  const int n = g.n_sites();
  g.neighbors.resize(static_cast<std::size_t>(n) * 2 * dims);
  std::vector<int> coords(dims);
  for (int s = 0; s < n; ++s) {
    int rem = s;
    for (int mu = dims - 1; mu >= 0; --mu) {
      coords[mu] = rem % extent;
      rem /= extent;
    }
    for (int mu = 0; mu < dims; ++mu) {
      const int c = coords[mu];
      coords[mu] = (c + 1) % extent;
      g.neighbors[static_cast<std::size_t>(s) * 2 * dims + mu] =
          static_cast<std::int32_t>(g.site_index(coords));
      coords[mu] = (c - 1 + extent) % extent;
      g.neighbors[static_cast<std::size_t>(s) * 2 * dims + dims + mu] =
          static_cast<std::int32_t>(g.site_index(coords));
      coords[mu] = c;
    }
  }
  return g;
}

int LatticeGeometry::n_sites() const {
  int n = 1;
  for (int mu = 0; mu < dims; ++mu) n *= extent;
  return n;
}

int LatticeGeometry::site_index(std::span<const int> coords) const {
  int s = 0;
  for (int mu = 0; mu < dims; ++mu) s = s * extent + coords[mu];
  return s;
}

std::vector<int> LatticeGeometry::site_coords(int site) const {
  std::vector<int> coords(dims);
  for (int mu = dims - 1; mu >= 0; --mu) {
    coords[mu] = site % extent;
    site /= extent;
  }
  return coords;
}

MomentumMode MomentumMode::from_integers(const LatticeGeometry& geom,
                                         std::span<const int> ell) {
  if (static_cast<int>(ell.size()) != geom.dims)
    throw std::invalid_argument("momentum mode needs one integer per dimension");
  MomentumMode m;
  m.ell.assign(ell.begin(), ell.end());
  m.q.resize(ell.size());
  for (std::size_t j = 0; j < ell.size(); ++j)
    m.q[j] = 2.0 * std::numbers::pi * ell[j] / geom.extent;
  return m;
}

std::string MomentumMode::label() const {
  std::string s;
  for (std::size_t j = 0; j < ell.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(ell[j]);
  }
  return s;
}

double lattice_potential(const LatticeGeometry& geom, double m_lat_squared,
                         std::span<const double> phi) {
  const int n = geom.n_sites();
  if (static_cast<int>(phi.size()) != n)
    throw std::invalid_argument("field length " + std::to_string(phi.size()) +
                                " does not match lattice with " + std::to_string(n) +
                                " sites");
  double v = 0.0;
  for (int s = 0; s < n; ++s) {
    const double p = phi[s];
    for (int mu = 0; mu < geom.dims; ++mu) {
      const double d = phi[geom.neighbor(s, mu, true)] - p;
      v += 0.5 * d * d;
    }
    v += 0.5 * m_lat_squared * p * p;
  }
  return v;
}

double fourier_mode_power(const LatticeGeometry& geom, std::span<const double> phi,
                          const MomentumMode& mode) {
  const int n = geom.n_sites();
  if (static_cast<int>(phi.size()) != n)
    throw std::invalid_argument("field length does not match lattice");
  double re = 0.0, im = 0.0;
  for (int s = 0; s < n; ++s) {
    const std::vector<int> coords = geom.site_coords(s);
    double phase = 0.0;
    for (int mu = 0; mu < geom.dims; ++mu) phase += mode.q[mu] * coords[mu];
    re += std::cos(phase) * phi[s];
    im -= std::sin(phase) * phi[s];
  }
  return (re * re + im * im) / n;
}

double free_dispersion(const MomentumMode& mode, double m_lat_squared) {
  double w2 = m_lat_squared;
  for (double q : mode.q) {
    const double s = std::sin(0.5 * q);
    w2 += 4.0 * s * s;
  }
  if (!(w2 > 0.0))
    throw std::invalid_argument(
        "mode frequency vanishes (omega^2 = " + std::to_string(w2) +
        "); a massless zero mode has no finite width");
  return w2;
}

double thermal_width(const MomentumMode& mode, double m_lat_squared, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double omega = std::sqrt(free_dispersion(mode, m_lat_squared));
  return 1.0 / (2.0 * omega * std::tanh(0.5 * beta * omega));
}

}  // namespace truncmc
