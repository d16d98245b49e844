#include "truncmc/potential.hpp"

#include <stdexcept>

namespace truncmc {

PotentialModel PotentialModel::quartic(double coupling, double m_squared) {
  PotentialModel m;
  m.kind_ = Kind::quartic;
  m.n_bos_ = 1;
  m.coupling_ = coupling;
  m.m_squared_ = m_squared;
  return m;
}

PotentialModel PotentialModel::lattice_scalar(double m_lat_squared, int dims,
                                              int extent) {
  PotentialModel m;
  m.kind_ = Kind::lattice_scalar;
  m.m_squared_ = m_lat_squared;
  m.geometry_ = LatticeGeometry::make(dims, extent);
  m.n_bos_ = m.geometry_->n_sites();
  return m;
}

const LatticeGeometry& PotentialModel::geometry() const {
  if (!geometry_)
    throw std::logic_error("quartic potential has no lattice geometry");
  return *geometry_;
}

void PotentialModel::check_length(std::size_t len) const {
  if (static_cast<int>(len) != n_bos_)
    throw std::invalid_argument("coordinate vector length " + std::to_string(len) +
                                " does not match model with n_bos = " +
                                std::to_string(n_bos_));
}

double PotentialModel::energy(std::span<const double> x) const {
  check_length(x.size());
  if (kind_ == Kind::quartic) {
    const double x2 = x[0] * x[0];
    return 0.25 * coupling_ * x2 * x2 + 0.5 * m_squared_ * x2;
  }
  return lattice_potential(*geometry_, m_squared_, x);
}

double PotentialModel::site_energy_delta(std::span<const double> x, int site,
                                         double x_new) const {
  check_length(x.size());
  if (site < 0 || site >= n_bos_)
    throw std::out_of_range("site index out of range");
  const double xo = x[site];
  if (kind_ == Kind::quartic) {
    const double o2 = xo * xo, n2 = x_new * x_new;
    return 0.25 * coupling_ * (n2 * n2 - o2 * o2) + 0.5 * m_squared_ * (n2 - o2);
  }
  // Terms containing phi_site: the mass term plus one gradient term per
  // neighbor list entry (forward links of the site itself and of each
  // backward neighbor). Links from a site to itself are identically zero.
  const LatticeGeometry& g = *geometry_;
  double dv = 0.5 * m_squared_ * (x_new * x_new - xo * xo);
  for (int m = 0; m < 2 * g.dims; ++m) {
    const int w = g.neighbors[static_cast<std::size_t>(site) * 2 * g.dims + m];
    if (w == site) continue;
    const double dn = x_new - x[w];
    const double dc = xo - x[w];
    dv += 0.5 * (dn * dn - dc * dc);
  }
  return dv;
}

std::string PotentialModel::describe() const {
  if (kind_ == Kind::quartic)
    return "quartic;coupling=" + std::to_string(coupling_) +
           ";m2=" + std::to_string(m_squared_);
  return "lattice;m2=" + std::to_string(m_squared_) +
         ";d=" + std::to_string(geometry_->dims) +
         ";L=" + std::to_string(geometry_->extent);
}

}  // namespace truncmc
