#pragma once

#include <stdexcept>

namespace truncmc {

// Uniform grid of lambda points covering [-r, r]; x(n) = -r + n * a_dig with
// a_dig = 2r/(lambda-1). Indices are the canonical state everywhere in this
// library; coordinates are always recomputed from them.
struct DigitizationGrid {
  int lambda = 0;
  double r = 0.0;
  double a_dig = 0.0;

  static DigitizationGrid make(int lambda, double r);

  double coordinate(int n) const {
    if (n < 0 || n >= lambda)
      throw std::out_of_range("grid index out of range: " + std::to_string(n));
    return coordinate_unchecked(n);
  }

  double coordinate_unchecked(int n) const { return -r + n * a_dig; }

  int center_index() const { return lambda / 2; }
};

}  // namespace truncmc
