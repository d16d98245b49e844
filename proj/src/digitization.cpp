#include "truncmc/digitization.hpp"

#include <string>

namespace truncmc {

DigitizationGrid DigitizationGrid::make(int lambda, double r) {
  if (lambda < 2)
    throw std::invalid_argument("grid needs at least 2 points, got lambda = " +
                                std::to_string(lambda));
  if (!(r > 0.0))
    throw std::invalid_argument("grid cutoff r must be positive, got r = " +
                                std::to_string(r));
  DigitizationGrid g;
  g.lambda = lambda;
  g.r = r;
  g.a_dig = 2.0 * r / (lambda - 1);
  return g;
}

}  // namespace truncmc
