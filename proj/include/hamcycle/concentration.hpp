#pragma once

#include <stdexcept>

namespace hamcycle {

namespace detail {
inline void check_nb_params(double r, double p) {
  if (!(r >= 1.0) || !(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("negative binomial parameters need r >= 1 and 0 < p <= 1");
  }
}
}  // namespace detail

// E[Y] = r/p for Y ~ NB(r, p), the index of the r-th success.
inline double geom_mean_bound(double r, double p) {
  detail::check_nb_params(r, p);
  return r / p;
}

// Pr[Y >= 2r/p] <= 1/r by Chebyshev; returns the threshold 2r/p.
inline double nb_tail_threshold(double r, double p) {
  detail::check_nb_params(r, p);
  return 2.0 * r / p;
}

}  // namespace hamcycle
