#pragma once

#include <vector>

#include "stripspec/types.hpp"

namespace stripspec {

struct LineFit {
  Real slope = 0;
  Real intercept = 0;
  Real r2 = 0;
};

// Least-squares line through (x_i, y_i). Requires >= 2 distinct abscissae.
LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y);

// Weighted least squares for y ~ c * t (single coefficient through origin).
Real fit_scaled(const std::vector<Real>& t, const std::vector<Real>& y,
                const std::vector<Real>& w);

// Slope of log|y| against log x, skipping y == 0 entries.
LineFit fit_loglog(const std::vector<Real>& x, const std::vector<Real>& y);

// Two-parameter model y ~ a + c * pow(x, p) for fixed exponent p; returns {a, c}.
std::pair<Real, Real> fit_const_plus_power(const std::vector<Real>& x,
                                           const std::vector<Real>& y, Real p);

}  // namespace stripspec
