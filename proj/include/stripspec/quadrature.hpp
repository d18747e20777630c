#pragma once

#include <cmath>

#include "stripspec/types.hpp"

namespace stripspec {

// 16-point Gauss-Legendre rule on [-1,1].
struct Gauss16 {
  static const std::array<Real, 16> nodes;
  static const std::array<Real, 16> weights;
};

// Integrate f over [a,b] with the fixed 16-point rule.
template <typename F>
Real gauss16(F&& f, Real a, Real b) {
  const Real mid = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  Real acc = 0;
  for (int q = 0; q < 16; ++q)
    acc += Gauss16::weights[q] * f(mid + half * Gauss16::nodes[q]);
  return acc * half;
}

// int_a^b sin(w y) dy
inline Real int_sin(Real a, Real b, Real w) {
  return (std::cos(w * a) - std::cos(w * b)) / w;
}

// int_a^b y sin(w y) dy
inline Real int_y_sin(Real a, Real b, Real w) {
  return (std::sin(w * b) - w * b * std::cos(w * b) - std::sin(w * a) +
          w * a * std::cos(w * a)) /
         (w * w);
}

// Exact integral over [y0,y1] of the descending P1 hat ((y1-y)/h) times sin(w y).
inline Real int_hat_down_sin(Real y0, Real y1, Real w) {
  const Real h = y1 - y0;
  return (y1 * int_sin(y0, y1, w) - int_y_sin(y0, y1, w)) / h;
}

// Exact integral over [y0,y1] of the ascending P1 hat ((y-y0)/h) times sin(w y).
inline Real int_hat_up_sin(Real y0, Real y1, Real w) {
  const Real h = y1 - y0;
  return (int_y_sin(y0, y1, w) - y0 * int_sin(y0, y1, w)) / h;
}

}  // namespace stripspec
