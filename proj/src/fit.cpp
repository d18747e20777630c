#include "stripspec/fit.hpp"

#include <cmath>

namespace stripspec {

LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size() || x.size() < 2) throw NumericError("fit_line: need >= 2 points");
  const Real n = Real(x.size());
  Real sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const Real mx = sx / n, my = sy / n;
  Real sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw NumericError("fit_line: abscissae coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

Real fit_scaled(const std::vector<Real>& t, const std::vector<Real>& y,
                const std::vector<Real>& w) {
  Real num = 0, den = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    num += w[i] * t[i] * y[i];
    den += w[i] * t[i] * t[i];
  }
  if (den == 0) throw NumericError("fit_scaled: degenerate design");
  return num / den;
}

LineFit fit_loglog(const std::vector<Real>& x, const std::vector<Real>& y) {
  std::vector<Real> lx, ly;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(std::abs(y[i])));
  }
  return fit_line(lx, ly);
}

std::pair<Real, Real> fit_const_plus_power(const std::vector<Real>& x,
                                           const std::vector<Real>& y, Real p) {
  // Normal equations for y ~ a + c * x^p.
  const Real n = Real(x.size());
  if (x.size() != y.size() || x.size() < 2)
    throw NumericError("fit_const_plus_power: need >= 2 points");
  Real st = 0, stt = 0, sy = 0, sty = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const Real t = std::pow(x[i], p);
    st += t;
    stt += t * t;
    sy += y[i];
    sty += t * y[i];
  }
  const Real det = n * stt - st * st;
  if (det == 0) throw NumericError("fit_const_plus_power: degenerate design");
  const Real c = (n * sty - st * sy) / det;
  const Real a = (sy - c * st) / n;
  return {a, c};
}

}  // namespace stripspec
