#include "stripspec/profile.hpp"

#include <algorithm>
#include <cmath>

#include "stripspec/quadrature.hpp"

namespace stripspec {

Profile::Profile(ProfileKind kind, Real eps, std::vector<std::array<Real, 2>> pts)
    : kind_(kind), eps_(eps), points_(std::move(pts)) {
  if (!(eps_ >= 0) || !std::isfinite(eps_))
    throw ConfigError("profile: eps must be a nonnegative real");
  if (points_.size() < 2) throw ConfigError("profile: need at least two breakpoints");
  if (points_.front()[0] != 0.0 || points_.back()[0] != 1.0)
    throw ConfigError("profile: breakpoints must start at y=0 and end at y=1");
  for (size_t i = 0; i + 1 < points_.size(); ++i)
    if (!(points_[i][0] < points_[i + 1][0]))
      throw ConfigError("profile: breakpoint ordinates must be strictly increasing");
  for (const auto& pt : points_)
    if (!(pt[1] >= 0) || !std::isfinite(pt[1]))
      throw ConfigError("profile: phi must be nonnegative and finite");
}

Profile Profile::constant(Real c, Real eps) {
  if (!(c >= 0)) throw ConfigError("profile: constant value must be nonnegative");
  return Profile(ProfileKind::Constant, eps, {{0.0, c}, {1.0, c}});
}

Profile Profile::hat(Real eps) {
  return Profile(ProfileKind::Hat, eps, {{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}});
}

Profile Profile::slope(Real eps) {
  return Profile(ProfileKind::Slope, eps, {{0.0, 0.0}, {1.0, 0.5}});
}

Profile Profile::pwl(std::vector<std::array<Real, 2>> base_points, Real eps) {
  return Profile(ProfileKind::Pwl, eps, std::move(base_points));
}

std::string Profile::describe() const {
  char buf[64];
  switch (kind_) {
    case ProfileKind::Constant:
      std::snprintf(buf, sizeof buf, "constant(%g)x%g", points_[0][1], eps_);
      break;
    case ProfileKind::Hat:
      std::snprintf(buf, sizeof buf, "hat_eps_%g", eps_);
      break;
    case ProfileKind::Slope:
      std::snprintf(buf, sizeof buf, "slope_eps_%g", eps_);
      break;
    case ProfileKind::Pwl:
      std::snprintf(buf, sizeof buf, "pwl_%zu_eps_%g", points_.size(), eps_);
      break;
  }
  return buf;
}

Real eval_profile(const Profile& p, Real y) {
  if (!(y >= 0.0 && y <= 1.0)) throw ConfigError("eval_profile: y outside [0,1]");
  const auto& pts = p.base_points();
  // points_ ordinates are strictly increasing with pts.front()=0, pts.back()=1
  size_t hi = 1;
  while (hi + 1 < pts.size() && pts[hi][0] < y) ++hi;
  const Real y0 = pts[hi - 1][0], v0 = pts[hi - 1][1];
  const Real y1 = pts[hi][0], v1 = pts[hi][1];
  const Real t = (y - y0) / (y1 - y0);
  return p.eps() * (v0 + t * (v1 - v0));
}

Real profile_max(const Profile& p) {
  Real m = 0;
  for (const auto& pt : p.base_points()) m = std::max(m, pt[1]);
  return p.eps() * m;
}

Real profile_lipschitz(const Profile& p) {
  const auto& pts = p.base_points();
  Real lip = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    lip = std::max(lip, std::abs(pts[i + 1][1] - pts[i][1]) / (pts[i + 1][0] - pts[i][0]));
  return p.eps() * lip;
}

Real perturbation_coefficient(const Profile& p) {
  const auto& pts = p.base_points();
  Real acc = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    acc += gauss16(
        [&](Real y) {
          const Real s = std::sin(kPi * y);
          return eval_profile(p, y) * s * s;
        },
        pts[i][0], pts[i + 1][0]);
  }
  return 2.0 * acc;
}

}  // namespace stripspec
