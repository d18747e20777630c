#pragma once

#include <array>
#include <vector>

#include "stripspec/types.hpp"

namespace stripspec {

enum class ProfileKind { Constant, Hat, Slope, Pwl };

// Boundary profile phi : [0,1] -> [0,inf) describing the curved left end of
// the strip domain {0 < y < 1, -phi(y) < x < N}. Profiles are piecewise
// linear: the base shape is a breakpoint list and an overall scale eps
// multiplies it. Immutable after construction; safe for concurrent reads.
class Profile {
 public:
  static Profile constant(Real c, Real eps = 1.0);
  static Profile hat(Real eps = 1.0);    // 1/2 - |y - 1/2|
  static Profile slope(Real eps = 1.0);  // y/2
  static Profile pwl(std::vector<std::array<Real, 2>> base_points, Real eps = 1.0);

  ProfileKind kind() const { return kind_; }
  Real eps() const { return eps_; }
  const std::vector<std::array<Real, 2>>& base_points() const { return points_; }

  std::string describe() const;

 private:
  Profile(ProfileKind kind, Real eps, std::vector<std::array<Real, 2>> pts);

  ProfileKind kind_;
  Real eps_;
  std::vector<std::array<Real, 2>> points_;  // base breakpoints, eps not applied
};

// phi(y) including the eps scale. Exact on each linear segment.
// Throws ConfigError for y outside [0,1].
Real eval_profile(const Profile& p, Real y);

// Exact supremum of phi (attained at a breakpoint for piecewise-linear kinds).
Real profile_max(const Profile& p);

// sup |phi'| over segments.
Real profile_lipschitz(const Profile& p);

// I(phi) = 2 * int_0^1 phi(y) sin^2(pi y) dy, the first variation of the
// scattering phase at phi == 0: a(eps * phi) = eps * I(phi) + O(eps^2).
// Fixed 16-point Gauss rule per linear segment (integrand analytic there).
Real perturbation_coefficient(const Profile& p);

}  // namespace stripspec
