#pragma once

#include <optional>
#include <vector>

#include "stripspec/mesh.hpp"
#include "stripspec/profile.hpp"
#include "stripspec/sparse_solve.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

// Base mesh resolution; ladder level l scales all three counts by 2^l.
struct Resolution {
  int I_cap = 0;
  int I_strip = 0;
  int J = 0;
  Real grade_kappa = 0;

  Resolution refined(int level) const {
    return {I_cap << level, I_strip << level, J << level, grade_kappa};
  }
};

// Deterministic defaults: vertical cells of size 1/J, cap cells about square,
// strip cells stretched in x by x_stretch (the fields vary slowly in x).
Resolution auto_resolution(const Profile& p, Real length, int J, Real grade_kappa = 0.0,
                           Real x_stretch = 4.0);

struct EigenField {
  Real mu = 0;
  Vector field;  // mesh-sized, zero on the boundary, M-normalized, sign-fixed
  Real residual = 0;
};

// Lowest m_count Dirichlet eigenpairs on the strip of length N. Sign fixed so
// the value at the node nearest (N/(2m), 1/2) is nonnegative (the first
// antinode of mode m).
std::vector<EigenField> compute_eigenpairs(const Profile& p, Real N, int m_count,
                                           const Resolution& res);

struct RichResult {
  Real value = 0;
  Real error_estimate = 0;
  Real observed_order = 0;
  bool monotone = true;  // false: raw finest value returned, estimate inflated
};

// Extrapolate a geometric (ratio-2) ladder of >= 3 values. The order is
// fitted from the last three levels, then a two-level step with that order.
RichResult richardson(const std::vector<Real>& ladder_values);

RichResult richardson_eigenvalue(const Profile& p, Real N, int m,
                                 const Resolution& base, int levels);

// Eigenvalue + eigenfield ladder: per-level pairs, extrapolated values, and
// fields extrapolated nodewise onto the coarse mesh (levels nest bitwise).
struct LadderStudy {
  Mesh coarse_mesh;
  std::vector<RichResult> mu;         // per mode
  std::vector<Vector> field;          // per mode, on coarse_mesh nodes
  std::vector<std::vector<Real>> mu_raw;  // [mode][level]
  std::vector<int> level_J;
};

LadderStudy eig_ladder_study(const Profile& p, Real N, int m_count,
                             const Resolution& base, int levels);

struct AExtraction {
  std::vector<Real> N_list;
  std::vector<Real> a_per_N;  // m pi / sqrt(mu_m - pi^2) - N
  Real a_extrapolated = 0;    // limit of the model a + c N^-2
};

AExtraction extract_a_from_eigs(const Profile& p, int m, const std::vector<Real>& N_list,
                                const Resolution& base, int levels);

struct CompositeGap {
  Real sup_far = 0;     // sup over x > 3 log N of |s*u - model|
  Real sup_near = 0;    // sup |s*u| minus sup |model| over x <= 3 log N
  Real scale_used = 0;  // least-squares scale s from the far region
};

// Gap between an eigenfield and the composite approximant
// sin(m pi (x+a)/(N+a)) sin(pi y). Throws NumericError when no node lies
// beyond x = 3 log N.
CompositeGap composite_error(const Vector& field, const Mesh& m_mesh, Real N, int m,
                             Real a);

struct ExpansionRow {
  Real N = 0;
  Real mu = 0;        // extrapolated
  Real err_est = 0;
  Real model = 0;     // pi^2 + m^2 pi^2 / (N+a)^2
  Real residual = 0;  // mu - model
  bool noise_dominated = false;
  Real sup_far = 0;
  Real sup_near = 0;
};

struct ExpansionReport {
  int m = 1;
  Real a_used = 0;
  std::string a_source;  // "scattering" or "eigenfit"
  std::vector<ExpansionRow> rows;
  Real slope = 0;  // log-log slope of |residual| over surviving rows
  Real slope_r2 = 0;
  bool slope_ok = false;  // >= 3 surviving rows and r2 >= 0.9
  int rows_surviving = 0;
  Real c5 = 0;  // fitted coefficient of (N+a)^-5
  std::optional<Real> lambda5_predicted;  // -4 m^4 pi^4 b when b is supplied
};

// Residuals r(N) = mu_m - pi^2 - m^2 pi^2/(N+a)^2 over an N sweep with
// Richardson-extrapolated eigenvalues. Rows with |r| < 3 * err_est are
// flagged noise-dominated and excluded from the slope and coefficient fits.
// When with_fields is set the composite-approximant sup gaps are filled in.
ExpansionReport expansion_residuals(const Profile& p, int m,
                                    const std::vector<Real>& N_list, Real a,
                                    std::optional<Real> b, const Resolution& base,
                                    int levels, bool with_fields = false);

}  // namespace stripspec
