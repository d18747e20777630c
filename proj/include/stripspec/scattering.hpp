#pragma once

#include <iosfwd>
#include <vector>

#include "stripspec/assembly.hpp"
#include "stripspec/fit.hpp"
#include "stripspec/mesh.hpp"
#include "stripspec/profile.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

struct ModeDecay {
  int k = 0;
  Real rate = 0;       // fitted exponential decay rate of c_k(x)
  Real amplitude = 0;  // c_k extrapolated to x = 0
  bool below_noise = false;
};

// Discrete generalized eigenfunction U at the bottom of the continuous
// spectrum: (Delta + pi^2) U = 0 with U ~ (x + a) sin(pi y) far out. Solved on
// the truncated domain of length L with the modal boundary block on modes
// k >= 2 and a unit mode-1 flux at x = L.
struct ScatterField {
  Mesh mesh;
  Vector U;  // nodal values, zero on Dirichlet nodes

  Real L = 0;
  int K = 0;
  Real a_trace = 0;    // 2 int U(0,y) sin(pi y) dy at the interface
  Real a_fit = 0;      // intercept/slope of the mode-1 line fit
  Real slope_fit = 0;  // fitted mode-1 slope; 1 up to discretization error
  Real disc_tol = 0;   // combined tolerance, 3x the transverse eigenvalue proxy
  bool truncation_converged = true;  // |slope_fit - 1| <= 5%
  std::vector<ModeDecay> mode_rates;
};

// Mode-k line amplitude c_k(x_i) = 2 int U(x_i, y) sin(k pi y) dy at strip
// column i (exact quadrature of the P1 trace).
Real mode_amplitude(const Mesh& m, const Vector& U, int column, int k);

// Smallest eigenvalue of the 1-D transverse P1 pencil on the mesh's y-grid
// (Dirichlet ends). This is the discrete counterpart of pi^2: subtracting it
// instead of pi^2 keeps the discrete mode-1 exactly linear along the strip,
// where the O(h^2) mismatch would otherwise bend it into sinh(kappa x).
Real discrete_transverse_eigenvalue(const Mesh& m);

ScatterField solve_generalized_mode(const Profile& p, Real L, int I_cap, int I_strip,
                                    int J, int K, Real grade_kappa = 0.0);

// a(phi) from the interface trace; 0 when phi == 0 (no interface column).
Real extract_a_trace(const ScatterField& f);

// Least-squares line through the mode-1 amplitudes over strip columns in
// [x_lo, x_hi] (needs >= 8 columns). a = intercept/slope.
LineFit extract_a_linefit(const ScatterField& f, Real x_lo, Real x_hi);

// Fitted exponential decay of mode k over the given x stations; expected rate
// sqrt(k^2-1) pi. Signals below the 1e-13 floor report below_noise.
ModeDecay mode_coefficients(const ScatterField& f, int k,
                            const std::vector<Real>& x_samples);

// b = lim_{A->inf} ( int_{x+a < A} U^2 - A^3/6 ), the quadratic-moment defect
// of U in shifted coordinates. The field is normalized by slope_fit first;
// triangles straddling the cutoff are sliced exactly (P1^2 is quadratic).
Real compute_b_constant(const ScatterField& f, Real a, Real A_cut);

// CSV dump "x,y,U".
void write_field_csv(const Mesh& m, const Vector& field, std::ostream& os,
                     const char* value_name = "U");

}  // namespace stripspec
