#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "stripspec/mesh.hpp"
#include "stripspec/profile.hpp"
#include "stripspec/spectra.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

struct MaxLocation {
  Real x = 0;
  Real y = 0;
  Real value = 0;
};

// Maximum of a (sign-normalized positive) first eigenfield: nodal argmax
// refined by a least-squares paraboloid over the node and its mesh neighbors,
// clamped to the patch hull. Throws NumericError when the argmax node touches
// the boundary.
MaxLocation locate_maximum(const Vector& field, const Mesh& m);

struct NodalCurve {
  // Zero crossings per triangle, linear interpolation: segments (x1,y1,x2,y2).
  std::vector<std::array<Real, 4>> segments;
  // Extremes over crossing points in the interior band y in (2/J, 1 - 2/J).
  Real x_min = 0;
  Real x_max = 0;
  int band_points = 0;
};

// Nodal set of the second eigenfield from strict sign changes along triangle
// edges. Throws NumericError when the field does not change sign.
NodalCurve nodal_curve(const Vector& field, const Mesh& m);

// Crossing abscissa of the field along strip row j, choosing the sign change
// nearest x_hint when several are present. NaN when the row has none.
Real row_crossing_x(const Vector& field, const Mesh& m, int j, Real x_hint);

// Height function: length of {y : -phi(y) < x} at abscissa x. Exact for
// piecewise-linear profiles; 1 inside the rectangle, 0 outside the projection.
Real height_function(const Profile& p, Real N, Real x);

struct Figure2Report {
  Real eps = 0;
  Real N = 0;
  Real a_hat = 0;
  Real a_slope = 0;
  Real height_max_diff = 0;         // max |h_hat - h_slope| over 101 samples
  Real nodal_x_hat = 0;             // nodal crossing at y = 1/2
  Real nodal_x_slope = 0;
  Real max_x_hat = 0;               // maximum point of u1
  Real max_x_slope = 0;
  Real shift_predicted = 0;         // (a_hat - a_slope)/2
  Real nodal_shift_measured = 0;    // nodal_x_slope - nodal_x_hat
  Real max_shift_measured = 0;
  Real nodal_ratio = 0;             // measured / predicted
  Real max_ratio = 0;
  bool signs_consistent = false;
};

// Two domains with identical height functions but different scattering
// phases: runs the scattering and eigenpair pipelines for hat(eps) and
// slope(eps) and compares the measured nodal/maximum shifts against the
// prediction (a_hat - a_slope)/2.
Figure2Report figure2_experiment(Real eps, Real N, const Resolution& base, int levels,
                                 Real L_scatter, int J_scatter);

// CSV segment list "x1,y1,x2,y2".
void write_nodal_csv(const NodalCurve& c, std::ostream& os);

}  // namespace stripspec
