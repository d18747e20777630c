#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripspec/features.hpp"

using namespace stripspec;

namespace {

double oracle_height(const Profile& p, double t) {
  // direct sublevel-set measure by dense sampling, independent of the exact
  // interval arithmetic in height_function
  const int n = 400000;
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (eval_profile(p, (i + 0.5) / n) > t) ++count;
  return double(count) / n;
}

}  // namespace

TEST_CASE("height function of hat and slope") {
  const double eps = 0.4;
  const Profile hat = Profile::hat(eps), slope = Profile::slope(eps);
  for (double x : {-0.19, -0.15, -0.1, -0.05, -0.01}) {
    const double expected = 1.0 + 2.0 * x / eps;
    CHECK(height_function(hat, 8.0, x) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(height_function(slope, 8.0, x) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(height_function(hat, 8.0, x) ==
          doctest::Approx(oracle_height(hat, -x)).epsilon(3e-4));
    CHECK(height_function(slope, 8.0, x) ==
          doctest::Approx(oracle_height(slope, -x)).epsilon(3e-4));
  }
  CHECK(height_function(hat, 8.0, 0.5) == 1.0);
  CHECK(height_function(hat, 8.0, 8.0) == 0.0);
  CHECK(height_function(hat, 8.0, -0.2) == 0.0);
  CHECK(height_function(hat, 8.0, -5.0) == 0.0);
}

TEST_CASE("maximum of the rectangle ground state") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 8.0, 24);
  const auto pairs = compute_eigenpairs(p0, 8.0, 1, res);
  const Mesh mesh = build_strip_mesh(p0, 8.0, res.I_cap, res.I_strip, res.J, 0.0);
  const MaxLocation mx = locate_maximum(pairs[0].field, mesh);
  CHECK(mx.value > 0.0);
  CHECK(mx.x == doctest::Approx(4.0).epsilon(0.02));
  CHECK(mx.y == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("locate_maximum rejects boundary fields") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 4.0, 8);
  const Mesh mesh = build_strip_mesh(p0, 4.0, res.I_cap, res.I_strip, res.J, 0.0);
  Vector ramp(mesh.num_nodes());
  for (int n = 0; n < mesh.num_nodes(); ++n) ramp[n] = mesh.x[n];
  CHECK_THROWS_AS(locate_maximum(ramp, mesh), NumericError);
}

TEST_CASE("nodal curve of the rectangle second mode") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 8.0, 32);
  const auto pairs = compute_eigenpairs(p0, 8.0, 2, res);
  const Mesh mesh = build_strip_mesh(p0, 8.0, res.I_cap, res.I_strip, res.J, 0.0);
  const NodalCurve nc = nodal_curve(pairs[1].field, mesh);
  CHECK(nc.band_points > 0);
  CHECK(nc.x_min == doctest::Approx(4.0).epsilon(2e-3));
  CHECK(nc.x_max == doctest::Approx(4.0).epsilon(2e-3));
  // the m=2 field must separate left and right halves
  const int left = mesh.strip_node(mesh.I_strip / 8, mesh.J / 2);
  const int right = mesh.strip_node(mesh.I_strip - mesh.I_strip / 8, mesh.J / 2);
  CHECK(pairs[1].field[left] * pairs[1].field[right] < 0.0);
  // positive ground state has no interior sign change
  CHECK_THROWS_AS(nodal_curve(pairs[0].field, mesh), NumericError);
}

TEST_CASE("hat nodal curve is y-symmetric within h") {
  const Profile hat = Profile::hat(1.0);
  const Resolution res = auto_resolution(hat, 8.0, 32);
  const auto pairs = compute_eigenpairs(hat, 8.0, 2, res);
  const Mesh mesh = build_strip_mesh(hat, 8.0, res.I_cap, res.I_strip, res.J, 0.0);
  const double a_hint = 0.33;
  const double h = 8.0 / res.I_strip;
  std::vector<double> xs;
  for (int j = 2; j <= mesh.J - 2; ++j) {
    const double xc = row_crossing_x(pairs[1].field, mesh, j, (8.0 - a_hint) / 2.0);
    if (std::isfinite(xc)) xs.push_back(xc);
  }
  REQUIRE(xs.size() == size_t(mesh.J - 3));
  for (size_t k = 0; k < xs.size() / 2; ++k)
    CHECK(std::abs(xs[k] - xs[xs.size() - 1 - k]) < h);
}

TEST_CASE("figure2 experiment at desk scale") {
  // moderate resolution keeps this in unit-test budget; the acceptance suite
  // reruns it at the pinned settings
  const Resolution base{0, 0, 16, 0.0};
  const Figure2Report rep = figure2_experiment(0.5, 12.0, base, 3, 8.0, 16);
  CHECK(rep.height_max_diff <= 1e-14);
  CHECK(rep.a_hat > rep.a_slope);
  CHECK(rep.signs_consistent);
  CHECK(rep.nodal_ratio > 0.5);
  CHECK(rep.nodal_ratio < 1.5);
}
