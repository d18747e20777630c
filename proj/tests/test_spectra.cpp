#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripspec/scattering.hpp"
#include "stripspec/spectra.hpp"

using namespace stripspec;

namespace {

double rect_mu(double N, int m) { return kPiSq * (1.0 + m * m / (N * N)); }

}  // namespace

TEST_CASE("rectangle eigenpairs across N") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 8.0, 32);
  const auto pairs = compute_eigenpairs(p0, 8.0, 2, res);
  CHECK(pairs[0].mu == doctest::Approx(rect_mu(8, 1)).epsilon(3e-3));
  CHECK(pairs[1].mu == doctest::Approx(rect_mu(8, 2)).epsilon(3e-3));
  CHECK(pairs[0].mu >= rect_mu(8, 1));
  CHECK(pairs[1].mu >= rect_mu(8, 2));
}

TEST_CASE("richardson on a clean h^2 + h^4 ladder") {
  std::vector<double> v;
  for (double h : {0.4, 0.2, 0.1}) v.push_back(1.0 + h * h + 0.3 * h * h * h * h);
  const RichResult r = richardson(v);
  CHECK(r.monotone);
  CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(r.value - 1.0) <= r.error_estimate);
  // the two-stage elimination is exact on a pure h^2 + h^4 model
  CHECK(std::abs(r.value - 1.0) < 1e-12);
}

TEST_CASE("richardson flags a non-monotone ladder") {
  const RichResult r = richardson({1.0, 1.2, 1.1});
  CHECK_FALSE(r.monotone);
  CHECK(r.value == 1.1);
  CHECK(r.error_estimate >= 0.1);
}

TEST_CASE("richardson_eigenvalue hits the exact rectangle spectrum") {
  const Profile p0 = Profile::constant(0.0);
  for (double N : {1.0, 4.0}) {
    const Resolution base = auto_resolution(p0, N, 32);
    const RichResult r = richardson_eigenvalue(p0, N, 1, base, 3);
    CHECK(r.monotone);
    CHECK(r.observed_order > 1.7);
    CHECK(r.observed_order < 2.2);
    const double exact = rect_mu(N, 1);
    CHECK(std::abs(r.value - exact) / exact < 1e-7);
    if (N == 4.0) CHECK(std::abs(r.value - exact) / exact < 1e-8);
    CHECK(std::abs(r.value - exact) <= r.error_estimate);
  }
}

TEST_CASE("extract_a_from_eigs") {
  SUBCASE("constant A = 0.3 converges to A") {
    const Profile p = Profile::constant(0.3);
    const Resolution base{0, 0, 16, 0.0};
    const AExtraction ax =
        extract_a_from_eigs(p, 1, {4.0, 6.0, 8.0}, base, 3);
    for (double aN : ax.a_per_N) CHECK(aN == doctest::Approx(0.3).epsilon(7e-2));
    CHECK(ax.a_per_N.back() == doctest::Approx(0.3).epsilon(2e-2));
    CHECK(ax.a_extrapolated == doctest::Approx(0.3).epsilon(2e-2));
  }
  SUBCASE("phi == 0 gives a = 0") {
    const Resolution base{0, 0, 16, 0.0};
    const AExtraction ax =
        extract_a_from_eigs(Profile::constant(0.0), 1, {4.0, 6.0, 8.0}, base, 3);
    CHECK(std::abs(ax.a_extrapolated) < 2e-4);
  }
}

TEST_CASE("composite gap on the rectangle") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 8.0, 32);
  const auto pairs = compute_eigenpairs(p0, 8.0, 1, res);
  const Mesh mesh = build_strip_mesh(p0, 8.0, res.I_cap, res.I_strip, res.J, 0.0);
  const CompositeGap g = composite_error(pairs[0].field, mesh, 8.0, 1, 0.0);
  // model is exact in the continuum; the gap is pure discretization error
  CHECK(g.sup_far < 5e-3);
  CHECK(std::abs(g.sup_near) < 5e-3);
  // the least-squares scale matches the M-normalization up to O(1) factors
  CHECK(g.scale_used > 0.1);
  CHECK(g.scale_used < 10.0);
}

TEST_CASE("composite gap demands a far region") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution res = auto_resolution(p0, 2.0, 8);
  const auto pairs = compute_eigenpairs(p0, 2.0, 1, res);
  const Mesh mesh = build_strip_mesh(p0, 2.0, res.I_cap, res.I_strip, res.J, 0.0);
  // 3 log 2 > 2: every node is "near"
  CHECK_THROWS_AS(composite_error(pairs[0].field, mesh, 2.0, 1, 0.0), NumericError);
}

TEST_CASE("eig_ladder_study extrapolates fields nodewise") {
  const Profile p0 = Profile::constant(0.0);
  const Resolution base = auto_resolution(p0, 4.0, 8);
  const LadderStudy st = eig_ladder_study(p0, 4.0, 1, base, 3);
  CHECK(st.mu[0].value == doctest::Approx(rect_mu(4, 1)).epsilon(1e-6));  // two-stage ladder
  // extrapolated field should beat the finest raw field against the exact
  // separable eigenfunction (L2-normalized limit: 2/sqrt(N) amplitude)
  const Mesh& cm = st.coarse_mesh;
  const double amp = 2.0 / std::sqrt(4.0);
  double err = 0;
  for (int n = 0; n < cm.num_nodes(); ++n) {
    const double exact =
        amp * std::sin(kPi * cm.x[n] / 4.0) * std::sin(kPi * cm.y[n]);
    err = std::max(err, std::abs(st.field[0][n] - exact));
  }
  CHECK(err < 2e-4);
}

TEST_CASE("expansion residuals: constant profile is pure noise") {
  const Profile p = Profile::constant(0.3);
  const Resolution base{0, 0, 16, 0.0};
  // exact a: the shifted rectangle reproduces the model identically
  ExpansionReport rep =
      expansion_residuals(p, 1, {4.0, 5.0, 6.0, 8.0}, 0.3, std::nullopt, base, 3);
  for (const auto& row : rep.rows) {
    CHECK(std::abs(row.residual) < 1e-5);
    CHECK(row.noise_dominated);  // the model is exact; residual is pure noise
  }
  CHECK(rep.rows_surviving == 0);
}

TEST_CASE("expansion residuals: wrong a shows slope -3") {
  const Profile p = Profile::constant(0.25);
  const Resolution base{0, 0, 16, 0.0};
  // a off by +0.1 injects a 2 m^2 pi^2 (0.1)/N^3 residual
  ExpansionReport rep =
      expansion_residuals(p, 1, {5.0, 7.0, 10.0, 14.0}, 0.35, std::nullopt, base, 3);
  CHECK(rep.rows_surviving >= 3);
  CHECK(rep.slope == doctest::Approx(-3.0).epsilon(0.12));
  CHECK(rep.slope > -4.0);  // the deliberate corruption must fail a -4 gate
}

TEST_CASE("domain monotonicity bracket for the hat strip") {
  const Profile hat = Profile::hat(1.0);
  const Resolution base = auto_resolution(hat, 8.0, 16);
  const RichResult r = richardson_eigenvalue(hat, 8.0, 1, base, 3);
  CHECK(r.value >= kPiSq + kPiSq / ((8.0 + 0.5) * (8.0 + 0.5)) - 1e-6);
  CHECK(r.value <= kPiSq + kPiSq / 64.0 + 1e-6);
}

TEST_CASE("simplicity gaps at N = 8") {
  const Profile hat = Profile::hat(1.0);
  const Resolution res = auto_resolution(hat, 8.0, 24);
  const auto pairs = compute_eigenpairs(hat, 8.0, 3, res);
  const double tol_sum = 3e-9;
  CHECK(pairs[1].mu - pairs[0].mu > 10.0 * tol_sum);
  CHECK(pairs[2].mu - pairs[1].mu > 10.0 * tol_sum);
}
