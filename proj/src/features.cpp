#include "stripspec/features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "stripspec/scattering.hpp"

namespace stripspec {

MaxLocation locate_maximum(const Vector& field, const Mesh& m) {
  int best = 0;
  for (int n = 1; n < m.num_nodes(); ++n)
    if (field[n] > field[best]) best = n;
  if (m.tag[best] != NodeTag::Interior && m.tag[best] != NodeTag::Interface)
    throw NumericError("locate_maximum: maximum sits on a boundary patch");

  // Neighborhood patch: the argmax node plus every node sharing a triangle.
  std::set<int> patch{best};
  for (const auto& tr : m.tris)
    if (tr[0] == best || tr[1] == best || tr[2] == best)
      patch.insert(tr.begin(), tr.end());
  if (patch.size() < 6)
    throw NumericError("locate_maximum: patch too small for a quadratic fit");

  // Least-squares paraboloid c0 + c1 dx + c2 dy + c3 dx^2 + c4 dx dy + c5 dy^2.
  const Real cx = m.x[best], cy = m.y[best];
  Matrix A(patch.size(), 6);
  Vector rhs(patch.size());
  Real xlo = cx, xhi = cx, ylo = cy, yhi = cy;
  int r = 0;
  for (int n : patch) {
    const Real dx = m.x[n] - cx, dy = m.y[n] - cy;
    A.row(r) << 1.0, dx, dy, dx * dx, dx * dy, dy * dy;
    rhs[r++] = field[n];
    xlo = std::min(xlo, m.x[n]);
    xhi = std::max(xhi, m.x[n]);
    ylo = std::min(ylo, m.y[n]);
    yhi = std::max(yhi, m.y[n]);
  }
  const Vector c = A.colPivHouseholderQr().solve(rhs);

  MaxLocation loc{cx, cy, field[best]};
  Matrix H(2, 2);
  H << 2.0 * c[3], c[4], c[4], 2.0 * c[5];
  if (H.determinant() > 0 && H(0, 0) < 0) {  // genuine interior maximum
    const Eigen::Vector2d crit = H.fullPivLu().solve(Eigen::Vector2d(-c[1], -c[2]));
    loc.x = std::clamp(cx + crit[0], xlo, xhi);
    loc.y = std::clamp(cy + crit[1], ylo, yhi);
    const Real dx = loc.x - cx, dy = loc.y - cy;
    loc.value = c[0] + c[1] * dx + c[2] * dy + c[3] * dx * dx + c[4] * dx * dy +
                c[5] * dy * dy;
  }
  return loc;
}

NodalCurve nodal_curve(const Vector& field, const Mesh& m) {
  NodalCurve curve;
  const Real band = 2.0 / Real(m.J);
  Real x_min = std::numeric_limits<Real>::infinity();
  Real x_max = -std::numeric_limits<Real>::infinity();

  for (const auto& tr : m.tris) {
    Real px[2], py[2];
    int np = 0;
    for (int e = 0; e < 3 && np < 2; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      if ((field[a] > 0 && field[b] < 0) || (field[a] < 0 && field[b] > 0)) {
        const Real t = field[a] / (field[a] - field[b]);
        px[np] = m.x[a] + t * (m.x[b] - m.x[a]);
        py[np] = m.y[a] + t * (m.y[b] - m.y[a]);
        ++np;
      }
    }
    if (np == 2) {
      curve.segments.push_back({px[0], py[0], px[1], py[1]});
      for (int q = 0; q < 2; ++q) {
        if (py[q] > band && py[q] < 1.0 - band) {
          x_min = std::min(x_min, px[q]);
          x_max = std::max(x_max, px[q]);
          ++curve.band_points;
        }
      }
    }
  }
  if (curve.segments.empty())
    throw NumericError("nodal_curve: field has no strict sign change");
  curve.x_min = x_min;
  curve.x_max = x_max;
  return curve;
}

Real row_crossing_x(const Vector& field, const Mesh& m, int j, Real x_hint) {
  Real best = std::numeric_limits<Real>::quiet_NaN();
  Real best_d = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < m.I_strip; ++i) {
    const int a = m.strip_node(i, j), b = m.strip_node(i + 1, j);
    if ((field[a] > 0 && field[b] < 0) || (field[a] < 0 && field[b] > 0)) {
      const Real t = field[a] / (field[a] - field[b]);
      const Real xc = m.x[a] + t * (m.x[b] - m.x[a]);
      if (std::abs(xc - x_hint) < best_d) {
        best_d = std::abs(xc - x_hint);
        best = xc;
      }
    }
  }
  return best;
}

Real height_function(const Profile& p, Real N, Real x) {
  if (x >= N) return 0.0;
  if (x >= 0.0) return 1.0;
  const Real t = -x;  // measure {y : phi(y) > t}
  if (t >= profile_max(p)) return 0.0;
  const auto& pts = p.base_points();
  const Real eps = p.eps();
  Real len = 0;
  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    const Real y0 = pts[s][0], y1 = pts[s + 1][0];
    const Real v0 = eps * pts[s][1], v1 = eps * pts[s + 1][1];
    if (v0 <= t && v1 <= t) continue;
    if (v0 > t && v1 > t) {
      len += y1 - y0;
      continue;
    }
    const Real yc = y0 + (t - v0) / (v1 - v0) * (y1 - y0);
    len += (v0 > t) ? (yc - y0) : (y1 - yc);
  }
  return len;
}

Figure2Report figure2_experiment(Real eps, Real N, const Resolution& base, int levels,
                                 Real L_scatter, int J_scatter) {
  if (!(eps > 0 && eps <= 1)) throw ConfigError("figure2_experiment: need eps in (0,1]");

  Figure2Report rep;
  rep.eps = eps;
  rep.N = N;
  const Profile hat = Profile::hat(eps);
  const Profile slope = Profile::slope(eps);

  // Height functions agree exactly; sample across the full projection.
  for (int k = 0; k <= 100; ++k) {
    const Real x = -eps / 2.0 + Real(k) / 100.0 * (N + eps / 2.0);
    rep.height_max_diff = std::max(
        rep.height_max_diff, std::abs(height_function(hat, N, x) - height_function(slope, N, x)));
  }

  // Scattering phases with a small mesh ladder for the extrapolated a.
  auto scatter_a = [&](const Profile& p) {
    std::vector<Real> as;
    for (int l = 0; l < 3; ++l) {
      const int J = J_scatter << l;
      const Resolution r = auto_resolution(p, L_scatter, J, 0.0, /*x_stretch=*/1.0);
      as.push_back(
          solve_generalized_mode(p, L_scatter, r.I_cap, r.I_strip, J, std::min(8, J - 1))
              .a_fit);
    }
    return richardson(as).value;
  };
  rep.a_hat = scatter_a(hat);
  rep.a_slope = scatter_a(slope);
  rep.shift_predicted = (rep.a_hat - rep.a_slope) / 2.0;

  // Eigenfeatures from extrapolated fields on the coarse mesh.
  auto features = [&](const Profile& p, Real a) {
    const Resolution res = auto_resolution(p, N, base.J, base.grade_kappa);
    const LadderStudy st = eig_ladder_study(p, N, 2, res, levels);
    const MaxLocation mx = locate_maximum(st.field[0], st.coarse_mesh);
    const Real xc =
        row_crossing_x(st.field[1], st.coarse_mesh, st.coarse_mesh.J / 2, (N - a) / 2.0);
    if (!std::isfinite(xc))
      throw NumericError("figure2_experiment: no nodal crossing on the center row");
    return std::pair<Real, Real>(mx.x, xc);
  };
  const auto [mx_hat, nx_hat] = features(hat, rep.a_hat);
  const auto [mx_slope, nx_slope] = features(slope, rep.a_slope);
  rep.max_x_hat = mx_hat;
  rep.max_x_slope = mx_slope;
  rep.nodal_x_hat = nx_hat;
  rep.nodal_x_slope = nx_slope;

  rep.nodal_shift_measured = nx_slope - nx_hat;
  rep.max_shift_measured = mx_slope - mx_hat;
  rep.nodal_ratio = rep.nodal_shift_measured / rep.shift_predicted;
  rep.max_ratio = rep.max_shift_measured / rep.shift_predicted;
  rep.signs_consistent = (rep.nodal_shift_measured > 0) == (rep.shift_predicted > 0) &&
                         (rep.max_shift_measured > 0) == (rep.shift_predicted > 0);
  return rep;
}

void write_nodal_csv(const NodalCurve& c, std::ostream& os) {
  char buf[160];
  os << "x1,y1,x2,y2\n";
  for (const auto& s : c.segments) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s[0], s[1], s[2], s[3]);
    os << buf;
  }
}

}  // namespace stripspec
