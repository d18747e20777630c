#include "stripspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stripspec/assembly.hpp"
#include "stripspec/fit.hpp"

namespace stripspec {

namespace {

constexpr Real kEigTol = 1e-9;
constexpr int kEigMaxIter = 140;

int nearest_strip_node(const Mesh& m, Real x, Real y) {
  int best = -1;
  Real best_d = std::numeric_limits<Real>::infinity();
  for (int i = 0; i <= m.I_strip; ++i)
    for (int j = 0; j <= m.J; ++j) {
      const int n = m.strip_node(i, j);
      const Real d = std::hypot(m.x[n] - x, m.y[n] - y);
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
  return best;
}

}  // namespace

Resolution auto_resolution(const Profile& p, Real length, int J, Real grade_kappa,
                           Real x_stretch) {
  Resolution r;
  r.J = J;
  r.grade_kappa = grade_kappa;
  r.I_strip = std::max(2, static_cast<int>(std::llround(length * J / x_stretch)));
  const Real mp = profile_max(p);
  r.I_cap = std::max(1, static_cast<int>(std::llround(J * mp)));
  return r;
}

std::vector<EigenField> compute_eigenpairs(const Profile& p, Real N, int m_count,
                                           const Resolution& res) {
  if (!(N >= 1.0)) throw ConfigError("compute_eigenpairs: need N >= 1");
  if (m_count < 1 || m_count > 4)
    throw ConfigError("compute_eigenpairs: m_count must be in 1..4");

  const Mesh mesh = build_strip_mesh(p, N, res.I_cap, res.I_strip, res.J, res.grade_kappa);
  const SymSparse A = assemble_stiffness(mesh);
  const SymSparse M = assemble_mass(mesh);
  const ReducedSystem rs = apply_dirichlet(A, M, mesh, /*right_end_is_dirichlet=*/true);

  const auto pairs =
      smallest_eigenpairs(rs.A, rs.M, m_count, /*shift=*/kPiSq, kEigTol, kEigMaxIter);

  std::vector<EigenField> out;
  out.reserve(pairs.size());
  for (size_t m = 0; m < pairs.size(); ++m) {
    EigenField ef;
    ef.mu = pairs[m].mu;
    ef.residual = pairs[m].residual;
    ef.field = rs.prolong(pairs[m].v);
    // Sign convention: nonnegative at the first antinode of mode m.
    const int probe = nearest_strip_node(mesh, N / (2.0 * Real(m + 1)), 0.5);
    if (ef.field[probe] < 0) ef.field = -ef.field;
    out.push_back(std::move(ef));
  }
  return out;
}

RichResult richardson(const std::vector<Real>& v) {
  if (v.size() < 3) throw NumericError("richardson: need a ladder of >= 3 values");
  const size_t n = v.size();
  const Real v0 = v[n - 3], v1 = v[n - 2], v2 = v[n - 1];
  const Real d1 = v1 - v0, d2 = v2 - v1;

  RichResult r;
  if (d1 * d2 <= 0 || std::abs(d2) >= std::abs(d1)) {
    r.value = v2;
    r.error_estimate = std::max(std::abs(d1), std::abs(d2));
    r.observed_order = 0;
    r.monotone = false;
    return r;
  }
  r.observed_order = std::log2(std::abs(d1 / d2));
  // Two-stage elimination: the leading power from the rounded observed order,
  // then the next even correction. Fitting the order into a single two-level
  // step would fold the h^(p+2) term into the order estimate and stall the
  // accuracy near the raw finest level.
  const Real p1 = std::clamp(std::round(r.observed_order), 1.0, 3.0);
  const Real w1 = 1.0 / (std::pow(2.0, p1) - 1.0);
  const Real u01 = v1 + d1 * w1;
  const Real u12 = v2 + d2 * w1;
  const Real w2 = 1.0 / (std::pow(2.0, p1 + 2.0) - 1.0);
  r.value = u12 + (u12 - u01) * w2;
  r.error_estimate =
      2.0 * std::abs(r.value - u12) + 4.0 * std::abs(v2) * 1e-16;
  return r;
}

RichResult richardson_eigenvalue(const Profile& p, Real N, int m,
                                 const Resolution& base, int levels) {
  if (levels < 3) throw ConfigError("richardson_eigenvalue: need >= 3 ladder levels");
  std::vector<Real> mus;
  for (int l = 0; l < levels; ++l) {
    const auto pairs = compute_eigenpairs(p, N, m, base.refined(l));
    mus.push_back(pairs[m - 1].mu);
  }
  return richardson(mus);
}

LadderStudy eig_ladder_study(const Profile& p, Real N, int m_count,
                             const Resolution& base, int levels) {
  if (levels < 3) throw ConfigError("eig_ladder_study: need >= 3 ladder levels");
  LadderStudy st;
  st.coarse_mesh = build_strip_mesh(p, N, base.I_cap, base.I_strip, base.J, base.grade_kappa);
  st.mu_raw.assign(m_count, {});
  st.level_J.clear();

  // Per-level eigenfields restricted to the coarse nodes (the refinement
  // formulas nest bitwise, so fine meshes contain every coarse node).
  std::vector<std::vector<Vector>> on_coarse(m_count);
  for (int l = 0; l < levels; ++l) {
    const Resolution res = base.refined(l);
    st.level_J.push_back(res.J);
    const auto pairs = compute_eigenpairs(p, N, m_count, res);
    const Mesh fine = build_strip_mesh(p, N, res.I_cap, res.I_strip, res.J, res.grade_kappa);
    const int f = 1 << l;
    for (int mm = 0; mm < m_count; ++mm) {
      st.mu_raw[mm].push_back(pairs[mm].mu);
      Vector vc = Vector::Zero(st.coarse_mesh.num_nodes());
      for (int i = 0; i <= st.coarse_mesh.I_strip; ++i)
        for (int j = 0; j <= st.coarse_mesh.J; ++j)
          vc[st.coarse_mesh.strip_node(i, j)] =
              pairs[mm].field[fine.strip_node(f * i, f * j)];
      if (st.coarse_mesh.has_cap())
        for (int i = 0; i <= st.coarse_mesh.I_cap; ++i)
          for (int j = 0; j <= st.coarse_mesh.J; ++j)
            vc[st.coarse_mesh.cap_node(i, j)] =
                pairs[mm].field[fine.cap_node(f * i, f * j)];
      on_coarse[mm].push_back(std::move(vc));
    }
  }

  for (int mm = 0; mm < m_count; ++mm) {
    st.mu.push_back(richardson(st.mu_raw[mm]));
    const Real p_obs = std::clamp<Real>(
        st.mu.back().monotone ? st.mu.back().observed_order : 2.0, 1.0, 3.0);
    const Real w = 1.0 / (std::pow(2.0, p_obs) - 1.0);
    const Vector& v1 = on_coarse[mm][levels - 2];
    const Vector& v2 = on_coarse[mm][levels - 1];
    st.field.push_back(v2 + w * (v2 - v1));
  }
  return st;
}

AExtraction extract_a_from_eigs(const Profile& p, int m, const std::vector<Real>& N_list,
                                const Resolution& base, int levels) {
  AExtraction ax;
  ax.N_list = N_list;
  for (Real N : N_list) {
    const Resolution res = auto_resolution(p, N, base.J, base.grade_kappa);
    const RichResult r = richardson_eigenvalue(p, N, m, res, levels);
    if (!(r.value > kPiSq))
      throw NumericError("extract_a_from_eigs: mu <= pi^2 signals a broken discretization");
    ax.a_per_N.push_back(Real(m) * kPi / std::sqrt(r.value - kPiSq) - N);
  }
  // a(N) approaches a at rate N^-2 (the next eigenvalue term is O(N^-5), and
  // inverting mu = pi^2 + m^2 pi^2/(N+a)^2 turns that into an N^-2 defect).
  ax.a_extrapolated = fit_const_plus_power(ax.N_list, ax.a_per_N, -2.0).first;
  return ax;
}

CompositeGap composite_error(const Vector& field, const Mesh& mesh, Real N, int m,
                             Real a) {
  const Real split = 3.0 * std::log(N);
  auto model = [&](int n) {
    return std::sin(Real(m) * kPi * (mesh.x[n] + a) / (N + a)) * std::sin(kPi * mesh.y[n]);
  };

  Real uw = 0, uu = 0;
  int far_count = 0;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (mesh.x[n] > split) {
      uw += field[n] * model(n);
      uu += field[n] * field[n];
      ++far_count;
    }
  }
  if (far_count == 0 || uu == 0)
    throw NumericError("composite_error: empty far region (N too small)");

  CompositeGap g;
  g.scale_used = uw / uu;
  Real sup_near_u = 0, sup_near_w = 0;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    if (mesh.x[n] > split) {
      g.sup_far = std::max(g.sup_far, std::abs(g.scale_used * field[n] - model(n)));
    } else {
      sup_near_u = std::max(sup_near_u, std::abs(g.scale_used * field[n]));
      sup_near_w = std::max(sup_near_w, std::abs(model(n)));
    }
  }
  g.sup_near = sup_near_u - sup_near_w;
  return g;
}

ExpansionReport expansion_residuals(const Profile& p, int m,
                                    const std::vector<Real>& N_list, Real a,
                                    std::optional<Real> b, const Resolution& base,
                                    int levels, bool with_fields) {
  if (N_list.size() < 4)
    throw ConfigError("expansion_residuals: need >= 4 values of N");
  ExpansionReport rep;
  rep.m = m;
  rep.a_used = a;

  for (Real N : N_list) {
    ExpansionRow row;
    row.N = N;
    const Resolution res = auto_resolution(p, N, base.J, base.grade_kappa);
    if (with_fields) {
      const LadderStudy st = eig_ladder_study(p, N, m, res, levels);
      row.mu = st.mu[m - 1].value;
      row.err_est = st.mu[m - 1].error_estimate;
      const CompositeGap g = composite_error(st.field[m - 1], st.coarse_mesh, N, m, a);
      row.sup_far = g.sup_far;
      row.sup_near = g.sup_near;
    } else {
      const RichResult r = richardson_eigenvalue(p, N, m, res, levels);
      row.mu = r.value;
      row.err_est = r.error_estimate;
    }
    row.model = kPiSq + Real(m) * Real(m) * kPiSq / ((N + a) * (N + a));
    row.residual = row.mu - row.model;
    row.noise_dominated = std::abs(row.residual) < 3.0 * row.err_est;
    rep.rows.push_back(row);
  }

  std::vector<Real> Ns, rs, ts, ws;
  for (const auto& row : rep.rows) {
    if (row.noise_dominated) continue;
    Ns.push_back(row.N);
    rs.push_back(row.residual);
    ts.push_back(std::pow(row.N + a, -5.0));
    const Real sigma = std::max(row.err_est, 1e-14);
    ws.push_back(1.0 / (sigma * sigma));
  }
  rep.rows_surviving = static_cast<int>(Ns.size());
  if (rep.rows_surviving >= 2) {
    const LineFit lf = fit_loglog(Ns, rs);
    rep.slope = lf.slope;
    rep.slope_r2 = lf.r2;
    rep.slope_ok = rep.rows_surviving >= 3 && lf.r2 >= 0.9;
    rep.c5 = fit_scaled(ts, rs, ws);
  }
  if (b) {
    const Real m4 = std::pow(Real(m), 4.0);
    rep.lambda5_predicted = -4.0 * m4 * kPiSq * kPiSq * (*b);
  }
  return rep;
}

}  // namespace stripspec
