#include "stripspec/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stripspec/features.hpp"
#include "stripspec/scattering.hpp"
#include "stripspec/spectra.hpp"

namespace stripspec {

namespace {

using nlohmann::json;

void write_atomic(const std::string& dir, const std::string& name,
                  const std::string& contents) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path final_path = fs::path(dir) / name;
  const fs::path tmp_path = fs::path(dir) / (name + ".tmp");
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) throw NumericError("cannot write " + tmp_path.string());
    out << contents;
  }
  fs::rename(tmp_path, final_path);
}

void emit(const RunConfig& cfg, OutputMap* outputs, const std::string& name,
          const std::string& contents) {
  write_atomic(cfg.output_dir, name, contents);
  if (outputs) (*outputs)[name] = contents;
}

Resolution resolved(const RunConfig& cfg, const Profile& p, Real length,
                    Real x_stretch) {
  Resolution r = auto_resolution(p, length, cfg.J, cfg.grading ? cfg.grade_kappa : 0.0,
                                 x_stretch);
  if (cfg.I_cap) r.I_cap = *cfg.I_cap;
  if (cfg.I_strip) r.I_strip = *cfg.I_strip;
  return r;
}

json mode_rates_json(const std::vector<ModeDecay>& rates) {
  json arr = json::array();
  for (const auto& d : rates)
    arr.push_back({{"k", d.k},
                   {"rate", d.rate},
                   {"amplitude", d.amplitude},
                   {"below_noise", d.below_noise}});
  return arr;
}

int cmd_eigs(const RunConfig& cfg, OutputMap* outputs) {
  if (cfg.N_list.empty()) throw ConfigError("eigs: config needs N_list");

  struct Row {
    Real N;
    int m, J;
    Real mu_raw, mu_extrap, err_est, order;
  };
  std::vector<std::vector<Row>> per_N(cfg.N_list.size());

  parallel_for_jobs(static_cast<int>(cfg.N_list.size()), effective_jobs(cfg.jobs),
                    [&](int idx) {
                      const Real N = cfg.N_list[idx];
                      const Resolution base = resolved(cfg, cfg.profile, N, 4.0);
                      std::vector<std::vector<Real>> mus(cfg.m_count);
                      for (int l = 0; l < cfg.levels; ++l) {
                        const auto pairs =
                            compute_eigenpairs(cfg.profile, N, cfg.m_count, base.refined(l));
                        for (int m = 0; m < cfg.m_count; ++m)
                          mus[m].push_back(pairs[m].mu);
                      }
                      for (int m = 0; m < cfg.m_count; ++m) {
                        RichResult rich{mus[m].back(), 0, 0, true};
                        if (cfg.levels >= 3) rich = richardson(mus[m]);
                        for (int l = 0; l < cfg.levels; ++l)
                          per_N[idx].push_back({N, m + 1, base.refined(l).J, mus[m][l],
                                                rich.value, rich.error_estimate,
                                                rich.observed_order});
                      }
                    });

  std::ostringstream csv;
  csv << "profile,N,m,J,mu_raw,mu_extrap,err_est,order\n";
  const std::string pname = cfg.profile.describe();
  for (const auto& rows : per_N)
    for (const auto& r : rows)
      csv << pname << "," << fmt_real(r.N) << "," << r.m << "," << r.J << ","
          << fmt_real(r.mu_raw) << "," << fmt_real(r.mu_extrap) << ","
          << fmt_real(r.err_est) << "," << fmt_real(r.order) << "\n";
  emit(cfg, outputs, "eigs.csv", csv.str());
  return kExitOk;
}

Profile rescaled(const Profile& p, Real eps) {
  switch (p.kind()) {
    case ProfileKind::Hat: return Profile::hat(eps);
    case ProfileKind::Slope: return Profile::slope(eps);
    case ProfileKind::Constant: return Profile::constant(p.base_points()[0][1], eps);
    case ProfileKind::Pwl: return Profile::pwl(p.base_points(), eps);
  }
  throw ConfigError("rescaled: unreachable profile kind");
}

int cmd_phase(const RunConfig& cfg, OutputMap* outputs) {
  const Resolution base = resolved(cfg, cfg.profile, cfg.L, 1.0);
  const int K = std::min(cfg.K, cfg.J - 1);
  ScatterField f = solve_generalized_mode(cfg.profile, cfg.L, base.I_cap, base.I_strip,
                                          base.J, K, cfg.grading ? cfg.grade_kappa : 0.0);
  if (cfg.window) {
    const LineFit lf = extract_a_linefit(f, (*cfg.window)[0], (*cfg.window)[1]);
    f.a_fit = lf.intercept / lf.slope;
    f.slope_fit = lf.slope;
  }

  const Real A_cut = cfg.A_cut ? *cfg.A_cut : cfg.L - 3.0;
  const Real b = compute_b_constant(f, f.a_fit, A_cut);
  const Real b_drift = std::abs(b - compute_b_constant(f, f.a_fit, A_cut - 1.0));

  json out = {{"profile", cfg.profile.describe()},
              {"L", cfg.L},
              {"J", cfg.J},
              {"K", K},
              {"a_trace", f.a_trace},
              {"a_fit", f.a_fit},
              {"slope_fit", f.slope_fit},
              {"truncation_converged", f.truncation_converged},
              {"disc_tol", f.disc_tol},
              {"b", b},
              {"b_A_cut", A_cut},
              {"b_drift", b_drift},
              {"mode_rates", mode_rates_json(f.mode_rates)}};

  if (!cfg.eps_sweep.empty()) {
    const Real I_base = perturbation_coefficient(rescaled(cfg.profile, 1.0));
    std::vector<json> results(cfg.eps_sweep.size());
    parallel_for_jobs(
        static_cast<int>(cfg.eps_sweep.size()), effective_jobs(cfg.jobs), [&](int i) {
          const Real eps = cfg.eps_sweep[i];
          const Profile scaled = rescaled(cfg.profile, eps);
          std::vector<Real> as;
          for (int l = 0; l < cfg.levels; ++l) {
            const int Jl = cfg.J << l;
            const Resolution r = auto_resolution(scaled, cfg.L, Jl, 0.0, 1.0);
            as.push_back(solve_generalized_mode(scaled, cfg.L, r.I_cap, r.I_strip, Jl,
                                                std::min(K, Jl - 1))
                             .a_fit);
          }
          const Real a = cfg.levels >= 3 ? richardson(as).value : as.back();
          results[i] = {{"eps", eps},
                        {"a", a},
                        {"first_order", eps * I_base},
                        {"residual", a - eps * I_base}};
        });
    json sweep = json::array();
    std::vector<Real> eps_v, resid_v;
    for (size_t i = 0; i < results.size(); ++i) {
      sweep.push_back(results[i]);
      eps_v.push_back(cfg.eps_sweep[i]);
      resid_v.push_back(std::abs(results[i]["residual"].get<Real>()));
    }
    out["eps_sweep"] = sweep;
    out["I_base"] = I_base;
    if (eps_v.size() >= 2) out["residual_order"] = fit_loglog(eps_v, resid_v).slope;
  }

  std::ostringstream field_csv;
  write_field_csv(f.mesh, f.U, field_csv);
  emit(cfg, outputs, "field.csv", field_csv.str());
  emit(cfg, outputs, "phase.json", out.dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, OutputMap* outputs) {
  if (cfg.N_list.size() < 4)
    throw ConfigError("verify: config needs an N_list with >= 4 entries");

  // Scattering route for a and b.
  const int K = std::min(cfg.K, cfg.J - 1);
  std::vector<Real> as, bs;
  for (int l = 0; l < cfg.levels; ++l) {
    const Resolution r = auto_resolution(cfg.profile, cfg.L, cfg.J << l, 0.0, 1.0);
    const ScatterField f = solve_generalized_mode(
        cfg.profile, cfg.L, r.I_cap, r.I_strip, r.J, std::min(K, r.J - 1));
    as.push_back(f.a_fit);
    bs.push_back(compute_b_constant(f, f.a_fit, cfg.A_cut ? *cfg.A_cut : cfg.L - 3.0));
  }
  const Real a = cfg.levels >= 3 ? richardson(as).value : as.back();
  const Real b = cfg.levels >= 3 ? richardson(bs).value : bs.back();

  const Resolution base{0, 0, cfg.J, cfg.grading ? cfg.grade_kappa : 0.0};

  // Eigenvalue route for a (cross-check) and the expansion residuals.
  const AExtraction ax = extract_a_from_eigs(cfg.profile, 1, cfg.N_list, base, cfg.levels);
  ExpansionReport rep = expansion_residuals(cfg.profile, 1, cfg.N_list, a, b, base,
                                            cfg.levels, /*with_fields=*/true);
  rep.a_source = "scattering";

  json checks;
  bool all_pass = true;
  auto add_check = [&](const char* name, bool enabled, Real value, Real threshold,
                       bool pass) {
    checks[name] = {{"enabled", enabled}, {"value", value}, {"threshold", threshold},
                    {"pass", !enabled || pass}};
    if (enabled && !pass) all_pass = false;
  };
  add_check("cross_method_a", cfg.check_cross_method, std::abs(a - ax.a_extrapolated),
            cfg.check_cross_method_tol,
            std::abs(a - ax.a_extrapolated) <= cfg.check_cross_method_tol);
  add_check("expansion_slope", cfg.check_expansion_slope, rep.slope, cfg.check_slope_max,
            rep.rows_surviving >= 3 && rep.slope <= cfg.check_slope_max);
  const Real lam5 = rep.lambda5_predicted.value_or(0.0);
  const Real lam5_rel = lam5 != 0 ? std::abs(rep.c5 - lam5) / std::abs(lam5) : 1e9;
  add_check("lambda5", cfg.check_lambda5, lam5_rel, cfg.check_lambda5_rel_tol,
            lam5_rel <= cfg.check_lambda5_rel_tol);

  std::ostringstream csv;
  csv << "N,mu_extrap,err_est,model,residual,noise_dominated,sup_far,sup_near\n";
  for (const auto& row : rep.rows)
    csv << fmt_real(row.N) << "," << fmt_real(row.mu) << "," << fmt_real(row.err_est)
        << "," << fmt_real(row.model) << "," << fmt_real(row.residual) << ","
        << (row.noise_dominated ? 1 : 0) << "," << fmt_real(row.sup_far) << ","
        << fmt_real(row.sup_near) << "\n";
  emit(cfg, outputs, "expansion_m1.csv", csv.str());

  json out = {{"profile", cfg.profile.describe()},
              {"a_scattering", a},
              {"a_eigenfit", ax.a_extrapolated},
              {"b", b},
              {"m", rep.m},
              {"slope", rep.slope},
              {"slope_r2", rep.slope_r2},
              {"rows_surviving", rep.rows_surviving},
              {"c5", rep.c5},
              {"lambda5_predicted", lam5},
              {"checks", checks},
              {"overall_pass", all_pass}};
  emit(cfg, outputs, "verify.json", out.dump(2) + "\n");
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_features(const RunConfig& cfg, OutputMap* outputs) {
  if (cfg.N_list.empty()) throw ConfigError("features: config needs N_list");
  const Real N = cfg.N_list.front();
  const Resolution base{0, 0, cfg.J, cfg.grading ? cfg.grade_kappa : 0.0};
  const Resolution res = resolved(cfg, cfg.profile, N, 4.0);

  const LadderStudy st = eig_ladder_study(cfg.profile, N, std::max(2, cfg.m_count), res,
                                          cfg.levels);
  const MaxLocation mx = locate_maximum(st.field[0], st.coarse_mesh);
  const NodalCurve nc = nodal_curve(st.field[1], st.coarse_mesh);

  json out = {{"profile", cfg.profile.describe()},
              {"N", N},
              {"max", {{"x", mx.x}, {"y", mx.y}, {"value", mx.value}}},
              {"nodal",
               {{"x_min", nc.x_min},
                {"x_max", nc.x_max},
                {"extent", nc.x_max - nc.x_min},
                {"band_points", nc.band_points}}}};

  std::ostringstream nodal_csv;
  write_nodal_csv(nc, nodal_csv);
  emit(cfg, outputs, "nodal_m2.csv", nodal_csv.str());

  if (cfg.figure2_eps) {
    const Figure2Report f2 =
        figure2_experiment(*cfg.figure2_eps, N, base, cfg.levels, cfg.L, cfg.J);
    out["figure2"] = {{"eps", f2.eps},
                      {"N", f2.N},
                      {"a_hat", f2.a_hat},
                      {"a_slope", f2.a_slope},
                      {"height_max_diff", f2.height_max_diff},
                      {"nodal_x_hat", f2.nodal_x_hat},
                      {"nodal_x_slope", f2.nodal_x_slope},
                      {"max_x_hat", f2.max_x_hat},
                      {"max_x_slope", f2.max_x_slope},
                      {"shift_predicted", f2.shift_predicted},
                      {"nodal_shift_measured", f2.nodal_shift_measured},
                      {"max_shift_measured", f2.max_shift_measured},
                      {"nodal_ratio", f2.nodal_ratio},
                      {"max_ratio", f2.max_ratio},
                      {"signs_consistent", f2.signs_consistent}};

    // Plot-ready outlines and nodal curves of the two domains.
    std::ostringstream curves;
    curves << "series,x,y\n";
    auto outline = [&](const char* name, const Profile& p) {
      for (int k = 0; k <= 100; ++k) {
        const Real y = Real(k) / 100.0;
        curves << name << "," << fmt_real(-eval_profile(p, y)) << "," << fmt_real(y)
               << "\n";
      }
    };
    outline("hat_outline", Profile::hat(*cfg.figure2_eps));
    outline("slope_outline", Profile::slope(*cfg.figure2_eps));
    auto nodal_series = [&](const char* name, const Profile& p) {
      const Resolution r = auto_resolution(p, N, cfg.J, base.grade_kappa);
      const LadderStudy s = eig_ladder_study(p, N, 2, r, cfg.levels);
      const NodalCurve c = nodal_curve(s.field[1], s.coarse_mesh);
      for (const auto& seg : c.segments)
        curves << name << "," << fmt_real(0.5 * (seg[0] + seg[2])) << ","
               << fmt_real(0.5 * (seg[1] + seg[3])) << "\n";
    };
    nodal_series("hat_nodal", Profile::hat(*cfg.figure2_eps));
    nodal_series("slope_nodal", Profile::slope(*cfg.figure2_eps));
    emit(cfg, outputs, "figure2_curves.csv", curves.str());
  }
  emit(cfg, outputs, "features.json", out.dump(2) + "\n");
  return kExitOk;
}

int cmd_mesh_dump(const RunConfig& cfg, OutputMap* outputs) {
  const Real length = cfg.L;
  const Resolution res = resolved(cfg, cfg.profile, length, 1.0);
  const Mesh m = build_strip_mesh(cfg.profile, length, res.I_cap, res.I_strip, res.J,
                                  cfg.grading ? cfg.grade_kappa : 0.0);
  std::ostringstream os;
  write_msh_lite(m, os);
  emit(cfg, outputs, "mesh.msh", os.str());
  return kExitOk;
}

}  // namespace

std::string fmt_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int effective_jobs(int cfg_jobs) {
  if (const char* env = std::getenv("STRIP_SPECTRA_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (cfg_jobs > 0) return cfg_jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_jobs(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int run_command(const RunConfig& cfg, OutputMap* outputs) {
  if (cfg.command == "eigs") return cmd_eigs(cfg, outputs);
  if (cfg.command == "phase") return cmd_phase(cfg, outputs);
  if (cfg.command == "verify") return cmd_verify(cfg, outputs);
  if (cfg.command == "features") return cmd_features(cfg, outputs);
  if (cfg.command == "mesh-dump") return cmd_mesh_dump(cfg, outputs);
  throw ConfigError("unknown command \"" + cfg.command + "\"");
}

}  // namespace stripspec
