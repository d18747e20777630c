#include "stripspec/config.hpp"

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

namespace stripspec {

namespace {

using nlohmann::json;

Profile parse_profile(const json& j) {
  if (!j.is_object()) throw ConfigError("config: \"profile\" must be an object");
  static const std::set<std::string> allowed = {"kind", "eps", "c", "points"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown profile key \"" + it.key() + "\"");
  if (!j.contains("kind")) throw ConfigError("config: profile needs \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const Real eps = j.value("eps", 1.0);
  if (kind == "hat") return Profile::hat(eps);
  if (kind == "slope") return Profile::slope(eps);
  if (kind == "constant") {
    if (!j.contains("c")) throw ConfigError("config: constant profile needs \"c\"");
    return Profile::constant(j.at("c").get<Real>(), eps);
  }
  if (kind == "pwl") {
    if (!j.contains("points")) throw ConfigError("config: pwl profile needs \"points\"");
    std::vector<std::array<Real, 2>> pts;
    for (const auto& pair : j.at("points")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError("config: pwl points must be [y, value] pairs");
      pts.push_back({pair[0].get<Real>(), pair[1].get<Real>()});
    }
    return Profile::pwl(std::move(pts), eps);
  }
  throw ConfigError("config: unknown profile kind \"" + kind + "\"");
}

const std::set<std::string>& allowed_keys(const std::string& command) {
  static const std::set<std::string> common = {
      "profile", "output_dir", "jobs", "resolution", "grading", "tolerances"};
  static const std::map<std::string, std::set<std::string>> per_command = {
      {"eigs", {"N_list", "m_count"}},
      {"phase", {"L", "K", "eps_sweep", "A_cut", "window"}},
      {"verify", {"N_list", "L", "K", "m_count", "A_cut", "checks"}},
      {"features", {"N_list", "L", "m_count", "figure2_eps"}},
      {"mesh-dump", {"L"}},
  };
  static std::map<std::string, std::set<std::string>> merged = [] {
    std::map<std::string, std::set<std::string>> m;
    for (const auto& [cmd, keys] : per_command) {
      m[cmd] = common;
      m[cmd].insert(keys.begin(), keys.end());
    }
    return m;
  }();
  auto it = merged.find(command);
  if (it == merged.end()) throw ConfigError("config: unknown command \"" + command + "\"");
  return it->second;
}

}  // namespace

Profile profile_from_json_text(const std::string& text) {
  return parse_profile(json::parse(text));
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  const auto& allowed = allowed_keys(command);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key \"" + it.key() + "\" for command " + command);

  RunConfig c;
  c.command = command;
  if (!j.contains("profile") && command != "mesh-dump")
    throw ConfigError("config: missing \"profile\"");
  if (j.contains("profile")) c.profile = parse_profile(j.at("profile"));

  if (j.contains("N_list")) {
    for (const auto& v : j.at("N_list")) c.N_list.push_back(v.get<Real>());
    if (c.N_list.empty()) throw ConfigError("config: N_list must be non-empty");
    for (Real n : c.N_list)
      if (!(n >= 1)) throw ConfigError("config: N values must be >= 1");
  }
  if (j.contains("L")) {
    c.L = j.at("L").get<Real>();
    if (!(c.L >= 4)) throw ConfigError("config: L must be >= 4");
  }
  if (j.contains("resolution")) {
    const auto& r = j.at("resolution");
    static const std::set<std::string> rkeys = {"J", "levels", "I_cap", "I_strip"};
    for (auto it = r.begin(); it != r.end(); ++it)
      if (!rkeys.count(it.key()))
        throw ConfigError("config: unknown resolution key \"" + it.key() + "\"");
    c.J = r.value("J", c.J);
    c.levels = r.value("levels", c.levels);
    if (r.contains("I_cap")) c.I_cap = r.at("I_cap").get<int>();
    if (r.contains("I_strip")) c.I_strip = r.at("I_strip").get<int>();
    if (c.J < 2 || c.levels < 1)
      throw ConfigError("config: resolution needs J >= 2 and levels >= 1");
  }
  if (j.contains("m_count")) {
    c.m_count = j.at("m_count").get<int>();
    if (c.m_count < 1 || c.m_count > 4)
      throw ConfigError("config: m_count must be in 1..4");
  }
  if (j.contains("K")) {
    c.K = j.at("K").get<int>();
    if (c.K < 2) throw ConfigError("config: K must be >= 2");
  }
  if (j.contains("grading")) c.grading = j.at("grading").get<bool>();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    static const std::set<std::string> tkeys = {"eig_tol", "max_iter", "grade_kappa"};
    for (auto it = t.begin(); it != t.end(); ++it)
      if (!tkeys.count(it.key()))
        throw ConfigError("config: unknown tolerances key \"" + it.key() + "\"");
    c.eig_tol = t.value("eig_tol", c.eig_tol);
    c.max_iter = t.value("max_iter", c.max_iter);
    c.grade_kappa = t.value("grade_kappa", c.grade_kappa);
    if (!(c.grade_kappa >= 0 && c.grade_kappa < 1))
      throw ConfigError("config: grade_kappa must lie in [0,1)");
  }
  if (j.contains("eps_sweep"))
    for (const auto& v : j.at("eps_sweep")) c.eps_sweep.push_back(v.get<Real>());
  if (j.contains("A_cut")) c.A_cut = j.at("A_cut").get<Real>();
  if (j.contains("window")) {
    const auto& w = j.at("window");
    if (!w.is_array() || w.size() != 2)
      throw ConfigError("config: window must be [x_lo, x_hi]");
    c.window = {{w[0].get<Real>(), w[1].get<Real>()}};
  }
  if (j.contains("checks")) {
    const auto& ck = j.at("checks");
    static const std::set<std::string> ckeys = {"cross_method", "expansion_slope",
                                                "lambda5", "cross_method_tol",
                                                "slope_max", "lambda5_rel_tol"};
    for (auto it = ck.begin(); it != ck.end(); ++it)
      if (!ckeys.count(it.key()))
        throw ConfigError("config: unknown checks key \"" + it.key() + "\"");
    c.check_cross_method = ck.value("cross_method", true);
    c.check_expansion_slope = ck.value("expansion_slope", true);
    c.check_lambda5 = ck.value("lambda5", true);
    c.check_cross_method_tol = ck.value("cross_method_tol", c.check_cross_method_tol);
    c.check_slope_max = ck.value("slope_max", c.check_slope_max);
    c.check_lambda5_rel_tol = ck.value("lambda5_rel_tol", c.check_lambda5_rel_tol);
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("jobs")) {
    c.jobs = j.at("jobs").get<int>();
    if (c.jobs < 0) throw ConfigError("config: jobs must be >= 0");
  }
  if (j.contains("figure2_eps")) {
    c.figure2_eps = j.at("figure2_eps").get<Real>();
    if (!(*c.figure2_eps > 0 && *c.figure2_eps <= 1))
      throw ConfigError("config: figure2_eps must lie in (0,1]");
  }
  return c;
}

}  // namespace stripspec
