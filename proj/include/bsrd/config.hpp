#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsrd/diagnostics.hpp"
#include "bsrd/equilibrium.hpp"
#include "bsrd/stepper.hpp"

namespace bsrd {

struct ConfigIssue {
  enum class Kind { missing_key, bad_value, nonpositive_initial_data };
  Kind kind;
  std::string key;
  std::string reason;
};

inline std::string to_string(const ConfigIssue& issue) {
  switch (issue.kind) {
    case ConfigIssue::Kind::missing_key: return "MissingKey(" + issue.key + ")";
    case ConfigIssue::Kind::bad_value: return "BadValue(" + issue.key + ", " + issue.reason + ")";
    case ConfigIssue::Kind::nonpositive_initial_data: return "NonPositiveInitialData(" + issue.key + ", " + issue.reason + ")";
  }
  return "?";
}

/// Every constraint violated by a configuration, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}
  [[nodiscard]] const std::vector<ConfigIssue>& issues() const { return issues_; }

  [[nodiscard]] bool has(ConfigIssue::Kind kind, std::string_view key = {}) const {
    for (const auto& i : issues_)
      if (i.kind == kind && (key.empty() || i.key == key)) return true;
    return false;
  }

 private:
  static std::string describe(const std::vector<ConfigIssue>& issues) {
    std::string s = "invalid configuration:";
    for (const auto& i : issues) s += "\n  " + to_string(i);
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

enum class InitialKind { constant, two_blob, file };

struct LawSpec {
  DiffusionLaw::Kind kind = DiffusionLaw::Kind::constant;
  double param = 1.0;
};

/// Batch run description. Defaults are the values a key takes when absent;
/// only t_final is mandatory.
struct RunConfig {
  std::size_t nx = 32;
  std::size_t ny = 32;
  double lx = 1.0;
  double ly = 1.0;
  EdgeSet active_edges{Edge::bottom};

  Kinetics kinetics{};

  LawSpec bulk_law{DiffusionLaw::Kind::constant, 1.0};
  LawSpec surface_law{DiffusionLaw::Kind::constant, 1.0};

  InitialKind initial = InitialKind::constant;
  double initial_u = 1.0;
  double initial_v = 1.0;
  double blob_amplitude = 0.3;
  double blob_width = 0.15;  // fraction of min(lx, ly)
  std::string initial_file;

  double dt = 1e-3;
  double t_final = 0.0;
  double theta = 1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 25;
  int max_halvings = 5;
  JacobianMode jacobian = JacobianMode::analytic;

  std::optional<double> clamp_l;
  std::optional<double> clamp_L;
  SurfaceClampExponent surface_clamp_exponent = SurfaceClampExponent::alpha;
  FaceAveraging face_averaging = FaceAveraging::arithmetic;

  std::string out_dir = "results";
  std::size_t output_cadence = 1;
  bool write_final_state = true;
  bool write_summary = true;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    const double d = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(d)) return std::nullopt;
    return d;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<long long> to_integer(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  return v;
}

inline std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return std::nullopt;
}

inline std::optional<DiffusionLaw::Kind> to_law_kind(const std::string& s) {
  for (auto k : {DiffusionLaw::Kind::power, DiffusionLaw::Kind::exponential, DiffusionLaw::Kind::constant,
                 DiffusionLaw::Kind::surface_cross})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct KeyValue {
  std::string key;
  std::string value;
  int line;
};

inline std::vector<KeyValue> split_key_values(std::istream& in, std::vector<ConfigIssue>& issues) {
  std::vector<KeyValue> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      issues.push_back({ConfigIssue::Kind::bad_value, "line " + std::to_string(n), "expected key = value"});
      continue;
    }
    out.push_back({trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)), n});
  }
  return out;
}

}  // namespace detail

/// Parses `key = value` lines (with `#` comments) and applies `overrides`
/// (each `key=value`) on top. Throws ConfigError listing every problem.
inline RunConfig parse_config_stream(std::istream& in, const std::vector<std::string>& overrides = {}) {
  using detail::to_double;
  using detail::to_integer;
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  auto bad = [&](const std::string& key, std::string reason) {
    issues.push_back({ConfigIssue::Kind::bad_value, key, std::move(reason)});
  };

  auto entries = detail::split_key_values(in, issues);
  {
    std::map<std::string, int> seen;
    for (const auto& e : entries)
      if (++seen[e.key] == 2) bad(e.key, "duplicate key");
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      bad(o, "override must be key=value");
      continue;
    }
    entries.push_back({detail::trim(std::string_view(o).substr(0, eq)), detail::trim(std::string_view(o).substr(eq + 1)), 0});
  }

  auto real = [&](const std::string& key, const std::string& v, double& dst) {
    if (auto d = to_double(v)) dst = *d;
    else bad(key, "not a number");
  };
  auto count = [&](const std::string& key, const std::string& v, auto& dst) {
    if (auto i = to_integer(v); i && *i >= 0) dst = static_cast<std::remove_reference_t<decltype(dst)>>(*i);
    else bad(key, "not a nonnegative integer");
  };
  auto flag = [&](const std::string& key, const std::string& v, bool& dst) {
    if (auto b = detail::to_bool(v)) dst = *b;
    else bad(key, "not a boolean");
  };
  auto law = [&](const std::string& key, const std::string& v, LawSpec& dst) {
    if (auto k = detail::to_law_kind(v)) dst.kind = *k;
    else bad(key, "unknown law '" + v + "'");
  };

  bool have_t_final = false;
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
      {"nx", [&](auto& k, auto& v) { count(k, v, cfg.nx); }},
      {"ny", [&](auto& k, auto& v) { count(k, v, cfg.ny); }},
      {"lx", [&](auto& k, auto& v) { real(k, v, cfg.lx); }},
      {"ly", [&](auto& k, auto& v) { real(k, v, cfg.ly); }},
      {"active_edges",
       [&](auto& k, auto& v) {
         EdgeSet set;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) {
           try {
             set.insert(parse_edge(detail::trim(item)));
           } catch (const std::invalid_argument&) {
             bad(k, "unknown edge '" + detail::trim(item) + "'");
           }
         }
         cfg.active_edges = set;
       }},
      {"k", [&](auto& k, auto& v) { real(k, v, cfg.kinetics.k); }},
      {"kappa", [&](auto& k, auto& v) { real(k, v, cfg.kinetics.kappa); }},
      {"alpha", [&](auto& k, auto& v) { real(k, v, cfg.kinetics.alpha); }},
      {"beta", [&](auto& k, auto& v) { real(k, v, cfg.kinetics.beta); }},
      {"bulk_law", [&](auto& k, auto& v) { law(k, v, cfg.bulk_law); }},
      {"bulk_law_param", [&](auto& k, auto& v) { real(k, v, cfg.bulk_law.param); }},
      {"surface_law", [&](auto& k, auto& v) { law(k, v, cfg.surface_law); }},
      {"surface_law_param", [&](auto& k, auto& v) { real(k, v, cfg.surface_law.param); }},
      {"initial",
       [&](auto& k, auto& v) {
         if (v == "constant") cfg.initial = InitialKind::constant;
         else if (v == "two-blob") cfg.initial = InitialKind::two_blob;
         else if (v == "file") cfg.initial = InitialKind::file;
         else bad(k, "expected constant, two-blob or file");
       }},
      {"initial_u", [&](auto& k, auto& v) { real(k, v, cfg.initial_u); }},
      {"initial_v", [&](auto& k, auto& v) { real(k, v, cfg.initial_v); }},
      {"blob_amplitude", [&](auto& k, auto& v) { real(k, v, cfg.blob_amplitude); }},
      {"blob_width", [&](auto& k, auto& v) { real(k, v, cfg.blob_width); }},
      {"initial_file", [&](auto&, auto& v) { cfg.initial_file = v; }},
      {"dt", [&](auto& k, auto& v) { real(k, v, cfg.dt); }},
      {"t_final",
       [&](auto& k, auto& v) {
         have_t_final = true;
         real(k, v, cfg.t_final);
       }},
      {"theta", [&](auto& k, auto& v) { real(k, v, cfg.theta); }},
      {"newton_tol", [&](auto& k, auto& v) { real(k, v, cfg.newton_tol); }},
      {"newton_max_iter", [&](auto& k, auto& v) { count(k, v, cfg.newton_max_iter); }},
      {"max_halvings", [&](auto& k, auto& v) { count(k, v, cfg.max_halvings); }},
      {"jacobian",
       [&](auto& k, auto& v) {
         if (v == "analytic") cfg.jacobian = JacobianMode::analytic;
         else if (v == "finite_difference") cfg.jacobian = JacobianMode::finite_difference;
         else bad(k, "expected analytic or finite_difference");
       }},
      {"clamp_l",
       [&](auto& k, auto& v) {
         double d = 0.0;
         real(k, v, d);
         cfg.clamp_l = d;
       }},
      {"clamp_L",
       [&](auto& k, auto& v) {
         double d = 0.0;
         real(k, v, d);
         cfg.clamp_L = d;
       }},
      {"surface_clamp_exponent",
       [&](auto& k, auto& v) {
         if (v == "alpha") cfg.surface_clamp_exponent = SurfaceClampExponent::alpha;
         else if (v == "beta") cfg.surface_clamp_exponent = SurfaceClampExponent::beta;
         else bad(k, "expected alpha or beta");
       }},
      {"face_averaging",
       [&](auto& k, auto& v) {
         if (v == "arithmetic") cfg.face_averaging = FaceAveraging::arithmetic;
         else if (v == "harmonic") cfg.face_averaging = FaceAveraging::harmonic;
         else bad(k, "expected arithmetic or harmonic");
       }},
      {"out_dir", [&](auto&, auto& v) { cfg.out_dir = v; }},
      {"output_cadence", [&](auto& k, auto& v) { count(k, v, cfg.output_cadence); }},
      {"write_final_state", [&](auto& k, auto& v) { flag(k, v, cfg.write_final_state); }},
      {"write_summary", [&](auto& k, auto& v) { flag(k, v, cfg.write_summary); }},
  };

  for (const auto& e : entries) {
    const auto it = setters.find(e.key);
    if (it == setters.end()) {
      bad(e.key, "unknown key");
      continue;
    }
    it->second(e.key, e.value);
  }

  // Range checks.
  if (!have_t_final) issues.push_back({ConfigIssue::Kind::missing_key, "t_final", "required"});
  if (cfg.nx < 1) bad("nx", "must be >= 1");
  if (cfg.ny < 1) bad("ny", "must be >= 1");
  if (!(cfg.lx > 0.0)) bad("lx", "must be > 0");
  if (!(cfg.ly > 0.0)) bad("ly", "must be > 0");
  if (cfg.active_edges.empty()) bad("active_edges", "must name at least one edge");
  if (!(cfg.kinetics.k > 0.0)) bad("k", "must be > 0");
  if (!(cfg.kinetics.kappa > 0.0)) bad("kappa", "must be > 0");
  if (!(cfg.kinetics.alpha >= 1.0)) bad("alpha", "must be ≥ 1");
  if (!(cfg.kinetics.beta >= 1.0)) bad("beta", "must be ≥ 1");
  if (cfg.bulk_law.kind == DiffusionLaw::Kind::surface_cross) bad("bulk_law", "surface_cross is a surface law");
  if (cfg.bulk_law.kind == DiffusionLaw::Kind::constant && !(cfg.bulk_law.param > 0.0))
    bad("bulk_law_param", "constant coefficient must be > 0");
  if (cfg.surface_law.kind == DiffusionLaw::Kind::constant && !(cfg.surface_law.param > 0.0))
    bad("surface_law_param", "constant coefficient must be > 0");
  if (!(cfg.dt > 0.0)) bad("dt", "must be > 0");
  if (have_t_final && !(cfg.t_final >= 0.0)) bad("t_final", "must be >= 0");
  if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) bad("theta", "must lie in [0.5, 1]");
  if (!(cfg.newton_tol > 0.0)) bad("newton_tol", "must be > 0");
  if (cfg.newton_max_iter < 1) bad("newton_max_iter", "must be >= 1");
  if (cfg.output_cadence < 1) bad("output_cadence", "must be >= 1");
  if (cfg.clamp_l.has_value() != cfg.clamp_L.has_value())
    bad(cfg.clamp_l ? "clamp_L" : "clamp_l", "clamp_l and clamp_L must be given together");
  if (cfg.clamp_l && cfg.clamp_L && !(*cfg.clamp_l > 0.0 && *cfg.clamp_L >= *cfg.clamp_l))
    bad("clamp_l", "need 0 < clamp_l <= clamp_L");
  if (cfg.initial == InitialKind::constant) {
    if (!(cfg.initial_u > 0.0))
      issues.push_back({ConfigIssue::Kind::nonpositive_initial_data, "initial_u", "initial data must be > 0"});
    if (!(cfg.initial_v > 0.0))
      issues.push_back({ConfigIssue::Kind::nonpositive_initial_data, "initial_v", "initial data must be > 0"});
  } else if (cfg.initial == InitialKind::two_blob) {
    if (!(cfg.initial_u > 0.0))
      issues.push_back({ConfigIssue::Kind::nonpositive_initial_data, "initial_u", "blob base must be > 0"});
    if (!(cfg.blob_amplitude >= 0.0)) bad("blob_amplitude", "must be >= 0");
    if (!(cfg.blob_width > 0.0)) bad("blob_width", "must be > 0");
  } else if (cfg.initial_file.empty()) {
    issues.push_back({ConfigIssue::Kind::missing_key, "initial_file", "required when initial = file"});
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parse_config_stream(in, overrides);
}

inline RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{ConfigIssue::Kind::bad_value, "config", "cannot open '" + path + "'"}});
  return parse_config_stream(in, overrides);
}

}  // namespace bsrd
