#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "radlab/cli.hpp"
#include "radlab/errors.hpp"
#include "radlab/rational.hpp"

namespace radlab::cli {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(what), line_(line), column_(column) {}

namespace {

ConfigError error_at(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return ConfigError(msg);
  return ConfigError(msg, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) throw error_at(node, where + " must be a mapping");
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  require_map(map, where);
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw error_at(kv.first, "unknown key '" + key + "' in " + where);
  }
}

std::string scalar(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) throw error_at(node, what + " must be a scalar");
  return node.Scalar();
}

// Canonical exact text ("a/b" or "a"); decimals are converted exactly.
std::string rational_text(const YAML::Node& node, const std::string& what) {
  const std::string text = scalar(node, what);
  try {
    return Rational::parse(text).str();
  } catch (const SchemaError&) {
    throw error_at(node, what + ": '" + text + "' is not an exact number");
  }
}

long long integer(const YAML::Node& node, const std::string& what) {
  const std::string text = scalar(node, what);
  try {
    const Rational r = Rational::parse(text);
    if (r.is_integer()) {
      const double d = r.to_double();
      if (d > -9.0e15 && d < 9.0e15) return static_cast<long long>(d);
    }
  } catch (const SchemaError&) {
  }
  throw error_at(node, what + ": '" + text + "' is not an integer");
}

bool boolean(const YAML::Node& node, const std::string& what) {
  const std::string text = scalar(node, what);
  if (text == "true") return true;
  if (text == "false") return false;
  throw error_at(node, what + ": expected true or false");
}

std::string one_of(const YAML::Node& node, const std::string& what, const std::set<std::string>& choices) {
  const std::string text = scalar(node, what);
  if (!choices.count(text)) {
    std::string list;
    for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
    throw error_at(node, what + ": '" + text + "' is not one of " + list);
  }
  return text;
}

struct KindFields {
  std::vector<std::string> required;
  std::vector<std::pair<std::string, std::string>> defaults;
  std::set<std::string> integers;
};

const std::map<std::string, KindFields>& profile_kinds() {
  static const std::map<std::string, KindFields> kinds = {
      {"gaussian", {{"sigma"}, {}, {}}},
      {"smooth_bump", {{"width"}, {{"center", "0"}}, {}}},
      {"power_cutoff", {{"exponent"}, {{"cutoff", "1"}}, {}}},
      {"annulus", {{"inner", "outer"}, {}, {}}},
      {"constant", {{}, {{"value", "1"}}, {}}},
      {"zero", {{}, {}, {}}},
      {"ball_mode", {{"k"}, {}, {"k"}}},
      {"gaussian_dilations", {{"k_min", "k_max"}, {{"sigma", "1"}, {"base", "2"}}, {"k_min", "k_max"}}},
  };
  return kinds;
}

ProfileSpec parse_profile(const YAML::Node& node) {
  require_map(node, "profile");
  ProfileSpec spec;
  spec.line = node.Mark().line + 1;
  spec.column = node.Mark().column + 1;
  if (!node["kind"]) throw error_at(node, "profile without 'kind'");
  std::set<std::string> kind_names;
  for (const auto& [k, v] : profile_kinds()) kind_names.insert(k);
  spec.kind = one_of(node["kind"], "profile kind", kind_names);
  const KindFields& kf = profile_kinds().at(spec.kind);

  std::set<std::string> allowed = {"kind", "n", "dilation", "amplitude"};
  for (const auto& f : kf.required) allowed.insert(f);
  for (const auto& [f, d] : kf.defaults) allowed.insert(f);
  check_keys(node, allowed, spec.kind + " profile");

  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (key == "kind") continue;
    if (key == "n") {
      spec.n = integer(kv.second, "profile dimension n");
    } else if (kf.integers.count(key)) {
      spec.fields[key] = std::to_string(integer(kv.second, spec.kind + "." + key));
    } else {
      spec.fields[key] = rational_text(kv.second, spec.kind + "." + key);
    }
  }
  for (const auto& f : kf.required)
    if (!spec.fields.count(f)) throw error_at(node, spec.kind + " profile needs '" + f + "'");
  for (const auto& [f, d] : kf.defaults)
    if (!spec.fields.count(f)) spec.fields[f] = d;
  return spec;
}

std::vector<ProfileSpec> parse_profiles(const YAML::Node& node) {
  if (!node.IsSequence()) throw error_at(node, "profiles must be a list");
  std::vector<ProfileSpec> out;
  for (const auto& item : node) out.push_back(parse_profile(item));
  return out;
}

GridSpec parse_grid(const YAML::Node& node, GridSpec g) {
  check_keys(node, {"r_min", "r_max", "nodes", "spacing"}, "grid");
  if (node["r_min"]) g.r_min = rational_text(node["r_min"], "grid.r_min");
  if (node["r_max"]) g.r_max = rational_text(node["r_max"], "grid.r_max");
  if (node["nodes"]) g.nodes = integer(node["nodes"], "grid.nodes");
  if (node["spacing"]) g.spacing = one_of(node["spacing"], "grid.spacing", {"log", "linear"});
  const Rational lo = Rational::parse(g.r_min), hi = Rational::parse(g.r_max);
  if (g.nodes < 2 || g.nodes > 1000000) throw error_at(node, "grid.nodes must lie in [2, 1000000]");
  if (!(lo < hi) || lo.sign() < 0) throw error_at(node, "grid needs 0 <= r_min < r_max");
  if (g.spacing == "log" && lo.sign() == 0) throw error_at(node, "log grid needs r_min > 0");
  return g;
}

QuadratureSpec parse_quadrature(const YAML::Node& node) {
  check_keys(node, {"rel_tol", "abs_tol", "max_subdivisions", "endpoint_rule"}, "quadrature");
  QuadratureSpec q;
  if (node["rel_tol"]) q.rel_tol = to_real(rational_text(node["rel_tol"], "quadrature.rel_tol"), "rel_tol");
  if (node["abs_tol"]) q.abs_tol = to_real(rational_text(node["abs_tol"], "quadrature.abs_tol"), "abs_tol");
  if (node["max_subdivisions"]) {
    const long long m = integer(node["max_subdivisions"], "quadrature.max_subdivisions");
    if (m < 1 || m > 1000000) throw error_at(node["max_subdivisions"], "quadrature.max_subdivisions out of range");
    q.max_subdivisions = static_cast<int>(m);
  }
  if (node["endpoint_rule"])
    q.endpoint_rule = endpoint_rule_from_string(
        one_of(node["endpoint_rule"], "quadrature.endpoint_rule", {"gauss", "double_exponential"}));
  try {
    q.validate();
  } catch (const std::exception& e) {
    throw error_at(node, std::string("quadrature: ") + e.what());
  }
  return q;
}

// "n=3, s=1, p=3/2" or a mapping with the same names.
ParamSet parse_params(const YAML::Node& node) {
  static const std::set<std::string> names = {"n", "s", "p", "q", "r", "alpha", "beta", "gamma", "c"};
  ParamSet ps;
  auto assign = [&](const std::string& key, const std::string& text, const YAML::Node& where) {
    if (!names.count(key)) throw error_at(where, "unknown parameter '" + key + "'");
    if (key == "n") {
      try {
        const Rational r = Rational::parse(text);
        if (!r.is_integer() || r < Rational(1) || r > Rational(64)) throw SchemaError("n");
        ps.n = static_cast<long long>(r.to_double());
      } catch (const SchemaError&) {
        throw error_at(where, "parameter n: '" + text + "' is not a dimension");
      }
      return;
    }
    std::optional<ExtRational>* slot = key == "s"       ? &ps.s
                                       : key == "p"     ? &ps.p
                                       : key == "q"     ? &ps.q
                                       : key == "r"     ? &ps.r
                                       : key == "alpha" ? &ps.alpha
                                       : key == "beta"  ? &ps.beta
                                       : key == "gamma" ? &ps.gamma
                                                        : &ps.c;
    if (slot->has_value()) throw error_at(where, "parameter '" + key + "' given twice");
    try {
      *slot = ExtRational::parse(text);
    } catch (const SchemaError&) {
      throw error_at(where, "parameter " + key + ": '" + text + "' is not an exact number or inf");
    }
  };
  if (node.IsScalar()) {
    std::stringstream in(node.Scalar());
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t");
        const auto e = t.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
      };
      if (eq == std::string::npos) throw error_at(node, "parameter '" + trim(item) + "' lacks '='");
      assign(trim(item.substr(0, eq)), trim(item.substr(eq + 1)), node);
    }
  } else if (node.IsMap()) {
    for (const auto& kv : node) assign(kv.first.as<std::string>(), scalar(kv.second, "parameter"), kv.first);
  } else {
    throw error_at(node, "params must be a string or a mapping");
  }
  return ps;
}

VerifyBlock parse_verify(const YAML::Node& node) {
  check_keys(node, {"runs", "golden", "grid_density", "method", "ball_radius", "ball_modes", "max_pairs", "jitter"},
             "verify");
  VerifyBlock v;
  if (node["runs"]) {
    if (!node["runs"].IsSequence()) throw error_at(node["runs"], "verify.runs must be a list");
    for (const auto& item : node["runs"]) {
      check_keys(item, {"theorem", "params", "family", "run_anyway"}, "verify run");
      VerifyRun run;
      run.line = item.Mark().line + 1;
      run.column = item.Mark().column + 1;
      if (!item["theorem"]) throw error_at(item, "verify run needs 'theorem'");
      try {
        run.theorem = parse_theorem(scalar(item["theorem"], "theorem"));
      } catch (const SchemaError&) {
        throw error_at(item["theorem"], "unknown theorem '" + item["theorem"].Scalar() + "'");
      }
      if (!item["params"]) throw error_at(item, "verify run needs 'params'");
      run.params = parse_params(item["params"]);
      if (item["family"]) run.family = parse_profiles(item["family"]);
      if (item["run_anyway"]) run.run_anyway = boolean(item["run_anyway"], "run_anyway");
      v.runs.push_back(std::move(run));
    }
  }
  if (node["golden"]) v.golden = scalar(node["golden"], "verify.golden");
  if (node["grid_density"]) v.grid_density = rational_text(node["grid_density"], "verify.grid_density");
  if (node["method"]) v.method = one_of(node["method"], "verify.method", {"spectral", "hypersingular"});
  if (node["ball_radius"]) v.ball_radius = rational_text(node["ball_radius"], "verify.ball_radius");
  if (node["ball_modes"]) v.ball_modes = integer(node["ball_modes"], "verify.ball_modes");
  if (node["max_pairs"]) v.max_pairs = integer(node["max_pairs"], "verify.max_pairs");
  if (node["jitter"]) v.jitter = rational_text(node["jitter"], "verify.jitter");
  if (Rational::parse(v.grid_density).sign() <= 0) throw error_at(node, "verify.grid_density must be positive");
  if (Rational::parse(v.ball_radius).sign() <= 0) throw error_at(node, "verify.ball_radius must be positive");
  if (v.ball_modes < 1 || v.ball_modes > 4096) throw error_at(node, "verify.ball_modes must lie in [1, 4096]");
  if (v.max_pairs < 1) throw error_at(node, "verify.max_pairs must be positive");
  const Rational j = Rational::parse(v.jitter);
  if (j.sign() < 0 || !(j < Rational(1))) throw error_at(node, "verify.jitter must lie in [0, 1)");
  return v;
}

BallBlock parse_ball(const YAML::Node& node) {
  check_keys(node, {"n", "R", "K", "s", "p", "grid"}, "ball");
  BallBlock b;
  if (node["n"]) b.n = integer(node["n"], "ball.n");
  if (node["R"]) b.R = rational_text(node["R"], "ball.R");
  if (node["K"]) b.K = integer(node["K"], "ball.K");
  if (node["s"]) b.s = rational_text(node["s"], "ball.s");
  if (node["p"]) b.p = rational_text(node["p"], "ball.p");
  if (b.n < 1 || b.n > 64) throw error_at(node, "ball.n must lie in [1, 64]");
  if (b.K < 1 || b.K > 4096) throw error_at(node, "ball.K must lie in [1, 4096]");
  if (Rational::parse(b.R).sign() <= 0) throw error_at(node, "ball.R must be positive");
  if (Rational::parse(b.s).sign() <= 0) throw error_at(node, "ball.s must be positive");
  if (Rational::parse(b.p) < Rational(1)) throw error_at(node, "ball.p must be at least 1");
  // default grid: 101 equispaced radii on [0, R]
  b.grid = GridSpec{"0", b.R, 101, "linear"};
  if (node["grid"]) b.grid = parse_grid(node["grid"], b.grid);
  if (Rational::parse(b.R) < Rational::parse(b.grid.r_max)) throw error_at(node, "ball.grid must stay inside [0, R]");
  return b;
}

nlohmann::json profile_json(const ProfileSpec& p) {
  nlohmann::json j = nlohmann::json::object();
  j["kind"] = p.kind;
  if (p.n) j["n"] = *p.n;
  for (const auto& [k, v] : p.fields) j[k] = v;
  return j;
}

nlohmann::json grid_json(const GridSpec& g) {
  return {{"r_min", g.r_min}, {"r_max", g.r_max}, {"nodes", g.nodes}, {"spacing", g.spacing}};
}

std::string param_text(const std::optional<ExtRational>& x) { return x ? x->str() : std::string(); }

}  // namespace

double to_real(const std::string& text, const std::string& what) {
  try {
    return ExtRational::parse(text).to_double();
  } catch (const SchemaError&) {
    throw ConfigError(what + ": '" + text + "' is not an exact number");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node loaded;
  try {
    loaded = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1, e.mark.is_null() ? 0 : e.mark.column + 1);
  }
  const YAML::Node& root = loaded;
  RunConfig cfg;
  cfg.source = source;
  if (!root || root.IsNull()) throw ConfigError("empty configuration", 1, 1);
  check_keys(root, {"n", "profiles", "grid", "quadrature", "potential", "derivative", "verify", "ball", "threads", "seed"},
             "configuration");
  if (root["n"]) {
    cfg.n = integer(root["n"], "n");
    if (*cfg.n < 1 || *cfg.n > 64) throw error_at(root["n"], "n must lie in [1, 64]");
  }
  if (root["profiles"]) cfg.profiles = parse_profiles(root["profiles"]);
  if (root["grid"]) cfg.grid = parse_grid(root["grid"], GridSpec{});
  if (root["quadrature"]) cfg.quadrature = parse_quadrature(root["quadrature"]);
  if (root["potential"]) {
    const YAML::Node node = root["potential"];
    check_keys(node, {"op", "s", "route"}, "potential");
    PotentialBlock b;
    if (node["op"]) b.op = one_of(node["op"], "potential.op", {"riesz", "bessel"});
    if (node["s"]) b.s = rational_text(node["s"], "potential.s");
    if (node["route"]) b.route = one_of(node["route"], "potential.route", {"ring", "spectral"});
    cfg.potential = b;
  }
  if (root["derivative"]) {
    const YAML::Node node = root["derivative"];
    check_keys(node, {"s", "method"}, "derivative");
    DerivativeBlock b;
    if (node["s"]) b.s = rational_text(node["s"], "derivative.s");
    if (node["method"]) b.method = one_of(node["method"], "derivative.method", {"spectral", "hypersingular"});
    cfg.derivative = b;
  }
  if (root["verify"]) cfg.verify = parse_verify(root["verify"]);
  if (root["ball"]) cfg.ball = parse_ball(root["ball"]);
  if (root["threads"]) {
    cfg.threads = integer(root["threads"], "threads");
    if (cfg.threads < 1 || cfg.threads > 1024) throw error_at(root["threads"], "threads must lie in [1, 1024]");
  }
  if (root["seed"]) {
    const long long s = integer(root["seed"], "seed");
    if (s < 0) throw error_at(root["seed"], "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str(), path);
  cfg.dir = std::filesystem::absolute(std::filesystem::path(path)).parent_path().string();
  return cfg;
}

nlohmann::json resolved_config(const RunConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  j["n"] = cfg.n ? nlohmann::json(*cfg.n) : nlohmann::json(nullptr);
  j["profiles"] = nlohmann::json::array();
  for (const auto& p : cfg.profiles) j["profiles"].push_back(profile_json(p));
  j["grid"] = cfg.grid ? grid_json(*cfg.grid) : nlohmann::json(nullptr);
  j["quadrature"] = {{"rel_tol", format_double(cfg.quadrature.rel_tol)},
                     {"abs_tol", format_double(cfg.quadrature.abs_tol)},
                     {"max_subdivisions", cfg.quadrature.max_subdivisions},
                     {"endpoint_rule", to_string(cfg.quadrature.endpoint_rule)}};
  if (cfg.potential)
    j["potential"] = {{"op", cfg.potential->op}, {"s", cfg.potential->s}, {"route", cfg.potential->route}};
  else
    j["potential"] = nullptr;
  if (cfg.derivative)
    j["derivative"] = {{"s", cfg.derivative->s}, {"method", cfg.derivative->method}};
  else
    j["derivative"] = nullptr;
  if (cfg.verify) {
    const VerifyBlock& v = *cfg.verify;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : v.runs) {
      nlohmann::json params = nlohmann::json::object();
      if (r.params.n) params["n"] = *r.params.n;
      const std::pair<const char*, const std::optional<ExtRational>*> fields[] = {
          {"s", &r.params.s},     {"p", &r.params.p},         {"q", &r.params.q},
          {"r", &r.params.r},     {"alpha", &r.params.alpha}, {"beta", &r.params.beta},
          {"gamma", &r.params.gamma}, {"c", &r.params.c}};
      for (const auto& [name, slot] : fields)
        if (*slot) params[name] = param_text(*slot);
      nlohmann::json run = {{"theorem", theorem_name(r.theorem)}, {"params", params}, {"run_anyway", r.run_anyway}};
      if (r.family) {
        run["family"] = nlohmann::json::array();
        for (const auto& p : *r.family) run["family"].push_back(profile_json(p));
      } else {
        run["family"] = "default";
      }
      runs.push_back(run);
    }
    j["verify"] = {{"runs", runs},
                   {"golden", v.golden ? nlohmann::json(*v.golden) : nlohmann::json(nullptr)},
                   {"grid_density", v.grid_density},
                   {"method", v.method},
                   {"ball_radius", v.ball_radius},
                   {"ball_modes", v.ball_modes},
                   {"max_pairs", v.max_pairs},
                   {"jitter", v.jitter}};
  } else {
    j["verify"] = nullptr;
  }
  if (cfg.ball) {
    const BallBlock& b = *cfg.ball;
    j["ball"] = {{"n", b.n}, {"R", b.R}, {"K", b.K}, {"s", b.s}, {"p", b.p}, {"grid", grid_json(b.grid)}};
  } else {
    j["ball"] = nullptr;
  }
  j["seed"] = cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr);
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : resolved_config(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace radlab::cli
