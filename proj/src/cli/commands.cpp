#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "radlab/ball.hpp"
#include "radlab/cli.hpp"
#include "radlab/errors.hpp"
#include "radlab/parallel.hpp"
#include "radlab/potentials.hpp"
#include "radlab/rational.hpp"
#include "radlab/transforms.hpp"

namespace radlab::cli {

namespace fs = std::filesystem;

namespace {

// Runs a library call, translating its failures into CLI failures that name
// the operation. Invalid inputs are configuration errors; everything the
// numerics could not deliver is an operation failure.
template <class F>
auto guarded(const std::string& op, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const OperationFailure&) {
    throw;
  } catch (const NumericError& e) {
    throw OperationFailure(op, e.what());
  } catch (const DomainError& e) {
    throw ConfigError("invalid input to " + op + ": " + e.what());
  } catch (const ContractError& e) {
    throw ConfigError("invalid input to " + op + ": " + e.what());
  } catch (const SchemaError& e) {
    throw ConfigError("invalid input to " + op + ": " + e.what());
  }
}

// Per-index results with the lowest failing index reported, so the error a
// run ends with does not depend on the schedule.
template <class Body>
void ordered_parallel(std::size_t count, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  parallel_for(count, threads, [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Rational exact(const std::string& text) { return Rational::parse(text); }

// Radii of a grid block, 0 included when a linear grid starts there.
std::vector<double> grid_radii(const GridSpec& g) {
  const Rational lo = exact(g.r_min), hi = exact(g.r_max);
  std::vector<double> r;
  if (g.spacing == "log") return Grid::log_uniform(lo.to_double(), hi.to_double(), static_cast<int>(g.nodes)).radii();
  const Rational step = (hi - lo) / Rational(g.nodes - 1);
  for (long long i = 0; i < g.nodes; ++i) r.push_back((lo + step * Rational(i)).to_double());
  return r;
}

std::vector<double> positive(const std::vector<double>& r) {
  std::vector<double> out;
  for (double x : r)
    if (x > 0.0) out.push_back(x);
  return out;
}

// Node values of a result profile; sampled results are read back exactly.
std::vector<double> node_values(const RadialProfile& u, const std::vector<double>& radii) {
  if (const SampledData* d = u.sampled_data(); d && d->radii == radii) return d->values;
  std::vector<double> v;
  v.reserve(radii.size());
  for (double r : radii) v.push_back(u(r));
  return v;
}

ConfigError at_spec(const ProfileSpec& s, const std::string& msg) { return ConfigError(msg, s.line, s.column); }

OutputMeta meta_for(const RunConfig& cfg, const std::string& command) {
  return {command, config_hash(cfg), cfg.quadrature};
}

std::string out_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::vector<RadialProfile> require_profiles(const RunConfig& cfg, std::optional<long long> n,
                                            const BallSpectrum* ball = nullptr) {
  if (cfg.profiles.empty()) throw ConfigError("no profiles");
  return build_profiles(cfg.profiles, n, ball);
}

nlohmann::json profile_list(const std::vector<RadialProfile>& us) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < us.size(); ++i)
    j.push_back({{"index", i}, {"descriptor", us[i].descriptor()}, {"n", us[i].dim()}});
  return j;
}

// Profiles and grid CSVs shared by transform, potential and derivative.
CommandResult write_manifest(const RunConfig& cfg, const std::string& out_dir, const std::string& command,
                             const std::vector<RadialProfile>& us, std::vector<std::string> files,
                             nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json body = std::move(extra);
  body["config"] = resolved_config(cfg);
  body["profiles"] = profile_list(us);
  nlohmann::json names = nlohmann::json::array();
  for (const auto& f : files) names.push_back(fs::path(f).filename().string());
  body["files"] = names;
  const std::string path = out_path(out_dir, command + ".json");
  write_json(path, meta_for(cfg, command), body);
  files.push_back(path);
  return {kOk, files, ""};
}

std::string status_of(const RatioSample& s) {
  if (s.counted) return "counted";
  if (s.excluded) return "excluded";
  if (s.divergent) return "divergent";
  if (s.unexpected) return "unexpected";
  return "failed";
}

nlohmann::json params_json(const ParamSet& ps) {
  nlohmann::json j = nlohmann::json::object();
  if (ps.n) j["n"] = *ps.n;
  const std::pair<const char*, const std::optional<ExtRational>*> fields[] = {
      {"s", &ps.s}, {"p", &ps.p}, {"q", &ps.q}, {"r", &ps.r}, {"alpha", &ps.alpha},
      {"beta", &ps.beta}, {"gamma", &ps.gamma}, {"c", &ps.c}};
  for (const auto& [name, slot] : fields)
    if (*slot) j[name] = (*slot)->str();
  return j;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct GoldenOutcome {
  nlohmann::json json;
  std::vector<std::vector<std::string>> rows;
  int mismatches = 0;
};

GoldenOutcome check_golden(const std::string& given, const std::string& dir) {
  fs::path path = given == "builtin" ? fs::path(RADLAB_DATA_DIR) / "admissibility_golden.tsv" : fs::path(given);
  if (path.is_relative() && !dir.empty()) path = fs::path(dir) / path;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read golden table '" + given + "'");
  std::string line;
  std::getline(in, line);
  if (split_tabs(line).size() != 12) throw ConfigError("golden table '" + given + "' has an unexpected header");
  GoldenOutcome g;
  nlohmann::json records = nlohmann::json::array();
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_tabs(line);
    if (f.size() != 12) throw ConfigError("golden table row " + std::to_string(row) + " has " +
                                          std::to_string(f.size()) + " fields");
    ParamSet ps;
    TheoremId t;
    try {
      t = parse_theorem(f[0]);
      ps.n = static_cast<long long>(Rational::parse(f[1]).to_double());
      std::optional<ExtRational>* slots[] = {&ps.s, &ps.p, &ps.q, &ps.r, &ps.alpha, &ps.beta, &ps.gamma, &ps.c};
      for (int k = 0; k < 8; ++k)
        if (!f[2 + k].empty()) *slots[k] = ExtRational::parse(f[2 + k]);
    } catch (const SchemaError& e) {
      throw ConfigError("golden table row " + std::to_string(row) + ": " + e.what());
    }
    const ConditionCheck got = guarded("check_conditions", [&] { return check_conditions(t, ps); });
    const std::string violated = join(got.violated, " | ");
    const bool match = got.admissible == (f[10] == "yes") && violated == f[11];
    g.mismatches += match ? 0 : 1;
    records.push_back({{"theorem", f[0]},
                       {"params", params_json(ps)},
                       {"expected_admissible", f[10] == "yes"},
                       {"expected_violated", f[11]},
                       {"admissible", got.admissible},
                       {"violated", got.violated},
                       {"match", match}});
    g.rows.push_back({f[0], ps.str(), f[10], f[11], got.admissible ? "yes" : "no", violated, match ? "yes" : "no"});
  }
  g.json = {{"table", given}, {"rows", static_cast<int>(g.rows.size())}, {"mismatches", g.mismatches},
            {"records", records}};
  return g;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

RadialProfile build_profile(const ProfileSpec& spec, std::optional<long long> n_context, const BallSpectrum* ball) {
  const std::optional<long long> n = spec.n ? spec.n : n_context;
  if (!n) throw at_spec(spec, spec.kind + " profile needs a dimension n");
  if (*n < 1 || *n > 64) throw at_spec(spec, "profile dimension must lie in [1, 64]");
  if (n_context && spec.n && *spec.n != *n_context)
    throw at_spec(spec, "profile dimension " + std::to_string(*spec.n) + " differs from n = " +
                            std::to_string(*n_context));
  const int dim = static_cast<int>(*n);
  auto num = [&](const std::string& key) { return to_real(spec.fields.at(key), spec.kind + "." + key); };
  try {
    RadialProfile u = RadialProfile::zero(dim);
    if (spec.kind == "gaussian") {
      u = RadialProfile::gaussian(dim, num("sigma"));
    } else if (spec.kind == "smooth_bump") {
      u = RadialProfile::smooth_bump(dim, num("center"), num("width"));
    } else if (spec.kind == "power_cutoff") {
      u = RadialProfile::power_cutoff(dim, num("exponent"), num("cutoff"));
    } else if (spec.kind == "annulus") {
      u = RadialProfile::annulus(dim, num("inner"), num("outer"));
    } else if (spec.kind == "constant") {
      u = RadialProfile::constant(dim, num("value"));
    } else if (spec.kind == "zero") {
      u = RadialProfile::zero(dim);
    } else if (spec.kind == "ball_mode") {
      if (!ball) throw at_spec(spec, "ball_mode profiles need a ball spectrum (ball command or ball theorems)");
      if (ball->n != dim) throw at_spec(spec, "ball_mode dimension differs from the ball's");
      const long long k = std::stoll(spec.fields.at("k"));
      if (k < 1 || k > ball->K)
        throw at_spec(spec, "ball_mode k must lie in [1, " + std::to_string(ball->K) + "]");
      u = ball->mode(static_cast<int>(k));
    } else {
      throw at_spec(spec, spec.kind + " expands to several profiles and cannot stand alone here");
    }
    if (spec.fields.count("dilation")) u = u.dilated(num("dilation"));
    if (spec.fields.count("amplitude")) u = u.scaled(num("amplitude"));
    return u;
  } catch (const DomainError& e) {
    throw at_spec(spec, std::string("invalid ") + spec.kind + " profile: " + e.what());
  }
}

std::vector<RadialProfile> build_profiles(const std::vector<ProfileSpec>& specs, std::optional<long long> n_context,
                                          const BallSpectrum* ball) {
  std::vector<RadialProfile> out;
  for (const auto& spec : specs) {
    if (spec.kind != "gaussian_dilations") {
      out.push_back(build_profile(spec, n_context, ball));
      continue;
    }
    const long long k0 = std::stoll(spec.fields.at("k_min")), k1 = std::stoll(spec.fields.at("k_max"));
    if (k1 < k0 || k1 - k0 > 256) throw at_spec(spec, "gaussian_dilations needs k_min <= k_max <= k_min + 256");
    const Rational base = exact(spec.fields.at("base")), sigma = exact(spec.fields.at("sigma"));
    if (base.sign() <= 0 || sigma.sign() <= 0) throw at_spec(spec, "gaussian_dilations needs positive sigma and base");
    for (long long k = k0; k <= k1; ++k) {
      // sigma * base^k in exact arithmetic, rounded once
      Rational w = sigma;
      for (long long i = 0; i < (k < 0 ? -k : k); ++i) w = k < 0 ? w / base : w * base;
      ProfileSpec g = spec;
      g.kind = "gaussian";
      g.fields = {{"sigma", w.str()}};
      if (spec.fields.count("dilation")) g.fields["dilation"] = spec.fields.at("dilation");
      if (spec.fields.count("amplitude")) g.fields["amplitude"] = spec.fields.at("amplitude");
      out.push_back(build_profile(g, n_context, ball));
    }
  }
  return out;
}

CommandResult cmd_transform(const RunConfig& cfg, const std::string& out_dir) {
  const std::vector<RadialProfile> us = require_profiles(cfg, cfg.n);
  const std::vector<double> radii = positive(grid_radii(cfg.grid.value_or(GridSpec{})));
  std::vector<std::vector<std::vector<std::string>>> tables(us.size());
  ordered_parallel(us.size(), static_cast<int>(cfg.threads), [&](std::size_t i) {
    const RadialProfile& u = us[i];
    // zero frequency: the mass of u over (2 pi)^{n/2}
    const HankelValue h0 = guarded("hankel_at", [&] { return hankel_at(u, 0.0, cfg.quadrature); });
    const TransformResult tr = guarded("hankel_fourier", [&] {
      return hankel_fourier_with_errors(u, Grid::explicit_radii(radii), cfg.quadrature);
    });
    const std::vector<double> v = node_values(tr.profile, radii);
    auto& rows = tables[i];
    rows.push_back({"0", csv_number(h0.value), csv_number(h0.error)});
    for (std::size_t k = 0; k < radii.size(); ++k)
      rows.push_back({csv_number(radii[k]), csv_number(v[k]), csv_number(tr.error[k])});
  });
  std::vector<std::string> files;
  const OutputMeta meta = meta_for(cfg, "transform");
  for (std::size_t i = 0; i < us.size(); ++i) {
    files.push_back(out_path(out_dir, "transform_" + std::to_string(i) + ".csv"));
    write_csv(files.back(), meta, {"rho", "value", "abs_error_estimate"}, tables[i]);
  }
  return write_manifest(cfg, out_dir, "transform", us, files);
}

CommandResult cmd_potential(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.potential) throw ConfigError("potential command needs a 'potential' block");
  const PotentialBlock& pb = *cfg.potential;
  const double s = to_real(pb.s, "potential.s");
  const std::vector<RadialProfile> us = require_profiles(cfg, cfg.n);
  const std::vector<double> radii = positive(grid_radii(cfg.grid.value_or(GridSpec{})));
  const Grid grid = Grid::explicit_radii(radii);
  const std::string op = pb.op + "_potential_" + pb.route;
  std::vector<std::vector<double>> values(us.size());
  ordered_parallel(us.size(), static_cast<int>(cfg.threads), [&](std::size_t i) {
    const RadialProfile& f = us[i];
    const RadialProfile out = guarded(op, [&] {
      if (pb.op == "riesz")
        return pb.route == "ring" ? riesz_potential(f, s, grid, cfg.quadrature) : riesz_potential_spectral(f, s, grid);
      return pb.route == "ring" ? bessel_convolve(f, s, grid, cfg.quadrature) : bessel_convolve_spectral(f, s, grid);
    });
    values[i] = node_values(out, radii);
  });
  std::vector<std::string> files;
  const OutputMeta meta = meta_for(cfg, "potential");
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < radii.size(); ++k) rows.push_back({csv_number(radii[k]), csv_number(values[i][k])});
    files.push_back(out_path(out_dir, "potential_" + std::to_string(i) + ".csv"));
    write_csv(files.back(), meta, {"r", "value"}, rows);
  }
  return write_manifest(cfg, out_dir, "potential", us, files, {{"operation", op}});
}

CommandResult cmd_derivative(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.derivative) throw ConfigError("derivative command needs a 'derivative' block");
  const DerivativeBlock& db = *cfg.derivative;
  const double s = to_real(db.s, "derivative.s");
  const DiffMethod method = db.method == "spectral" ? DiffMethod::spectral : DiffMethod::hypersingular;
  const std::vector<RadialProfile> us = require_profiles(cfg, cfg.n);
  const std::vector<double> radii = positive(grid_radii(cfg.grid.value_or(GridSpec{})));
  const Grid grid = Grid::explicit_radii(radii);
  // one scheme per dimension, calibrated up front so workers share it read-only
  std::map<int, FracDiffScheme> schemes;
  for (const auto& u : us) {
    if (schemes.count(u.dim())) continue;
    FracDiffScheme sch = guarded("frac_derivative", [&] { return FracDiffScheme::make(u.dim(), s); });
    if (method == DiffMethod::hypersingular) sch = guarded("calibrate", [&] { return calibrate(sch); });
    schemes.emplace(u.dim(), sch);
  }
  std::vector<std::vector<double>> values(us.size());
  ordered_parallel(us.size(), static_cast<int>(cfg.threads), [&](std::size_t i) {
    const RadialProfile out = guarded("frac_derivative", [&] {
      return frac_derivative(us[i], s, schemes.at(us[i].dim()), method, grid, cfg.quadrature);
    });
    values[i] = node_values(out, radii);
  });
  std::vector<std::string> files;
  const OutputMeta meta = meta_for(cfg, "derivative");
  nlohmann::json sch = nlohmann::json::object();
  for (const auto& [n, sc] : schemes)
    sch[std::to_string(n)] = {{"l", sc.l},
                              {"calibration_constant",
                               sc.calibration_constant ? json_number(*sc.calibration_constant) : nlohmann::json()},
                              {"calibration_residual", json_number(sc.calibration_residual)}};
  for (std::size_t i = 0; i < us.size(); ++i) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t k = 0; k < radii.size(); ++k) rows.push_back({csv_number(radii[k]), csv_number(values[i][k])});
    files.push_back(out_path(out_dir, "derivative_" + std::to_string(i) + ".csv"));
    write_csv(files.back(), meta, {"r", "value"}, rows);
  }
  return write_manifest(cfg, out_dir, "derivative", us, files, {{"schemes", sch}});
}

CommandResult cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.verify) throw ConfigError("verify command needs a 'verify' block");
  const VerifyBlock& vb = *cfg.verify;
  if (vb.runs.empty() && !vb.golden) throw ConfigError("verify block has neither runs nor a golden table");
  const Rational jitter = exact(vb.jitter);
  if (jitter.sign() > 0 && !cfg.seed) throw ConfigError("verify.jitter needs a seed (config 'seed' or --seed)");
  std::mt19937_64 rng(cfg.seed.value_or(0));

  MeasureOptions base;
  base.threads = static_cast<int>(cfg.threads);
  base.method = vb.method == "spectral" ? DiffMethod::spectral : DiffMethod::hypersingular;
  base.grid_density = exact(vb.grid_density).to_double();
  base.ball_radius = exact(vb.ball_radius).to_double();
  base.ball_modes = static_cast<int>(vb.ball_modes);
  base.max_pairs = static_cast<std::size_t>(vb.max_pairs);

  const std::string hash = config_hash(cfg);
  nlohmann::json records = nlohmann::json::array();
  std::vector<std::vector<std::string>> rows;
  bool unexpected = false, failed = false;
  std::map<long long, BallSpectrum> spectra;

  for (std::size_t ri = 0; ri < vb.runs.size(); ++ri) {
    const VerifyRun& run = vb.runs[ri];
    const std::string name = theorem_name(run.theorem);
    ConditionCheck check;
    try {
      check = check_conditions(run.theorem, run.params);
    } catch (const SchemaError& e) {
      throw ConfigError(name + ": " + e.what(), run.line, run.column);
    }
    nlohmann::json rec = {{"run", ri},
                          {"theorem", name},
                          {"params", params_json(run.params)},
                          {"params_text", run.params.str()},
                          {"admissible", check.admissible},
                          {"violated", check.violated},
                          {"notes", check.notes},
                          {"run_anyway", run.run_anyway},
                          {"config_hash", hash}};
    const std::string violated = join(check.violated, " | ");
    if (!check.admissible && !run.run_anyway) {
      // verdict only: no profile is evaluated
      rec["measured"] = false;
      records.push_back(rec);
      rows.push_back({std::to_string(ri), name, run.params.str(), "no", violated, "not_run", "", "", "", "", "", "",
                      "", "", ""});
      continue;
    }
    MeasureOptions opt = base;
    opt.run_anyway = run.run_anyway;

    std::vector<RadialProfile> family;
    if (run.family) {
      const BallSpectrum* ball = nullptr;
      bool wants_ball = false;
      for (const auto& p : *run.family) wants_ball = wants_ball || p.kind == "ball_mode";
      if (wants_ball) {
        if (!run.params.n) throw ConfigError(name + ": ball_mode family needs n", run.line, run.column);
        const long long n = *run.params.n;
        if (!spectra.count(n))
          spectra.emplace(n, guarded("build_spectrum", [&] { return build_spectrum(int(n), opt.ball_radius, opt.ball_modes); }));
        ball = &spectra.at(n);
      }
      family = build_profiles(*run.family, run.params.n, ball);
    } else {
      try {
        family = guarded("default_family", [&] { return default_family(run.theorem, run.params, opt); });
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what(), run.line, run.column);
      }
    }
    if (jitter.sign() > 0) {
      const double j = jitter.to_double();
      for (auto& u : family) u = u.dilated(1.0 + j * (2.0 * unit_draw(rng) - 1.0));
    }

    RatioReport rep;
    try {
      rep = guarded("measure_ratio", [&] { return measure_ratio(run.theorem, run.params, family, opt); });
    } catch (const ConfigError& e) {
      throw ConfigError(name + ": " + e.what(), run.line, run.column);
    }
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : rep.samples) {
      samples.push_back({{"descriptor", s.descriptor},
                         {"family_index", s.family_index},
                         {"lhs", json_number(s.lhs)},
                         {"rhs", json_number(s.rhs)},
                         {"ratio", json_number(s.ratio)},
                         {"status", status_of(s)},
                         {"flag", s.flag},
                         {"grid_resolution", json_number(s.grid_resolution)},
                         {"gradient_ratio", json_number(s.gradient_ratio)}});
      rows.push_back({std::to_string(ri), name, run.params.str(), check.admissible ? "yes" : "no", violated,
                      status_of(s), s.descriptor, std::to_string(s.family_index), csv_number(s.lhs), csv_number(s.rhs),
                      csv_number(s.ratio), s.flag, csv_number(s.grid_resolution), csv_number(s.gradient_ratio),
                      csv_number(rep.sup_ratio)});
    }
    rec["measured"] = true;
    rec["notes"] = rep.notes;
    rec["samples"] = samples;
    rec["sup_ratio"] = json_number(rep.sup_ratio);
    rec["counts"] = {{"counted", rep.counted},
                     {"excluded", rep.excluded},
                     {"divergent", rep.divergent},
                     {"unexpected", rep.unexpected},
                     {"failed", rep.failed}};
    rec["grid"] = {{"r_min_factor", json_number(rep.grid.r_min_factor)},
                   {"r_max_factor", json_number(rep.grid.r_max_factor)},
                   {"nodes_per_decade", rep.grid.nodes_per_decade},
                   {"derivative_method", rep.grid.derivative_method},
                   {"potential_method", rep.grid.potential_method},
                   {"ball_modes", rep.grid.ball_modes},
                   {"ball_radius", json_number(rep.grid.ball_radius)}};
    records.push_back(rec);
    unexpected = unexpected || rep.unexpected > 0;
    failed = failed || rep.failed > 0;
  }

  nlohmann::json body = {{"config", resolved_config(cfg)}, {"runs", records}};
  const OutputMeta meta = meta_for(cfg, "verify");
  std::vector<std::string> files;
  int golden_mismatches = 0;
  if (vb.golden) {
    GoldenOutcome g = check_golden(*vb.golden, cfg.dir);
    golden_mismatches = g.mismatches;
    body["golden"] = g.json;
    files.push_back(out_path(out_dir, "verify_golden.csv"));
    write_csv(files.back(), meta,
              {"theorem", "params", "expected_admissible", "expected_violated", "admissible", "violated", "match"},
              g.rows);
  }
  files.push_back(out_path(out_dir, "verify.csv"));
  write_csv(files.back(), meta,
            {"run", "theorem", "params", "admissible", "violated", "status", "descriptor", "family_index", "lhs", "rhs",
             "ratio", "flag", "grid_resolution", "gradient_ratio", "sup_ratio"},
            rows);
  files.push_back(out_path(out_dir, "verify.json"));
  write_json(files.back(), meta, body);

  CommandResult res{kOk, files, ""};
  if (unexpected) {
    res.exit_code = kDivergence;
    res.message = "a sample diverged unexpectedly (finite right-hand side, infinite left-hand side)";
  } else if (failed) {
    res.exit_code = kNumericFailure;
    res.message = "numeric failure in measure_ratio: some samples could not be evaluated";
  } else if (golden_mismatches > 0) {
    res.exit_code = kNumericFailure;
    res.message = std::to_string(golden_mismatches) + " verdicts differ from the golden table";
  }
  return res;
}

CommandResult cmd_ball(const RunConfig& cfg, const std::string& out_dir) {
  if (!cfg.ball) throw ConfigError("ball command needs a 'ball' block");
  const BallBlock& bb = *cfg.ball;
  const double R = exact(bb.R).to_double(), s = exact(bb.s).to_double(), p = exact(bb.p).to_double();
  const BallSpectrum spec =
      guarded("build_spectrum", [&] { return build_spectrum(static_cast<int>(bb.n), R, static_cast<int>(bb.K)); });
  const std::vector<RadialProfile> fs_ = require_profiles(cfg, bb.n, &spec);
  const std::vector<double> radii = grid_radii(bb.grid);

  // the pointwise ball inequality needs 1/p < s < n/p, decided exactly
  const Rational sr = exact(bb.s), pr = exact(bb.p), nr(bb.n);
  const bool ni_range = Rational(1) / pr < sr && sr < nr / pr;

  struct Out {
    BallExpansion ex;
    std::vector<double> u, f;
    std::optional<NiBallRatio> ni;
    std::string ni_note;
  };
  std::vector<Out> outs(fs_.size());
  ordered_parallel(fs_.size(), static_cast<int>(cfg.threads), [&](std::size_t i) {
    Out& o = outs[i];
    o.ex = guarded("ball_expand", [&] { return ball_expand(fs_[i], s, spec); });
    for (double r : radii) {
      o.u.push_back(o.ex.u(r));
      o.f.push_back(fs_[i](r));
    }
    if (!ni_range) {
      o.ni_note = "skipped: needs 1/p < s < n/p";
      return;
    }
    try {
      o.ni = guarded("ni_ball_ratio", [&] { return ni_ball_ratio(fs_[i], s, p, spec); });
    } catch (const ConfigError& e) {
      o.ni_note = std::string("skipped: ") + e.what();
    }
  });

  const OutputMeta meta = meta_for(cfg, "ball");
  std::vector<std::string> files;
  std::vector<std::vector<std::string>> eig;
  for (int k = 0; k < spec.K; ++k)
    eig.push_back({std::to_string(k + 1), csv_number(spec.zeros[k]), csv_number(spec.eigenvalues[k]),
                   csv_number(spec.normalizers[k])});
  files.push_back(out_path(out_dir, "ball_eigenvalues.csv"));
  write_csv(files.back(), meta, {"k", "zero", "eigenvalue", "normalizer"}, eig);

  std::vector<std::vector<std::string>> ex, ni;
  nlohmann::json profiles = nlohmann::json::array();
  for (std::size_t i = 0; i < fs_.size(); ++i) {
    const Out& o = outs[i];
    for (std::size_t k = 0; k < radii.size(); ++k)
      ex.push_back({std::to_string(i), csv_number(radii[k]), csv_number(o.f[k]), csv_number(o.u[k])});
    nlohmann::json coeffs = nlohmann::json::array();
    for (double c : o.ex.coefficients) coeffs.push_back(json_number(c));
    nlohmann::json rec = {{"index", i},
                          {"descriptor", fs_[i].descriptor()},
                          {"coefficients", coeffs},
                          {"tail_estimate", json_number(o.ex.tail_estimate)},
                          {"truncated_norm", json_number(o.ex.truncated_norm)},
                          {"truncation_warning", o.ex.truncation_warning}};
    if (o.ni) {
      const NiBallRatio& q = *o.ni;
      const std::string status = q.degenerate ? "excluded" : "counted";
      ni.push_back({std::to_string(i), fs_[i].descriptor(), status, csv_number(q.lhs), csv_number(q.rhs),
                    csv_number(q.ratio), csv_number(q.gradient_ratio), csv_number(q.grid_resolution), ""});
      rec["ni"] = {{"status", status},
                   {"lhs", json_number(q.lhs)},
                   {"rhs", json_number(q.rhs)},
                   {"ratio", json_number(q.ratio)},
                   {"gradient_ratio", json_number(q.gradient_ratio)},
                   {"grad_norm", json_number(q.grad_norm)},
                   {"grid_resolution", json_number(q.grid_resolution)}};
    } else {
      ni.push_back({std::to_string(i), fs_[i].descriptor(), "skipped", "", "", "", "", "", o.ni_note});
      rec["ni"] = {{"status", "skipped"}, {"note", o.ni_note}};
    }
    profiles.push_back(rec);
  }
  files.push_back(out_path(out_dir, "ball_expansion.csv"));
  write_csv(files.back(), meta, {"profile", "r", "f", "u"}, ex);
  files.push_back(out_path(out_dir, "ball_ni.csv"));
  write_csv(files.back(), meta,
            {"profile", "descriptor", "status", "lhs", "rhs", "ratio", "gradient_ratio", "grid_resolution", "note"}, ni);

  nlohmann::json body = {{"config", resolved_config(cfg)},
                         {"spectrum",
                          {{"n", spec.n},
                           {"R", json_number(spec.R)},
                           {"K", spec.K},
                           {"nu", json_number(spec.nu)},
                           {"orthonormality_residual", json_number(spec.orthonormality_residual)},
                           {"eigen_residual", json_number(spec.eigen_residual)}}},
                         {"profiles", profiles}};
  files.push_back(out_path(out_dir, "ball.json"));
  write_json(files.back(), meta, body);
  return {kOk, files, ""};
}

namespace {

// Metadata every output file must carry.
std::string missing_metadata(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unreadable";
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    for (const char* key : {"# tool: radlab ", "# config_hash: ", "# quadrature: "})
      if (text.find(std::string("\n") + key) == std::string::npos && text.rfind(key, 0) != 0)
        return std::string("no '") + key + "' line";
    return "";
  }
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto& m = j.at("meta");
    if (m.at("tool") != "radlab" || m.at("version") != RADLAB_VERSION) return "wrong tool or version";
    if (m.at("config_hash").get<std::string>().size() != 16) return "bad config hash";
    if (!m.at("quadrature").is_object()) return "no quadrature";
    if (!j.at("config").is_object()) return "no resolved config";
  } catch (const std::exception& e) {
    return std::string("metadata: ") + e.what();
  }
  return "";
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CommandResult cmd_selftest(const std::string& out_dir) {
  struct Case {
    std::string name, yaml;
    CommandResult (*cmd)(const RunConfig&, const std::string&);
  };
  const std::vector<Case> cases = {
      {"transform", "n: 3\nprofiles: [{kind: gaussian, sigma: 1}]\ngrid: {r_min: 1/10, r_max: 4, nodes: 9}\n",
       &cmd_transform},
      {"potential",
       "n: 3\nprofiles: [{kind: gaussian, sigma: 1}]\ngrid: {r_min: 1/10, r_max: 4, nodes: 5}\n"
       "potential: {op: riesz, s: 1, route: spectral}\n",
       &cmd_potential},
      {"derivative",
       "n: 3\nprofiles: [{kind: gaussian, sigma: 1}]\ngrid: {r_min: 1/10, r_max: 4, nodes: 5}\n"
       "derivative: {s: 1, method: spectral}\n",
       &cmd_derivative},
      {"verify",
       "verify:\n  golden: builtin\n  runs:\n    - {theorem: Ni_6_1, params: \"n=3, s=2, p=2\"}\n",
       &cmd_verify},
      {"ball", "ball: {n: 3, R: 1, K: 8, s: 2, p: 2}\nprofiles: [{kind: ball_mode, k: 1}, {kind: constant}]\n",
       &cmd_ball},
  };
  nlohmann::json checks = nlohmann::json::array();
  std::vector<std::string> problems;
  std::vector<std::string> written;
  for (const auto& c : cases) {
    const std::string dir = out_path(out_dir, "selftest_" + c.name);
    fs::create_directories(dir);
    const RunConfig cfg = parse_config(c.yaml, "<selftest " + c.name + ">");
    const CommandResult r1 = c.cmd(cfg, dir);
    nlohmann::json files = nlohmann::json::array();
    std::vector<std::string> bytes;
    for (const auto& f : r1.files) {
      bytes.push_back(read_all(f));
      const std::string miss = missing_metadata(f);
      if (!miss.empty()) problems.push_back(fs::path(f).filename().string() + ": " + miss);
      files.push_back({{"file", fs::path(f).filename().string()}, {"metadata", miss.empty() ? "ok" : miss}});
      written.push_back(f);
    }
    if (r1.exit_code != kOk) problems.push_back(c.name + " exited with " + std::to_string(r1.exit_code));
    // re-execution must reproduce every byte
    const CommandResult r2 = c.cmd(cfg, dir);
    bool same = r2.files == r1.files;
    for (std::size_t k = 0; same && k < r1.files.size(); ++k) same = read_all(r1.files[k]) == bytes[k];
    if (!same) problems.push_back(c.name + " output not reproducible");
    checks.push_back({{"command", c.name}, {"exit_code", r1.exit_code}, {"files", files}, {"reproducible", same}});
  }
  RunConfig self;
  const std::string path = out_path(out_dir, "selftest.json");
  write_json(path, meta_for(self, "selftest"),
             {{"config", resolved_config(self)}, {"checks", checks}, {"problems", problems}});
  written.push_back(path);
  CommandResult res{problems.empty() ? kOk : kNumericFailure, written, ""};
  if (!problems.empty()) res.message = "selftest: " + join(problems, "; ");
  return res;
}

int run(int argc, char** argv) {
  CLI::App app{"radlab: radial function inequality laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "radlab_out";
  std::optional<long long> threads;
  std::optional<long long> seed;
  const std::vector<std::string> names = {"transform", "potential", "derivative", "verify", "ball", "selftest"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    auto* cfg_opt = sub->add_option("--config", config_path, "configuration file (YAML or JSON)");
    if (name != "selftest") cfg_opt->required();
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--seed", seed, "seed for family jitter")->check(CLI::NonNegativeNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  std::string command;
  for (const auto& name : names)
    if (app.got_subcommand(name)) command = name;

  try {
    fs::create_directories(out_dir);
    CommandResult res;
    if (command == "selftest") {
      res = cmd_selftest(out_dir);
    } else {
      RunConfig cfg = load_config(config_path);
      if (threads) cfg.threads = *threads;
      if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
      if (command == "transform") res = cmd_transform(cfg, out_dir);
      if (command == "potential") res = cmd_potential(cfg, out_dir);
      if (command == "derivative") res = cmd_derivative(cfg, out_dir);
      if (command == "verify") res = cmd_verify(cfg, out_dir);
      if (command == "ball") res = cmd_ball(cfg, out_dir);
    }
    for (const auto& f : res.files) std::cout << f << "\n";
    if (!res.message.empty()) std::cerr << res.message << "\n";
    return res.exit_code;
  } catch (const ConfigError& e) {
    if (e.line() > 0)
      std::cerr << "config error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
    else
      std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OperationFailure& e) {
    std::cerr << "numeric failure in " << e.operation() << ": " << e.what() << "\n";
    return kNumericFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "numeric failure in output: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure in output: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace radlab::cli
