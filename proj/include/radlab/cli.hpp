#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "radlab/ball.hpp"
#include "radlab/conditions.hpp"
#include "radlab/inequality.hpp"
#include "radlab/profile.hpp"
#include "radlab/quadrature.hpp"

namespace radlab::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericFailure = 3, kDivergence = 4 };

// Configuration problem with the position of the offending node (1-based;
// 0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_, column_;
};

// A library operation failed numerically; maps to exit code 3.
class OperationFailure : public std::runtime_error {
 public:
  OperationFailure(std::string op, const std::string& what)
      : std::runtime_error(what), op_(std::move(op)) {}
  const std::string& operation() const noexcept { return op_; }

 private:
  std::string op_;
};

// A profile as written in the config. Numbers are kept as their source text
// and converted through exact rationals.
struct ProfileSpec {
  std::string kind;  // gaussian, smooth_bump, power_cutoff, annulus, constant, zero, ball_mode, gaussian_dilations
  std::optional<long long> n;
  std::map<std::string, std::string> fields;
  int line = 0, column = 0;
};

struct GridSpec {
  std::string r_min = "1/1000", r_max = "10";
  long long nodes = 101;
  std::string spacing = "log";  // log | linear
};

struct PotentialBlock {
  std::string op = "riesz";      // riesz | bessel
  std::string route = "ring";    // ring | spectral
  std::string s = "1";
};

struct DerivativeBlock {
  std::string s = "1";
  std::string method = "spectral";  // spectral | hypersingular
};

struct VerifyRun {
  TheoremId theorem = TheoremId::Sobolev_1_1;
  ParamSet params;
  std::optional<std::vector<ProfileSpec>> family;  // absent: default family
  bool run_anyway = false;
  int line = 0, column = 0;
};

struct VerifyBlock {
  std::vector<VerifyRun> runs;
  std::optional<std::string> golden;  // admissibility table to reproduce
  std::string grid_density = "1";
  std::string method = "spectral";
  std::string ball_radius = "1";
  long long ball_modes = 64;
  long long max_pairs = 16;
  std::string jitter = "0";  // relative dilation jitter of family members, needs a seed
};

struct BallBlock {
  long long n = 3;
  std::string R = "1";
  long long K = 64;
  std::string s = "1";
  std::string p = "2";
  GridSpec grid{"0", "1", 101, "linear"};
};

struct RunConfig {
  std::optional<long long> n;  // default dimension of profiles
  std::vector<ProfileSpec> profiles;
  std::optional<GridSpec> grid;
  QuadratureSpec quadrature;
  std::optional<PotentialBlock> potential;
  std::optional<DerivativeBlock> derivative;
  std::optional<VerifyBlock> verify;
  std::optional<BallBlock> ball;
  long long threads = 1;
  std::optional<std::uint64_t> seed;
  std::string source;  // path, for messages
  std::string dir;     // relative paths inside the config resolve against this
};

// YAML (JSON accepted) text to a RunConfig. Unknown keys, malformed numbers
// and wrong shapes are ConfigErrors carrying line and column.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// Canonical resolved configuration (defaults filled in, keys sorted). The
// thread count is left out: it may not influence any output byte.
nlohmann::json resolved_config(const RunConfig& cfg);
// FNV-1a 64 of the compact dump of resolved_config, 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// Exact config number to double; ConfigError naming `what` otherwise.
double to_real(const std::string& text, const std::string& what);
RadialProfile build_profile(const ProfileSpec& spec, std::optional<long long> n_context,
                            const BallSpectrum* ball = nullptr);
std::vector<RadialProfile> build_profiles(const std::vector<ProfileSpec>& specs, std::optional<long long> n_context,
                                          const BallSpectrum* ball = nullptr);

// Output files: CSV (comma, header row, LF) preceded by '#' metadata lines,
// JSON with sorted keys. Both carry tool version, config hash and quadrature.
struct OutputMeta {
  std::string command;
  std::string config_hash;
  QuadratureSpec quadrature;
};
std::string csv_escape(const std::string& field);
std::string csv_number(double x);  // shortest round-trip; nan, inf, -inf spelled out
void write_csv(const std::string& path, const OutputMeta& meta, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_json(const std::string& path, const OutputMeta& meta, nlohmann::json body);
nlohmann::json meta_json(const OutputMeta& meta);
nlohmann::json json_number(double x);  // null for nan and inf

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::string> files;  // written, in order
  std::string message;
};

CommandResult cmd_transform(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_potential(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_derivative(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_verify(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_ball(const RunConfig& cfg, const std::string& out_dir);
// Small end-to-end runs; fails when a written file lacks its metadata.
CommandResult cmd_selftest(const std::string& out_dir);

// Entry point of the executable; returns the process exit code.
int run(int argc, char** argv);

}  // namespace radlab::cli
