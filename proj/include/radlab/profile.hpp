#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "radlab/grid.hpp"

namespace radlab {

class RadialProfile;

// u0(r) = exp(-r^2 / (2 sigma^2))
struct Gaussian {
  double sigma;
};

// u0(r) = exp(1 - 1/(1 - t^2)), t = (r - center)/width, zero for |t| >= 1.
// center is 0 (a ball bump, even in r) or >= width (vanishes near the origin).
struct SmoothBump {
  double center;
  double width;
};

// u0(r) = r^a * psi(r/R) with a C-infinity cutoff psi = 1 on [0,1], 0 on [2,inf).
struct PowerCutoff {
  double exponent;
  double cutoff;
};

// u0 = 1 on [inner, outer], 0 elsewhere.
struct AnnulusIndicator {
  double inner;
  double outer;
};

struct ConstantProfile {};

// u0(r) = r^{-nu} J_nu(zero * r / radius) on [0, radius], 0 beyond (a radial
// Dirichlet mode of the ball, unnormalized).
struct BesselMode {
  double nu;
  double zero;
  double radius;
};

struct SampledData {
  std::vector<double> radii, values;
  std::vector<double> log_radii, log_abs;  // log|v|, -inf where v == 0
  std::vector<unsigned char> log_mode;     // per interval: interpolate log|v| (1) or v (0)
  double tail_exponent;                    // -inf: identically zero beyond the grid
};

// Values on a grid; constant below the first node, v_last * (r/r_last)^tail
// above the last one; 4-point Lagrange interpolation in log r between nodes.
// Each interval interpolates log|v| or v, whichever predicts the interior
// stencil nodes better from their neighbours (log|v| needs one strict sign).
struct Sampled {
  std::shared_ptr<const SampledData> data;
};

struct Combination {
  std::vector<std::pair<double, std::shared_ptr<const RadialProfile>>> terms;
};

enum class TailKind { compact, rapid, power };

struct TailBehavior {
  TailKind kind;
  double exponent;  // u0 ~ r^exponent at infinity when kind == power
};

class RadialProfile {
 public:
  using Kind = std::variant<Gaussian, SmoothBump, PowerCutoff, AnnulusIndicator, ConstantProfile,
                            BesselMode, Sampled, Combination>;

  RadialProfile(int dim, Kind kind, double amplitude = 1.0);

  static RadialProfile gaussian(int n, double sigma);
  static RadialProfile smooth_bump(int n, double center, double width);
  static RadialProfile power_cutoff(int n, double exponent, double cutoff);
  static RadialProfile annulus(int n, double inner, double outer);
  static RadialProfile constant(int n, double value);
  static RadialProfile zero(int n);
  static RadialProfile bessel_mode(int n, double nu, double zero, double radius,
                                   double amplitude = 1.0);
  static RadialProfile sampled(int n, const Grid& grid, std::vector<double> values,
                               double tail_exponent);
  static RadialProfile combination(
      int n, const std::vector<std::pair<double, RadialProfile>>& terms);

  int dim() const noexcept { return dim_; }
  const Kind& kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  bool is_sampled() const noexcept { return std::holds_alternative<Sampled>(kind_); }
  const SampledData* sampled_data() const noexcept;

  double operator()(double r) const;
  double derivative(double r) const;

  // Behaviour descriptors consumed by quadrature setup and divergence checks.
  bool is_zero() const;
  double support_radius() const;   // +inf unless compactly supported
  double inner_radius() const;     // u0 vanishes on [0, inner_radius)
  double scale() const;            // natural length scale
  double effective_radius(double rel) const;  // |u0| < rel * sup beyond this
  TailBehavior tail() const;
  double origin_exponent() const;  // u0 ~ r^e near 0; +inf if it vanishes there
  bool smooth() const;             // C-infinity as a function on R^n
  bool has_jump() const;
  std::vector<double> features() const;  // radii where u0 is not smooth

  RadialProfile dilated(double lambda) const;  // x -> u(lambda x)
  RadialProfile scaled(double c) const;
  std::string descriptor() const;

  const std::vector<std::string>& notes() const noexcept { return notes_; }
  RadialProfile with_note(std::string note) const;

 private:
  int dim_;
  Kind kind_;
  double amplitude_;
  std::vector<std::string> notes_;
};

// Free-function form of RadialProfile::operator(); DomainError on bad r.
double eval_profile(const RadialProfile& u, double r);

// Samples u on grid with the given tail exponent.
RadialProfile sample(const RadialProfile& u, const Grid& grid, double tail_exponent);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

}  // namespace radlab
