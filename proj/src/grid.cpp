#include "radlab/grid.hpp"

#include <cmath>

#include "radlab/errors.hpp"

namespace radlab {

Grid Grid::log_uniform(double r_min, double r_max, int m) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw DomainError("log-uniform grid needs 0 < r_min < r_max < inf");
  if (m < 2) throw DomainError("log-uniform grid needs at least 2 nodes");
  std::vector<double> r(m);
  const double a = std::log(r_min), b = std::log(r_max);
  for (int i = 0; i < m; ++i) r[i] = std::exp(a + (b - a) * i / (m - 1));
  r.front() = r_min;
  r.back() = r_max;
  return Grid(std::move(r), Spacing::log_uniform);
}

Grid Grid::explicit_radii(std::vector<double> radii) {
  if (radii.empty()) throw DomainError("grid must have at least one node");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(radii[i]) || !(radii[i] > 0.0))
      throw DomainError("grid radii must be finite and positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw DomainError("grid radii must be strictly increasing");
  }
  return Grid(std::move(radii), Spacing::explicit_radii);
}

Grid Grid::refined() const {
  if (spacing_ == Spacing::log_uniform)
    return log_uniform(radii_.front(), radii_.back(), 2 * static_cast<int>(radii_.size()) - 1);
  std::vector<double> r;
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (i > 0) r.push_back(std::sqrt(radii_[i - 1] * radii_[i]));
    r.push_back(radii_[i]);
  }
  return Grid(std::move(r), Spacing::explicit_radii);
}

}  // namespace radlab
