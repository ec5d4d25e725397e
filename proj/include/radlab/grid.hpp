#pragma once

#include <cstddef>
#include <vector>

namespace radlab {

enum class Spacing { log_uniform, explicit_radii };

// Strictly increasing positive radii.
class Grid {
 public:
  static Grid log_uniform(double r_min, double r_max, int m);
  static Grid explicit_radii(std::vector<double> radii);

  const std::vector<double>& radii() const noexcept { return radii_; }
  Spacing spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return radii_.size(); }
  double operator[](std::size_t i) const { return radii_[i]; }
  double front() const { return radii_.front(); }
  double back() const { return radii_.back(); }
  auto begin() const noexcept { return radii_.begin(); }
  auto end() const noexcept { return radii_.end(); }

  // Same span with 2m-1 nodes (log-uniform) or midpoints inserted (explicit).
  Grid refined() const;

 private:
  Grid(std::vector<double> r, Spacing s) : radii_(std::move(r)), spacing_(s) {}
  std::vector<double> radii_;
  Spacing spacing_;
};

}  // namespace radlab
