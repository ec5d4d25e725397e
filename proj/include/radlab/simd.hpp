#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense reduction kernels used by the discrete Hankel sums, the ball Gram
// matrices and quadrature panel accumulation.
//
// Every variant accumulates element i into lane (i mod 8), folds lanes
// (k, k+4), then reduces ((l0+l1)+(l2+l3)) and finally adds the tail.  With
// contraction disabled this makes the vector variants bit-identical to the
// scalar reference, so results never depend on the host ISA.
namespace radlab::kernels {

enum class Isa { scalar, avx2, neon };

Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;
bool isa_available(Isa isa) noexcept;

double dot(const double* a, const double* b, std::size_t n) noexcept;
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

// y[i] = dot(row i of row-major A (rows x cols), x)
void matvec(const double* A, const double* x, double* y, std::size_t rows,
            std::size_t cols) noexcept;

// Explicit variants for equivalence tests; calling an unavailable one is UB.
double dot_scalar(const double* a, const double* b, std::size_t n) noexcept;
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
double dot_neon(const double* a, const double* b, std::size_t n) noexcept;

// Pairwise (tree) summation: deterministic and O(log n) error growth.
double pairwise_sum(const double* a, std::size_t n) noexcept;
inline double pairwise_sum(std::span<const double> a) noexcept {
  return pairwise_sum(a.data(), a.size());
}

}  // namespace radlab::kernels
