#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "radlab/simd.hpp"

using namespace radlab::kernels;

namespace {
std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g) * std::exp(6.0 * d(g));
  return v;
}
}  // namespace

TEST_CASE("dot variants are bit-identical to the scalar reference") {
  for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 1000u, 4097u}) {
    auto a = random_vec(n, 11 + n), b = random_vec(n, 97 + n);
    double ref = dot_scalar(a.data(), b.data(), n);
    if (isa_available(Isa::avx2)) CHECK(dot_avx2(a.data(), b.data(), n) == ref);
    if (isa_available(Isa::neon)) CHECK(dot_neon(a.data(), b.data(), n) == ref);
    CHECK(dot(a.data(), b.data(), n) == ref);
  }
}

TEST_CASE("dot matches a long-double reference") {
  auto a = random_vec(5000, 3), b = random_vec(5000, 4);
  long double ref = 0, mag = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ref += static_cast<long double>(a[i]) * b[i];
    mag += std::fabs(static_cast<long double>(a[i]) * b[i]);
  }
  CHECK(std::fabs(dot(a, b) - static_cast<double>(ref)) <= 1e-14 * static_cast<double>(mag));
}

TEST_CASE("matvec applies dot row by row") {
  std::size_t rows = 5, cols = 37;
  auto A = random_vec(rows * cols, 5), x = random_vec(cols, 6);
  std::vector<double> y(rows);
  matvec(A.data(), x.data(), y.data(), rows, cols);
  for (std::size_t i = 0; i < rows; ++i) CHECK(y[i] == dot_scalar(A.data() + i * cols, x.data(), cols));
}

TEST_CASE("pairwise sum is exact on integers and order-stable") {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(v.data(), 0) == 0.0);
  CHECK(isa_name(active_isa()).size() > 0);
}
