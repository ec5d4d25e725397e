#include "radlab/simd.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define RADLAB_X86 1
#include <immintrin.h>
#else
#define RADLAB_X86 0
#endif

#if defined(__aarch64__)
#define RADLAB_NEON 1
#include <arm_neon.h>
#else
#define RADLAB_NEON 0
#endif

namespace radlab::kernels {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int k = 0; k < 8; ++k) {
      double p = a[i + k] * b[i + k];
      acc[k] = acc[k] + p;
    }
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double p = a[i] * b[i];
    tail = tail + p;
  }
  double f0 = acc[0] + acc[4], f1 = acc[1] + acc[5];
  double f2 = acc[2] + acc[6], f3 = acc[3] + acc[7];
  return ((f0 + f1) + (f2 + f3)) + tail;
}

#if RADLAB_X86
__attribute__((target("avx2"))) double dot_avx2(const double* a, const double* b,
                                                std::size_t n) noexcept {
  __m256d lo = _mm256_setzero_pd();
  __m256d hi = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d plo = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    __m256d phi = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    lo = _mm256_add_pd(lo, plo);
    hi = _mm256_add_pd(hi, phi);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double p = a[i] * b[i];
    tail = tail + p;
  }
  alignas(32) double f[4];
  _mm256_store_pd(f, _mm256_add_pd(lo, hi));
  return ((f[0] + f[1]) + (f[2] + f[3])) + tail;
}
#else
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept {
  return dot_scalar(a, b, n);
}
#endif

#if RADLAB_NEON
double dot_neon(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t r0 = vdupq_n_f64(0.0), r1 = r0, r2 = r0, r3 = r0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    r0 = vaddq_f64(r0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    r1 = vaddq_f64(r1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    r2 = vaddq_f64(r2, vmulq_f64(vld1q_f64(a + i + 4), vld1q_f64(b + i + 4)));
    r3 = vaddq_f64(r3, vmulq_f64(vld1q_f64(a + i + 6), vld1q_f64(b + i + 6)));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    double p = a[i] * b[i];
    tail = tail + p;
  }
  float64x2_t s01 = vaddq_f64(r0, r2);
  float64x2_t s23 = vaddq_f64(r1, r3);
  double f0 = vgetq_lane_f64(s01, 0), f1 = vgetq_lane_f64(s01, 1);
  double f2 = vgetq_lane_f64(s23, 0), f3 = vgetq_lane_f64(s23, 1);
  return ((f0 + f1) + (f2 + f3)) + tail;
}
#else
double dot_neon(const double* a, const double* b, std::size_t n) noexcept {
  return dot_scalar(a, b, n);
}
#endif

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if RADLAB_X86
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      return RADLAB_NEON != 0;
  }
  return false;
}

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t) noexcept;

Isa detect() noexcept {
  // RADLAB_FORCE_SCALAR pins the reference path (used to cross-check runs).
  if (const char* v = std::getenv("RADLAB_FORCE_SCALAR"); v && std::strcmp(v, "0") != 0)
    return Isa::scalar;
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

struct Dispatch {
  Isa isa;
  DotFn dot;
};

const Dispatch& dispatch() noexcept {
  static const Dispatch d = [] {
    Isa isa = detect();
    DotFn fn = isa == Isa::avx2 ? &dot_avx2 : isa == Isa::neon ? &dot_neon : &dot_scalar;
    return Dispatch{isa, fn};
  }();
  return d;
}

}  // namespace

Isa active_isa() noexcept { return dispatch().isa; }

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
  return dispatch().dot(a, b, n);
}

void matvec(const double* A, const double* x, double* y, std::size_t rows,
            std::size_t cols) noexcept {
  DotFn fn = dispatch().dot;
  for (std::size_t i = 0; i < rows; ++i) y[i] = fn(A + i * cols, x, cols);
}

double pairwise_sum(const double* a, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(a, half) + pairwise_sum(a + half, n - half);
}

}  // namespace radlab::kernels
