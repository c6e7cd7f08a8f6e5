#include "udrs/kernels.hpp"

#include <atomic>

namespace udrs::kernels {

std::size_t count_within_scalar(const double* xs, const double* ys, std::size_t n, double qx,
                                double qy, double r2) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - qx;
    double dy = ys[i] - qy;
    c += (dx * dx + dy * dy <= r2);
  }
  return c;
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

namespace {

std::atomic<int> g_isa{-1};

Isa detect() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

}  // namespace

Isa active_isa() {
  int v = g_isa.load(std::memory_order_relaxed);
  if (v < 0) {
    v = static_cast<int>(detect());
    g_isa.store(v, std::memory_order_relaxed);
  }
  return static_cast<Isa>(v);
}

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  g_isa.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa() { g_isa.store(static_cast<int>(detect()), std::memory_order_relaxed); }

std::size_t count_within(const double* xs, const double* ys, std::size_t n, double qx, double qy,
                         double r2) {
  if (active_isa() == Isa::avx2) return count_within_avx2(xs, ys, n, qx, qy, r2);
  return count_within_scalar(xs, ys, n, qx, qy, r2);
}

}  // namespace udrs::kernels
