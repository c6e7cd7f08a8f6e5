#pragma once

#include <cstddef>
#include <cstdint>

namespace udrs::kernels {

enum class Isa : std::uint8_t { scalar, avx2 };

// Number of i < n with (xs[i]-qx)^2 + (ys[i]-qy)^2 <= r2.
std::size_t count_within_scalar(const double* xs, const double* ys, std::size_t n, double qx,
                                double qy, double r2);
std::size_t count_within_avx2(const double* xs, const double* ys, std::size_t n, double qx,
                              double qy, double r2);

bool cpu_has_avx2();
Isa active_isa();
// Pin the dispatch (tests and benchmarks). Requesting avx2 on a machine
// without it falls back to scalar.
void force_isa(Isa isa);
void reset_isa();

std::size_t count_within(const double* xs, const double* ys, std::size_t n, double qx, double qy,
                         double r2);

}  // namespace udrs::kernels
