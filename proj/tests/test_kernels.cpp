#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "udrs/geom.hpp"
#include "udrs/kernels.hpp"

using namespace udrs;
using namespace udrs::kernels;

TEST_CASE("vector and scalar distance counts agree") {
  if (!cpu_has_avx2()) {
    MESSAGE("no AVX2 on this machine; only the scalar path is exercised");
    return;
  }
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 1000u, 4099u}) {
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform(-2, 2);
      ys[i] = rng.uniform(-2, 2);
    }
    for (int k = 0; k < 200; ++k) {
      double qx = rng.uniform(-2, 2), qy = rng.uniform(-2, 2), r2 = rng.uniform(0, 3);
      REQUIRE(count_within_avx2(xs.data(), ys.data(), n, qx, qy, r2) ==
              count_within_scalar(xs.data(), ys.data(), n, qx, qy, r2));
    }
  }
}

TEST_CASE("boundary points count on both paths") {
  // points exactly on the unit circle about the origin
  std::vector<double> xs{1, 0, -1, 0, 0.6, 0.8, -0.6, 0.28, 0.96};
  std::vector<double> ys{0, 1, 0, -1, 0.8, 0.6, -0.8, 0.96, 0.28};
  std::size_t want = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) want += xs[i] * xs[i] + ys[i] * ys[i] <= 1.0;
  CHECK(count_within_scalar(xs.data(), ys.data(), xs.size(), 0, 0, 1) == want);
  if (cpu_has_avx2()) CHECK(count_within_avx2(xs.data(), ys.data(), xs.size(), 0, 0, 1) == want);
}

TEST_CASE("dispatch can be pinned") {
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  std::vector<double> xs{0, 0.5, 2}, ys{0, 0, 0};
  CHECK(count_within(xs.data(), ys.data(), 3, 0, 0, 1) == 2);
  force_isa(Isa::avx2);
  CHECK(active_isa() == (cpu_has_avx2() ? Isa::avx2 : Isa::scalar));
  CHECK(count_within(xs.data(), ys.data(), 3, 0, 0, 1) == 2);
  reset_isa();
}
