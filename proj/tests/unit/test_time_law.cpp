#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "rei3bp/time_law.hpp"

using namespace rei3bp;

namespace {

double binom(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double bessel_j(int n, double x) {
  if (n >= 0) return std::cyl_bessel_j(n, x);
  return ((-n) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(-n, x);
}

// (1 - cos E)^n = sum_j c_j cos(j E), then each term against cos(l (E - sin E))
// is a pair of Bessel functions of argument l.
double a_lk_bessel(int l, int k) {
  int n = 2 * k + 1;
  std::vector<double> c(n + 1, 0.0);
  for (int m = 0; m <= n; ++m) {
    double pre = binom(n, m) * ((m % 2) ? -1.0 : 1.0) / std::ldexp(1.0, m);
    for (int i = 0; i <= m; ++i) c[std::abs(m - 2 * i)] += pre * binom(m, i);
  }
  double a = 0;
  for (int j = 0; j <= n; ++j) a += c[j] * 0.5 * (bessel_j(l - j, l) + bessel_j(l + j, l));
  return a;
}

double kepler_bisect(double t) {
  double lo = t - 1.0, hi = t + 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid - std::sin(mid) < t) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("time_law") {

TEST_CASE("kepler residual over random times") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    double t = dist(rng);
    auto e = solve_kepler<double>(t, 1e-14);
    worst = std::max(worst, std::abs(to_double(e.residual)));
    double E = e.E;
    double tr = t - 2 * M_PI * std::round(t / (2 * M_PI));
    double Er = E - 2 * M_PI * std::round(t / (2 * M_PI));
    CHECK(std::abs(Er - std::sin(Er) - tr) <= 1e-13);
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("kepler fixed values") {
  CHECK(eccentric_anomaly<double>(0.0) == 0.0);
  CHECK(std::abs(eccentric_anomaly<double>(M_PI) - M_PI) <= 4e-16);
  CHECK(std::abs(eccentric_anomaly<double>(1.0) - 1.934563210752024267563) <= 1e-15);
  CHECK(std::abs(rho<double>(1.0) - 1.355797140388828128719) <= 1e-15);
  for (double t : {1e-9, 1e-3, 0.4, 2.0, 3.1, 5.0, 9.0})
    CHECK(std::abs(eccentric_anomaly<double>(t) - kepler_bisect(t)) <= 1e-14 * (1 + t));
}

TEST_CASE("kepler small t keeps relative accuracy") {
  for (double t : {1e-12, 1e-9, 1e-6}) {
    double E = eccentric_anomaly<double>(t);
    double E_series = std::cbrt(6 * t) * (1 + std::cbrt(6 * t) * std::cbrt(6 * t) / 60);
    CHECK(std::abs(E / E_series - 1) <= 1e-8);
  }
}

TEST_CASE("kepler symmetry and monotonicity") {
  double prev = -1e300;
  for (int i = -400; i <= 400; ++i) {
    double t = 0.05 * i;
    double E = eccentric_anomaly<double>(t);
    CHECK(E > prev);
    prev = E;
    CHECK(eccentric_anomaly<double>(-t) == -E);
    double shifted = eccentric_anomaly<double>(t + 2 * M_PI);
    CHECK(std::abs(shifted - E - 2 * M_PI) <= 8e-16 * (std::abs(t) + 2 * M_PI));
  }
}

TEST_CASE("rho is even, periodic and in [0, 2]") {
  for (int i = 0; i <= 200; ++i) {
    double t = -10 + 0.1 * i;
    double r = rho<double>(t);
    CHECK(r >= 0.0);
    CHECK(r <= 2.0);
    CHECK(std::abs(rho<double>(-t) - r) <= 1e-15);
    CHECK(std::abs(rho<double>(t + 2 * M_PI) - r) <= 1e-14);
  }
  CHECK(rho<double>(0.0) == 0.0);
  CHECK(std::abs(rho<double>(M_PI) - 2.0) <= 1e-15);
}

TEST_CASE("derivative of rho squared is 2 sin E") {
  const double h = 1e-5;
  for (double t : {0.3, 1.0, 2.0, 2.9, 4.0, 5.5}) {
    auto f = [](double s) { double r = rho<double>(s); return r * r; };
    double fd = (f(t + h) - f(t - h)) / (2 * h);
    CHECK(std::abs(fd - 2 * std::sin(eccentric_anomaly<double>(t))) <= 1e-8);
  }
}

TEST_CASE("extended precision kepler") {
  auto e113 = solve_kepler<Float113>(Float113(1), Float113(1e-32));
  CHECK(abs(e113.residual) <= Float113(1e-30));
  CHECK(abs(e113.E - Float113("1.934563210752024267563")) <= Float113(1e-20));
  auto e256 = solve_kepler<Float256>(Float256(1), Float256("1e-75"));
  CHECK(abs(e256.residual) <= Float256("1e-70"));
  CHECK(abs(e256.E - Float256("1.934563210752024267563")) <= Float256("1e-21"));
}

TEST_CASE("fourier coefficients match frozen values") {
  struct Ref { int l, k; double a; };
  const Ref refs[] = {{1, 1, -0.8801011714898670319}, {0, 1, 2.5},
                      {2, 1, -0.1764170143078188596}, {1, 2, -4.058272041617743673},
                      {3, 2, 0.03955811068780650062}, {0, 3, 26.8125},
                      {5, 3, 0.02643219129838376324}, {10, 2, 0.001189424916715162506}};
  for (const auto& r : refs) {
    auto c = rho_pow_fourier<double>(r.l, r.k, 1e-14);
    CAPTURE(r.l);
    CAPTURE(r.k);
    CHECK(std::abs(c.a_lk - r.a) <= 1e-12 * std::pow(4.0, r.k));
  }
}

TEST_CASE("fourier coefficients against bessel expansion") {
  for (int l = 0; l <= 8; ++l)
    for (int k = 1; k <= 4; ++k) {
      auto c = rho_pow_fourier<double>(l, k, 1e-14);
      CAPTURE(l);
      CAPTURE(k);
      CHECK(std::abs(c.a_lk - a_lk_bessel(l, k)) <= 1e-12 * std::pow(4.0, k));
      CHECK(std::abs(c.a_lk) <= std::pow(4.0, k));
    }
  CHECK(std::abs(rho_pow_fourier<double>(1, 1, 1e-14).a_lk + 2 * std::cyl_bessel_j(1, 1.0)) <= 1e-14);
}

TEST_CASE("mean coefficients are binomial sums") {
  for (int k = 1; k <= 6; ++k) {
    int n = 2 * k + 1;
    double mean = 0;
    for (int j = 0; j <= n; j += 2) mean += binom(n, j) * binom(j, j / 2) / std::ldexp(1.0, j);
    CHECK(std::abs(rho_pow_fourier<double>(0, k, 1e-14).a_lk - mean) <= 1e-12 * mean);
  }
}

TEST_CASE("fourier cache is consistent across threads") {
  clear_fourier_cache<double>();
  std::vector<double> got(4 * 12);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (int i = 0; i < 12; ++i) got[w * 12 + i] = rho_pow_fourier<double>(i % 6, 1 + i / 6, 1e-14).a_lk;
    });
  for (auto& t : pool) t.join();
  for (int w = 1; w < 4; ++w)
    for (int i = 0; i < 12; ++i) CHECK(got[w * 12 + i] == got[i]);
}

TEST_CASE("fourier coefficient at higher precision") {
  auto c = rho_pow_fourier<Float113>(1, 1, Float113(1e-30));
  CHECK(abs(c.a_lk - Float113("-0.8801011714898670319")) <= Float113(1e-18));
  CHECK(c.err <= Float113(1e-28));
}

}
