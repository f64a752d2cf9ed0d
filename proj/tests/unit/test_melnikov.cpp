#include <cmath>
#include <vector>

#include "doctest.h"
#include "rei3bp/dynamics.hpp"
#include "rei3bp/melnikov.hpp"

using namespace rei3bp;

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("melnikov") {

TEST_CASE("mean oscillatory integrals match the gamma form") {
  CHECK(std::abs(osc_integral<double>(0, 1, 2.0, 1e-14).value.real() - M_PI / 2) <= 1e-14);
  for (int k = 1; k <= 6; ++k) {
    double ref = std::sqrt(M_PI) * std::tgamma(2 * k - 0.5) / std::tgamma(2.0 * k);
    auto I = osc_integral<double>(0, k, 2.0, 1e-14);
    CAPTURE(k);
    CHECK(std::abs(I.value.real() / ref - 1) <= 1e-10);
    CHECK(std::abs(osc_integral_gamma_form<double>(k) / ref - 1) <= 1e-14);
  }
  double i03 = std::sqrt(M_PI) * std::tgamma(5.5) / std::tgamma(6.0);
  CHECK(std::abs(osc_integral<double>(0, 3, 1.7, 1e-14).value.real() - i03) <= 1e-13);
}

TEST_CASE("saddle asymptotics of the first harmonic integral") {
  std::vector<double> lg, ld;
  double prev = 1e300;
  for (double G : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    auto I = osc_integral<double>(1, 1, G, 1e-14);
    double ratio = I.scaled / (std::sqrt(M_PI) * std::pow(G / 2, 1.5));
    double dev = std::abs(ratio - 1);
    CAPTURE(G);
    CHECK(dev < prev);
    prev = dev;
    lg.push_back(std::log(G));
    ld.push_back(std::log(dev));
  }
  double slope = fit_slope(lg, ld);
  CHECK(slope >= -1.8);
  CHECK(slope <= -1.2);
}

TEST_CASE("contour and real axis quadrature agree") {
  for (int k = 1; k <= 3; ++k) {
    auto c = osc_integral<double>(1, k, 1.5, 1e-14);
    auto r = osc_integral_real_axis<double>(1, k, 1.5, 1e-14);
    CHECK(std::abs(c.value - r.value) <= 1e-11 * std::abs(c.value) + 1e-14);
  }
  auto c = osc_integral<Float113>(2, 1, Float113(2), Float113(1e-25));
  auto r = osc_integral_real_axis<Float113>(2, 1, Float113(2), Float113(1e-25));
  CHECK(abs(c.value - r.value) <= Float113(1e-18) * abs(c.value));
}

TEST_CASE("series agrees with direct quadrature") {
  for (double G : {1.5, 2.0, 2.5}) {
    auto ser = melnikov_series<double>(G, 1e-13);
    double scale = std::abs(ser.L0);
    for (double v : {-1.0, 0.0, 0.4, 1.3})
      for (double xi : {0.0, 1.0, M_PI / 2, 4.0}) {
        auto d = melnikov_direct<double>(v, xi, G, 1e-13);
        CAPTURE(G);
        CHECK(std::abs(d.L - ser.evaluate(v, xi)) <= 1e-10 * scale);
      }
  }
  auto ser = melnikov_series<double>(2.0, 1e-13);
  auto d = melnikov_direct<double>(0.0, M_PI / 2, 2.0, 1e-13);
  CHECK(std::abs(d.L / ser.evaluate(0.0, M_PI / 2) - 1) <= 1e-10);
}

TEST_CASE("reconstruction form and flow invariance") {
  const double G = 2;
  auto ser = melnikov_series<double>(G, 1e-13);
  double v = 0.37, xi = 1.1;
  double sum = ser.L0;
  for (const auto& h : ser.harmonics) sum += 2 * h.L * std::cos(h.l * (xi - G * G * G * v));
  CHECK(std::abs(ser.evaluate(v, xi) - sum) <= 1e-15);
  double a = melnikov_direct<double>(v, xi, G, 1e-13).L;
  double b = melnikov_direct<double>(0.0, xi - G * G * G * v, G, 1e-13).L;
  double c = melnikov_direct<double>(v + 2 * M_PI / (G * G * G), xi, G, 1e-13).L;
  CHECK(std::abs(a - b) <= 1e-12);
  CHECK(std::abs(a - c) <= 1e-12);
}

TEST_CASE("xi average of direct quadrature is the mean harmonic") {
  const double G = 2;
  const int n = 16;
  double avg = 0, proj = 0;
  for (int j = 0; j < n; ++j) {
    double xi = 2 * M_PI * j / n;
    double L = melnikov_direct<double>(0.0, xi, G, 1e-14).L;
    avg += L / n;
    proj += L * std::cos(xi) / n;
  }
  auto h0 = melnikov_harmonic<double>(0, G, 0, 1e-14);
  auto h1 = melnikov_harmonic<double>(1, G, 0, 1e-14);
  CHECK(std::abs(avg - h0.L) <= 1e-12 * std::abs(h0.L));
  // trapezoid projection picks up L_1 plus aliases L_15 and L_17, far below tolerance
  CHECK(std::abs(proj / h1.L - 1) <= 1e-8);
}

TEST_CASE("leading term of the first harmonic") {
  double prev = 1e300;
  for (double G : {2.5, 3.0, 3.5, 4.0}) {
    auto h = melnikov_harmonic<double>(1, G, 0, 1e-16);
    auto I = osc_integral<double>(1, 1, G, 1e-14);
    double a11 = -2 * std::cyl_bessel_j(1, 1.0);
    double lead = 0.5 * a11 * std::pow(G, -4) * I.value.real();
    CAPTURE(G);
    double dev = std::abs(h.L / lead - 1);
    CHECK(dev <= 0.6 / G);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("harmonic envelope") {
  const double G = 2;
  auto ser = melnikov_series<double>(G, 1e-30, 4);
  REQUIRE(ser.harmonics.size() >= 4);
  std::vector<double> q;
  for (const auto& h : ser.harmonics) {
    double K = std::abs(h.L) / (std::exp(h.l - 0.5) * std::pow(G, -2.5) * std::exp(-h.l * G * G * G / 3));
    q.push_back(K);
  }
  double kmax = *std::max_element(q.begin(), q.end());
  for (double K : q) CHECK(K <= kmax);
  CHECK(kmax <= 10.0);
  for (size_t i = 1; i < ser.harmonics.size(); ++i)
    CHECK(std::abs(ser.harmonics[i].L) < std::abs(ser.harmonics[i - 1].L));
}

TEST_CASE("distance formula") {
  const double G = 2;
  double vs = 2.0 / 3;
  double zero_xi = G * G * G * vs;
  CHECK(std::abs(distance_formula(vs, zero_xi, G)) <= 1e-16);
  // y_h and the sine are both odd, so the joint flip leaves the expression unchanged
  CHECK(distance_formula(-vs, -1.0, G) == doctest::Approx(distance_formula(vs, 1.0, G)).epsilon(1e-14));
  CHECK(distance_formula(vs, -1.0, G) != doctest::Approx(distance_formula(vs, 1.0, G)));
  double ref = std::cyl_bessel_j(1, 1.0) * std::sqrt(2 * M_PI) * std::sqrt(2.0) * std::exp(-8.0 / 3) *
               std::sin(M_PI / 2 - 16.0 / 3);
  CHECK(std::abs(distance_formula(vs, M_PI / 2, G) - ref) <= 1e-15);
  CHECK_THROWS_AS(distance_formula(0.0, 1.0, G), Error);
  auto ser = melnikov_series<double>(G, 1e-13);
  auto p0 = predicted_distance<double>(vs, zero_xi, ser);
  CHECK(std::abs(p0.formula) <= 1e-16);
  CHECK(std::abs(p0.melnikov) <= 1e-6 * std::abs(predicted_distance<double>(vs, zero_xi + M_PI / 2, ser).melnikov));
}

TEST_CASE("series domain and truncation errors") {
  try {
    melnikov_series<double>(1.3, 1e-12);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  try {
    melnikov_harmonic<double>(1, 1.5, 2, 1e-14);
    FAIL("expected tolerance failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceFailure);
  }
}

TEST_CASE("series at higher precision agrees with double") {
  auto d = melnikov_series<double>(2.0, 1e-13);
  auto q = melnikov_series<Float113>(Float113(2), Float113(1e-20));
  CHECK(std::abs(to_double(q.L0) - d.L0) <= 1e-13);
  CHECK(std::abs(to_double(q.harmonics[0].L) / d.harmonics[0].L - 1) <= 1e-11);
}

}
