#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "rei3bp/dynamics.hpp"
#include "rei3bp/time_law.hpp"

using namespace rei3bp;

namespace {

double naive_potential(double r, double rho_v, double G) {
  return 1 / r - 1 / std::sqrt(r * r + rho_v * rho_v / (4 * std::pow(G, 4)));
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("potential reference values") {
  CHECK(std::abs(potential_rho<double>(1, 2, 1) - (1 - 1 / std::sqrt(2.0))) <= 1e-15);
  CHECK(potential_rho<double>(3, 0, 2) == 0.0);
  CHECK(perturbing_potential<double>(2, 0, 2) == 0.0);
  CHECK(perturbing_potential<double>(2, 2 * M_PI, 2) == 0.0);
  for (double r : {0.5, 1.0, 4.0})
    for (double rv : {0.1, 1.0, 2.0})
      CHECK(std::abs(potential_rho<double>(r, rv, 1.5) - naive_potential(r, rv, 1.5)) <= 1e-13);
}

TEST_CASE("potential far field and bounds") {
  const double G = 2;
  for (double rv : {0.5, 2.0}) {
    double r = 1e5;
    double lead = rv * rv / (8 * std::pow(G, 4) * r * r * r);
    CHECK(std::abs(potential_rho<double>(r, rv, G) / lead - 1) <= 1e-8);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.2, 20.0), urho(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double r = ur(rng), rv = urho(rng);
    double u = potential_rho<double>(r, rv, G);
    CHECK(u >= 0.0);
    CHECK(u <= rv * rv / (8 * std::pow(G, 4) * r * r * r) * (1 + 1e-14));
  }
}

TEST_CASE("radial force reference values") {
  CHECK(std::abs(radial_force<double>(0.5, 0, 2) - 4.0) <= 1e-14);
  PhaseState<double> z{1, 0, M_PI};
  auto f = vector_field(z, 2.0);
  CHECK(std::abs(f.dy - 0.08692470574556998204647) <= 1e-15);
  CHECK(f.dr == 0.0);
  CHECK(f.dxi == 8.0);
  auto fu = vector_field(z, 2.0, false);
  CHECK(fu.dy == 0.0);
}

TEST_CASE("potential derivatives agree with finite differences") {
  const double G = 1.7, h = 1e-6;
  for (double r : {0.6, 1.3, 5.0})
    for (double rv : {0.3, 1.9}) {
      double dr = (potential_rho<double>(r + h, rv, G) - potential_rho<double>(r - h, rv, G)) / (2 * h);
      double drho = (potential_rho<double>(r, rv + h, G) - potential_rho<double>(r, rv - h, G)) / (2 * h);
      CHECK(std::abs(potential_dr_rho<double>(r, rv, G) - dr) <= 1e-8);
      CHECK(std::abs(potential_drho<double>(r, rv, G) - drho) <= 1e-8);
    }
}

TEST_CASE("vector field is reversible") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.3, 10.0), uy(-2.0, 2.0), ux(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    PhaseState<double> z{ur(rng), uy(rng), ux(rng)};
    auto f = vector_field(z, 1.8);
    auto g = vector_field(reverse(z), 1.8);
    CHECK(std::abs(g.dr + f.dr) <= 1e-14 * std::abs(f.dr) + 1e-300);
    CHECK(std::abs(g.dy - f.dy) <= 1e-14 * (1 + std::abs(f.dy)));
    CHECK(g.dxi == f.dxi);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(potential_rho<double>(0, 1, 2), Error);
  try {
    vector_field(PhaseState<double>{-1, 0, 0}, 2.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
  CHECK_THROWS_AS(homoclinic_tau_from_r<double>(0.4, 1), Error);
}

TEST_CASE("energy reference values") {
  CHECK(unperturbed_energy<double>(1, 0) == -0.5);
  CHECK(unperturbed_energy<double>(0.5, 0) == 0.0);
  CHECK(std::abs(unperturbed_energy<double>(2, 0.5) - (0.125 + 0.125 - 0.5)) <= 1e-16);
  PhaseState<double> z{2, 0.5, M_PI};
  CHECK(std::abs(full_energy(z, 2.0) - (-0.25 + perturbing_potential<double>(2, M_PI, 2))) <= 1e-16);
}

TEST_CASE("homoclinic closed form") {
  auto p0 = homoclinic_from_tau<double>(0);
  CHECK(p0.r_h == 0.5);
  CHECK(p0.y_h == 0.0);
  CHECK(p0.v == 0.0);
  auto p1 = homoclinic_from_tau<double>(1);
  CHECK(p1.r_h == 1.0);
  CHECK(std::abs(p1.v - 2.0 / 3) <= 1e-16);
  CHECK(std::abs(p1.y_h - 1.0) <= 1e-16);
  auto q = homoclinic_from_v<double>(2.0 / 3, 1e-15);
  CHECK(std::abs(q.tau - 1) <= 1e-15);
  auto p10 = homoclinic_from_v<double>(10, 1e-15);
  CHECK(std::abs(p10.tau - 3.659817157856821878121) <= 1e-14);
  auto pm = homoclinic_from_v<double>(-10, 1e-15);
  CHECK(pm.tau == -p10.tau);
  CHECK(pm.y_h == -p10.y_h);
  CHECK(pm.r_h == p10.r_h);
}

TEST_CASE("homoclinic solves the unperturbed equations") {
  const double h = 1e-5;
  double worst_r = 0, worst_y = 0, worst_rt = 0, worst_e = 0;
  for (int i = 0; i < 1000; ++i) {
    double tau = -20 + 40.0 * i / 999;
    auto p = homoclinic_from_tau<double>(tau);
    auto a = homoclinic_from_v<double>(p.v - h, 1e-15), b = homoclinic_from_v<double>(p.v + h, 1e-15);
    double scale = 1 + std::abs(p.v);
    worst_r = std::max(worst_r, std::abs((b.r_h - a.r_h) / (2 * h) - p.y_h));
    worst_y = std::max(worst_y, std::abs(p.dy_dv - (1 / std::pow(p.r_h, 3) - 1 / (p.r_h * p.r_h))));
    worst_rt = std::max(worst_rt, std::abs(homoclinic_from_v<double>(p.v, 1e-15).tau - tau) / scale);
    worst_e = std::max(worst_e, std::abs(unperturbed_energy(p.r_h, p.y_h)));
  }
  CHECK(worst_r <= 1e-8);
  CHECK(worst_y <= 1e-12);
  CHECK(worst_rt <= 1e-12);
  CHECK(worst_e <= 1e-14);
}

TEST_CASE("homoclinic complex singularity") {
  auto v = homoclinic_v_complex<double>(std::complex<double>(0, 1));
  CHECK(std::abs(v.real()) <= 1e-16);
  CHECK(std::abs(v.imag() - 1.0 / 3) <= 1e-16);
  auto w = homoclinic_v_complex<double>(std::complex<double>(0, -1));
  CHECK(std::abs(std::abs(w) - 1.0 / 3) <= 1e-16);
}

TEST_CASE("homoclinic far asymptotics") {
  double prev = 1e300;
  for (double v : {1e2, 1e4, 1e6}) {
    auto p = homoclinic_from_v<double>(v, 1e-15);
    double dev = std::abs(p.r_h / std::pow(v, 2.0 / 3) - std::cbrt(4.5));
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("tau from radius") {
  for (double tau : {0.1, 1.0, 7.0}) {
    double r = 0.5 * (1 + tau * tau);
    CHECK(std::abs(homoclinic_tau_from_r<double>(r, 1) - tau) <= 1e-12 * (1 + tau));
    CHECK(std::abs(homoclinic_tau_from_r<double>(r, -1) + tau) <= 1e-12 * (1 + tau));
  }
}

TEST_CASE("extended precision potential") {
  Float113 u = potential_rho<Float113>(Float113(1), Float113(2), Float113(1));
  CHECK(abs(u - (1 - 1 / sqrt(Float113(2)))) <= Float113(1e-32));
  Float256 w = potential_rho<Float256>(Float256(1e6), Float256(1), Float256(2));
  Float256 lead = Float256(1) / (8 * 16 * pow(Float256(1e6), 3));
  CHECK(abs(w / lead - 1) <= Float256(1e-12));
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.warnings().empty());
  p.G = 1.2;
  CHECK(p.warnings().size() == 1);
  p.G = 0.5;
  CHECK(p.warnings().size() == 2);
  p.G = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  p.G = 2;
  p.precision_bits = 64;
  try {
    p.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedPrecision);
  }
}

}
