#include <cmath>
#include <vector>

#include "doctest.h"
#include "rei3bp/manifolds.hpp"

using namespace rei3bp;

namespace {

ModelParams params_at(double G, double tol = 1e-12) {
  ModelParams p;
  p.G = G;
  p.tol_ode = tol;
  return p;
}

}  // namespace

TEST_SUITE("manifolds") {

TEST_CASE("seeds sit on the incoming and outgoing branches") {
  const double G = 2, vf = 50;
  auto u = manifold_seed<double>(G, Side::Unstable, vf, 0.7, 1e-12);
  auto s = manifold_seed<double>(G, Side::Stable, vf, -0.7, 1e-12);
  auto hp = homoclinic_from_v<double>(-vf, 1e-15);
  CHECK(u.state.y < 0);
  CHECK(u.state.r == hp.r_h);
  CHECK(std::abs(u.state.y - hp.y_h) <= 1e-4 * std::abs(hp.y_h));
  CHECK(u.error_estimate <= 1e-12);
  CHECK(s.state.r == u.state.r);
  CHECK(s.state.y == -u.state.y);
  CHECK(s.state.xi == -u.state.xi);
  double x = std::sqrt(2 / u.state.r);
  CHECK(std::abs(std::abs(u.state.y) / (x * std::sqrt(1 - x * x / 4)) - 1) <= x * x * x * x / (8 * std::pow(G, 4)));
}

TEST_CASE("seed too close to the pericentre") {
  try {
    manifold_seed<double>(2.0, Side::Unstable, 2.0, 0.0, 1e-12);
    FAIL("expected SeedTooClose");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeedTooClose);
  }
}

TEST_CASE("stable and unstable section points are mirror images") {
  const double G = 2;
  auto params = params_at(G);
  for (double v : {0.4, 1.5}) {
    auto s = section_point<double>(G, 0.9, v, Side::Stable, params);
    auto u = section_point<double>(G, -0.9, -v, Side::Unstable, params);
    CHECK(std::abs(s.r - u.r) <= 1e-10);
    CHECK(std::abs(s.y + u.y) <= 1e-10);
  }
}

TEST_CASE("section curve follows the homoclinic in the integrable limit") {
  const double G = 1e4;
  auto params = params_at(G);
  auto c = trace_section_curve<double>(G, 0.0, 0.3, 2.0, Side::Unstable, params);
  REQUIRE(c.r.size() >= 17);
  for (size_t i = 0; i < c.r.size(); ++i) {
    auto hp = homoclinic_from_v<double>(c.v_tags[i], 1e-15);
    CHECK(std::abs(c.y[i] - hp.y_h) <= 1e-10);
    CHECK(std::abs(c.labels[i] - c.v_tags[i]) <= 1e-9);
  }
  auto rec = splitting_distance<double>(G, 0.5, 2.0 / 3, params);
  CHECK(!rec.valid);
  CHECK(std::abs(rec.d_measured) <= 10 * rec.noise_floor);
}

TEST_CASE("section curve interpolation") {
  const double G = 2;
  auto params = params_at(G);
  auto c = trace_section_curve<double>(G, 0.4, 0.2, 1.5, Side::Stable, params);
  for (size_t i = 1; i < c.r.size(); ++i) CHECK(c.r[i] > c.r[i - 1]);
  for (size_t i = 0; i < c.r.size(); ++i) CHECK(c.interpolate(c.r[i]) == doctest::Approx(c.y[i]).epsilon(1e-14));
  double rm = 0.5 * (c.r[3] + c.r[4]);
  double vt = homoclinic_tau_from_r<double>(rm, 1);
  vt = (vt + vt * vt * vt / 3) / 2;
  auto p = section_point_at_radius<double>(G, 0.4, rm, vt, Side::Stable, params);
  CHECK(std::abs(c.interpolate(rm) - p.y) <= 10 * ManifoldConfig{}.interp_tol);
  CHECK_THROWS_AS(c.interpolate(c.r.back() + 1), Error);
  CHECK(c.seed_meta.v_far == 50.0);
}

TEST_CASE("section miss below the pericentre radius") {
  auto params = params_at(2);
  try {
    section_point_at_radius<double>(2.0, 0.0, 0.3, 0.5, Side::Unstable, params);
    FAIL("expected SectionMiss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SectionMiss);
  }
  CHECK_THROWS_AS(trace_section_curve<double>(2.0, 0.0, -1.0, 1.0, Side::Unstable, params), Error);
  CHECK_THROWS_AS(splitting_distance<double>(2.0, 0.0, 0.0, params), Error);
}

TEST_CASE("splitting is measurable and matches the first order prediction") {
  const double G = 2;
  auto params = params_at(G);
  double peak = G * G * G * 2.0 / 3 + M_PI / 2;
  auto rec = splitting_distance<double>(G, peak, 2.0 / 3, params);
  CHECK(rec.valid);
  CHECK(std::abs(rec.d_measured) >= 10 * rec.noise_floor);
  CHECK(rec.d_measured == doctest::Approx(rec.Yu - rec.Ys).epsilon(1e-12));
  CHECK(std::abs(rec.d_measured / rec.d_melnikov - 1) <= 0.3);
  CHECK(rec.precision_bits == 53);
}

TEST_CASE("splitting is periodic in the section phase") {
  const double G = 2;
  auto params = params_at(G);
  auto a = splitting_distance<double>(G, 0.8, 2.0 / 3, params);
  auto b = splitting_distance<double>(G, 0.8 + 2 * M_PI, 2.0 / 3, params);
  CHECK(std::abs(a.d_measured - b.d_measured) <= a.noise_floor + b.noise_floor);
}

TEST_CASE("doubling the seed distance leaves the splitting unchanged") {
  const double G = 2;
  auto params = params_at(G, 1e-13);
  ManifoldConfig near, far;
  far.v_far = 100;
  double d1 = splitting_value<double>(G, 1.0, 2.0 / 3, params, near);
  double d2 = splitting_value<double>(G, 1.0, 2.0 / 3, params, far);
  CHECK(std::abs(d1 - d2) < 1e-12);
}

TEST_CASE("two transverse homoclinics per period") {
  const double G = 2;
  auto params = params_at(G);
  ManifoldConfig cfg;
  cfg.scan_points = 24;
  auto hs = find_homoclinics<double>(G, 2.0 / 3, params, cfg);
  REQUIRE(hs.roots.size() == 2);
  CHECK(hs.roots[0].slope * hs.roots[1].slope < 0);
  for (const auto& r : hs.roots) {
    CHECK(std::abs(r.slope) > 10 * hs.noise_floor);
    CHECK(r.offset <= 1 / G);
  }
  CHECK(hs.d_peak >= 10 * hs.noise_floor);
}

TEST_CASE("no homoclinic above the measurable range") {
  auto params = params_at(5);
  ManifoldConfig cfg;
  cfg.scan_points = 8;
  try {
    find_homoclinics<double>(5.0, 2.0 / 3, params, cfg);
    FAIL("expected NoHomoclinic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoHomoclinic);
  }
}

TEST_CASE("extended precision splitting agrees with double") {
  const double G = 1.8;
  auto pd = params_at(G);
  auto rd = splitting_distance<double>(G, 0.5, 2.0 / 3, pd);
  auto pq = params_at(G, 1e-14);
  pq.precision_bits = 113;
  ManifoldConfig cfg;
  cfg.seed_tol = 1e-14;
  auto rq = splitting_distance<Float113>(Float113(G), Float113(0.5), Float113(2) / 3, pq, cfg);
  CHECK(rq.precision_bits == 113);
  CHECK(std::abs(rq.d_measured - rd.d_measured) <= rd.noise_floor + rq.noise_floor);
  CHECK(rq.noise_floor < rd.noise_floor);
}

}
