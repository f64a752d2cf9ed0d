#include "rei3bp/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "rei3bp/numeric.hpp"
#include "rei3bp/parallel.hpp"
#include "rei3bp/time_law.hpp"

namespace rei3bp {

const char* side_name(Side s) { return s == Side::Stable ? "stable" : "unstable"; }

namespace {

template <class T>
T trig_norm(const TrigPoly<T>& p) {
  using std::abs;
  T n = abs(p.c[0]);
  for (int j = 1; j <= p.degree(); ++j) n += abs(p.c[j]) + abs(p.s[j]);
  return n;
}

// Expansion U = sum_k c_k rho^(2k) r^-(2k+1) together with the sigma
// antiderivatives of rho^(2k) - a_{0,k} used by the seed energy.
template <class T>
struct SeedModel {
  std::vector<T> c;
  std::vector<T> a0;
  std::vector<std::vector<TrigPoly<T>>> P;  // P[k][j], j = 0 .. order
  std::vector<T> norm_next;                 // norm of P^(order+1)
  std::vector<T> norm2;                     // norm of P^2
};

template <class T>
SeedModel<T> build_seed_model(const T& G, const T& r, int order) {
  using std::abs;
  SeedModel<T> m;
  T eps = machine_epsilon<T>();
  T cG = 4 * ipow(G, 4);
  auto b = binom_minus_half<T>(40);
  T first = 0;
  for (int k = 1; k <= 40; ++k) {
    T ck = -b[k] / ipow(cG, k);
    T a0 = rho_pow_fourier<T>(0, k, eps * 16).a_lk;
    T term = ck * a0 / ipow(r, 2 * k + 1);
    if (k == 1) first = term;
    auto P = sigma_antiderivatives(one_minus_cos_power<T>(2 * k), order + 1);
    m.c.push_back(ck);
    m.a0.push_back(a0);
    m.norm_next.push_back(trig_norm(P[order]));
    m.norm2.push_back(trig_norm(P[std::min(1, order)]));
    P.resize(order);
    m.P.push_back(std::move(P));
    if (abs(term) < eps * T(1e-6) * abs(first)) break;
  }
  return m;
}

// Derivatives d^j/ds^j r^-(2k+1), j = 0..N, along the unperturbed flow
// through (r0, y0). Returned as out[k-1][j].
template <class T>
std::vector<std::vector<T>> inverse_power_derivatives(const T& r0, const T& y0, int N, int K) {
  std::vector<T> rs(N + 1), ys(N + 1), inv(N + 1), inv2(N + 1), inv3(N + 1);
  rs[0] = r0;
  ys[0] = y0;
  for (int n = 0; n < N; ++n) {
    if (n == 0) {
      inv[0] = 1 / r0;
    } else {
      T acc = 0;
      for (int i = 1; i <= n; ++i) acc += rs[i] * inv[n - i];
      inv[n] = -acc / r0;
    }
    inv2[n] = 0;
    for (int i = 0; i <= n; ++i) inv2[n] += inv[i] * inv[n - i];
    inv3[n] = 0;
    for (int i = 0; i <= n; ++i) inv3[n] += inv2[i] * inv[n - i];
    rs[n + 1] = ys[n] / T(n + 1);
    ys[n + 1] = (inv3[n] - inv2[n]) / T(n + 1);
  }
  std::vector<std::vector<T>> out(K, std::vector<T>(N + 1));
  for (int k = 1; k <= K; ++k) {
    T alpha = -T(2 * k + 1);
    std::vector<T> u(N + 1);
    u[0] = pow(r0, alpha);
    for (int n = 1; n <= N; ++n) {
      T acc = 0;
      for (int i = 1; i <= n; ++i) acc += (alpha * T(i) - T(n - i)) * rs[i] * u[n - i];
      u[n] = acc / (T(n) * r0);
    }
    T fact = 1;
    for (int j = 0; j <= N; ++j) {
      if (j > 0) fact *= T(j);
      out[k - 1][j] = fact * u[j];
    }
  }
  return out;
}

template <class T>
T pchip_slope_end(const T& h0, const T& h1, const T& d0, const T& d1) {
  using std::abs;
  T s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (s * d0 <= 0) return T(0);
  if (d0 * d1 <= 0 && abs(s) > abs(3 * d0)) return 3 * d0;
  return s;
}

template <class T>
T pchip(const std::vector<T>& x, const std::vector<T>& y, const T& xq) {
  using std::abs;
  size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "interpolation needs two points");
  bool inc = x.back() > x.front();
  auto lo = inc ? x.front() : x.back();
  auto hi = inc ? x.back() : x.front();
  if (xq < lo || xq > hi) throw Error(ErrorCode::Domain, "interpolation outside traced radius range");
  size_t i = 0;
  if (inc) {
    i = std::upper_bound(x.begin(), x.end(), xq) - x.begin();
  } else {
    i = std::upper_bound(x.begin(), x.end(), xq, [](const T& a, const T& b) { return a > b; }) - x.begin();
  }
  if (i == 0) i = 1;
  if (i >= n) i = n - 1;
  size_t a = i - 1;
  auto delta = [&](size_t j) { return (y[j + 1] - y[j]) / (x[j + 1] - x[j]); };
  auto slope = [&](size_t j) -> T {
    if (n == 2) return delta(0);
    if (j == 0) return pchip_slope_end(x[1] - x[0], x[2] - x[1], delta(0), delta(1));
    if (j == n - 1)
      return pchip_slope_end(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta(n - 2), delta(n - 3));
    T d0 = delta(j - 1), d1 = delta(j);
    if (d0 * d1 <= 0) return T(0);
    T h0 = x[j] - x[j - 1], h1 = x[j + 1] - x[j];
    T w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
  };
  T h = x[a + 1] - x[a];
  T t = (xq - x[a]) / h;
  T m0 = slope(a) * h, m1 = slope(a + 1) * h;
  T t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y[a] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y[a + 1] +
         (t3 - t2) * m1;
}

// In McGehee coordinates x = sqrt(2/r) the parabolic branch is y = -+x sqrt(1 - x^2/4); the
// seed energy correction moves y^2 by at most x^6/(8 G^4).
template <class T>
void check_near_parabolic(const PhaseState<T>& seed, const T& G) {
  using std::abs;
  T x2 = 2 / seed.r;
  T y_par2 = x2 * (1 - x2 / 4);
  T dev = abs(seed.y * seed.y / y_par2 - 1);
  T bound = x2 * x2 / (8 * ipow(G, 4)) / (1 - x2 / 4);
  if (!(dev <= 4 * bound + 64 * machine_epsilon<T>()))
    throw Error(ErrorCode::SeedTooClose, "manifold seed is not in the near-parabolic regime");
}

template <class T>
void check_tracking(const SectionPoint<T>& p, const T& v_orbit) {
  auto h = homoclinic_from_v<T>(v_orbit, T(64) * machine_epsilon<T>());
  if (!(p.r > h.r_h / 2 && p.r < 2 * h.r_h))
    throw Error(ErrorCode::TracingLost, "manifold orbit left the neighbourhood of the homoclinic");
}

}  // namespace

template <class T>
SeedResult<T> manifold_seed(const T& G, Side side, const T& v_far, const T& xi_at_seed, const T& tol,
                            const ManifoldConfig& cfg) {
  using std::abs;
  using std::sqrt;
  if (!(G > 0)) throw Error(ErrorCode::InvalidArgument, "manifold_seed: G must be positive");
  if (!(v_far > 0)) throw Error(ErrorCode::InvalidArgument, "manifold_seed: v_far must be positive");
  if (cfg.seed_order < 1 || cfg.seed_order > 20)
    throw Error(ErrorCode::InvalidArgument, "manifold_seed: seed_order must be in [1, 20]");
  T eps = machine_epsilon<T>();
  // the stable seed is the reversed unstable seed at phase -xi
  T xi_u = side == Side::Unstable ? xi_at_seed : T(-xi_at_seed);
  auto hp = homoclinic_from_v<T>(T(-v_far), T(64) * eps);
  T r = hp.r_h;
  T y = hp.y_h;
  int J = cfg.seed_order;
  auto model = build_seed_model<T>(G, r, J);
  int K = static_cast<int>(model.c.size());
  T E = eccentric_anomaly<T>(xi_u);
  std::vector<std::vector<T>> Pv(K, std::vector<T>(J));
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < J; ++j) Pv[k][j] = model.P[k][j](E);
  T G3 = ipow(G, 3);
  T U_mean = 0;
  for (int k = 0; k < K; ++k) U_mean += model.c[k] * model.a0[k] / ipow(r, 2 * k + 3);
  std::vector<std::vector<T>> f;
  for (int it = 0; it < 60; ++it) {
    f = inverse_power_derivatives<T>(r, y, J + 1, K);
    T h = -U_mean;
    for (int k = 0; k < K; ++k) {
      T scale = 1;
      for (int j = 1; j <= J; ++j) {
        scale /= G3;
        T term = Pv[k][j - 1] * f[k][j] * scale;
        h += model.c[k] * ((j % 2) ? -term : term);
      }
    }
    T q = 2 * (h + 1 / r - 1 / (2 * r * r));
    if (!(q > 0)) throw Error(ErrorCode::Domain, "manifold_seed: seed energy has no real branch");
    T y_new = -sqrt(q);
    T change = abs(y_new - y);
    y = y_new;
    if (change <= 4 * eps * abs(y)) break;
  }
  T omitted = 0, second = 0;
  T scale_next = 1 / ipow(G3, J + 1);
  T dUr = abs(potential_dr_rho<T>(r, T(2), G));
  for (int k = 0; k < K; ++k) {
    int m = 2 * k + 3;
    omitted += abs(model.c[k]) * model.norm_next[k] * abs(f[k][J + 1]) * scale_next;
    second += abs(model.c[k]) * model.norm2[k] * T(m) * pow(r, T(-m - 1)) * dUr / (G3 * G3);
  }
  T err = T(cfg.seed_C) * (omitted + second) / abs(y) + 16 * eps * abs(y);
  if (err > tol)
    {
    char buf[160];
    std::snprintf(buf, sizeof buf, "manifold seed error estimate %.3e exceeds tolerance %.3e; increase v_far",
                  to_double(err), to_double(tol));
    throw Error(ErrorCode::SeedTooClose, buf);
  }
  SeedResult<T> out{PhaseState<T>{r, y, xi_u}, err, v_far, J};
  if (side == Side::Stable) out.state = reverse(out.state);
  return out;
}

template <class T>
SectionPoint<T> section_point(const T& G, const T& xi0, const T& v, Side side, const ModelParams& params,
                              const ManifoldConfig& cfg) {
  using std::abs;
  T v_far = T(cfg.v_far);
  if (!(abs(v) < v_far)) throw Error(ErrorCode::InvalidArgument, "section_point: |v| must be below v_far");
  T G3 = ipow(G, 3);
  auto opt = IntegratorOptions<T>::from_params(params);
  opt.G = G;
  opt.store_samples = false;
  opt.store_dense = false;
  opt.kernel = Kernel::Auto;
  T xi_seed, s_end;
  if (side == Side::Unstable) {
    s_end = v + v_far;
    xi_seed = xi0 - G3 * s_end;
  } else {
    s_end = v - v_far;
    xi_seed = xi0 - G3 * s_end;
  }
  auto seed = manifold_seed<T>(G, side, v_far, xi_seed, T(cfg.seed_tol), cfg);
  auto traj = integrate<T>(seed.state, T(0), s_end, opt);
  SectionPoint<T> p{v, traj.final.state.r, traj.final.state.y, traj.final.state.xi};
  check_tracking(p, v);
  return p;
}

template <class T>
SectionPoint<T> section_point_at_radius(const T& G, const T& xi0, const T& r_target, const T& v_guess, Side side,
                                        const ModelParams& params, const ManifoldConfig& cfg) {
  using std::abs;
  T eps = machine_epsilon<T>();
  T v0 = v_guess;
  auto p0 = section_point<T>(G, xi0, v0, side, params, cfg);
  T f0 = p0.r - r_target;
  T slope = p0.y;
  if (slope == 0) throw Error(ErrorCode::NonConvergence, "section_point_at_radius: zero radial velocity");
  SectionPoint<T> best = p0;
  T fbest = f0;
  for (int it = 0; it < 12 && abs(fbest) > 8 * eps * r_target; ++it) {
    T v1 = v0 - f0 / slope;
    auto p1 = section_point<T>(G, xi0, v1, side, params, cfg);
    T f1 = p1.r - r_target;
    if (abs(f1) < abs(fbest)) {
      best = p1;
      fbest = f1;
    } else if (it > 2) {
      break;
    }
    if (v1 != v0 && f1 != f0) slope = (f1 - f0) / (v1 - v0);
    v0 = v1;
    f0 = f1;
  }
  if ((best.y > 0) != (v_guess > 0) || abs(fbest) > T(1e-6) * r_target)
    throw Error(ErrorCode::SectionMiss, "section_point_at_radius: no section point on the requested branch");
  // residual radius mismatch moved along the curve with the homoclinic slope
  T F = 1 / (best.r * best.r * best.r) - 1 / (best.r * best.r);
  best.y -= fbest * F / best.y;
  best.r = r_target;
  return best;
}

template <class T>
T SectionCurve<T>::interpolate(const T& rr) const {
  return pchip(r, y, rr);
}

template <class T>
SectionCurve<T> trace_section_curve(const T& G, const T& xi0, const T& v_lo, const T& v_hi, Side side,
                                    const ModelParams& params, const ManifoldConfig& cfg) {
  using std::abs;
  if (!(v_lo < v_hi)) throw Error(ErrorCode::InvalidArgument, "trace_section_curve: empty label range");
  if (v_lo < 0 && v_hi > 0)
    throw Error(ErrorCode::InvalidArgument, "trace_section_curve: label range must not contain the pericentre");
  if (!(abs(v_lo) < T(cfg.v_far) && abs(v_hi) < T(cfg.v_far)))
    throw Error(ErrorCode::InvalidArgument, "trace_section_curve: labels must lie inside (-v_far, v_far)");
  int n0 = std::max(3, cfg.initial_samples);
  std::vector<T> labels(n0);
  for (int i = 0; i < n0; ++i) labels[i] = v_lo + (v_hi - v_lo) * T(i) / T(n0 - 1);
  std::vector<SectionPoint<T>> pts(n0);
  parallel_for(n0, cfg.jobs, [&](int i) { pts[i] = section_point<T>(G, xi0, labels[i], side, params, cfg); });
  std::vector<bool> refine(n0 - 1, true);
  T tol = T(cfg.interp_tol);
  while (true) {
    std::vector<int> todo;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      if (refine[i]) todo.push_back(static_cast<int>(i));
    if (todo.empty()) break;
    if (static_cast<int>(pts.size() + todo.size()) > cfg.max_samples)
      throw Error(ErrorCode::ToleranceFailure, "trace_section_curve: sample budget exhausted");
    std::vector<SectionPoint<T>> mids(todo.size());
    parallel_for(static_cast<int>(todo.size()), cfg.jobs, [&](int j) {
      int i = todo[j];
      mids[j] = section_point<T>(G, xi0, (pts[i].v + pts[i + 1].v) / 2, side, params, cfg);
    });
    std::vector<T> rr, yy;
    for (auto& p : pts) {
      rr.push_back(p.r);
      yy.push_back(p.y);
    }
    std::vector<SectionPoint<T>> next;
    std::vector<bool> next_refine;
    size_t t = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      next.push_back(pts[i]);
      if (i + 1 == pts.size()) break;
      if (t < todo.size() && todo[t] == static_cast<int>(i)) {
        const auto& m = mids[t];
        bool ok = (m.r - pts[i].r) * (pts[i + 1].r - m.r) > 0;
        bool fine = ok && abs(pchip(rr, yy, m.r) - m.y) <= tol;
        next.push_back(m);
        next_refine.push_back(!fine);
        next_refine.push_back(!fine);
        ++t;
      } else {
        next_refine.push_back(false);
      }
    }
    pts = std::move(next);
    refine = std::move(next_refine);
  }
  for (size_t i = 0; i + 2 < pts.size(); ++i)
    if ((pts[i + 1].r - pts[i].r) * (pts[i + 2].r - pts[i + 1].r) <= 0)
      throw Error(ErrorCode::TracingLost, "trace_section_curve: radius is not monotone along the curve");
  SectionCurve<T> c;
  c.xi0 = xi0;
  c.side = side;
  for (auto& p : pts) {
    c.r.push_back(p.r);
    c.y.push_back(p.y);
    c.labels.push_back(p.v);
    T tau = homoclinic_tau_from_r<T>(p.r, p.v < 0 ? -1 : 1);
    c.v_tags.push_back((tau + tau * tau * tau / 3) / 2);
  }
  c.seed_meta.v_far = cfg.v_far;
  c.seed_meta.order = cfg.seed_order;
  T G3 = ipow(G, 3);
  T v_mid = (v_lo + v_hi) / 2;
  T xi_seed = side == Side::Unstable ? T(xi0 - G3 * (v_mid + T(cfg.v_far))) : T(xi0 - G3 * (v_mid - T(cfg.v_far)));
  c.seed_meta.seed_error =
      to_double(manifold_seed<T>(G, side, T(cfg.v_far), xi_seed, T(cfg.seed_tol), cfg).error_estimate);
  return c;
}

template <class T>
T splitting_value(const T& G, const T& xi0, const T& v_star, const ModelParams& params, const ManifoldConfig& cfg,
                  T* Yu, T* Ys) {
  auto hp = homoclinic_from_v<T>(v_star, T(64) * machine_epsilon<T>());
  SectionPoint<T> pu, ps;
  auto job = [&](int i) {
    if (i == 0)
      pu = section_point_at_radius<T>(G, xi0, hp.r_h, v_star, Side::Unstable, params, cfg);
    else
      ps = section_point_at_radius<T>(G, xi0, hp.r_h, v_star, Side::Stable, params, cfg);
  };
  parallel_for(2, std::min(cfg.jobs, 2), job);
  if (Yu) *Yu = pu.y;
  if (Ys) *Ys = ps.y;
  return pu.y - ps.y;
}

template <class T>
SplittingRecord splitting_distance(const T& G, const T& xi0, const T& v_star, const ModelParams& params,
                                   const ManifoldConfig& cfg, const MelnikovSeries<T>* series) {
  using std::abs;
  params.validate();
  if (v_star == 0) throw Error(ErrorCode::Domain, "splitting_distance: v* = 0 has zero radial velocity");
  T eps = machine_epsilon<T>();
  T Yu, Ys, Yu2, Ys2;
  T d = splitting_value<T>(G, xi0, v_star, params, cfg, &Yu, &Ys);
  ModelParams fine = params;
  fine.tol_ode = params.tol_ode / 10;
  T d2 = splitting_value<T>(G, xi0, v_star, fine, cfg, &Yu2, &Ys2);
  T G3 = ipow(G, 3);
  auto su = manifold_seed<T>(G, Side::Unstable, T(cfg.v_far), T(xi0 - G3 * (v_star + T(cfg.v_far))),
                            T(cfg.seed_tol), cfg);
  auto ss = manifold_seed<T>(G, Side::Stable, T(cfg.v_far), T(xi0 - G3 * (v_star - T(cfg.v_far))),
                            T(cfg.seed_tol), cfg);
  check_near_parabolic(su.state, G);
  check_near_parabolic(ss.state, G);
  T seed_u = su.error_estimate, seed_s = ss.error_estimate;
  T noise = 2 * abs(d - d2) + 16 * eps * (abs(Yu) + abs(Ys)) + seed_u + seed_s;
  SplittingRecord rec;
  rec.G = to_double(G);
  rec.xi0 = to_double(xi0);
  rec.v_star = to_double(v_star);
  rec.d_measured = to_double(d);
  rec.noise_floor = to_double(noise);
  rec.valid = abs(d) >= 10 * noise;
  rec.precision_bits = std::numeric_limits<T>::digits;
  rec.Yu = to_double(Yu);
  rec.Ys = to_double(Ys);
  rec.d_formula = distance_formula(rec.v_star, rec.xi0, rec.G);
  if (to_double(G3) / 3 < 700) {
    if (series) {
      rec.d_melnikov = predicted_distance<T>(v_star, xi0, *series).melnikov;
    } else {
      auto s = melnikov_series<T>(G, T(cfg.melnikov_tol));
      rec.d_melnikov = predicted_distance<T>(v_star, xi0, s).melnikov;
    }
  }
  return rec;
}

template <class T>
HomoclinicSearch find_homoclinics(const T& G, const T& v_star, const ModelParams& params,
                                  const ManifoldConfig& cfg) {
  using std::abs;
  params.validate();
  int N = std::max(8, cfg.scan_points);
  HomoclinicSearch out;
  std::vector<T> xs(N), ds(N);
  ManifoldConfig inner = cfg;
  inner.jobs = 1;
  parallel_for(N, cfg.jobs, [&](int j) {
    xs[j] = two_pi<T>() * T(j) / T(N);
    ds[j] = splitting_value<T>(G, xs[j], v_star, params, inner);
  });
  std::complex<double> acc = 0;
  int jmax = 0;
  for (int j = 0; j < N; ++j) {
    out.xi_samples.push_back(to_double(xs[j]));
    out.d_samples.push_back(to_double(ds[j]));
    acc += out.d_samples[j] * std::exp(std::complex<double>(0, -out.xi_samples[j]));
    if (abs(ds[j]) > abs(ds[jmax])) jmax = j;
  }
  out.d_peak = 2 * std::abs(acc) / N;
  ModelParams finer = params;
  finer.tol_ode = params.tol_ode / 10;
  T d_fine = splitting_value<T>(G, xs[jmax], v_star, finer, cfg);
  T Yu, Ys;
  splitting_value<T>(G, xs[jmax], v_star, params, inner, &Yu, &Ys);
  out.noise_floor = to_double(2 * abs(ds[jmax] - d_fine) + 16 * machine_epsilon<T>() * (abs(Yu) + abs(Ys)));
  if (!(out.d_peak >= 10 * out.noise_floor))
    throw Error(ErrorCode::NoHomoclinic, "find_homoclinics: splitting amplitude " + std::to_string(out.d_peak) +
                                             " is below ten times the noise floor " +
                                             std::to_string(out.noise_floor));
  auto d_of = [&](const T& x) { return splitting_value<T>(G, x, v_star, params, inner); };
  std::vector<int> brackets;
  for (int j = 0; j < N; ++j) {
    int k = (j + 1) % N;
    if ((ds[j] < 0) != (ds[k] < 0)) brackets.push_back(j);
  }
  if (brackets.empty()) throw Error(ErrorCode::NoHomoclinic, "find_homoclinics: no sign change of the splitting");
  std::vector<HomoclinicRoot> roots(brackets.size());
  using std::fmod;
  T G3v = ipow(G, 3) * v_star;
  T pi_ = pi<T>();
  parallel_for(static_cast<int>(brackets.size()), cfg.jobs, [&](int b) {
    int j = brackets[b];
    T a = xs[j];
    T bb = (j + 1 == N) ? two_pi<T>() : xs[j + 1];
    T root = brent_root<T>(d_of, a, bb, ds[j], ds[(j + 1) % N], T(cfg.root_tol));
    T h = T(cfg.fd_step);
    T slope = (d_of(root + h) - d_of(root - h)) / (2 * h);
    T delta = fmod(root - G3v, pi_);
    if (delta < 0) delta += pi_;
    roots[b].xi0 = to_double(wrap_two_pi(root));
    roots[b].slope = to_double(slope);
    roots[b].offset = to_double(std::min(delta, T(pi_ - delta)));
  });
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.xi0 < y.xi0; });
  out.roots = roots;
  return out;
}

template <class T>
double calibrate_seed_constant(const T& G, const T& xi0, const T& v_star, const ModelParams& params,
                               const ManifoldConfig& cfg) {
  using std::abs;
  ManifoldConfig one = cfg;
  one.seed_C = 1;
  one.seed_tol = 1;
  ManifoldConfig twice = one;
  twice.v_far = 2 * cfg.v_far;
  T d1 = splitting_value<T>(G, xi0, v_star, params, one);
  T d2 = splitting_value<T>(G, xi0, v_star, params, twice);
  T G3 = ipow(G, 3);
  T est = manifold_seed<T>(G, Side::Unstable, T(one.v_far), T(xi0 - G3 * (v_star + T(one.v_far))), T(1), one)
              .error_estimate +
          manifold_seed<T>(G, Side::Stable, T(one.v_far), T(xi0 - G3 * (v_star - T(one.v_far))), T(1), one)
              .error_estimate;
  return to_double(abs(d1 - d2) / est);
}

#define REI3BP_MANIFOLDS_INST(T)                                                                            \
  template struct SectionCurve<T>;                                                                          \
  template SeedResult<T> manifold_seed<T>(const T&, Side, const T&, const T&, const T&, const ManifoldConfig&); \
  template SectionPoint<T> section_point<T>(const T&, const T&, const T&, Side, const ModelParams&,         \
                                            const ManifoldConfig&);                                         \
  template SectionPoint<T> section_point_at_radius<T>(const T&, const T&, const T&, const T&, Side,         \
                                                      const ModelParams&, const ManifoldConfig&);           \
  template SectionCurve<T> trace_section_curve<T>(const T&, const T&, const T&, const T&, Side,             \
                                                  const ModelParams&, const ManifoldConfig&);               \
  template T splitting_value<T>(const T&, const T&, const T&, const ModelParams&, const ManifoldConfig&, T*, \
                                T*);                                                                        \
  template SplittingRecord splitting_distance<T>(const T&, const T&, const T&, const ModelParams&,          \
                                                 const ManifoldConfig&, const MelnikovSeries<T>*);          \
  template HomoclinicSearch find_homoclinics<T>(const T&, const T&, const ModelParams&, const ManifoldConfig&); \
  template double calibrate_seed_constant<T>(const T&, const T&, const T&, const ModelParams&,              \
                                             const ManifoldConfig&);

REI3BP_MANIFOLDS_INST(Float53)
REI3BP_MANIFOLDS_INST(Float113)
REI3BP_MANIFOLDS_INST(Float256)

}  // namespace rei3bp
