#include "rei3bp/melnikov.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

#include "rei3bp/dynamics.hpp"
#include "rei3bp/numeric.hpp"
#include "rei3bp/time_law.hpp"

namespace rei3bp {

namespace {

// P(t) (1 + t^2)^(-p)
template <class T>
struct RationalTerm {
  std::vector<T> P;
  int p = 0;

  T operator()(const T& t) const {
    T acc = 0;
    for (size_t i = P.size(); i-- > 0;) acc = acc * t + P[i];
    return acc * pow(1 + t * t, T(-p));
  }

  // d/dt followed by multiplication with mult / (1 + t^2)
  RationalTerm derive_scaled(const T& mult) const {
    RationalTerm out;
    out.p = p + 2;
    size_t n = P.size();
    out.P.assign(n + 2, T(0));
    // P'(1 + t^2)
    for (size_t i = 1; i < n; ++i) {
      T d = T(static_cast<int>(i)) * P[i];
      out.P[i - 1] += d;
      out.P[i + 1] += d;
    }
    // - 2 p t P
    for (size_t i = 0; i < n; ++i) out.P[i + 1] -= T(2 * p) * P[i];
    for (auto& c : out.P) c *= mult;
    while (out.P.size() > 1 && out.P.back() == 0) out.P.pop_back();
    return out;
  }
};

template <class T>
T gl_panel(const std::function<T(const T&)>& f, const T& a, const T& b, int n, T* abs_sum = nullptr) {
  const auto& rule = gauss_legendre<T>(n);
  T mid = (a + b) / 2, half = (b - a) / 2;
  T acc = 0, aacc = 0;
  for (int i = 0; i < n; ++i) {
    T v = rule.w[i] * f(mid + half * rule.x[i]);
    acc += v;
    aacc += abs(v);
  }
  if (abs_sum) *abs_sum = aacc * abs(half);
  return acc * half;
}

// Adaptive Gauss-Legendre with error density `density` per unit length and a
// roundoff floor relative to the integral of |f|.
template <class T>
T adaptive_gl(const std::function<T(const T&)>& f, const T& a, const T& b, const T& density, T& err,
              int depth = 0) {
  T mag;
  T hi = gl_panel<T>(f, a, b, 24, &mag);
  T lo = gl_panel<T>(f, a, b, 16);
  T e = abs(hi - lo);
  T floor_ = 64 * machine_epsilon<T>() * mag;
  if (e <= density * abs(b - a) || e <= floor_ || depth >= 24) {
    err += e;
    return hi;
  }
  T m = (a + b) / 2;
  return adaptive_gl<T>(f, a, m, density, err, depth + 1) + adaptive_gl<T>(f, m, b, density, err, depth + 1);
}

// int_{theta}^{pi/2} cos^m, written with the complement angle thc = pi/2 - theta
template <class T>
T cos_power_tail(int m, const T& thc) {
  T c = sin(thc), s = cos(thc);
  T J = thc;  // m = 0
  int start = 0;
  if (m % 2 == 1) {
    J = 1 - s;
    start = 1;
  }
  for (int j = start + 2; j <= m; j += 2) J = -ipow(c, j - 1) * s / T(j) + T(j - 1) / T(j) * J;
  return J;
}

}  // namespace

template <class T>
T MelnikovSeries<T>::evaluate(const T& v, const T& xi) const {
  T th = xi - G * G * G * v;
  T acc = L0;
  for (const auto& h : harmonics) acc += 2 * h.L * cos(T(h.l) * th);
  return acc;
}

template <class T>
T MelnikovSeries<T>::dv(const T& v, const T& xi) const {
  T G3 = G * G * G;
  T th = xi - G3 * v;
  T acc = 0;
  for (const auto& h : harmonics) acc += 2 * h.L * T(h.l) * G3 * sin(T(h.l) * th);
  return acc;
}

template <class T>
T osc_integral_gamma_form(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "osc_integral: k must be >= 1");
  T z = T(2 * k) - T(0.5);
  return sqrt(pi<T>()) * boost::math::tgamma_delta_ratio(z, T(0.5));
}

template <class T>
OscIntegral<T> osc_integral(int l, int k, const T& G, const T& tol) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "osc_integral: k must be >= 1");
  if (l < 0) l = -l;
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "osc_integral: tol must be positive");
  OscIntegral<T> out;
  out.l = l;
  out.k = k;
  out.G = G;
  if (l == 0) {
    // tau = tan(theta): int cos^(4k-2) over a half period, exact for the periodic trapezoid
    int m = 4 * k - 2, N = 4 * k + 8;
    T tp = two_pi<T>(), acc = 0;
    for (int j = 0; j < N; ++j) acc += ipow(cos(tp * T(j) / T(N)), m);
    T val = acc * tp / T(N) / 2;
    out.value = std::complex<T>(val, T(0));
    out.scaled = val;
    out.err = 16 * machine_epsilon<T>() * val;
    out.method = OscMethod::ClosedForm;
    return out;
  }
  using C = std::complex<T>;
  const T lam = T(l) * G * G * G;
  T delta = sqrt(T(2 * k) / lam);
  if (delta > 1) delta = 1;
  const T third = T(1) / 3;
  auto integrand = [&](const T& x) -> T {
    T root = sqrt(1 + x * x * third);
    C tau(x, root - delta);
    C dtau(T(1), x * third / root);
    C one = T(1) + tau * tau;
    C expo = C(T(0), lam) * (tau + tau * tau * tau * third) / T(2) + C(lam * third, T(0)) - T(2 * k) * log(one);
    return (exp(expo) * dtau).real();
  };
  auto log_mod = [&](const T& x) -> T {
    T root = sqrt(1 + x * x * third);
    C tau(x, root - delta);
    C one = T(1) + tau * tau;
    C expo = C(T(0), lam) * (tau + tau * tau * tau * third) / T(2) + C(lam * third, T(0)) - T(2 * k) * log(one);
    return expo.real();
  };
  T peak = log_mod(T(0));
  const T ltol = log(tol) - 8;
  T X = T(0.5);
  for (int i = 0; i < 200 && log_mod(X) - peak > ltol; ++i) X *= T(1.25);
  T w = delta;
  T sl = 1 / sqrt(lam);
  if (sl < w) w = sl;
  if (w > T(0.5)) w = T(0.5);
  std::function<T(const T&)> f = integrand;
  T peak_mod = exp(peak);
  T acc = 0, err = 0;
  int npan = 0;
  for (T a = 0; a < X; a += w, ++npan) {
    T b = a + w > X ? X : a + w;
    acc += adaptive_gl<T>(f, a, b, tol * peak_mod, err);
    if (npan > 100000) throw Error(ErrorCode::ContourFailure, "osc_integral: contour panel budget exceeded");
  }
  T scaled = 2 * acc;
  if (!isfinite(to_double(scaled))) throw Error(ErrorCode::ContourFailure, "osc_integral: non-finite contour value");
  T damp = exp(-lam * third);
  out.scaled = scaled;
  out.value = C(scaled * damp, T(0));
  out.err = 2 * err * damp;
  out.method = OscMethod::SaddleContour;
  return out;
}

template <class T>
OscIntegral<T> osc_integral_real_axis(int l, int k, const T& G, const T& tol) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "osc_integral: k must be >= 1");
  if (l < 0) l = -l;
  if (l == 0) return osc_integral<T>(0, k, G, tol);
  OscIntegral<T> out;
  out.l = l;
  out.k = k;
  out.G = G;
  out.method = OscMethod::RealAxis;
  const T lam = T(l) * G * G * G;
  const T c = lam / 2;
  const T third = T(1) / 3;
  auto A = [&](const T& x) { return pow(1 + x * x, T(-2 * k)); };
  auto Phi = [&](const T& x) { return lam * (x + x * x * x * third) / 2; };
  // panel edges at Phi = j pi, so the tail starts where cos(Phi) = +-1
  const T X = 10;
  const T p = pi<T>();
  int J = static_cast<int>(floor(to_double(Phi(X) / p)));
  std::function<T(const T&)> f = [&](const T& x) { return A(x) * cos(Phi(x)); };
  T acc = 0, err = 0;
  T a = 0;
  T vtol = 64 * machine_epsilon<T>();
  for (int j = 1; j <= J; ++j) {
    T b = homoclinic_from_v<T>(T(j) * p / lam, vtol).tau;
    acc += adaptive_gl<T>(f, a, b, tol / X, err);
    a = b;
  }
  // asymptotic tail: int_a^inf A e^{i Phi} = -e^{i Phi(a)} sum_j (-1)^j B_j(a)
  RationalTerm<T> B;
  B.P = {T(1)};
  B.p = 2 * k + 1;
  std::complex<T> ic(T(0), c), fac = T(1) / ic;
  std::complex<T> sum(0, 0), last(0, 0);
  for (int j = 0; j < 8; ++j) {
    std::complex<T> term = fac * B(a);
    if (j % 2 == 1) term = -term;
    sum += term;
    last = term;
    B = B.derive_scaled(T(1));
    fac /= ic;
  }
  std::complex<T> eph(cos(Phi(a)), sin(Phi(a)));
  T tail = (-eph * sum).real();
  T val = 2 * (acc + tail);
  out.value = std::complex<T>(val, T(0));
  out.scaled = val * exp(lam * third);
  out.err = 2 * (err + abs(last));
  return out;
}

template <class T>
HarmonicValue<T> melnikov_harmonic(int l, const T& G, int k_max, const T& tol) {
  if (l < 0) l = -l;
  if (!(G > 0)) throw Error(ErrorCode::InvalidArgument, "melnikov_harmonic: G must be positive");
  T G4 = G * G * G * G;
  T ratio = 4 / G4;
  if (!(ratio < 1))
    throw Error(ErrorCode::Domain, "melnikov_harmonic: the expansion in rho converges only for G > sqrt(2)");
  const int cap = k_max > 0 ? k_max : 2000;
  T sub_tol = tol / 100;
  T floor_tol = 64 * machine_epsilon<T>();
  if (sub_tol < floor_tol) sub_tol = floor_tol;
  HarmonicValue<T> out;
  out.l = l;
  T acc = 0, err = 0;
  T binom = 1;
  T g4k = 1;
  T tail_bound = 0;
  for (int k = 1; k <= cap + 1; ++k) {
    binom *= (T(-0.5) - T(k - 1)) / T(k);
    g4k /= G4;
    // rigorous bound on sum_{j >= k}: |a_{l,j}| <= a_{0,j}, |I(l,j)| <= I(0,j)
    T a0 = rho_pow_fourier<T>(0, k, sub_tol).a_lk;
    T bound = abs(binom) * a0 * g4k * osc_integral_gamma_form<T>(k) / (1 - ratio);
    if (k == cap + 1 || (k_max == 0 && bound <= tol / 2 && k > 1)) {
      tail_bound = bound;
      break;
    }
    auto a = rho_pow_fourier<T>(l, k, sub_tol);
    auto I = osc_integral<T>(l, k, G, sub_tol);
    T term = -binom * a.a_lk * g4k * I.value.real();
    acc += term;
    T a_abs_err = a.err * a0;
    err += abs(binom) * g4k * (a_abs_err * abs(I.value.real()) + abs(a.a_lk) * I.err);
    out.k_used = k;
  }
  out.L = acc;
  out.err_est = err + tail_bound;
  if (k_max > 0 && tail_bound > tol)
    throw Error(ErrorCode::ToleranceFailure, "melnikov_harmonic: tail bound above tolerance at the given k_max");
  return out;
}

template <class T>
MelnikovSeries<T> melnikov_series(const T& G, const T& tol, int l_max, int k_max) {
  MelnikovSeries<T> s;
  s.G = G;
  auto h0 = melnikov_harmonic<T>(0, G, k_max, tol);
  s.L0 = h0.L;
  s.L0_err = h0.err_est;
  s.L0_k_used = h0.k_used;
  s.err_est = h0.err_est;
  s.k_max = h0.k_used;
  int small = 0;
  const int cap = l_max > 0 ? l_max : 400;
  T prev = abs(h0.L);
  for (int l = 1; l <= cap; ++l) {
    auto h = melnikov_harmonic<T>(l, G, k_max, tol);
    s.harmonics.push_back(h);
    s.err_est += 2 * h.err_est;
    if (h.k_used > s.k_max) s.k_max = h.k_used;
    s.l_max = l;
    if (l_max == 0) {
      if (2 * abs(h.L) < tol / 4) ++small;
      else small = 0;
      if (small >= 2) break;
    }
    prev = abs(h.L);
  }
  if (l_max > 0 && !s.harmonics.empty() && prev > 0 && s.harmonics.size() >= 2) {
    // geometric estimate of the dropped harmonics
    T q = abs(s.harmonics.back().L / s.harmonics[s.harmonics.size() - 2].L);
    if (q < 1) s.err_est += 2 * prev * q / (1 - q);
  }
  return s;
}

template <class T>
DirectValue<T> melnikov_direct(const T& v, const T& xi, const T& G, const T& tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "melnikov_direct: tol must be positive");
  if (!(G > 0)) throw Error(ErrorCode::InvalidArgument, "melnikov_direct: G must be positive");
  const T G3 = G * G * G;
  const T G4 = G3 * G;
  const T tp = two_pi<T>();
  // L(v, xi) depends on xi - G^3 v only
  T th = wrap_two_pi<T>(xi - G3 * v);
  const T S = 30;
  T n_lo = floor((th - G3 * S) / tp);
  T n_hi = ceil((th + G3 * S) / tp);
  auto u_of = [&](const T& n) { return (tp * n - th) / G3; };
  const T vtol = 64 * machine_epsilon<T>();
  DirectValue<T> out;
  T acc = 0, err = 0;
  T scale_guess = T(1) / (8 * G4);
  long npanels = static_cast<long>(to_double(n_hi - n_lo));
  T panel_tol = tol * scale_guess / T(npanels > 0 ? npanels : 1);
  for (T n = n_lo; n < n_hi; n += 1) {
    T un = u_of(n);
    std::function<T(const T&)> f = [&](const T& E) {
      T u = un + e_minus_sin(E) / G3;
      T r = homoclinic_from_v<T>(u, vtol).r_h;
      T rv = rho_of_E(E);
      return potential_rho(r, rv, G) * rv / G3;
    };
    int sub = abs(un) < 3 ? 8 : 2;
    for (int i = 0; i < sub; ++i) {
      T a = tp * T(i) / T(sub), b = tp * T(i + 1) / T(sub);
      acc += adaptive_gl<T>(f, a, b, panel_tol / tp, err);
    }
    ++out.panels;
  }
  // analytic tails beyond the outermost collisions
  T u_hi = u_of(n_hi), u_lo = u_of(n_lo);
  T tau_hi = homoclinic_from_v<T>(u_hi, vtol).tau;
  T tau_lo = abs(homoclinic_from_v<T>(u_lo, vtol).tau);
  const int depth = 6;
  T binom = 1, c4k = 1;
  T tail = 0, tail_err = 0;
  for (int k = 1; k <= 80; ++k) {
    binom *= (T(-0.5) - T(k - 1)) / T(k);
    c4k /= 4 * G4;
    T ck = -binom * c4k;
    T a0 = rho_pow_fourier<T>(0, k, T(64) * machine_epsilon<T>()).a_lk;
    T four_k = ipow(T(4), k);
    int m = 2 * k + 1;
    // mean part: c_k a_{0,k} 2^(2k) int_{tau}^inf (1 + tau^2)^(-2k)
    T mean_hi = ck * a0 * four_k * cos_power_tail<T>(4 * k - 2, atan(1 / tau_hi));
    T mean_lo = ck * a0 * four_k * cos_power_tail<T>(4 * k - 2, atan(1 / tau_lo));
    // oscillating part by repeated integration by parts
    TrigPoly<T> g = one_minus_cos_power<T>(2 * k);
    auto P = sigma_antiderivatives<T>(g, depth);
    RationalTerm<T> F;
    F.P = {ipow(T(2), m)};
    F.p = m;
    T osc_hi = 0, osc_lo = 0, last = 0;
    T g3j = 1;
    T sign_lo_tau = homoclinic_from_v<T>(u_lo, vtol).tau;
    for (int j = 1; j <= depth; ++j) {
      g3j *= G3;
      T pj = P[j - 1](T(0));
      T fh = F(tau_hi);
      T fl = F(sign_lo_tau);
      T th_ = (j % 2 == 0 ? 1 : -1) * pj * fh / g3j;
      T tl_ = (j % 2 == 0 ? -1 : 1) * pj * fl / g3j;
      osc_hi += th_;
      osc_lo += tl_;
      last = abs(th_) + abs(tl_);
      F = F.derive_scaled(T(2));
    }
    T contrib = ck * (osc_hi + osc_lo) + mean_hi + mean_lo;
    tail += contrib;
    tail_err += abs(ck) * last;
    if (abs(contrib) < tol * scale_guess * T(1e-6) && k > 2) break;
  }
  out.L = acc + tail;
  out.err_est = err + tail_err;
  return out;
}

double distance_formula(double v_star, double xi0, double G) {
  auto h = homoclinic_from_v<double>(v_star, 1e-14);
  if (h.y_h == 0) throw Error(ErrorCode::Domain, "distance_formula: y_h(v*) = 0");
  double J1 = std::cyl_bessel_j(1.0, 1.0);
  double G3 = G * G * G;
  return J1 * std::sqrt(2 * M_PI) / h.y_h * std::sqrt(G) * std::exp(-G3 / 3) * std::sin(xi0 - G3 * v_star);
}

template <class T>
PredictedDistance predicted_distance(const T& v_star, const T& xi0, const MelnikovSeries<T>& series) {
  if (v_star == 0) throw Error(ErrorCode::Domain, "predicted_distance: v* = 0");
  PredictedDistance p;
  p.formula = distance_formula(to_double(v_star), to_double(xi0), to_double(series.G));
  auto h = homoclinic_from_v<T>(v_star, T(64) * machine_epsilon<T>());
  p.melnikov = to_double(-series.dv(v_star, xi0) / h.y_h);
  return p;
}

#define REI3BP_MELNIKOV_INST(T)                                                       \
  template struct MelnikovSeries<T>;                                                  \
  template T osc_integral_gamma_form<T>(int);                                         \
  template OscIntegral<T> osc_integral<T>(int, int, const T&, const T&);              \
  template OscIntegral<T> osc_integral_real_axis<T>(int, int, const T&, const T&);    \
  template HarmonicValue<T> melnikov_harmonic<T>(int, const T&, int, const T&);       \
  template MelnikovSeries<T> melnikov_series<T>(const T&, const T&, int, int);        \
  template DirectValue<T> melnikov_direct<T>(const T&, const T&, const T&, const T&); \
  template PredictedDistance predicted_distance<T>(const T&, const T&, const MelnikovSeries<T>&);

REI3BP_MELNIKOV_INST(Float53)
REI3BP_MELNIKOV_INST(Float113)
REI3BP_MELNIKOV_INST(Float256)

}  // namespace rei3bp
