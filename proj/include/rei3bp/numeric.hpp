#pragma once

// Small numerical building blocks shared by the modules: Gauss-Legendre
// rules, trigonometric polynomials in one angle, bracketed root finding.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "rei3bp/precision.hpp"

namespace rei3bp {

using std::abs;
using std::ceil;
using std::cos;
using std::exp;
using std::isfinite;
using std::atan;
using std::floor;
using std::log;
using std::pow;
using std::round;
using std::sin;
using std::sqrt;

template <class T>
T ipow(T x, int n) {
  T result = 1;
  if (n < 0) {
    x = T(1) / x;
    n = -n;
  }
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

template <class T>
struct GaussRule {
  std::vector<T> x;  // nodes on [-1, 1]
  std::vector<T> w;
};

namespace detail {

template <class T>
GaussRule<T> build_gauss_legendre(int n) {
  GaussRule<T> rule;
  rule.x.assign(n, T(0));
  rule.w.assign(n, T(0));
  const T eps = machine_epsilon<T>();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    T z = cos(pi<T>() * (T(i) + T(0.75)) / (T(n) + T(0.5)));
    T dp = 0;
    for (int it = 0; it < 100; ++it) {
      T p0 = 1, p1 = z;
      for (int j = 2; j <= n; ++j) {
        T p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / T(j);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = T(n) * (z * p1 - p0) / (z * z - 1);
      T dz = p1 / dp;
      z -= dz;
      if (abs(dz) <= 4 * eps) {
        // one more pass for the derivative at the converged node
        p0 = 1;
        p1 = z;
        for (int j = 2; j <= n; ++j) {
          T p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / T(j);
          p0 = p1;
          p1 = p2;
        }
        dp = T(n) * (z * p1 - p0) / (z * z - 1);
        break;
      }
    }
    T w = T(2) / ((1 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0;
  return rule;
}

}  // namespace detail

/// Cached n-point Gauss-Legendre rule on [-1, 1]; thread-safe.
template <class T>
const GaussRule<T>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule<T>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussRule<T>>(detail::build_gauss_legendre<T>(n));
  auto& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

/// f(E) = c[0] + sum_n c[n] cos(nE) + s[n] sin(nE).
template <class T>
struct TrigPoly {
  std::vector<T> c{T(0)};
  std::vector<T> s{T(0)};

  int degree() const { return static_cast<int>(c.size()) - 1; }

  void resize(int n) {
    c.resize(n + 1, T(0));
    s.resize(n + 1, T(0));
  }

  static TrigPoly constant(const T& a) {
    TrigPoly p;
    p.c[0] = a;
    return p;
  }

  /// Multiplies by (1 - cos E).
  TrigPoly times_one_minus_cos() const {
    TrigPoly out;
    int n = degree();
    out.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      out.c[j] += c[j];
      out.s[j] += s[j];
    }
    // cos(jE) cos E = (cos((j+1)E) + cos((j-1)E)) / 2, likewise for sin.
    out.c[1] -= c[0];
    for (int j = 1; j <= n; ++j) {
      out.c[j + 1] -= c[j] / 2;
      out.s[j + 1] -= s[j] / 2;
      if (j - 1 == 0) {
        out.c[0] -= c[j] / 2;
      } else {
        out.c[j - 1] -= c[j] / 2;
        out.s[j - 1] -= s[j] / 2;
      }
    }
    return out;
  }

  /// Antiderivative in E (constant term set to zero); requires c[0] == 0.
  TrigPoly integrate() const {
    TrigPoly out;
    out.resize(degree());
    for (int j = 1; j <= degree(); ++j) {
      out.c[j] = -s[j] / T(j);
      out.s[j] = c[j] / T(j);
    }
    return out;
  }

  T operator()(const T& E) const {
    T v = c[0];
    for (int j = 1; j <= degree(); ++j) {
      T a = T(j) * E;
      v += c[j] * cos(a) + s[j] * sin(a);
    }
    return v;
  }
};

/// (1 - cos E)^m as a trigonometric polynomial.
template <class T>
TrigPoly<T> one_minus_cos_power(int m) {
  TrigPoly<T> p = TrigPoly<T>::constant(T(1));
  for (int i = 0; i < m; ++i) p = p.times_one_minus_cos();
  return p;
}

/// Zero-mean antiderivatives with respect to sigma = E - sin E of the zero-mean
/// part of g. Returns P^1..P^depth, each normalized to zero sigma-mean.
template <class T>
std::vector<TrigPoly<T>> sigma_antiderivatives(const TrigPoly<T>& g_in, int depth) {
  std::vector<TrigPoly<T>> out;
  TrigPoly<T> g = g_in;
  // sigma-mean of g is the constant term of g (1 - cos E)
  g.c[0] -= g.times_one_minus_cos().c[0];
  for (int j = 0; j < depth; ++j) {
    TrigPoly<T> integrand = g.times_one_minus_cos();
    integrand.c[0] = 0;  // vanishes by construction; remove roundoff
    TrigPoly<T> P = integrand.integrate();
    P.c[0] -= P.times_one_minus_cos().c[0];
    out.push_back(P);
    g = P;
  }
  return out;
}

/// binom(-1/2, k) for k = 0..kmax.
template <class T>
std::vector<T> binom_minus_half(int kmax) {
  std::vector<T> b(kmax + 1);
  b[0] = 1;
  for (int k = 1; k <= kmax; ++k) b[k] = b[k - 1] * (T(-0.5) - T(k - 1)) / T(k);
  return b;
}

/// Brent's method on [a, b] with f(a), f(b) of opposite sign (or zero).
template <class T, class F>
T brent_root(F&& f, T a, T b, T fa, T fb, const T& xtol, int max_iter = 200) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) throw Error(ErrorCode::NoSignChange, "brent_root: no sign change on bracket");
  T c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (abs(fc) < abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    T tol1 = 2 * machine_epsilon<T>() * abs(b) + xtol / 2;
    T xm = (c - b) / 2;
    if (abs(xm) <= tol1 || fb == 0) return b;
    if (abs(e) >= tol1 && abs(fa) > abs(fb)) {
      T s = fb / fa, p, q;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        T qq = fa / fc, r = fb / fc;
        p = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
        q = (qq - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = abs(p);
      T m1 = 3 * xm * q - abs(tol1 * q), m2 = abs(e * q);
      if (2 * p < (m1 < m2 ? m1 : m2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (abs(d) > tol1) b += d;
    else b += (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw Error(ErrorCode::NonConvergence, "brent_root: iteration cap exceeded");
}

/// Wraps an angle to [0, 2 pi).
template <class T>
T wrap_two_pi(const T& x) {
  T tp = two_pi<T>();
  T y = x - tp * floor(x / tp);
  if (y >= tp) y -= tp;
  if (y < 0) y += tp;
  return y;
}

}  // namespace rei3bp
