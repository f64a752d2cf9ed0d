#include "rei3bp/time_law.hpp"

#include <map>
#include <shared_mutex>
#include <utility>

#include "rei3bp/numeric.hpp"

namespace rei3bp {

template <class T>
T e_minus_sin(const T& E) {
  if (abs(E) >= 1) return E - sin(E);
  // E^3/3! - E^5/5! + ...
  T E2 = E * E;
  T term = E * E2 / 6;
  T sum = term;
  const T eps = machine_epsilon<T>();
  for (int n = 5; n < 400; n += 2) {
    term *= -E2 / T((n - 1) * n);
    sum += term;
    if (abs(term) <= eps * abs(sum)) break;
  }
  return sum;
}

template <class T>
EccentricAnomaly<T> solve_kepler(const T& t, const T& tol) {
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "solve_kepler: tol must be positive");
  const T tp = two_pi<T>();
  const T p = pi<T>();
  T n = round(t / tp);
  T tr = t - n * tp;
  bool neg = tr < 0;
  T a = neg ? -tr : tr;
  EccentricAnomaly<T> out{T(0), T(0), 0};
  T E;
  if (a == 0) {
    E = 0;
  } else if (a >= p) {
    E = p;
    out.residual = p - a;
  } else {
    T lo = a;
    T c6 = cbrt_(T(6) * a);
    if (c6 > lo) lo = c6;
    T hi = a + 1;
    if (hi > p) hi = p;
    if (lo > hi) lo = hi;
    E = a < T(0.1) ? c6 : a + T(0.85);
    if (E < lo) E = lo;
    if (E > hi) E = hi;
    const T eps = machine_epsilon<T>();
    int it = 0;
    for (; it < 200; ++it) {
      T f = e_minus_sin(E) - a;
      if (f == 0) break;
      if (f > 0) hi = E;
      else lo = E;
      T s = sin(E / 2);
      T fp = 2 * s * s;
      T En = E - f / fp;
      if (!(En > lo && En < hi)) En = (lo + hi) / 2;
      T step = abs(En - E);
      E = En;
      if (step <= 2 * eps * E || hi - lo <= 2 * eps * hi) break;
    }
    if (it >= 200) throw Error(ErrorCode::NonConvergence, "solve_kepler: iteration cap exceeded");
    out.iterations = it + 1;
    out.residual = e_minus_sin(E) - a;
  }
  if (abs(out.residual) > tol)
    throw Error(ErrorCode::NonConvergence, "solve_kepler: residual above tolerance");
  if (neg) {
    E = -E;
    out.residual = -out.residual;
  }
  out.E = E + n * tp;
  return out;
}

template <class T>
T eccentric_anomaly(const T& t) {
  return solve_kepler<T>(t, T(1e3) * machine_epsilon<T>() * (1 + abs(t))).E;
}

template <class T>
T rho_of_E(const T& E) {
  T s = sin(E / 2);
  return 2 * s * s;
}

template <class T>
T rho(const T& t) {
  const T tp = two_pi<T>();
  T n = round(t / tp);
  T tr = t - n * tp;
  T E = solve_kepler<T>(tr, T(1e3) * machine_epsilon<T>() * 8).E;
  return rho_of_E(E);
}

namespace {

template <class T>
struct FourierCache {
  std::shared_mutex mu;
  std::map<std::pair<int, int>, FourierCoefficient<T>> entries;
};

template <class T>
FourierCache<T>& fourier_cache() {
  static FourierCache<T> cache;
  return cache;
}

template <class T>
T trapezoid_coefficient(int l, int k, int N, T& scale) {
  const T tp = two_pi<T>();
  T sum = 0;
  T abs_sum = 0;
  for (int j = 0; j < N; ++j) {
    T E = tp * T(j) / T(N);
    T r = rho_of_E(E);
    T w = ipow(r, 2 * k + 1);
    sum += w * cos(T(l) * (E - sin(E)));
    abs_sum += w;
  }
  scale = abs_sum / T(N);
  return sum / T(N);
}

}  // namespace

template <class T>
FourierCoefficient<T> rho_pow_fourier(int l, int k, const T& tol) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "rho_pow_fourier: k must be >= 1");
  if (!(tol > 0)) throw Error(ErrorCode::InvalidArgument, "rho_pow_fourier: tol must be positive");
  if (l < 0) l = -l;
  auto& cache = fourier_cache<T>();
  auto key = std::make_pair(l, k);
  {
    std::shared_lock lock(cache.mu);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end() && it->second.err <= tol) {
      return it->second;
    }
  }
  int N = 32;
  while (N < 2 * (2 * k + 1) + 4 * l + 16) N *= 2;
  T scale;
  T prev = trapezoid_coefficient<T>(l, k, N, scale);
  FourierCoefficient<T> out;
  out.l = l;
  out.k = k;
  for (int iter = 0; iter < 24; ++iter) {
    N *= 2;
    T cur = trapezoid_coefficient<T>(l, k, N, scale);
    T change = abs(cur - prev);
    T rel = change / (scale > 0 ? scale : T(1));
    prev = cur;
    if (rel <= tol) {
      out.a_lk = cur;
      out.err = rel;
      out.nodes = N;
      std::unique_lock lock(cache.mu);
      auto it = cache.entries.find(key);
      if (it == cache.entries.end() || it->second.err > out.err) cache.entries[key] = out;
      return out;
    }
  }
  throw Error(ErrorCode::ToleranceFailure, "rho_pow_fourier: node doubling did not reach tolerance");
}

template <class T>
void clear_fourier_cache() {
  auto& cache = fourier_cache<T>();
  std::unique_lock lock(cache.mu);
  cache.entries.clear();
}

#define REI3BP_TIME_LAW_INST(T)                                        \
  template T e_minus_sin<T>(const T&);                                 \
  template EccentricAnomaly<T> solve_kepler<T>(const T&, const T&);    \
  template T eccentric_anomaly<T>(const T&);                           \
  template T rho<T>(const T&);                                         \
  template T rho_of_E<T>(const T&);                                    \
  template FourierCoefficient<T> rho_pow_fourier<T>(int, int, const T&); \
  template void clear_fourier_cache<T>();

REI3BP_TIME_LAW_INST(Float53)
REI3BP_TIME_LAW_INST(Float113)
REI3BP_TIME_LAW_INST(Float256)

}  // namespace rei3bp
