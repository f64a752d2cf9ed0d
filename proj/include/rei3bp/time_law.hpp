#pragma once

// Ephemeris of the colliding primaries: Kepler's equation at unit eccentricity,
// the separation rho = 1 - cos E, and Fourier coefficients of rho^(2k).

#include "rei3bp/precision.hpp"

namespace rei3bp {

template <class T>
struct EccentricAnomaly {
  T E;
  T residual;  // E - sin E - t evaluated after reduction to [-pi, pi]
  int iterations = 0;
};

template <class T>
struct FourierCoefficient {
  int l = 0;
  int k = 1;
  T a_lk;
  T err;       // change under the last node doubling
  int nodes = 0;
};

/// E - sin E without cancellation for small |E|.
template <class T>
T e_minus_sin(const T& E);

/// Solves E - sin E = t by bracketed Newton. Odd in t; E(t + 2 pi) = E(t) + 2 pi.
template <class T>
EccentricAnomaly<T> solve_kepler(const T& t, const T& tol);

/// Full-precision eccentric anomaly.
template <class T>
T eccentric_anomaly(const T& t);

/// rho(t) = 1 - cos E(t), computed as 2 sin^2(E/2).
template <class T>
T rho(const T& t);

/// rho as a function of the eccentric anomaly.
template <class T>
T rho_of_E(const T& E);

/// a_{l,k} = (1/2pi) int_0^{2pi} (1 - cos E)^(2k+1) cos(l (E - sin E)) dE.
/// tol is relative to the mean of rho^(2k) (so that large k stay meaningful).
/// Results are cached by (l, k); the cache is safe for concurrent use.
template <class T>
FourierCoefficient<T> rho_pow_fourier(int l, int k, const T& tol);

/// Drops all cached coefficients for scalar type T.
template <class T>
void clear_fourier_cache();

#define REI3BP_TIME_LAW_EXTERN(T)                                              \
  extern template T e_minus_sin<T>(const T&);                                 \
  extern template EccentricAnomaly<T> solve_kepler<T>(const T&, const T&);    \
  extern template T eccentric_anomaly<T>(const T&);                           \
  extern template T rho<T>(const T&);                                         \
  extern template T rho_of_E<T>(const T&);                                    \
  extern template FourierCoefficient<T> rho_pow_fourier<T>(int, int, const T&); \
  extern template void clear_fourier_cache<T>();

REI3BP_TIME_LAW_EXTERN(Float53)
REI3BP_TIME_LAW_EXTERN(Float113)
REI3BP_TIME_LAW_EXTERN(Float256)
#undef REI3BP_TIME_LAW_EXTERN

}  // namespace rei3bp
