#pragma once

// Melnikov potential L(v, xi; G) of the parabolic homoclinic:
//   L(v, xi) = int U(r_h(v + s), xi + G^3 s) ds
//            = L_0 + 2 sum_{l >= 1} L_l cos(l (xi - G^3 v)),
//   L_l = - sum_{k >= 1} binom(-1/2, k) a_{l,k} G^(-4k) I(l, k),
//   I(l, k) = int exp(i l G^3 (tau + tau^3/3)/2) (1 + tau^2)^(-2k) dtau.

#include <complex>
#include <string>
#include <vector>

#include "rei3bp/precision.hpp"

namespace rei3bp {

enum class OscMethod : int { RealAxis = 0, SaddleContour = 1, ClosedForm = 2 };

template <class T>
struct OscIntegral {
  int l = 0;
  int k = 1;
  T G;
  std::complex<T> value;
  T scaled;  // value * exp(l G^3 / 3), real part
  T err;     // estimated absolute error of value
  OscMethod method = OscMethod::SaddleContour;
};

template <class T>
struct HarmonicValue {
  int l = 0;
  T L;
  T err_est;  // quadrature errors plus rigorous tail bound
  int k_used = 0;
};

template <class T>
struct MelnikovSeries {
  T G;
  T L0;
  T L0_err;
  int L0_k_used = 0;
  std::vector<HarmonicValue<T>> harmonics;  // l = 1..l_max
  int l_max = 0;
  int k_max = 0;
  T err_est;

  /// L0 + 2 sum L_l cos(l (xi - G^3 v)).
  T evaluate(const T& v, const T& xi) const;
  /// dL/dv.
  T dv(const T& v, const T& xi) const;
};

template <class T>
struct DirectValue {
  T L;
  T err_est;
  int panels = 0;
};

struct PredictedDistance {
  double formula = 0;    // closed-form leading-order expression with printed constant
  double melnikov = 0;   // first-order graph prediction from the series
};

/// I(0, k) = sqrt(pi) Gamma(2k - 1/2) / Gamma(2k).
template <class T>
T osc_integral_gamma_form(int k);

/// Oscillatory integral I(l, k). For l = 0 a periodic quadrature in
/// tau = tan(theta); for l >= 1 a deformed contour through the pole at tau = i.
template <class T>
OscIntegral<T> osc_integral(int l, int k, const T& G, const T& tol);

/// Same integral by quadrature along the real axis plus an asymptotic tail.
/// Loses relative accuracy like exp(l G^3 / 3) times the working epsilon.
template <class T>
OscIntegral<T> osc_integral_real_axis(int l, int k, const T& G, const T& tol);

/// The harmonic L_l. k_max = 0 chooses the truncation from the tail bound,
/// otherwise the series is cut at k_max and ToleranceFailure is raised if the
/// tail bound exceeds tol.
template <class T>
HarmonicValue<T> melnikov_harmonic(int l, const T& G, int k_max, const T& tol);

/// Full series; l_max = 0 adds harmonics until they fall below tol.
template <class T>
MelnikovSeries<T> melnikov_series(const T& G, const T& tol, int l_max = 0, int k_max = 0);

/// Direct quadrature of the defining integral.
template <class T>
DirectValue<T> melnikov_direct(const T& v, const T& xi, const T& G, const T& tol);

/// Leading-order closed form J1(1) sqrt(2 pi) / y_h(v*) G^(1/2) exp(-G^3/3) sin(xi0 - G^3 v*).
double distance_formula(double v_star, double xi0, double G);

/// Both predictions; the series form uses d = -dL/dv / y_h(v*).
template <class T>
PredictedDistance predicted_distance(const T& v_star, const T& xi0, const MelnikovSeries<T>& series);

#define REI3BP_MELNIKOV_EXTERN(T)                                                       \
  extern template struct MelnikovSeries<T>;                                             \
  extern template T osc_integral_gamma_form<T>(int);                                    \
  extern template OscIntegral<T> osc_integral<T>(int, int, const T&, const T&);         \
  extern template OscIntegral<T> osc_integral_real_axis<T>(int, int, const T&, const T&); \
  extern template HarmonicValue<T> melnikov_harmonic<T>(int, const T&, int, const T&);  \
  extern template MelnikovSeries<T> melnikov_series<T>(const T&, const T&, int, int);   \
  extern template DirectValue<T> melnikov_direct<T>(const T&, const T&, const T&, const T&); \
  extern template PredictedDistance predicted_distance<T>(const T&, const T&, const MelnikovSeries<T>&);

REI3BP_MELNIKOV_EXTERN(Float53)
REI3BP_MELNIKOV_EXTERN(Float113)
REI3BP_MELNIKOV_EXTERN(Float256)
#undef REI3BP_MELNIKOV_EXTERN

}  // namespace rei3bp
