#pragma once

// Rescaled vector field of the isosceles restricted problem with elliptic primaries, the
// perturbing potential and the closed-form parabolic homoclinic.

#include <complex>
#include <string>
#include <vector>

#include "rei3bp/precision.hpp"

namespace rei3bp {

template <class T>
struct PhaseState {
  T r;
  T y;
  T xi;
};

struct ModelParams {
  double G = 2.0;
  double tol_ode = 1e-12;
  int precision_bits = 53;
  double R_esc = 50.0;
  double horizon = 1e4;
  double h_par = 1e-4;
  double r_min = 1e-3;

  /// Human-readable notes about parameters outside the asymptotic regime.
  std::vector<std::string> warnings() const;
  /// Throws InvalidArgument / UnsupportedPrecision on inconsistent values.
  void validate() const;
};

template <class T>
struct FieldValue {
  T dr;
  T dy;
  T dxi;
};

template <class T>
struct HomoclinicPoint {
  T tau;
  T v;
  T r_h;
  T y_h;
  T dy_dv;  // derivative of y_h along the orbit
};

/// U = 1/r - 1/sqrt(r^2 + rho(xi)^2 / (4 G^4)), evaluated without cancellation.
template <class T>
T perturbing_potential(const T& r, const T& xi, const T& G);

/// U for a given primary separation rho.
template <class T>
T potential_rho(const T& r, const T& rho, const T& G);

/// dU/dr for a given rho.
template <class T>
T potential_dr_rho(const T& r, const T& rho, const T& G);

/// dU/drho for a given rho.
template <class T>
T potential_drho(const T& r, const T& rho, const T& G);

/// 1/r^3 - 1/r^2 - dU/dr.
template <class T>
T radial_force(const T& r, const T& rho, const T& G);

/// (dr/ds, dy/ds, dxi/ds); perturbed = false zeroes the rho-term.
template <class T>
FieldValue<T> vector_field(const PhaseState<T>& state, const T& G, bool perturbed = true);

/// h = y^2/2 + 1/(2 r^2) - 1/r.
template <class T>
T unperturbed_energy(const T& r, const T& y);

/// h + U(r, xi).
template <class T>
T full_energy(const PhaseState<T>& state, const T& G);

template <class T>
HomoclinicPoint<T> homoclinic_from_tau(const T& tau);

/// Real root of (tau + tau^3/3)/2 = v (Cardano, then Newton polish).
template <class T>
HomoclinicPoint<T> homoclinic_from_v(const T& v, const T& tol);

/// v(tau) = (tau + tau^3/3)/2 continued to complex tau.
template <class T>
std::complex<T> homoclinic_v_complex(const std::complex<T>& tau);

/// tau on the homoclinic with r_h(tau) = r and sign(tau) = sign.
template <class T>
T homoclinic_tau_from_r(const T& r, int sign);

template <class T>
inline PhaseState<T> reverse(const PhaseState<T>& s) {
  return PhaseState<T>{s.r, -s.y, -s.xi};
}

#define REI3BP_DYNAMICS_EXTERN(T)                                                    \
  extern template T perturbing_potential<T>(const T&, const T&, const T&);           \
  extern template T potential_rho<T>(const T&, const T&, const T&);                  \
  extern template T potential_dr_rho<T>(const T&, const T&, const T&);               \
  extern template T potential_drho<T>(const T&, const T&, const T&);                 \
  extern template T radial_force<T>(const T&, const T&, const T&);                   \
  extern template FieldValue<T> vector_field<T>(const PhaseState<T>&, const T&, bool); \
  extern template T unperturbed_energy<T>(const T&, const T&);                       \
  extern template T full_energy<T>(const PhaseState<T>&, const T&);                  \
  extern template HomoclinicPoint<T> homoclinic_from_tau<T>(const T&);               \
  extern template HomoclinicPoint<T> homoclinic_from_v<T>(const T&, const T&);       \
  extern template std::complex<T> homoclinic_v_complex<T>(const std::complex<T>&);   \
  extern template T homoclinic_tau_from_r<T>(const T&, int);

REI3BP_DYNAMICS_EXTERN(Float53)
REI3BP_DYNAMICS_EXTERN(Float113)
REI3BP_DYNAMICS_EXTERN(Float256)
#undef REI3BP_DYNAMICS_EXTERN

}  // namespace rei3bp
