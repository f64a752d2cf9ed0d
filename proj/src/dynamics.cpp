#include "rei3bp/dynamics.hpp"

#include <sstream>

#include "rei3bp/numeric.hpp"
#include "rei3bp/time_law.hpp"

namespace rei3bp {

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> w;
  if (G < 1.0) w.push_back("G < 1: outside the perturbative regime");
  if (G > 0 && G * G < 2.0) w.push_back("G <= sqrt(2): the Taylor series of the potential in rho diverges at pericenter");
  return w;
}

void ModelParams::validate() const {
  if (!(G > 0)) throw Error(ErrorCode::InvalidArgument, "G must be positive");
  if (!(tol_ode > 0)) throw Error(ErrorCode::InvalidArgument, "tol_ode must be positive");
  if (!(R_esc > 0)) throw Error(ErrorCode::InvalidArgument, "R_esc must be positive");
  if (!(horizon > 0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (!(h_par > 0)) throw Error(ErrorCode::InvalidArgument, "h_par must be positive");
  if (!(r_min > 0)) throw Error(ErrorCode::InvalidArgument, "r_min must be positive");
  precision_from_bits(precision_bits);
}

namespace {

template <class T>
void check_radius(const T& r) {
  if (!(r > 0)) throw Error(ErrorCode::Domain, "radius must be positive");
}

}  // namespace

template <class T>
T potential_rho(const T& r, const T& rho_v, const T& G) {
  check_radius(r);
  T G2 = G * G;
  T q = rho_v * rho_v / (4 * G2 * G2);
  T x = q / (r * r);
  return -expm1_(T(-0.5) * log1p_(x)) / r;
}

template <class T>
T potential_dr_rho(const T& r, const T& rho_v, const T& G) {
  check_radius(r);
  T G2 = G * G;
  T q = rho_v * rho_v / (4 * G2 * G2);
  T x = q / (r * r);
  return expm1_(T(-1.5) * log1p_(x)) / (r * r);
}

template <class T>
T potential_drho(const T& r, const T& rho_v, const T& G) {
  check_radius(r);
  T G2 = G * G;
  T c = 4 * G2 * G2;
  T s = r * r + rho_v * rho_v / c;
  return rho_v / c / (s * sqrt(s));
}

template <class T>
T perturbing_potential(const T& r, const T& xi, const T& G) {
  check_radius(r);
  return potential_rho(r, rho<T>(xi), G);
}

template <class T>
T radial_force(const T& r, const T& rho_v, const T& G) {
  T ir = 1 / r;
  T ir2 = ir * ir;
  T f = ir2 * (ir - 1);
  if (rho_v != 0) f -= potential_dr_rho(r, rho_v, G);
  return f;
}

template <class T>
FieldValue<T> vector_field(const PhaseState<T>& s, const T& G, bool perturbed) {
  check_radius(s.r);
  T rv = perturbed ? rho<T>(s.xi) : T(0);
  T G3 = G * G * G;
  return FieldValue<T>{s.y, radial_force(s.r, rv, G), G3};
}

template <class T>
T unperturbed_energy(const T& r, const T& y) {
  check_radius(r);
  return y * y / 2 + 1 / (2 * r * r) - 1 / r;
}

template <class T>
T full_energy(const PhaseState<T>& s, const T& G) {
  return unperturbed_energy(s.r, s.y) + perturbing_potential(s.r, s.xi, G);
}

template <class T>
HomoclinicPoint<T> homoclinic_from_tau(const T& tau) {
  T t2 = tau * tau;
  T one = 1 + t2;
  HomoclinicPoint<T> h;
  h.tau = tau;
  h.v = (tau + tau * t2 / 3) / 2;
  h.r_h = one / 2;
  h.y_h = 2 * tau / one;
  // dy/dv = (dy/dtau) / r
  h.dy_dv = 4 * (1 - t2) / (one * one * one);
  return h;
}

template <class T>
HomoclinicPoint<T> homoclinic_from_v(const T& v, const T& tol) {
  T a = abs(v);
  T A = cbrt_(3 * a + sqrt(9 * a * a + 1));
  T tau = A - 1 / A;
  if (a < T(1e-3)) tau = 2 * a;
  const T eps = machine_epsilon<T>();
  for (int it = 0; it < 60; ++it) {
    T f = (tau + tau * tau * tau / 3) / 2 - a;
    T d = f / ((1 + tau * tau) / 2);
    tau -= d;
    if (abs(d) <= 2 * eps * (abs(tau) + eps)) break;
  }
  if (v < 0) tau = -tau;
  HomoclinicPoint<T> h = homoclinic_from_tau(tau);
  if (abs(h.v - v) > tol * (1 + abs(v)))
    throw Error(ErrorCode::NonConvergence, "homoclinic_from_v: round trip above tolerance");
  return h;
}

template <class T>
std::complex<T> homoclinic_v_complex(const std::complex<T>& tau) {
  return (tau + tau * tau * tau / T(3)) / T(2);
}

template <class T>
T homoclinic_tau_from_r(const T& r, int sign) {
  if (r < T(0.5)) throw Error(ErrorCode::Domain, "homoclinic radius is at least 1/2");
  T tau = sqrt(2 * r - 1);
  return sign < 0 ? -tau : tau;
}

#define REI3BP_DYNAMICS_INST(T)                                                    \
  template T perturbing_potential<T>(const T&, const T&, const T&);                \
  template T potential_rho<T>(const T&, const T&, const T&);                       \
  template T potential_dr_rho<T>(const T&, const T&, const T&);                    \
  template T potential_drho<T>(const T&, const T&, const T&);                      \
  template T radial_force<T>(const T&, const T&, const T&);                        \
  template FieldValue<T> vector_field<T>(const PhaseState<T>&, const T&, bool);    \
  template T unperturbed_energy<T>(const T&, const T&);                            \
  template T full_energy<T>(const PhaseState<T>&, const T&);                       \
  template HomoclinicPoint<T> homoclinic_from_tau<T>(const T&);                    \
  template HomoclinicPoint<T> homoclinic_from_v<T>(const T&, const T&);            \
  template std::complex<T> homoclinic_v_complex<T>(const std::complex<T>&);        \
  template T homoclinic_tau_from_r<T>(const T&, int);

REI3BP_DYNAMICS_INST(Float53)
REI3BP_DYNAMICS_INST(Float113)
REI3BP_DYNAMICS_INST(Float256)

}  // namespace rei3bp
