#pragma once

// Adaptive Runge-Kutta-Fehlberg 7(8) integration of the rescaled equations of
// motion with dense output and event location.
//
// Two kernels are available. The time kernel advances in flow time s and
// evaluates Kepler's equation inside the right-hand side. The anomaly kernel
// advances in the eccentric anomaly E of the primaries, where the right-hand
// side is analytic through collisions:
//   dr/dE = y rho / G^3,  dy/dE = F(r, rho) rho / G^3,  rho = 1 - cos E.
// Both kernels stop at every collision phase xi = 0 (mod 2 pi).
//
// Besides (r, y) the integrator carries the work w with dw/ds = dU/ds at
// fixed (r, y), so that h + U - w is an exact first integral.

#include <functional>
#include <memory>
#include <vector>

#include "rei3bp/dynamics.hpp"

namespace rei3bp {

enum class Kernel : int { Auto = 0, Time = 1, Anomaly = 2 };

template <class T>
struct IntegratorOptions {
  T G = 2;
  T tol = T(1e-12);
  T r_min = T(1e-3);
  T horizon = T(1e4);
  bool perturbed = true;
  Kernel kernel = Kernel::Auto;
  bool store_samples = true;
  bool store_dense = true;
  T event_tol = default_event_tolerance<T>();
  long max_steps = 50000000;

  static IntegratorOptions from_params(const ModelParams& p);
};

template <class T>
struct Sample {
  T s;
  PhaseState<T> state;
  T work;
};

template <class T>
struct EventSpec {
  std::function<T(const PhaseState<T>&, const T&)> g;
  int direction = 0;  // +1: g increasing in forward s, -1: decreasing, 0: both
  bool terminal = false;
};

template <class T>
struct Crossing {
  int event;
  T s;
  PhaseState<T> state;
  T work;
  int direction;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  long collisions = 0;
};

namespace detail {
template <class T>
struct DenseData;
}

template <class T>
class Trajectory {
 public:
  std::vector<Sample<T>> samples;
  std::vector<Crossing<T>> crossings;
  IntegrationStats stats;
  Sample<T> final;
  bool terminated = false;
  bool perturbation_dropped = false;
  Kernel kernel_used = Kernel::Time;
  T s_begin = 0;

  /// Dense output at flow time s inside the integrated span.
  Sample<T> evaluate(const T& s) const;
  bool has_dense() const { return static_cast<bool>(dense_); }

  std::shared_ptr<const detail::DenseData<T>> dense_;
};

/// Integrates from (initial, s0) to s1 (which may be smaller than s0).
template <class T>
Trajectory<T> integrate(const PhaseState<T>& initial, const T& s0, const T& s1,
                        const IntegratorOptions<T>& options,
                        const std::vector<EventSpec<T>>& events = {});

#define REI3BP_INTEGRATOR_EXTERN(T)                                                        \
  extern template class Trajectory<T>;                                                     \
  extern template struct IntegratorOptions<T>;                                             \
  extern template Trajectory<T> integrate<T>(const PhaseState<T>&, const T&, const T&,     \
                                             const IntegratorOptions<T>&,                  \
                                             const std::vector<EventSpec<T>>&);

REI3BP_INTEGRATOR_EXTERN(Float53)
REI3BP_INTEGRATOR_EXTERN(Float113)
REI3BP_INTEGRATOR_EXTERN(Float256)
#undef REI3BP_INTEGRATOR_EXTERN

}  // namespace rei3bp
