#pragma once

// Stable and unstable manifolds of the parabolic orbit at infinity, their
// traces on the stroboscopic section xi = xi0, the splitting distance and
// homoclinic root finding.
//
// A section point with label v is the state at xi = xi0 (mod 2 pi) of the
// manifold orbit that, to leading order, follows the homoclinic r_h(v + s).
// The unstable orbit is seeded at homoclinic time -v_far, the stable one at
// +v_far; seeds are energy corrected (see manifold_seed).

#include <string>
#include <vector>

#include "rei3bp/dynamics.hpp"
#include "rei3bp/integrator.hpp"
#include "rei3bp/melnikov.hpp"

namespace rei3bp {

enum class Side : int { Stable = 0, Unstable = 1 };

const char* side_name(Side s);

struct ManifoldConfig {
  double v_far = 50.0;
  int seed_order = 6;      // integration-by-parts terms in the seed energy
  double seed_C = 0.25;    // calibrated by calibrate_seed_constant at G = 1.5
  double seed_tol = 1e-12;
  double interp_tol = 1e-8;
  int initial_samples = 17;
  int max_samples = 4000;
  int scan_points = 32;
  double root_tol = 1e-10;
  double fd_step = 1e-3;
  double melnikov_tol = 1e-13;
  int jobs = 1;
};

template <class T>
struct SeedResult {
  PhaseState<T> state;
  T error_estimate;  // bound on the y error of the seed
  T v_far;
  int order;
};

template <class T>
struct SectionPoint {
  T v;   // label used for the integration
  T r;
  T y;
  T xi;  // unwrapped phase at the section
};

struct SeedMeta {
  double v_far = 0;
  int order = 0;
  double seed_error = 0;
};

template <class T>
struct SectionCurve {
  T xi0;
  Side side;
  std::vector<T> r;
  std::vector<T> y;
  std::vector<T> labels;  // integration labels
  std::vector<T> v_tags;  // homoclinic times from r-inversion
  SeedMeta seed_meta;

  /// Monotone cubic interpolation of y at radius rr.
  T interpolate(const T& rr) const;
};

struct SplittingRecord {
  double G = 0;
  double xi0 = 0;
  double v_star = 0;
  double d_measured = 0;
  double d_melnikov = 0;
  double d_formula = 0;
  double noise_floor = 0;
  int precision_bits = 53;
  bool valid = false;
  double Yu = 0;
  double Ys = 0;
};

struct HomoclinicRoot {
  double xi0 = 0;
  double slope = 0;
  double offset = 0;  // distance to the nearest zero of sin(xi0 - G^3 v*)
};

struct HomoclinicSearch {
  std::vector<HomoclinicRoot> roots;
  std::vector<double> xi_samples;
  std::vector<double> d_samples;
  double d_peak = 0;  // amplitude of the first xi0-harmonic of d
  double noise_floor = 0;
};

/// Energy-corrected seed on the chosen branch at homoclinic time -v_far
/// (unstable) or +v_far (stable) with phase xi_at_seed.
template <class T>
SeedResult<T> manifold_seed(const T& G, Side side, const T& v_far, const T& xi_at_seed, const T& tol,
                            const ManifoldConfig& cfg = {});

/// Integrates one manifold orbit to the section.
template <class T>
SectionPoint<T> section_point(const T& G, const T& xi0, const T& v, Side side, const ModelParams& params,
                              const ManifoldConfig& cfg = {});

/// Section point whose radius equals r_target (label refined by secant).
template <class T>
SectionPoint<T> section_point_at_radius(const T& G, const T& xi0, const T& r_target, const T& v_guess, Side side,
                                        const ModelParams& params, const ManifoldConfig& cfg = {});

template <class T>
SectionCurve<T> trace_section_curve(const T& G, const T& xi0, const T& v_lo, const T& v_hi, Side side,
                                    const ModelParams& params, const ManifoldConfig& cfg = {});

/// d = Y^u - Y^s at r = r_h(v*) without noise estimation.
template <class T>
T splitting_value(const T& G, const T& xi0, const T& v_star, const ModelParams& params, const ManifoldConfig& cfg,
                  T* Yu = nullptr, T* Ys = nullptr);

template <class T>
SplittingRecord splitting_distance(const T& G, const T& xi0, const T& v_star, const ModelParams& params,
                                   const ManifoldConfig& cfg = {}, const MelnikovSeries<T>* series = nullptr);

template <class T>
HomoclinicSearch find_homoclinics(const T& G, const T& v_star, const ModelParams& params,
                                  const ManifoldConfig& cfg = {});

/// Ratio of the observed change of d under v_far doubling to the seed error
/// estimate; used to calibrate ManifoldConfig::seed_C.
template <class T>
double calibrate_seed_constant(const T& G, const T& xi0, const T& v_star, const ModelParams& params,
                               const ManifoldConfig& cfg = {});

#define REI3BP_MANIFOLDS_EXTERN(T)                                                                         \
  extern template struct SectionCurve<T>;                                                                  \
  extern template SeedResult<T> manifold_seed<T>(const T&, Side, const T&, const T&, const T&,             \
                                                 const ManifoldConfig&);                                   \
  extern template SectionPoint<T> section_point<T>(const T&, const T&, const T&, Side, const ModelParams&, \
                                                   const ManifoldConfig&);                                 \
  extern template SectionPoint<T> section_point_at_radius<T>(const T&, const T&, const T&, const T&, Side, \
                                                             const ModelParams&, const ManifoldConfig&);   \
  extern template SectionCurve<T> trace_section_curve<T>(const T&, const T&, const T&, const T&, Side,     \
                                                         const ModelParams&, const ManifoldConfig&);       \
  extern template T splitting_value<T>(const T&, const T&, const T&, const ModelParams&,                   \
                                       const ManifoldConfig&, T*, T*);                                     \
  extern template SplittingRecord splitting_distance<T>(const T&, const T&, const T&, const ModelParams&,  \
                                                        const ManifoldConfig&, const MelnikovSeries<T>*);  \
  extern template HomoclinicSearch find_homoclinics<T>(const T&, const T&, const ModelParams&,             \
                                                       const ManifoldConfig&);                             \
  extern template double calibrate_seed_constant<T>(const T&, const T&, const T&, const ModelParams&,      \
                                                    const ManifoldConfig&);

REI3BP_MANIFOLDS_EXTERN(Float53)
REI3BP_MANIFOLDS_EXTERN(Float113)
REI3BP_MANIFOLDS_EXTERN(Float256)
#undef REI3BP_MANIFOLDS_EXTERN

}  // namespace rei3bp
