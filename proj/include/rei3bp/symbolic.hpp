#pragma once

// Return map to the pericentre section Sigma+ = {y = 0, dy/ds > 0}, symbol
// sequences a_n = floor((xi_n - xi_{n-1}) / 2 pi), finite-horizon final
// motion labels and first-return symbol scans.

#include <string>
#include <vector>

#include "rei3bp/dynamics.hpp"
#include "rei3bp/manifolds.hpp"

namespace rei3bp {

enum class Direction : int { Past = -1, Future = 1 };
enum class StepKind : int { Return = 0, Escape = 1, Horizon = 2 };
enum class EndFlag : int { Finite = 0, Escaped = 1, Horizon = 2 };
enum class Motion : int { Hyperbolic = 0, Parabolic = 1, Bounded = 2, Oscillatory = 3, Unresolved = 4 };

const char* direction_name(Direction d);
const char* step_kind_name(StepKind k);
const char* end_flag_name(EndFlag f);
const char* motion_name(Motion m);

struct SymbolicConfig {
  double R_bound = 20.0;
  double R_osc = 40.0;
  int M = 10;
  bool perturbed = true;
  double step_horizon = 0;  // 0: use ModelParams::horizon
  int jobs = 1;
};

template <class T>
struct SigmaPlusPoint {
  T r0;
  T xi0;
  bool valid = false;
};

/// Builds a point on Sigma+; valid is set when dy/ds > 0 at (r0, 0, xi0).
template <class T>
SigmaPlusPoint<T> sigma_plus_point(const T& r0, const T& xi0, const T& G, bool perturbed = true);

template <class T>
struct StepResult {
  StepKind kind = StepKind::Horizon;
  SigmaPlusPoint<T> point;  // next point for Return, otherwise the final state's (r, xi)
  T delta_s;                // signed flow time
  T delta_xi;               // G^3 delta_s
  T h;                      // unperturbed energy at the end
  T r;
  T y;
  T max_r;
  T min_r;
  long collisions = 0;
};

template <class T>
StepResult<T> poincare_step(const SigmaPlusPoint<T>& p, const ModelParams& params, Direction dir,
                            const SymbolicConfig& cfg = {});

/// Symbol of one return: floor(|delta_xi| / 2 pi).
template <class T>
long return_symbol(const StepResult<T>& s);

struct SymbolSequence {
  std::vector<long> past;    // a_0, a_{-1}, ... (nearest first)
  std::vector<long> future;  // a_1, a_2, ...
  EndFlag past_end = EndFlag::Finite;
  EndFlag future_end = EndFlag::Finite;
};

template <class T>
SymbolSequence symbol_sequence(const SigmaPlusPoint<T>& p, int n_forward, int n_backward, const ModelParams& params,
                               const SymbolicConfig& cfg = {});

struct MotionLabel {
  Motion motion = Motion::Unresolved;
  Direction direction = Direction::Future;
  double final_r = 0;
  double final_h = 0;
  double max_r = 0;
  double min_r = 0;
  long returns = 0;
  double s_used = 0;
  double horizon = 0;
  std::string reason;
};

template <class T>
MotionLabel classify_final_motion(const SigmaPlusPoint<T>& p, Direction dir, const ModelParams& params,
                                  const SymbolicConfig& cfg = {});

/// Same labels for an arbitrary state; states off Sigma+ are first flowed to
/// the next crossing and the reason records it.
template <class T>
MotionLabel classify_state(const PhaseState<T>& z, Direction dir, const ModelParams& params,
                           const SymbolicConfig& cfg = {});

/// Sigma+ point of the transverse homoclinic orbit through the root_index-th
/// zero of the splitting distance, obtained by integrating the section point
/// backward to the pericentre.
template <class T>
SigmaPlusPoint<T> homoclinic_sigma_point(const T& v_star, const ModelParams& params, const ManifoldConfig& mcfg = {},
                                         int root_index = 0);

/// Codes stored in SymbolMap::a1 besides the symbol itself.
constexpr long kSymbolEscape = -1;
constexpr long kSymbolHorizon = -2;
constexpr long kSymbolInvalid = -3;
constexpr long kSymbolFailure = -4;

struct SymbolMap {
  double G = 0;
  double r_center = 0;
  double xi_center = 0;
  double half_r = 0;
  double half_xi = 0;
  int nr = 0;
  int nxi = 0;
  std::vector<double> r;
  std::vector<double> xi;
  std::vector<long> a1;  // a1[i * nxi + j] for (r[i], xi[j])

  long at(int i, int j) const { return a1[static_cast<size_t>(i) * nxi + j]; }
  /// Distinct non-negative symbols.
  std::vector<long> distinct_symbols() const;
};

template <class T>
SymbolMap horseshoe_scan(const SigmaPlusPoint<T>& center, double half_r, double half_xi, int nr, int nxi,
                         const ModelParams& params, const SymbolicConfig& cfg = {});

#define REI3BP_SYMBOLIC_EXTERN(T)                                                                            \
  extern template SigmaPlusPoint<T> sigma_plus_point<T>(const T&, const T&, const T&, bool);                 \
  extern template StepResult<T> poincare_step<T>(const SigmaPlusPoint<T>&, const ModelParams&, Direction,    \
                                                 const SymbolicConfig&);                                     \
  extern template long return_symbol<T>(const StepResult<T>&);                                               \
  extern template SymbolSequence symbol_sequence<T>(const SigmaPlusPoint<T>&, int, int, const ModelParams&,  \
                                                    const SymbolicConfig&);                                  \
  extern template MotionLabel classify_final_motion<T>(const SigmaPlusPoint<T>&, Direction,                  \
                                                       const ModelParams&, const SymbolicConfig&);           \
  extern template MotionLabel classify_state<T>(const PhaseState<T>&, Direction, const ModelParams&,        \
                                                const SymbolicConfig&);                                      \
  extern template SigmaPlusPoint<T> homoclinic_sigma_point<T>(const T&, const ModelParams&,                  \
                                                              const ManifoldConfig&, int);                   \
  extern template SymbolMap horseshoe_scan<T>(const SigmaPlusPoint<T>&, double, double, int, int,            \
                                              const ModelParams&, const SymbolicConfig&);

REI3BP_SYMBOLIC_EXTERN(Float53)
REI3BP_SYMBOLIC_EXTERN(Float113)
REI3BP_SYMBOLIC_EXTERN(Float256)
#undef REI3BP_SYMBOLIC_EXTERN

}  // namespace rei3bp
