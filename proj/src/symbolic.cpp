#include "rei3bp/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rei3bp/integrator.hpp"
#include "rei3bp/numeric.hpp"
#include "rei3bp/parallel.hpp"
#include "rei3bp/time_law.hpp"

namespace rei3bp {

const char* direction_name(Direction d) { return d == Direction::Past ? "past" : "future"; }

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Return: return "return";
    case StepKind::Escape: return "escape";
    case StepKind::Horizon: return "horizon";
  }
  return "?";
}

const char* end_flag_name(EndFlag f) {
  switch (f) {
    case EndFlag::Finite: return "FINITE";
    case EndFlag::Escaped: return "ESCAPED";
    case EndFlag::Horizon: return "HORIZON";
  }
  return "?";
}

const char* motion_name(Motion m) {
  switch (m) {
    case Motion::Hyperbolic: return "H-candidate";
    case Motion::Parabolic: return "P-candidate";
    case Motion::Bounded: return "B-candidate";
    case Motion::Oscillatory: return "OS-candidate";
    case Motion::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

std::vector<long> SymbolMap::distinct_symbols() const {
  std::set<long> s;
  for (long a : a1)
    if (a >= 0) s.insert(a);
  return {s.begin(), s.end()};
}

template <class T>
SigmaPlusPoint<T> sigma_plus_point(const T& r0, const T& xi0, const T& G, bool perturbed) {
  SigmaPlusPoint<T> p{r0, xi0, false};
  if (!(r0 > 0)) return p;
  T F = perturbed ? radial_force<T>(r0, rho<T>(xi0), G) : T(1 / (r0 * r0 * r0) - 1 / (r0 * r0));
  p.valid = F > 0;
  return p;
}

namespace {

// Flow from an arbitrary state to the next Sigma+ crossing in the direction dir.
template <class T>
StepResult<T> step_from_state(const PhaseState<T>& z0, const ModelParams& params, Direction dir,
                              const SymbolicConfig& cfg) {
  T G = T(params.G);
  auto opt = IntegratorOptions<T>::from_params(params);
  opt.perturbed = cfg.perturbed;
  opt.store_samples = true;
  opt.store_dense = false;
  T H = T(cfg.step_horizon > 0 ? cfg.step_horizon : params.horizon);
  T R_esc = T(params.R_esc);
  T h_par = T(params.h_par);
  int sgn = static_cast<int>(dir);
  std::vector<EventSpec<T>> events(2);
  events[0].g = [](const PhaseState<T>& z, const T&) { return z.y; };
  events[0].direction = 1;
  events[0].terminal = true;
  events[1].g = [R_esc, h_par](const PhaseState<T>& z, const T&) {
    T a = z.r - R_esc;
    T b = unperturbed_energy<T>(z.r, z.y) - h_par;
    return a < b ? a : b;
  };
  events[1].direction = sgn;
  events[1].terminal = true;
  auto traj = integrate<T>(z0, T(0), T(sgn) * H, opt, events);
  StepResult<T> out;
  const auto& fin = traj.final;
  out.delta_s = fin.s;
  out.delta_xi = ipow(G, 3) * fin.s;
  out.r = fin.state.r;
  out.y = fin.state.y;
  out.h = unperturbed_energy<T>(fin.state.r, fin.state.y);
  out.collisions = traj.stats.collisions;
  out.max_r = z0.r;
  out.min_r = z0.r;
  for (const auto& s : traj.samples) {
    if (s.state.r > out.max_r) out.max_r = s.state.r;
    if (s.state.r < out.min_r) out.min_r = s.state.r;
  }
  out.point = SigmaPlusPoint<T>{fin.state.r, fin.state.xi, false};
  if (traj.terminated && !traj.crossings.empty()) {
    const auto& c = traj.crossings.back();
    if (c.event == 0) {
      out.kind = StepKind::Return;
      out.point = sigma_plus_point<T>(c.state.r, c.state.xi, G, cfg.perturbed);
      out.r = c.state.r;
      out.y = T(0);
      return out;
    }
    out.kind = StepKind::Escape;
    return out;
  }
  bool receding = sgn > 0 ? fin.state.y > 0 : fin.state.y < 0;
  out.kind = (fin.state.r > R_esc && receding) ? StepKind::Escape : StepKind::Horizon;
  return out;
}

}  // namespace

template <class T>
StepResult<T> poincare_step(const SigmaPlusPoint<T>& p, const ModelParams& params, Direction dir,
                            const SymbolicConfig& cfg) {
  if (!p.valid) throw Error(ErrorCode::InvalidArgument, "poincare_step: point is not on Sigma+");
  return step_from_state<T>(PhaseState<T>{p.r0, T(0), p.xi0}, params, dir, cfg);
}

template <class T>
long return_symbol(const StepResult<T>& s) {
  using std::abs;
  using std::floor;
  if (s.kind != StepKind::Return) throw Error(ErrorCode::InvalidArgument, "return_symbol: step did not return");
  return static_cast<long>(to_double(floor(abs(s.delta_xi) / two_pi<T>())));
}

template <class T>
SymbolSequence symbol_sequence(const SigmaPlusPoint<T>& p, int n_forward, int n_backward, const ModelParams& params,
                               const SymbolicConfig& cfg) {
  if (n_forward < 0 || n_backward < 0) throw Error(ErrorCode::InvalidArgument, "symbol_sequence: negative count");
  SymbolSequence seq;
  auto run = [&](Direction dir, int n, std::vector<long>& out, EndFlag& flag) {
    SigmaPlusPoint<T> q = p;
    flag = EndFlag::Finite;
    for (int i = 0; i < n; ++i) {
      auto st = poincare_step<T>(q, params, dir, cfg);
      if (st.kind == StepKind::Escape) {
        flag = EndFlag::Escaped;
        return;
      }
      if (st.kind == StepKind::Horizon) {
        flag = EndFlag::Horizon;
        return;
      }
      out.push_back(return_symbol(st));
      q = st.point;
    }
  };
  run(Direction::Future, n_forward, seq.future, seq.future_end);
  run(Direction::Past, n_backward, seq.past, seq.past_end);
  return seq;
}

namespace {

template <class T>
MotionLabel classify_from(const PhaseState<T>& z0, Direction dir, const ModelParams& params,
                          const SymbolicConfig& cfg) {
  using std::abs;
  MotionLabel lab;
  lab.direction = dir;
  lab.horizon = params.horizon;
  lab.max_r = to_double(z0.r);
  lab.min_r = to_double(z0.r);
  lab.final_r = to_double(z0.r);
  double h_par = params.h_par;
  double remaining = params.horizon;
  PhaseState<T> z = z0;
  SymbolicConfig c = cfg;
  while (true) {
    c.step_horizon = remaining;
    auto st = step_from_state<T>(z, params, dir, c);
    double ds = std::abs(to_double(st.delta_s));
    lab.s_used += ds;
    remaining -= ds;
    lab.max_r = std::max(lab.max_r, to_double(st.max_r));
    lab.min_r = std::min(lab.min_r, to_double(st.min_r));
    lab.final_r = to_double(st.r);
    lab.final_h = to_double(st.h);
    if (st.kind == StepKind::Return) {
      ++lab.returns;
      const auto& q = st.point;
      z = PhaseState<T>{q.r0, T(0), q.xi0};
      if (lab.returns >= cfg.M && lab.max_r <= cfg.R_bound) {
        lab.motion = Motion::Bounded;
        lab.reason = "returns stayed inside R_bound";
        return lab;
      }
      if (remaining > 0 && q.valid) continue;
    }
    if (st.kind == StepKind::Escape) {
      if (lab.final_h >= h_par) {
        lab.motion = Motion::Hyperbolic;
        lab.reason = "escaped with h >= h_par";
      } else if (std::abs(lab.final_h) < h_par) {
        lab.motion = Motion::Parabolic;
        lab.reason = "escaped with |h| < h_par";
      } else {
        lab.motion = Motion::Unresolved;
        lab.reason = "receding beyond R_esc with h <= -h_par";
      }
      return lab;
    }
    if (lab.returns >= 2 && lab.max_r > cfg.R_osc) {
      lab.motion = Motion::Oscillatory;
      lab.reason = "returns continue with excursions beyond R_osc";
    } else {
      lab.motion = Motion::Unresolved;
      lab.reason = "horizon reached";
    }
    return lab;
  }
}

}  // namespace

template <class T>
MotionLabel classify_final_motion(const SigmaPlusPoint<T>& p, Direction dir, const ModelParams& params,
                                  const SymbolicConfig& cfg) {
  if (!p.valid) throw Error(ErrorCode::InvalidArgument, "classify_final_motion: point is not on Sigma+");
  return classify_from<T>(PhaseState<T>{p.r0, T(0), p.xi0}, dir, params, cfg);
}

template <class T>
MotionLabel classify_state(const PhaseState<T>& z, Direction dir, const ModelParams& params,
                           const SymbolicConfig& cfg) {
  if (!(z.r > 0)) throw Error(ErrorCode::InvalidArgument, "classify_state: r must be positive");
  auto lab = classify_from<T>(z, dir, params, cfg);
  bool on_section = z.y == 0 && sigma_plus_point<T>(z.r, z.xi, T(params.G), cfg.perturbed).valid;
  if (!on_section) lab.reason = "started off Sigma+; " + lab.reason;
  return lab;
}

template <class T>
SigmaPlusPoint<T> homoclinic_sigma_point(const T& v_star, const ModelParams& params, const ManifoldConfig& mcfg,
                                         int root_index) {
  T G = T(params.G);
  HomoclinicSearch hs;
  try {
    hs = find_homoclinics<T>(G, v_star, params, mcfg);
  } catch (const Error& e) {
    throw Error(ErrorCode::NoHomoclinic, std::string("homoclinic_sigma_point: ") + e.what());
  }
  if (root_index < 0 || root_index >= static_cast<int>(hs.roots.size()))
    throw Error(ErrorCode::NoHomoclinic, "homoclinic_sigma_point: root index out of range");
  T xi0 = T(hs.roots[root_index].xi0);
  auto hp = homoclinic_from_v<T>(v_star, T(64) * machine_epsilon<T>());
  auto sp = section_point_at_radius<T>(G, xi0, hp.r_h, v_star, Side::Unstable, params, mcfg);
  auto opt = IntegratorOptions<T>::from_params(params);
  opt.store_samples = false;
  opt.store_dense = false;
  std::vector<EventSpec<T>> ev(1);
  ev[0].g = [](const PhaseState<T>& z, const T&) { return z.y; };
  ev[0].direction = 1;
  ev[0].terminal = true;
  auto traj = integrate<T>(PhaseState<T>{sp.r, sp.y, xi0}, T(0), T(-4) * v_star - T(4), opt, ev);
  if (!traj.terminated || traj.crossings.empty())
    throw Error(ErrorCode::NoHomoclinic, "homoclinic_sigma_point: no pericentre passage before the section");
  const auto& c = traj.crossings.back();
  return sigma_plus_point<T>(c.state.r, wrap_two_pi(c.state.xi), G, true);
}

template <class T>
SymbolMap horseshoe_scan(const SigmaPlusPoint<T>& center, double half_r, double half_xi, int nr, int nxi,
                         const ModelParams& params, const SymbolicConfig& cfg) {
  if (nr < 1 || nxi < 1) throw Error(ErrorCode::InvalidArgument, "horseshoe_scan: empty grid");
  if (!(half_r >= 0 && half_xi >= 0)) throw Error(ErrorCode::InvalidArgument, "horseshoe_scan: negative box");
  SymbolMap m;
  m.G = params.G;
  m.r_center = to_double(center.r0);
  m.xi_center = to_double(center.xi0);
  m.half_r = half_r;
  m.half_xi = half_xi;
  m.nr = nr;
  m.nxi = nxi;
  auto axis = [](double c, double hw, int n, int i) { return n == 1 ? c : c - hw + 2 * hw * i / (n - 1); };
  for (int i = 0; i < nr; ++i) m.r.push_back(axis(m.r_center, half_r, nr, i));
  for (int j = 0; j < nxi; ++j) m.xi.push_back(axis(m.xi_center, half_xi, nxi, j));
  m.a1.assign(static_cast<size_t>(nr) * nxi, kSymbolInvalid);
  T G = T(params.G);
  SymbolicConfig inner = cfg;
  inner.jobs = 1;
  parallel_for(nr * nxi, cfg.jobs, [&](int idx) {
    int i = idx / nxi, j = idx % nxi;
    T r0 = center.r0 + (T(m.r[i]) - T(m.r_center));
    T x0 = center.xi0 + (T(m.xi[j]) - T(m.xi_center));
    auto p = sigma_plus_point<T>(r0, x0, G, cfg.perturbed);
    if (!p.valid) return;
    try {
      auto st = poincare_step<T>(p, params, Direction::Future, inner);
      if (st.kind == StepKind::Return)
        m.a1[idx] = return_symbol(st);
      else
        m.a1[idx] = st.kind == StepKind::Escape ? kSymbolEscape : kSymbolHorizon;
    } catch (const Error&) {
      m.a1[idx] = kSymbolFailure;
    }
  });
  return m;
}

#define REI3BP_SYMBOLIC_INST(T)                                                                               \
  template SigmaPlusPoint<T> sigma_plus_point<T>(const T&, const T&, const T&, bool);                         \
  template StepResult<T> poincare_step<T>(const SigmaPlusPoint<T>&, const ModelParams&, Direction,            \
                                          const SymbolicConfig&);                                             \
  template long return_symbol<T>(const StepResult<T>&);                                                       \
  template SymbolSequence symbol_sequence<T>(const SigmaPlusPoint<T>&, int, int, const ModelParams&,          \
                                             const SymbolicConfig&);                                          \
  template MotionLabel classify_state<T>(const PhaseState<T>&, Direction, const ModelParams&,            \
                                         const SymbolicConfig&);                                           \
  template MotionLabel classify_final_motion<T>(const SigmaPlusPoint<T>&, Direction, const ModelParams&,      \
                                                const SymbolicConfig&);                                       \
  template SigmaPlusPoint<T> homoclinic_sigma_point<T>(const T&, const ModelParams&, const ManifoldConfig&, int); \
  template SymbolMap horseshoe_scan<T>(const SigmaPlusPoint<T>&, double, double, int, int, const ModelParams&, \
                                       const SymbolicConfig&);

REI3BP_SYMBOLIC_INST(Float53)
REI3BP_SYMBOLIC_INST(Float113)
REI3BP_SYMBOLIC_INST(Float256)

}  // namespace rei3bp
