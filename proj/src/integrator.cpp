#include "rei3bp/integrator.hpp"

#include <array>
#include <limits>

#include "rei3bp/numeric.hpp"
#include "rei3bp/time_law.hpp"

namespace rei3bp {

template <class T>
IntegratorOptions<T> IntegratorOptions<T>::from_params(const ModelParams& p) {
  IntegratorOptions<T> o;
  o.G = T(p.G);
  o.tol = T(p.tol_ode);
  o.r_min = T(p.r_min);
  o.horizon = T(p.horizon);
  return o;
}

namespace detail {

template <class T>
using Vec = std::array<T, 3>;

// Fehlberg 7(8) tableau; the 8th-order weights are propagated.
template <class T>
struct Tableau {
  T c[13];
  T a[13][12];
  T b[13];
  T e;  // error = e h (k1 + k11 - k12 - k13)

  Tableau() {
    for (auto& row : a)
      for (auto& x : row) x = 0;
    auto q = [](int n, int d) { return T(n) / T(d); };
    c[0] = 0; c[1] = q(2, 27); c[2] = q(1, 9); c[3] = q(1, 6); c[4] = q(5, 12);
    c[5] = q(1, 2); c[6] = q(5, 6); c[7] = q(1, 6); c[8] = q(2, 3); c[9] = q(1, 3);
    c[10] = 1; c[11] = 0; c[12] = 1;
    a[1][0] = q(2, 27);
    a[2][0] = q(1, 36); a[2][1] = q(1, 12);
    a[3][0] = q(1, 24); a[3][2] = q(1, 8);
    a[4][0] = q(5, 12); a[4][2] = q(-25, 16); a[4][3] = q(25, 16);
    a[5][0] = q(1, 20); a[5][3] = q(1, 4); a[5][4] = q(1, 5);
    a[6][0] = q(-25, 108); a[6][3] = q(125, 108); a[6][4] = q(-65, 27); a[6][5] = q(125, 54);
    a[7][0] = q(31, 300); a[7][4] = q(61, 225); a[7][5] = q(-2, 9); a[7][6] = q(13, 900);
    a[8][0] = 2; a[8][3] = q(-53, 6); a[8][4] = q(704, 45); a[8][5] = q(-107, 9);
    a[8][6] = q(67, 90); a[8][7] = 3;
    a[9][0] = q(-91, 108); a[9][3] = q(23, 108); a[9][4] = q(-976, 135); a[9][5] = q(311, 54);
    a[9][6] = q(-19, 60); a[9][7] = q(17, 6); a[9][8] = q(-1, 12);
    a[10][0] = q(2383, 4100); a[10][3] = q(-341, 164); a[10][4] = q(4496, 1025);
    a[10][5] = q(-301, 82); a[10][6] = q(2133, 4100); a[10][7] = q(45, 82);
    a[10][8] = q(45, 164); a[10][9] = q(18, 41);
    a[11][0] = q(3, 205); a[11][5] = q(-6, 41); a[11][6] = q(-3, 205); a[11][7] = q(-3, 41);
    a[11][8] = q(3, 41); a[11][9] = q(6, 41);
    a[12][0] = q(-1777, 4100); a[12][3] = q(-341, 164); a[12][4] = q(4496, 1025);
    a[12][5] = q(-289, 82); a[12][6] = q(2193, 4100); a[12][7] = q(51, 82);
    a[12][8] = q(33, 164); a[12][9] = q(12, 41); a[12][11] = 1;
    for (auto& x : b) x = 0;
    b[5] = q(34, 105); b[6] = q(9, 35); b[7] = q(9, 35); b[8] = q(9, 280); b[9] = q(9, 280);
    b[11] = q(41, 840); b[12] = q(41, 840);
    e = q(41, 840);
  }
};

template <class T>
const Tableau<T>& tableau() {
  static const Tableau<T> tab;
  return tab;
}

template <class T>
struct Model {
  Kernel kind = Kernel::Time;
  bool perturbed = true;
  T G, G3, c4;
  T s0, xi0;  // flow time s0 corresponds to phase xi0
  T Eoff = 0;
  mutable long evals = 0;

  T xi_of_x(const T& x) const {
    if (kind == Kernel::Time) return xi0 + G3 * (x - s0);
    T tp = two_pi<T>();
    T j = round(x / tp);
    return tp * j + e_minus_sin(x - tp * j) + Eoff;
  }

  T s_of_x(const T& x) const {
    if (kind == Kernel::Time) return x;
    return s0 + (xi_of_x(x) - xi0) / G3;
  }

  T x_of_s(const T& s) const {
    if (kind == Kernel::Time) return s;
    T xi = xi0 + G3 * (s - s0);
    return eccentric_anomaly<T>(xi - Eoff);
  }

  void rhs(const T& x, const Vec<T>& z, Vec<T>& dz) const {
    ++evals;
    const T& r = z[0];
    if (!(r > 0)) throw Error(ErrorCode::RadiusUnderflow, "integrate: radius became non-positive");
    if (kind == Kernel::Time) {
      dz[0] = z[1];
      if (!perturbed) {
        dz[1] = radial_force(r, T(0), G);
        dz[2] = 0;
        return;
      }
      T xi = xi_of_x(x);
      T tp = two_pi<T>();
      T E = eccentric_anomaly<T>(xi - tp * round(xi / tp));
      T rv = rho_of_E(E);
      dz[1] = radial_force(r, rv, G);
      T S = r * r + rv * rv / c4;
      dz[2] = G3 * sin(E) / (c4 * S * sqrt(S));
      return;
    }
    T rv = rho_of_E(x);
    T f = rv / G3;
    dz[0] = z[1] * f;
    dz[1] = radial_force(r, rv, G) * f;
    dz[2] = potential_drho(r, rv, G) * sin(x);
  }

  // Next collision boundary strictly beyond x in direction dir.
  T next_boundary(const T& x, int dir) const {
    const T inf = std::numeric_limits<T>::infinity();
    T tp = two_pi<T>();
    if (kind == Kernel::Anomaly) {
      T u = x / tp;
      T n = dir > 0 ? floor(u) + 1 : ceil(u) - 1;
      T cand = n * tp;
      if (dir > 0 && cand - x <= 16 * machine_epsilon<T>() * (1 + abs(x))) cand += tp;
      if (dir < 0 && x - cand <= 16 * machine_epsilon<T>() * (1 + abs(x))) cand -= tp;
      return cand;
    }
    if (!perturbed) return dir > 0 ? inf : -inf;
    T xi = xi_of_x(x);
    T u = xi / tp;
    T n = dir > 0 ? floor(u) + 1 : ceil(u) - 1;
    T cand = s0 + (n * tp - xi0) / G3;
    T guard = 16 * machine_epsilon<T>() * (1 + abs(x));
    if (dir > 0 && cand - x <= guard) cand += tp / G3;
    if (dir < 0 && x - cand <= guard) cand -= tp / G3;
    return cand;
  }

  // One RKF78 step; returns the 8th-order solution and the error vector.
  void step(const T& x, const Vec<T>& z, const T& h, Vec<T>& out, Vec<T>* err) const {
    const auto& tb = tableau<T>();
    Vec<T> k[13];
    Vec<T> tmp;
    for (int i = 0; i < 13; ++i) {
      for (int d = 0; d < 3; ++d) {
        T acc = 0;
        for (int j = 0; j < i; ++j)
          if (tb.a[i][j] != 0) acc += tb.a[i][j] * k[j][d];
        tmp[d] = z[d] + h * acc;
      }
      rhs(x + tb.c[i] * h, tmp, k[i]);
    }
    for (int d = 0; d < 3; ++d) {
      T acc = 0;
      for (int i = 0; i < 13; ++i)
        if (tb.b[i] != 0) acc += tb.b[i] * k[i][d];
      out[d] = z[d] + h * acc;
      if (err) (*err)[d] = tb.e * h * (k[0][d] + k[10][d] - k[11][d] - k[12][d]);
    }
  }
};

template <class T>
struct StepRecord {
  T x0;
  T h;
  T sa;
  T sb;
  Vec<T> z0;
};

template <class T>
struct DenseData {
  Model<T> model;
  std::vector<StepRecord<T>> steps;
  int sdir = 1;
};

}  // namespace detail

template <class T>
Sample<T> Trajectory<T>::evaluate(const T& s) const {
  if (!dense_) throw Error(ErrorCode::InvalidArgument, "evaluate: trajectory was integrated without dense output");
  const auto& dd = *dense_;
  if (dd.steps.empty()) return final;
  const auto& st = dd.steps;
  auto inside = [&](const detail::StepRecord<T>& r) {
    T lo = r.sa < r.sb ? r.sa : r.sb;
    T hi = r.sa < r.sb ? r.sb : r.sa;
    return s >= lo && s <= hi;
  };
  size_t lo = 0, hi = st.size();
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    bool before = dd.sdir > 0 ? s < st[mid].sa : s > st[mid].sa;
    if (before) hi = mid;
    else lo = mid;
  }
  const auto& rec = st[lo];
  if (!inside(rec)) {
    T a = dd.sdir > 0 ? st.front().sa : st.back().sb;
    T b = dd.sdir > 0 ? st.back().sb : st.front().sa;
    if (s < (a < b ? a : b) || s > (a < b ? b : a))
      throw Error(ErrorCode::Domain, "evaluate: s outside the integrated span");
  }
  T x = dd.model.x_of_s(s);
  T hsub = x - rec.x0;
  detail::Vec<T> z = rec.z0;
  if (hsub != 0) dd.model.step(rec.x0, rec.z0, hsub, z, nullptr);
  Sample<T> out;
  out.s = s;
  out.state = PhaseState<T>{z[0], z[1], dd.model.xi_of_x(x)};
  out.work = z[2];
  return out;
}

template <class T>
Trajectory<T> integrate(const PhaseState<T>& initial, const T& s0, const T& s1,
                        const IntegratorOptions<T>& opt, const std::vector<EventSpec<T>>& events) {
  using detail::Vec;
  if (!(initial.r > 0)) throw Error(ErrorCode::Domain, "integrate: initial radius must be positive");
  if (initial.r <= opt.r_min) throw Error(ErrorCode::RadiusUnderflow, "integrate: initial radius below r_min");
  if (!(opt.tol > 0)) throw Error(ErrorCode::InvalidArgument, "integrate: tol must be positive");
  if (abs(s1 - s0) > opt.horizon) throw Error(ErrorCode::HorizonExceeded, "integrate: span exceeds horizon");

  Trajectory<T> traj;
  traj.s_begin = s0;
  auto dd = std::make_shared<detail::DenseData<T>>();
  auto& m = dd->model;
  m.G = opt.G;
  m.G3 = opt.G * opt.G * opt.G;
  m.c4 = 4 * opt.G * opt.G * opt.G * opt.G;
  m.s0 = s0;
  m.xi0 = initial.xi;
  m.perturbed = opt.perturbed;
  T G4inv = 1 / (opt.G * opt.G * opt.G * opt.G);
  if (m.perturbed && opt.kernel == Kernel::Auto && G4inv < opt.tol * T(1e-2)) {
    m.perturbed = false;
    traj.perturbation_dropped = true;
  }
  if (opt.kernel == Kernel::Anomaly && !m.perturbed)
    throw Error(ErrorCode::InvalidArgument, "integrate: anomaly kernel requires the perturbed field");
  if (opt.kernel == Kernel::Time || !m.perturbed) m.kind = Kernel::Time;
  else m.kind = Kernel::Anomaly;
  if (m.kind == Kernel::Anomaly) {
    T tp = two_pi<T>();
    m.Eoff = tp * round(initial.xi / tp);
  }
  traj.kernel_used = m.kind;

  const int sdir = s1 >= s0 ? 1 : -1;
  dd->sdir = sdir;
  T x = m.kind == Kernel::Time ? s0 : eccentric_anomaly<T>(initial.xi - m.Eoff);
  const T x_end = m.x_of_s(s1);
  Vec<T> z{initial.r, initial.y, T(0)};

  auto make_state = [&](const T& xx, const Vec<T>& zz) {
    return PhaseState<T>{zz[0], zz[1], m.xi_of_x(xx)};
  };
  T s_cur = s0;
  if (opt.store_samples) traj.samples.push_back(Sample<T>{s0, initial, T(0)});

  std::vector<T> gprev(events.size());
  for (size_t i = 0; i < events.size(); ++i) gprev[i] = events[i].g(initial, s0);

  const T eps = machine_epsilon<T>();
  T hn;
  if (m.kind == Kernel::Anomaly) hn = T(0.25);
  else hn = T(0.01) * (initial.r < 1 ? initial.r * sqrt(initial.r) : T(1));
  if (sdir < 0) hn = -hn;
  const T hmax = m.kind == Kernel::Anomaly ? two_pi<T>() : abs(x_end - x) + 1;
  T next_b = m.next_boundary(x, sdir);
  bool done = (x == x_end) || (s0 == s1);
  long steps = 0;
  traj.final = Sample<T>{s0, initial, T(0)};

  while (!done) {
    if (++steps > opt.max_steps) throw Error(ErrorCode::HorizonExceeded, "integrate: step budget exhausted");
    T target = sdir > 0 ? (next_b < x_end ? next_b : x_end) : (next_b > x_end ? next_b : x_end);
    T remaining = target - x;
    T h = hn;
    bool hits_target = false;
    if (abs(h) >= abs(remaining) * T(0.999)) {
      h = remaining;
      hits_target = true;
    }
    if (abs(h) < 1000 * eps * (1 + abs(x)) && !hits_target)
      throw Error(ErrorCode::StepUnderflow, "integrate: step size underflow");
    Vec<T> znew, err;
    try {
      m.step(x, z, h, znew, &err);
    } catch (const Error& e) {
      // a trial stage reached r <= 0; retry with a smaller step
      if (e.code() != ErrorCode::RadiusUnderflow) throw;
      ++traj.stats.rejected;
      hn = h / 4;
      continue;
    }
    T en = 0;
    for (int d = 0; d < 3; ++d) {
      T sc = abs(z[d]);
      if (abs(znew[d]) > sc) sc = abs(znew[d]);
      if (sc < 1) sc = 1;
      T q = abs(err[d]) / (opt.tol * sc);
      if (q > en) en = q;
    }
    T fac = en > 0 ? T(0.9) * pow(en, T(-1) / 8) : T(5);
    if (fac > 5) fac = 5;
    if (!(fac > T(0.2))) fac = T(0.2);
    if (!(en <= 1)) {
      ++traj.stats.rejected;
      hn = h * fac;
      continue;
    }
    ++traj.stats.accepted;
    T x_new = hits_target ? target : x + h;
    if (znew[0] <= opt.r_min) throw Error(ErrorCode::RadiusUnderflow, "integrate: radius below r_min");
    T s_new = (hits_target && target == x_end) ? s1 : m.s_of_x(x_new);
    detail::StepRecord<T> rec{x, x_new - x, s_cur, s_new, z};
    PhaseState<T> st_new = make_state(x_new, znew);

    bool stop = false;
    T stop_theta = 2;
    std::vector<std::pair<T, int>> found;
    std::vector<int> fdirs(events.size(), 0);
    for (size_t i = 0; i < events.size(); ++i) {
      T gb = events[i].g(st_new, s_new);
      T ga = gprev[i];
      gprev[i] = gb;
      bool change = (ga < 0 && gb >= 0) || (ga > 0 && gb <= 0);
      if (!change) continue;
      int fdir = (gb > ga ? 1 : -1) * sdir;
      if (events[i].direction != 0 && events[i].direction != fdir) continue;
      auto gfun = [&](const T& th) {
        T xx = x + th * rec.h;
        Vec<T> zz;
        m.step(x, z, th * rec.h, zz, nullptr);
        return events[i].g(make_state(xx, zz), m.s_of_x(xx));
      };
      T ds = abs(s_new - s_cur);
      T xtol = ds > 0 ? opt.event_tol / ds : T(1e-3);
      if (xtol > T(1e-3)) xtol = T(1e-3);
      T th = brent_root<T>(gfun, T(0), T(1), ga, gb, xtol);
      found.push_back({th, static_cast<int>(i)});
      fdirs[i] = fdir;
      if (events[i].terminal && th < stop_theta) {
        stop = true;
        stop_theta = th;
      }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& f : found) {
      if (stop && f.first > stop_theta) continue;
      T xx = x + f.first * rec.h;
      Vec<T> zz;
      m.step(x, z, f.first * rec.h, zz, nullptr);
      Crossing<T> c;
      c.event = f.second;
      c.s = m.s_of_x(xx);
      c.state = make_state(xx, zz);
      c.work = zz[2];
      c.direction = fdirs[f.second];
      traj.crossings.push_back(c);
    }
    if (stop) {
      const auto& c = traj.crossings.back();
      rec.h = stop_theta * rec.h;
      rec.sb = c.s;
      if (opt.store_dense) dd->steps.push_back(rec);
      traj.final = Sample<T>{c.s, c.state, c.work};
      if (opt.store_samples) traj.samples.push_back(traj.final);
      traj.terminated = true;
      break;
    }
    if (opt.store_dense) dd->steps.push_back(rec);
    if (opt.store_samples) traj.samples.push_back(Sample<T>{s_new, st_new, znew[2]});
    x = x_new;
    z = znew;
    s_cur = s_new;
    if (hits_target && target != x_end) {
      ++traj.stats.collisions;
      next_b = m.next_boundary(x, sdir);
    }
    if (!hits_target) hn = h * fac;
    else if (abs(h) >= abs(hn) * T(0.5) && abs(h * fac) < abs(hn)) hn = h * fac;
    if (abs(hn) > hmax) hn = sdir > 0 ? hmax : -hmax;
    if (hits_target && target == x_end) {
      done = true;
      traj.final = Sample<T>{s1, make_state(x, z), z[2]};
    }
  }
  traj.stats.rhs_evals = m.evals;
  if (opt.store_dense) traj.dense_ = dd;
  return traj;
}

#define REI3BP_INTEGRATOR_INST(T)                                                  \
  template class Trajectory<T>;                                                    \
  template struct IntegratorOptions<T>;                                            \
  template Trajectory<T> integrate<T>(const PhaseState<T>&, const T&, const T&,    \
                                      const IntegratorOptions<T>&,                 \
                                      const std::vector<EventSpec<T>>&);

REI3BP_INTEGRATOR_INST(Float53)
REI3BP_INTEGRATOR_INST(Float113)
REI3BP_INTEGRATOR_INST(Float256)

}  // namespace rei3bp
