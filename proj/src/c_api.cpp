#include "rei3bp/rei3bp.h"

#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rei3bp/dynamics.hpp"
#include "rei3bp/integrator.hpp"
#include "rei3bp/manifolds.hpp"
#include "rei3bp/melnikov.hpp"
#include "rei3bp/symbolic.hpp"
#include "rei3bp/time_law.hpp"

#ifndef REI3BP_VERSION_STRING
#define REI3BP_VERSION_STRING "0.0.0"
#endif

using namespace rei3bp;

struct rei3bp_context {
  ModelParams params;
  ManifoldConfig mcfg;
  SymbolicConfig scfg;
  std::string error;
  std::vector<std::string> warnings;
};

struct rei3bp_trajectory {
  std::vector<double> s;
  std::vector<double> state;  // r, y, xi per sample
  std::vector<double> work;
  std::function<void(double, double*)> eval;
};

struct rei3bp_series {
  int l_max = 0;
  double L0 = 0;
  double err0 = 0;
  int k0 = 0;
  double total_err = 0;
  std::vector<double> L, err;
  std::vector<int> k_used;
  std::function<void(double, double, double*, double*)> eval;
};

struct rei3bp_curve {
  std::vector<double> r, y, labels, v_tags;
  std::function<double(double)> interp;
};

struct rei3bp_homoclinics {
  HomoclinicSearch search;
};

namespace {

template <class F>
rei3bp_status guard(rei3bp_context* ctx, F&& f) {
  try {
    f();
    if (ctx) ctx->error.clear();
    return REI3BP_OK;
  } catch (const Error& e) {
    if (ctx) ctx->error = e.what();
    return static_cast<rei3bp_status>(e.code());
  } catch (const std::exception& e) {
    if (ctx) ctx->error = e.what();
    return REI3BP_INTERNAL;
  } catch (...) {
    if (ctx) ctx->error = "unknown exception";
    return REI3BP_INTERNAL;
  }
}

template <class F>
decltype(auto) dispatch(const rei3bp_context* ctx, F&& f) {
  return ArithmeticContext(ctx->params.precision_bits).visit(std::forward<F>(f));
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string("null argument: ") + what);
}

Side side_from(int side) {
  if (side != 0 && side != 1) throw Error(ErrorCode::InvalidArgument, "side must be 0 (stable) or 1 (unstable)");
  return static_cast<Side>(side);
}

Direction direction_from(int d) {
  if (d != -1 && d != 1) throw Error(ErrorCode::InvalidArgument, "direction must be -1 or +1");
  return static_cast<Direction>(d);
}

struct ParamRef {
  const char* key;
  double* d = nullptr;
  int* i = nullptr;
  bool* b = nullptr;
};

std::vector<ParamRef> param_table(rei3bp_context* c) {
  return {
      {"G", &c->params.G},
      {"tol_ode", &c->params.tol_ode},
      {"precision_bits", nullptr, &c->params.precision_bits},
      {"R_esc", &c->params.R_esc},
      {"horizon", &c->params.horizon},
      {"h_par", &c->params.h_par},
      {"r_min", &c->params.r_min},
      {"v_far", &c->mcfg.v_far},
      {"seed_order", nullptr, &c->mcfg.seed_order},
      {"seed_C", &c->mcfg.seed_C},
      {"seed_tol", &c->mcfg.seed_tol},
      {"interp_tol", &c->mcfg.interp_tol},
      {"initial_samples", nullptr, &c->mcfg.initial_samples},
      {"max_samples", nullptr, &c->mcfg.max_samples},
      {"scan_points", nullptr, &c->mcfg.scan_points},
      {"root_tol", &c->mcfg.root_tol},
      {"fd_step", &c->mcfg.fd_step},
      {"melnikov_tol", &c->mcfg.melnikov_tol},
      {"jobs", nullptr, &c->mcfg.jobs},
      {"R_bound", &c->scfg.R_bound},
      {"R_osc", &c->scfg.R_osc},
      {"M", nullptr, &c->scfg.M},
      {"perturbed", nullptr, nullptr, &c->scfg.perturbed},
      {"step_horizon", &c->scfg.step_horizon},
  };
}

void check_configs(const rei3bp_context* c) {
  c->params.validate();
  const auto& m = c->mcfg;
  if (!(m.v_far > 1)) throw Error(ErrorCode::InvalidArgument, "v_far must exceed 1");
  if (m.seed_order < 1 || m.seed_order > 40) throw Error(ErrorCode::InvalidArgument, "seed_order must be in [1, 40]");
  if (!(m.seed_C > 0) || !(m.seed_tol > 0) || !(m.interp_tol > 0) || !(m.root_tol > 0) || !(m.fd_step > 0) ||
      !(m.melnikov_tol > 0))
    throw Error(ErrorCode::InvalidArgument, "manifold tolerances must be positive");
  if (m.initial_samples < 3 || m.max_samples < m.initial_samples)
    throw Error(ErrorCode::InvalidArgument, "need 3 <= initial_samples <= max_samples");
  if (m.scan_points < 4) throw Error(ErrorCode::InvalidArgument, "scan_points must be at least 4");
  if (m.jobs < 1) throw Error(ErrorCode::InvalidArgument, "jobs must be at least 1");
  const auto& s = c->scfg;
  if (!(s.R_bound > 0) || !(s.R_osc > 0) || s.M < 1 || s.step_horizon < 0)
    throw Error(ErrorCode::InvalidArgument, "invalid symbolic configuration");
}

}  // namespace

extern "C" {

const char* rei3bp_version(void) { return REI3BP_VERSION_STRING; }

const char* rei3bp_status_name(int status) { return error_code_name(static_cast<ErrorCode>(status)); }

rei3bp_status rei3bp_context_create(rei3bp_context** out) {
  if (!out) return REI3BP_INVALID_ARGUMENT;
  try {
    *out = new rei3bp_context();
    (*out)->warnings = (*out)->params.warnings();
  } catch (...) {
    *out = nullptr;
    return REI3BP_INTERNAL;
  }
  return REI3BP_OK;
}

rei3bp_status rei3bp_context_clone(const rei3bp_context* ctx, rei3bp_context** out) {
  if (!ctx || !out) return REI3BP_INVALID_ARGUMENT;
  try {
    *out = new rei3bp_context(*ctx);
    (*out)->error.clear();
  } catch (...) {
    *out = nullptr;
    return REI3BP_INTERNAL;
  }
  return REI3BP_OK;
}

void rei3bp_context_destroy(rei3bp_context* ctx) { delete ctx; }

const char* rei3bp_last_error(const rei3bp_context* ctx) { return ctx ? ctx->error.c_str() : "null context"; }

rei3bp_status rei3bp_set_param(rei3bp_context* ctx, const char* key, double value) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(key, "key");
    rei3bp_context backup = *ctx;
    bool found = false;
    for (auto& p : param_table(ctx)) {
      if (std::strcmp(p.key, key) != 0) continue;
      found = true;
      if (p.d) *p.d = value;
      if (p.i) {
        if (value != static_cast<double>(static_cast<int>(value)))
          throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be an integer");
        *p.i = static_cast<int>(value);
      }
      if (p.b) *p.b = value != 0;
    }
    if (!found) throw Error(ErrorCode::InvalidArgument, std::string("unknown parameter: ") + key);
    ctx->scfg.jobs = ctx->mcfg.jobs;
    try {
      check_configs(ctx);
      if (std::strcmp(key, "precision_bits") == 0) precision_from_bits(ctx->params.precision_bits);
    } catch (...) {
      *ctx = backup;
      throw;
    }
    ctx->warnings = ctx->params.warnings();
  });
}

rei3bp_status rei3bp_get_param(const rei3bp_context* ctx, const char* key, double* value) {
  if (!ctx || !key || !value) return REI3BP_INVALID_ARGUMENT;
  for (auto& p : param_table(const_cast<rei3bp_context*>(ctx))) {
    if (std::strcmp(p.key, key) != 0) continue;
    if (p.d) *value = *p.d;
    if (p.i) *value = *p.i;
    if (p.b) *value = *p.b ? 1 : 0;
    return REI3BP_OK;
  }
  return REI3BP_INVALID_ARGUMENT;
}

size_t rei3bp_warning_count(const rei3bp_context* ctx) { return ctx ? ctx->warnings.size() : 0; }

const char* rei3bp_warning(const rei3bp_context* ctx, size_t i) {
  if (!ctx || i >= ctx->warnings.size()) return nullptr;
  return ctx->warnings[i].c_str();
}

rei3bp_status rei3bp_kepler(rei3bp_context* ctx, double t, double* E, double* residual) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto r = solve_kepler<T>(T(t), machine_epsilon<T>());
      if (E) *E = to_double(r.E);
      if (residual) *residual = to_double(r.residual);
    });
  });
}

rei3bp_status rei3bp_rho(rei3bp_context* ctx, double t, double* out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "rho");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      *out = to_double(rho<T>(T(t)));
    });
  });
}

rei3bp_status rei3bp_rho_fourier(rei3bp_context* ctx, int l, int k, double tol, double* a_lk, double* err) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(a_lk, "a_lk");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto c = rho_pow_fourier<T>(l, k, T(tol));
      *a_lk = to_double(c.a_lk);
      if (err) *err = to_double(c.err);
    });
  });
}

rei3bp_status rei3bp_vector_field(rei3bp_context* ctx, const double state[3], double out[3]) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(state, "state");
    need(out, "out");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto f = vector_field<T>(PhaseState<T>{T(state[0]), T(state[1]), T(state[2])}, T(ctx->params.G),
                               ctx->scfg.perturbed);
      out[0] = to_double(f.dr);
      out[1] = to_double(f.dy);
      out[2] = to_double(f.dxi);
    });
  });
}

rei3bp_status rei3bp_potential(rei3bp_context* ctx, double r, double xi, double* U) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(U, "U");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      *U = to_double(perturbing_potential<T>(T(r), T(xi), T(ctx->params.G)));
    });
  });
}

rei3bp_status rei3bp_homoclinic_from_v(rei3bp_context* ctx, double v, double out[5]) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto h = homoclinic_from_v<T>(T(v), machine_epsilon<T>());
      out[0] = to_double(h.tau);
      out[1] = to_double(h.v);
      out[2] = to_double(h.r_h);
      out[3] = to_double(h.y_h);
      out[4] = to_double(h.dy_dv);
    });
  });
}

rei3bp_status rei3bp_integrate(rei3bp_context* ctx, const double state[3], double s0, double s1,
                               rei3bp_trajectory** out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(state, "state");
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<rei3bp_trajectory>();
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto opt = IntegratorOptions<T>::from_params(ctx->params);
      opt.perturbed = ctx->scfg.perturbed;
      auto tr = std::make_shared<Trajectory<T>>(
          integrate<T>(PhaseState<T>{T(state[0]), T(state[1]), T(state[2])}, T(s0), T(s1), opt));
      for (const auto& smp : tr->samples) {
        h->s.push_back(to_double(smp.s));
        h->state.push_back(to_double(smp.state.r));
        h->state.push_back(to_double(smp.state.y));
        h->state.push_back(to_double(smp.state.xi));
        h->work.push_back(to_double(smp.work));
      }
      h->eval = [tr](double s, double* st) {
        auto smp = tr->evaluate(T(s));
        st[0] = to_double(smp.state.r);
        st[1] = to_double(smp.state.y);
        st[2] = to_double(smp.state.xi);
      };
    });
    *out = h.release();
  });
}

void rei3bp_trajectory_destroy(rei3bp_trajectory* tr) { delete tr; }

size_t rei3bp_trajectory_size(const rei3bp_trajectory* tr) { return tr ? tr->s.size() : 0; }

rei3bp_status rei3bp_trajectory_sample(const rei3bp_trajectory* tr, size_t i, double* s, double state[3],
                                       double* work) {
  if (!tr || i >= tr->s.size()) return REI3BP_INVALID_ARGUMENT;
  if (s) *s = tr->s[i];
  if (state)
    for (int c = 0; c < 3; ++c) state[c] = tr->state[3 * i + c];
  if (work) *work = tr->work[i];
  return REI3BP_OK;
}

rei3bp_status rei3bp_trajectory_evaluate(const rei3bp_trajectory* tr, double s, double state[3]) {
  if (!tr || !state) return REI3BP_INVALID_ARGUMENT;
  return guard(nullptr, [&] { tr->eval(s, state); });
}

rei3bp_status rei3bp_melnikov_series(rei3bp_context* ctx, double tol, int l_max, int k_max, rei3bp_series** out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<rei3bp_series>();
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto ser = std::make_shared<MelnikovSeries<T>>(melnikov_series<T>(T(ctx->params.G), T(tol), l_max, k_max));
      h->l_max = ser->l_max;
      h->L0 = to_double(ser->L0);
      h->err0 = to_double(ser->L0_err);
      h->k0 = ser->L0_k_used;
      h->total_err = to_double(ser->err_est);
      for (const auto& hv : ser->harmonics) {
        h->L.push_back(to_double(hv.L));
        h->err.push_back(to_double(hv.err_est));
        h->k_used.push_back(hv.k_used);
      }
      h->eval = [ser](double v, double xi, double* L, double* dL) {
        if (L) *L = to_double(ser->evaluate(T(v), T(xi)));
        if (dL) *dL = to_double(ser->dv(T(v), T(xi)));
      };
    });
    *out = h.release();
  });
}

void rei3bp_series_destroy(rei3bp_series* s) { delete s; }

int rei3bp_series_lmax(const rei3bp_series* s) { return s ? s->l_max : 0; }

double rei3bp_series_error(const rei3bp_series* s) { return s ? s->total_err : 0; }

rei3bp_status rei3bp_series_harmonic(const rei3bp_series* s, int l, double* L, double* err, int* k_used) {
  if (!s || l < 0 || l > static_cast<int>(s->L.size())) return REI3BP_INVALID_ARGUMENT;
  if (l == 0) {
    if (L) *L = s->L0;
    if (err) *err = s->err0;
    if (k_used) *k_used = s->k0;
    return REI3BP_OK;
  }
  if (L) *L = s->L[l - 1];
  if (err) *err = s->err[l - 1];
  if (k_used) *k_used = s->k_used[l - 1];
  return REI3BP_OK;
}

rei3bp_status rei3bp_series_evaluate(const rei3bp_series* s, double v, double xi, double* L, double* dLdv) {
  if (!s) return REI3BP_INVALID_ARGUMENT;
  return guard(nullptr, [&] { s->eval(v, xi, L, dLdv); });
}

rei3bp_status rei3bp_melnikov_direct(rei3bp_context* ctx, double v, double xi, double tol, double* L, double* err) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(L, "L");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto d = melnikov_direct<T>(T(v), T(xi), T(ctx->params.G), T(tol));
      *L = to_double(d.L);
      if (err) *err = to_double(d.err_est);
    });
  });
}

rei3bp_status rei3bp_osc_integral(rei3bp_context* ctx, int l, int k, double tol, double* re, double* im,
                                  double* scaled) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto o = osc_integral<T>(l, k, T(ctx->params.G), T(tol));
      if (re) *re = to_double(o.value.real());
      if (im) *im = to_double(o.value.imag());
      if (scaled) *scaled = to_double(o.scaled);
    });
  });
}

rei3bp_status rei3bp_manifold_seed(rei3bp_context* ctx, int side, double xi_at_seed, double state[3],
                                   double* seed_error) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(state, "state");
    Side sd = side_from(side);
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto s = manifold_seed<T>(T(ctx->params.G), sd, T(ctx->mcfg.v_far), T(xi_at_seed), T(ctx->mcfg.seed_tol),
                                ctx->mcfg);
      state[0] = to_double(s.state.r);
      state[1] = to_double(s.state.y);
      state[2] = to_double(s.state.xi);
      if (seed_error) *seed_error = to_double(s.error_estimate);
    });
  });
}

rei3bp_status rei3bp_splitting_distance(rei3bp_context* ctx, double xi0, double v_star, rei3bp_splitting_record* out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    SplittingRecord rec = dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      return splitting_distance<T>(T(ctx->params.G), T(xi0), T(v_star), ctx->params, ctx->mcfg);
    });
    out->G = rec.G;
    out->xi0 = rec.xi0;
    out->v_star = rec.v_star;
    out->d_measured = rec.d_measured;
    out->d_melnikov = rec.d_melnikov;
    out->d_formula = rec.d_formula;
    out->noise_floor = rec.noise_floor;
    out->precision_bits = rec.precision_bits;
    out->valid = rec.valid ? 1 : 0;
    out->Yu = rec.Yu;
    out->Ys = rec.Ys;
  });
}

rei3bp_status rei3bp_trace_section_curve(rei3bp_context* ctx, double xi0, double v_lo, double v_hi, int side,
                                         rei3bp_curve** out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    *out = nullptr;
    Side sd = side_from(side);
    auto h = std::make_unique<rei3bp_curve>();
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto c = std::make_shared<SectionCurve<T>>(
          trace_section_curve<T>(T(ctx->params.G), T(xi0), T(v_lo), T(v_hi), sd, ctx->params, ctx->mcfg));
      for (size_t i = 0; i < c->r.size(); ++i) {
        h->r.push_back(to_double(c->r[i]));
        h->y.push_back(to_double(c->y[i]));
        h->labels.push_back(to_double(c->labels[i]));
        h->v_tags.push_back(to_double(c->v_tags[i]));
      }
      h->interp = [c](double rr) { return to_double(c->interpolate(T(rr))); };
    });
    *out = h.release();
  });
}

void rei3bp_curve_destroy(rei3bp_curve* c) { delete c; }

size_t rei3bp_curve_size(const rei3bp_curve* c) { return c ? c->r.size() : 0; }

rei3bp_status rei3bp_curve_point(const rei3bp_curve* c, size_t i, double* r, double* y, double* label,
                                 double* v_tag) {
  if (!c || i >= c->r.size()) return REI3BP_INVALID_ARGUMENT;
  if (r) *r = c->r[i];
  if (y) *y = c->y[i];
  if (label) *label = c->labels[i];
  if (v_tag) *v_tag = c->v_tags[i];
  return REI3BP_OK;
}

rei3bp_status rei3bp_curve_interpolate(const rei3bp_curve* c, double r, double* y) {
  if (!c || !y) return REI3BP_INVALID_ARGUMENT;
  return guard(nullptr, [&] { *y = c->interp(r); });
}

rei3bp_status rei3bp_find_homoclinics(rei3bp_context* ctx, double v_star, rei3bp_homoclinics** out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<rei3bp_homoclinics>();
    h->search = dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      return find_homoclinics<T>(T(ctx->params.G), T(v_star), ctx->params, ctx->mcfg);
    });
    *out = h.release();
  });
}

void rei3bp_homoclinics_destroy(rei3bp_homoclinics* h) { delete h; }

size_t rei3bp_homoclinics_count(const rei3bp_homoclinics* h) { return h ? h->search.roots.size() : 0; }

rei3bp_status rei3bp_homoclinics_root(const rei3bp_homoclinics* h, size_t i, double* xi0, double* slope,
                                      double* offset) {
  if (!h || i >= h->search.roots.size()) return REI3BP_INVALID_ARGUMENT;
  const auto& r = h->search.roots[i];
  if (xi0) *xi0 = r.xi0;
  if (slope) *slope = r.slope;
  if (offset) *offset = r.offset;
  return REI3BP_OK;
}

rei3bp_status rei3bp_homoclinics_summary(const rei3bp_homoclinics* h, double* d_peak, double* noise_floor) {
  if (!h) return REI3BP_INVALID_ARGUMENT;
  if (d_peak) *d_peak = h->search.d_peak;
  if (noise_floor) *noise_floor = h->search.noise_floor;
  return REI3BP_OK;
}

rei3bp_status rei3bp_poincare_step(rei3bp_context* ctx, double r0, double xi0, int direction,
                                   rei3bp_step_result* out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    Direction dir = direction_from(direction);
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto p = sigma_plus_point<T>(T(r0), T(xi0), T(ctx->params.G), ctx->scfg.perturbed);
      auto s = poincare_step<T>(p, ctx->params, dir, ctx->scfg);
      out->kind = static_cast<int>(s.kind);
      out->r0 = to_double(s.point.r0);
      out->xi0 = to_double(s.point.xi0);
      out->delta_s = to_double(s.delta_s);
      out->delta_xi = to_double(s.delta_xi);
      out->h = to_double(s.h);
      out->r = to_double(s.r);
      out->max_r = to_double(s.max_r);
      out->min_r = to_double(s.min_r);
      out->symbol = s.kind == StepKind::Return ? return_symbol<T>(s) : -1;
    });
  });
}

rei3bp_status rei3bp_symbol_sequence(rei3bp_context* ctx, double r0, double xi0, int n_forward, int n_backward,
                                     long* future, int* n_future, int* future_end, long* past, int* n_past,
                                     int* past_end) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    if (n_forward > 0) need(future, "future");
    if (n_backward > 0) need(past, "past");
    SymbolSequence seq = dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto p = sigma_plus_point<T>(T(r0), T(xi0), T(ctx->params.G), ctx->scfg.perturbed);
      return symbol_sequence<T>(p, n_forward, n_backward, ctx->params, ctx->scfg);
    });
    for (size_t i = 0; i < seq.future.size(); ++i) future[i] = seq.future[i];
    for (size_t i = 0; i < seq.past.size(); ++i) past[i] = seq.past[i];
    if (n_future) *n_future = static_cast<int>(seq.future.size());
    if (n_past) *n_past = static_cast<int>(seq.past.size());
    if (future_end) *future_end = static_cast<int>(seq.future_end);
    if (past_end) *past_end = static_cast<int>(seq.past_end);
  });
}

rei3bp_status rei3bp_classify(rei3bp_context* ctx, double r0, double xi0, int direction, rei3bp_motion_label* out) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(out, "out");
    Direction dir = direction_from(direction);
    MotionLabel m = dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      return classify_state<T>(PhaseState<T>{T(r0), T(0), T(xi0)}, dir, ctx->params, ctx->scfg);
    });
    out->motion = static_cast<int>(m.motion);
    out->direction = static_cast<int>(m.direction);
    out->final_r = m.final_r;
    out->final_h = m.final_h;
    out->max_r = m.max_r;
    out->min_r = m.min_r;
    out->returns = m.returns;
    out->s_used = m.s_used;
    out->horizon = m.horizon;
    std::snprintf(out->reason, sizeof out->reason, "%s", m.reason.c_str());
  });
}

rei3bp_status rei3bp_homoclinic_sigma_point(rei3bp_context* ctx, double v_star, int root_index, double* r0,
                                            double* xi0) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(r0, "r0");
    need(xi0, "xi0");
    dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      auto p = homoclinic_sigma_point<T>(T(v_star), ctx->params, ctx->mcfg, root_index);
      *r0 = to_double(p.r0);
      *xi0 = to_double(p.xi0);
    });
  });
}

rei3bp_status rei3bp_horseshoe_scan(rei3bp_context* ctx, double r0, double xi0, double half_r, double half_xi,
                                    int nr, int nxi, long* a1) {
  if (!ctx) return REI3BP_INVALID_ARGUMENT;
  return guard(ctx, [&] {
    need(a1, "a1");
    SymbolMap map = dispatch(ctx, [&](auto tag) {
      using T = typename decltype(tag)::type;
      SigmaPlusPoint<T> c{T(r0), T(xi0), true};
      return horseshoe_scan<T>(c, half_r, half_xi, nr, nxi, ctx->params, ctx->scfg);
    });
    for (size_t i = 0; i < map.a1.size(); ++i) a1[i] = map.a1[i];
  });
}

double rei3bp_distance_formula(double v_star, double xi0, double G) { return distance_formula(v_star, xi0, G); }

}  // extern "C"
