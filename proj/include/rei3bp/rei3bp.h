#ifndef REI3BP_H
#define REI3BP_H

/* C interface to the rei3bp library. All handles are opaque; every function
 * that can fail returns a rei3bp_status and leaves a message retrievable
 * with rei3bp_last_error(ctx). Quantities cross the interface as double
 * regardless of the working precision selected with "precision_bits". */

#include <stddef.h>

#if defined(_WIN32)
#define REI3BP_API __declspec(dllexport)
#else
#define REI3BP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rei3bp_status {
  REI3BP_OK = 0,
  REI3BP_INVALID_ARGUMENT = 1,
  REI3BP_DOMAIN = 2,
  REI3BP_NON_CONVERGENCE = 3,
  REI3BP_UNSUPPORTED_PRECISION = 4,
  REI3BP_RADIUS_UNDERFLOW = 5,
  REI3BP_HORIZON_EXCEEDED = 6,
  REI3BP_STEP_UNDERFLOW = 7,
  REI3BP_TOLERANCE_FAILURE = 8,
  REI3BP_CONTOUR_FAILURE = 9,
  REI3BP_SEED_TOO_CLOSE = 10,
  REI3BP_TRACING_LOST = 11,
  REI3BP_SECTION_MISS = 12,
  REI3BP_NO_SIGN_CHANGE = 13,
  REI3BP_NO_HOMOCLINIC = 14,
  REI3BP_INTERNAL = 99
} rei3bp_status;

typedef struct rei3bp_context rei3bp_context;
typedef struct rei3bp_trajectory rei3bp_trajectory;
typedef struct rei3bp_series rei3bp_series;
typedef struct rei3bp_curve rei3bp_curve;
typedef struct rei3bp_homoclinics rei3bp_homoclinics;

REI3BP_API const char* rei3bp_version(void);
REI3BP_API const char* rei3bp_status_name(int status);

REI3BP_API rei3bp_status rei3bp_context_create(rei3bp_context** out);
/* Copies all parameters into a new context; contexts are not thread safe,
 * so concurrent callers use one clone each. */
REI3BP_API rei3bp_status rei3bp_context_clone(const rei3bp_context* ctx, rei3bp_context** out);
REI3BP_API void rei3bp_context_destroy(rei3bp_context* ctx);
REI3BP_API const char* rei3bp_last_error(const rei3bp_context* ctx);

/* Keys: G, tol_ode, precision_bits, R_esc, horizon, h_par, r_min, v_far,
 * seed_order, seed_C, seed_tol, interp_tol, scan_points, root_tol,
 * melnikov_tol, jobs, R_bound, R_osc, M, perturbed. */
REI3BP_API rei3bp_status rei3bp_set_param(rei3bp_context* ctx, const char* key, double value);
REI3BP_API rei3bp_status rei3bp_get_param(const rei3bp_context* ctx, const char* key, double* value);
/* Number of warnings for the current parameters and access by index. */
REI3BP_API size_t rei3bp_warning_count(const rei3bp_context* ctx);
REI3BP_API const char* rei3bp_warning(const rei3bp_context* ctx, size_t i);

/* time law */
REI3BP_API rei3bp_status rei3bp_kepler(rei3bp_context* ctx, double t, double* E, double* residual);
REI3BP_API rei3bp_status rei3bp_rho(rei3bp_context* ctx, double t, double* rho);
REI3BP_API rei3bp_status rei3bp_rho_fourier(rei3bp_context* ctx, int l, int k, double tol, double* a_lk,
                                            double* err);

/* dynamics; state = (r, y, xi) */
REI3BP_API rei3bp_status rei3bp_vector_field(rei3bp_context* ctx, const double state[3], double out[3]);
REI3BP_API rei3bp_status rei3bp_potential(rei3bp_context* ctx, double r, double xi, double* U);
/* out = (tau, v, r_h, y_h, dy_dv) */
REI3BP_API rei3bp_status rei3bp_homoclinic_from_v(rei3bp_context* ctx, double v, double out[5]);

/* integrator */
REI3BP_API rei3bp_status rei3bp_integrate(rei3bp_context* ctx, const double state[3], double s0, double s1,
                                          rei3bp_trajectory** out);
REI3BP_API void rei3bp_trajectory_destroy(rei3bp_trajectory* tr);
REI3BP_API size_t rei3bp_trajectory_size(const rei3bp_trajectory* tr);
/* sample i: s, state[3], work */
REI3BP_API rei3bp_status rei3bp_trajectory_sample(const rei3bp_trajectory* tr, size_t i, double* s,
                                                  double state[3], double* work);
REI3BP_API rei3bp_status rei3bp_trajectory_evaluate(const rei3bp_trajectory* tr, double s, double state[3]);

/* Melnikov potential */
REI3BP_API rei3bp_status rei3bp_melnikov_series(rei3bp_context* ctx, double tol, int l_max, int k_max,
                                                rei3bp_series** out);
REI3BP_API void rei3bp_series_destroy(rei3bp_series* s);
REI3BP_API int rei3bp_series_lmax(const rei3bp_series* s);
/* l = 0 returns L0 */
REI3BP_API rei3bp_status rei3bp_series_harmonic(const rei3bp_series* s, int l, double* L, double* err,
                                                int* k_used);
/* error estimate of the reconstructed L, including dropped harmonics */
REI3BP_API double rei3bp_series_error(const rei3bp_series* s);
REI3BP_API rei3bp_status rei3bp_series_evaluate(const rei3bp_series* s, double v, double xi, double* L,
                                                double* dLdv);
REI3BP_API rei3bp_status rei3bp_melnikov_direct(rei3bp_context* ctx, double v, double xi, double tol, double* L,
                                                double* err);
REI3BP_API rei3bp_status rei3bp_osc_integral(rei3bp_context* ctx, int l, int k, double tol, double* re,
                                             double* im, double* scaled);

/* manifolds */
typedef struct rei3bp_splitting_record {
  double G;
  double xi0;
  double v_star;
  double d_measured;
  double d_melnikov;
  double d_formula;
  double noise_floor;
  int precision_bits;
  int valid;
  double Yu;
  double Ys;
} rei3bp_splitting_record;

/* side: 0 stable, 1 unstable */
REI3BP_API rei3bp_status rei3bp_manifold_seed(rei3bp_context* ctx, int side, double xi_at_seed, double state[3],
                                              double* seed_error);
REI3BP_API rei3bp_status rei3bp_splitting_distance(rei3bp_context* ctx, double xi0, double v_star,
                                                   rei3bp_splitting_record* out);
REI3BP_API rei3bp_status rei3bp_trace_section_curve(rei3bp_context* ctx, double xi0, double v_lo, double v_hi,
                                                    int side, rei3bp_curve** out);
REI3BP_API void rei3bp_curve_destroy(rei3bp_curve* c);
REI3BP_API size_t rei3bp_curve_size(const rei3bp_curve* c);
REI3BP_API rei3bp_status rei3bp_curve_point(const rei3bp_curve* c, size_t i, double* r, double* y, double* label,
                                            double* v_tag);
REI3BP_API rei3bp_status rei3bp_curve_interpolate(const rei3bp_curve* c, double r, double* y);
REI3BP_API rei3bp_status rei3bp_find_homoclinics(rei3bp_context* ctx, double v_star, rei3bp_homoclinics** out);
REI3BP_API void rei3bp_homoclinics_destroy(rei3bp_homoclinics* h);
REI3BP_API size_t rei3bp_homoclinics_count(const rei3bp_homoclinics* h);
REI3BP_API rei3bp_status rei3bp_homoclinics_root(const rei3bp_homoclinics* h, size_t i, double* xi0,
                                                 double* slope, double* offset);
REI3BP_API rei3bp_status rei3bp_homoclinics_summary(const rei3bp_homoclinics* h, double* d_peak,
                                                    double* noise_floor);

/* symbolic dynamics; direction: -1 past, +1 future */
typedef struct rei3bp_step_result {
  int kind; /* 0 return, 1 escape, 2 horizon */
  double r0;
  double xi0;
  double delta_s;
  double delta_xi;
  double h;
  double r;
  double max_r;
  double min_r;
  long symbol; /* -1 unless kind == 0 */
} rei3bp_step_result;

typedef struct rei3bp_motion_label {
  int motion; /* 0 H, 1 P, 2 B, 3 OS, 4 unresolved */
  int direction;
  double final_r;
  double final_h;
  double max_r;
  double min_r;
  long returns;
  double s_used;
  double horizon;
  char reason[96];
} rei3bp_motion_label;

REI3BP_API rei3bp_status rei3bp_poincare_step(rei3bp_context* ctx, double r0, double xi0, int direction,
                                              rei3bp_step_result* out);
/* end flags: 0 finite, 1 escaped, 2 horizon. Buffers hold n_forward and
 * n_backward entries; the counts written are returned in *n_future, *n_past. */
REI3BP_API rei3bp_status rei3bp_symbol_sequence(rei3bp_context* ctx, double r0, double xi0, int n_forward,
                                                int n_backward, long* future, int* n_future, int* future_end,
                                                long* past, int* n_past, int* past_end);
/* Classifies the orbit through (r0, 0, xi0). A point off Sigma+ (an apocentre)
 * is first flowed to the next pericentre; the reason string records this. */
REI3BP_API rei3bp_status rei3bp_classify(rei3bp_context* ctx, double r0, double xi0, int direction,
                                         rei3bp_motion_label* out);
REI3BP_API rei3bp_status rei3bp_homoclinic_sigma_point(rei3bp_context* ctx, double v_star, int root_index,
                                                       double* r0, double* xi0);
/* a1 holds nr * nxi entries, row i for r, column j for xi. Codes:
 * -1 escape, -2 horizon, -3 not on Sigma+, -4 integration failure. */
REI3BP_API rei3bp_status rei3bp_horseshoe_scan(rei3bp_context* ctx, double r0, double xi0, double half_r,
                                               double half_xi, int nr, int nxi, long* a1);

/* closed-form leading-order splitting */
REI3BP_API double rei3bp_distance_formula(double v_star, double xi0, double G);

#ifdef __cplusplus
}
#endif

#endif
