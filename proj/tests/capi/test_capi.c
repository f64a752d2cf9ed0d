#include <math.h>
#include <stdio.h>
#include <string.h>

#include "rei3bp/rei3bp.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_context(void) {
  rei3bp_context* ctx = NULL;
  CHECK(rei3bp_context_create(&ctx) == REI3BP_OK);
  CHECK(ctx != NULL);
  CHECK(strlen(rei3bp_version()) > 0);
  CHECK(strcmp(rei3bp_status_name(REI3BP_SECTION_MISS), "SectionMiss") == 0);
  CHECK(rei3bp_context_create(NULL) == REI3BP_INVALID_ARGUMENT);

  double v = 0;
  CHECK(rei3bp_get_param(ctx, "G", &v) == REI3BP_OK && v == 2.0);
  CHECK(rei3bp_set_param(ctx, "G", 1.8) == REI3BP_OK);
  CHECK(rei3bp_get_param(ctx, "G", &v) == REI3BP_OK && v == 1.8);
  CHECK(rei3bp_set_param(ctx, "no_such_key", 1) == REI3BP_INVALID_ARGUMENT);
  CHECK(strlen(rei3bp_last_error(ctx)) > 0);
  CHECK(rei3bp_set_param(ctx, "precision_bits", 64) == REI3BP_UNSUPPORTED_PRECISION);
  CHECK(rei3bp_get_param(ctx, "precision_bits", &v) == REI3BP_OK && v == 53);
  CHECK(rei3bp_set_param(ctx, "tol_ode", -1) == REI3BP_INVALID_ARGUMENT);
  CHECK(rei3bp_get_param(ctx, "tol_ode", &v) == REI3BP_OK && v == 1e-12);
  CHECK(rei3bp_set_param(ctx, "jobs", 2.5) == REI3BP_INVALID_ARGUMENT);

  CHECK(rei3bp_warning_count(ctx) == 0);
  CHECK(rei3bp_set_param(ctx, "G", 1.2) == REI3BP_OK);
  CHECK(rei3bp_warning_count(ctx) == 1);
  CHECK(rei3bp_warning(ctx, 0) != NULL);
  CHECK(rei3bp_warning(ctx, 5) == NULL);

  rei3bp_context* copy = NULL;
  CHECK(rei3bp_context_clone(ctx, &copy) == REI3BP_OK);
  CHECK(rei3bp_get_param(copy, "G", &v) == REI3BP_OK && v == 1.2);
  rei3bp_context_destroy(copy);
  rei3bp_context_destroy(ctx);
  rei3bp_context_destroy(NULL);
}

static void test_time_law_and_dynamics(void) {
  rei3bp_context* ctx = NULL;
  rei3bp_context_create(&ctx);
  double E = 0, res = 1, rho = 0, a = 0, err = 0;
  CHECK(rei3bp_kepler(ctx, 1.0, &E, &res) == REI3BP_OK);
  CHECK(fabs(E - 1.934563210752024267563) <= 1e-15);
  CHECK(fabs(res) <= 1e-13);
  CHECK(rei3bp_rho(ctx, 1.0, &rho) == REI3BP_OK);
  CHECK(fabs(rho - 1.355797140388828128719) <= 1e-15);
  CHECK(rei3bp_rho_fourier(ctx, 1, 1, 1e-14, &a, &err) == REI3BP_OK);
  CHECK(fabs(a + 0.8801011714898670319) <= 1e-13);

  double state[3] = {1.0, 0.0, M_PI}, f[3];
  CHECK(rei3bp_vector_field(ctx, state, f) == REI3BP_OK);
  CHECK(fabs(f[1] - 0.08692470574556998204647) <= 1e-15);
  CHECK(f[2] == 8.0);
  double bad[3] = {-1.0, 0.0, 0.0};
  CHECK(rei3bp_vector_field(ctx, bad, f) == REI3BP_DOMAIN);

  double h[5];
  CHECK(rei3bp_homoclinic_from_v(ctx, 10.0, h) == REI3BP_OK);
  CHECK(fabs(h[0] - 3.659817157856821878121) <= 1e-14);

  rei3bp_set_param(ctx, "precision_bits", 113);
  CHECK(rei3bp_kepler(ctx, 1.0, &E, &res) == REI3BP_OK);
  CHECK(fabs(E - 1.934563210752024267563) <= 1e-15);
  rei3bp_context_destroy(ctx);
}

static void test_integrator(void) {
  rei3bp_context* ctx = NULL;
  rei3bp_context_create(&ctx);
  double h[5];
  rei3bp_homoclinic_from_v(ctx, -3.0, h);
  double s0[3] = {h[2], h[3], 0.0};
  rei3bp_set_param(ctx, "perturbed", 0);
  rei3bp_trajectory* tr = NULL;
  CHECK(rei3bp_integrate(ctx, s0, 0.0, 10.0, &tr) == REI3BP_OK);
  CHECK(rei3bp_trajectory_size(tr) > 2);
  double s, st[3], w;
  size_t n = rei3bp_trajectory_size(tr);
  CHECK(rei3bp_trajectory_sample(tr, n - 1, &s, st, &w) == REI3BP_OK);
  rei3bp_homoclinic_from_v(ctx, 7.0, h);
  CHECK(fabs(st[0] - h[2]) <= 1e-9);
  CHECK(rei3bp_trajectory_sample(tr, n, &s, st, &w) == REI3BP_INVALID_ARGUMENT);
  CHECK(rei3bp_trajectory_evaluate(tr, 20.0, st) == REI3BP_DOMAIN);
  rei3bp_trajectory_destroy(tr);

  double low[3] = {2e-3, -1e4, 0.0};
  rei3bp_set_param(ctx, "perturbed", 1);
  CHECK(rei3bp_integrate(ctx, low, 0.0, 1.0, &tr) == REI3BP_RADIUS_UNDERFLOW);
  rei3bp_context_destroy(ctx);
}

static void test_melnikov(void) {
  rei3bp_context* ctx = NULL;
  rei3bp_context_create(&ctx);
  rei3bp_series* ser = NULL;
  CHECK(rei3bp_melnikov_series(ctx, 1e-13, 0, 0, &ser) == REI3BP_OK);
  CHECK(rei3bp_series_lmax(ser) >= 2);
  double L0, L1, e0, e1;
  int k0, k1;
  CHECK(rei3bp_series_harmonic(ser, 0, &L0, &e0, &k0) == REI3BP_OK);
  CHECK(rei3bp_series_harmonic(ser, 1, &L1, &e1, &k1) == REI3BP_OK);
  CHECK(rei3bp_series_harmonic(ser, 99, &L1, &e1, &k1) == REI3BP_INVALID_ARGUMENT);
  CHECK(rei3bp_series_error(ser) <= 1e-12);
  double Ls, dL, Ld, ed;
  CHECK(rei3bp_series_evaluate(ser, 0.0, M_PI / 2, &Ls, &dL) == REI3BP_OK);
  CHECK(rei3bp_melnikov_direct(ctx, 0.0, M_PI / 2, 1e-13, &Ld, &ed) == REI3BP_OK);
  CHECK(fabs(Ls / Ld - 1) <= 1e-10);
  rei3bp_series_destroy(ser);

  double re, im, sc;
  CHECK(rei3bp_osc_integral(ctx, 0, 1, 1e-14, &re, &im, &sc) == REI3BP_OK);
  CHECK(fabs(re - M_PI / 2) <= 1e-14);
  rei3bp_set_param(ctx, "G", 1.3);
  CHECK(rei3bp_melnikov_series(ctx, 1e-12, 0, 0, &ser) == REI3BP_DOMAIN);
  CHECK(fabs(rei3bp_distance_formula(2.0 / 3, 16.0 / 3, 2.0)) <= 1e-16);
  rei3bp_context_destroy(ctx);
}

static void test_manifolds_and_symbolic(void) {
  rei3bp_context* ctx = NULL;
  rei3bp_context_create(&ctx);
  double seed[3], se;
  CHECK(rei3bp_manifold_seed(ctx, 1, 0.3, seed, &se) == REI3BP_OK);
  CHECK(seed[1] < 0);
  CHECK(rei3bp_manifold_seed(ctx, 2, 0.3, seed, &se) == REI3BP_INVALID_ARGUMENT);

  rei3bp_splitting_record rec;
  CHECK(rei3bp_splitting_distance(ctx, 16.0 / 3 + M_PI / 2, 2.0 / 3, &rec) == REI3BP_OK);
  CHECK(rec.valid == 1);
  CHECK(rec.precision_bits == 53);
  CHECK(fabs(rec.d_measured - (rec.Yu - rec.Ys)) <= 1e-14);
  CHECK(rei3bp_splitting_distance(ctx, 1.0, 0.0, &rec) == REI3BP_DOMAIN);

  rei3bp_curve* c = NULL;
  CHECK(rei3bp_trace_section_curve(ctx, 0.4, 0.3, 1.2, 0, &c) == REI3BP_OK);
  CHECK(rei3bp_curve_size(c) >= 17);
  double r, y, lab, vt, yi;
  CHECK(rei3bp_curve_point(c, 2, &r, &y, &lab, &vt) == REI3BP_OK);
  CHECK(rei3bp_curve_interpolate(c, r, &yi) == REI3BP_OK);
  CHECK(fabs(yi - y) <= 1e-14);
  CHECK(rei3bp_curve_interpolate(c, 1e3, &yi) == REI3BP_DOMAIN);
  rei3bp_curve_destroy(c);

  rei3bp_step_result st;
  CHECK(rei3bp_poincare_step(ctx, 0.8, 0.3, 1, &st) == REI3BP_OK);
  CHECK(st.kind == 0);
  CHECK(st.symbol >= 0);
  CHECK(rei3bp_poincare_step(ctx, 2.0, 0.3, 1, &st) == REI3BP_INVALID_ARGUMENT);

  long fut[4], past[4];
  int nf, np, fe, pe;
  CHECK(rei3bp_symbol_sequence(ctx, 0.8, 0.3, 4, 4, fut, &nf, &fe, past, &np, &pe) == REI3BP_OK);
  CHECK(nf + np >= 1);
  CHECK(fut[0] == st.symbol);

  rei3bp_motion_label ml;
  CHECK(rei3bp_classify(ctx, 0.3, 0.0, 1, &ml) == REI3BP_OK);
  CHECK(ml.motion == 0);
  CHECK(rei3bp_classify(ctx, 5.0, 0.3, 1, &ml) == REI3BP_OK);
  CHECK(strncmp(ml.reason, "started off Sigma+", 18) == 0);

  long codes[4];
  CHECK(rei3bp_horseshoe_scan(ctx, 0.8, 0.3, 0.01, 0.01, 2, 2, codes) == REI3BP_OK);
  for (int i = 0; i < 4; ++i) CHECK(codes[i] >= -4);
  CHECK(rei3bp_horseshoe_scan(ctx, 0.8, 0.3, -1, 0.01, 2, 2, codes) == REI3BP_INVALID_ARGUMENT);
  rei3bp_context_destroy(ctx);
}

int main(void) {
  test_context();
  test_time_law_and_dynamics();
  test_integrator();
  test_melnikov();
  test_manifolds_and_symbolic();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("c api: all checks passed\n");
  return 0;
}
