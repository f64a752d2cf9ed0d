// rei3bp command-line front end. Talks to the library only through rei3bp.h.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "output.hpp"
#include "rei3bp/parallel.hpp"
#include "rei3bp/rei3bp.h"

using cli::Header;
using cli::num;
using cli::Table;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitNoiseFloor = 3;
constexpr int kExitUsage = 64;

// J1(1) sqrt(2 pi) and J1(1) sqrt(pi / 2)
constexpr double kConstWide = 1.1030278265380282;
constexpr double kConstNarrow = 0.5515139132690141;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for_status(int st) {
  switch (st) {
    case REI3BP_INVALID_ARGUMENT:
    case REI3BP_UNSUPPORTED_PRECISION: return kExitUsage;
    case REI3BP_TOLERANCE_FAILURE: return kExitTolerance;
    case REI3BP_NO_HOMOCLINIC: return kExitNoiseFloor;
    default: return kExitFailure;
  }
}

struct Ctx {
  rei3bp_context* p = nullptr;
  Ctx() {
    if (rei3bp_context_create(&p) != REI3BP_OK) throw Failure{kExitFailure, "cannot create context"};
  }
  explicit Ctx(const Ctx& other, int jobs) {
    if (rei3bp_context_clone(other.p, &p) != REI3BP_OK) throw Failure{kExitFailure, "cannot clone context"};
    set("jobs", jobs);
  }
  Ctx(Ctx&& o) noexcept : p(o.p) { o.p = nullptr; }
  Ctx(const Ctx&) = delete;
  Ctx& operator=(const Ctx&) = delete;
  ~Ctx() { rei3bp_context_destroy(p); }

  void check(rei3bp_status st, const char* what) const {
    if (st != REI3BP_OK)
      throw Failure{exit_for_status(st),
                    std::string(what) + ": " + rei3bp_status_name(st) + ": " + rei3bp_last_error(p)};
  }
  void set(const char* key, double v) const { check(rei3bp_set_param(p, key, v), key); }
  double get(const char* key) const {
    double v = 0;
    check(rei3bp_get_param(p, key, &v), key);
    return v;
  }
};

// Library parameters exposed as flags: flag name, library key.
struct LibParam {
  const char* flag;
  const char* key;
  double value;
};

std::vector<LibParam> library_params() {
  std::vector<LibParam> v = {
      {"tol-ode", "tol_ode", 0},       {"precision", "precision_bits", 0}, {"R-esc", "R_esc", 0},
      {"horizon", "horizon", 0},       {"h-par", "h_par", 0},              {"r-min", "r_min", 0},
      {"v-far", "v_far", 0},           {"seed-order", "seed_order", 0},    {"seed-C", "seed_C", 0},
      {"seed-tol", "seed_tol", 0},     {"interp-tol", "interp_tol", 0},    {"scan-points", "scan_points", 0},
      {"root-tol", "root_tol", 0},     {"fd-step", "fd_step", 0},          {"melnikov-tol", "melnikov_tol", 0},
      {"R-bound", "R_bound", 0},       {"R-osc", "R_osc", 0},              {"M", "M", 0},
      {"step-horizon", "step_horizon", 0}, {"jobs", "jobs", 0},
  };
  Ctx defaults;
  for (auto& p : v) p.value = defaults.get(p.key);
  return v;
}

struct RunConfig {
  std::string command;
  double G = 2.0;
  std::string G_list;
  bool have_G_list = false;
  double v_star = 2.0 / 3.0;
  double xi0 = 0.3;
  double r0 = NAN;
  int sweep_xi0 = 0;
  bool fit = false;
  int lmax = 0;
  int kmax = 0;
  bool check_direct = false;
  double box = 1e-2;
  int grid = 51;
  int root = 0;
  bool both = false;
  std::string direction = "future";
  int n_forward = 5;
  int n_backward = 5;
  std::string side = "both";
  double v_lo = 0.2;
  double v_hi = 2.0;
  bool unperturbed = false;
  std::string format = "auto";
  std::string output;
  std::string svg;
  std::vector<LibParam> lib;
};

std::vector<double> parse_G_list(const std::string& s) {
  std::vector<double> out;
  auto bad = [&] { return Failure{kExitUsage, "invalid --G-list '" + s + "' (use a:b:step or a,b,c)"}; };
  if (s.empty()) throw Failure{kExitUsage, "empty G list"};
  auto to_d = [&](const std::string& t) {
    try {
      size_t pos = 0;
      double d = std::stod(t, &pos);
      if (pos != t.size()) throw bad();
      return d;
    } catch (const std::logic_error&) {
      throw bad();
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ':')) parts.push_back(to_d(t));
    if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0]) throw bad();
    long n = std::lround((parts[1] - parts[0]) / parts[2]);
    for (long i = 0; i <= n; ++i) {
      // snap to 12 significant digits so 1.6 + 4 * 0.2 prints as 2.4
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", parts[0] + static_cast<double>(i) * parts[2]);
      out.push_back(std::strtod(buf, nullptr));
    }
  } else {
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) out.push_back(to_d(t));
  }
  if (out.empty()) throw Failure{kExitUsage, "empty G list"};
  return out;
}

std::vector<double> G_values(const RunConfig& c) {
  return c.have_G_list ? parse_G_list(c.G_list) : std::vector<double>{c.G};
}

Ctx make_context(const RunConfig& c) {
  Ctx ctx;
  for (const auto& p : c.lib) ctx.set(p.key, p.value);
  ctx.set("G", c.G);
  if (c.unperturbed) ctx.set("perturbed", 0);
  return ctx;
}

Header make_header(const RunConfig& c, const Ctx& ctx) {
  Header h;
  h.emplace_back("tool", std::string("rei3bp ") + rei3bp_version());
  h.emplace_back("command", c.command);
  h.emplace_back("precision_bits", num(static_cast<int>(ctx.get("precision_bits"))));
  h.emplace_back("tol_ode", num(ctx.get("tol_ode")));
  h.emplace_back("melnikov_tol", num(ctx.get("melnikov_tol")));
  std::ostringstream cfg;
  cfg << "G=" << (c.have_G_list ? c.G_list : num(c.G)) << " vstar=" << num(c.v_star) << " xi0=" << num(c.xi0);
  if (!std::isnan(c.r0)) cfg << " r0=" << num(c.r0);
  if (c.command == "melnikov") cfg << " lmax=" << c.lmax << " kmax=" << c.kmax << " check-direct=" << c.check_direct;
  if (c.command == "splitting") cfg << " sweep-xi0=" << c.sweep_xi0 << " fit=" << c.fit;
  if (c.command == "scan") cfg << " box=" << num(c.box) << " grid=" << c.grid << " root=" << c.root;
  if (c.command == "classify") cfg << " direction=" << (c.both ? "both" : c.direction);
  if (c.command == "sequence") cfg << " n-forward=" << c.n_forward << " n-backward=" << c.n_backward;
  if (c.command == "section") cfg << " side=" << c.side << " v-lo=" << num(c.v_lo) << " v-hi=" << num(c.v_hi);
  if (c.unperturbed) cfg << " unperturbed=1";
  h.emplace_back("config", cfg.str());
  // jobs is left out: it never changes the output
  std::ostringstream lib;
  bool first = true;
  for (const auto& p : c.lib) {
    if (std::string(p.key) == "jobs" || std::string(p.key) == "tol_ode" || std::string(p.key) == "melnikov_tol" ||
        std::string(p.key) == "precision_bits")
      continue;
    lib << (first ? "" : " ") << p.key << "=" << num(ctx.get(p.key));
    first = false;
  }
  h.emplace_back("parameters", lib.str());
  for (size_t i = 0; i < rei3bp_warning_count(ctx.p); ++i) h.emplace_back("warning", rei3bp_warning(ctx.p, i));
  return h;
}

struct Result {
  explicit Result(Table t) : table(std::move(t)) {}
  Table table;
  Header extra;  // appended to the header
  json json_extra;
  std::function<void(std::ostream&)> svg;
  int exit_code = kExitOk;
};

void open_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitFailure, "cannot open " + path};
  write(f);
  if (!f) throw Failure{kExitFailure, "error writing " + path};
}

// melnikov

Result cmd_melnikov(const RunConfig& c) {
  auto Gs = G_values(c);
  std::vector<std::string> cols = {"G", "l", "L_l", "err_est", "k_used"};
  if (c.check_direct) cols.push_back("max_rel_direct_diff");
  Result res{Table(cols)};
  Ctx base = make_context(c);
  const double tol = base.get("melnikov_tol");
  const int jobs = static_cast<int>(base.get("jobs"));

  struct PerG {
    std::vector<std::vector<json>> rows;
    double max_diff = 0;
    double series_err = 0;
  };
  std::vector<PerG> out(Gs.size());
  const std::vector<double> vs = {-2.5, -1.0, -0.3, 0.0, 0.4, 1.2, 3.0};
  const int nxi = 8;
  for (size_t g = 0; g < Gs.size(); ++g) {
    Ctx ctx(base, jobs);
    ctx.set("G", Gs[g]);
    rei3bp_series* s = nullptr;
    ctx.check(rei3bp_melnikov_series(ctx.p, tol, c.lmax, c.kmax, &s), "melnikov_series");
    std::unique_ptr<rei3bp_series, decltype(&rei3bp_series_destroy)> guard(s, rei3bp_series_destroy);
    out[g].series_err = rei3bp_series_error(s);
    for (int l = 0; l <= rei3bp_series_lmax(s); ++l) {
      double L = 0, err = 0;
      int k_used = 0;
      rei3bp_series_harmonic(s, l, &L, &err, &k_used);
      out[g].rows.push_back({Gs[g], l, L, err, k_used});
    }
    if (c.check_direct) {
      std::vector<double> diff(vs.size() * nxi, 0);
      std::vector<int> status(diff.size(), REI3BP_OK);
      std::vector<std::string> msg(diff.size());
      rei3bp::parallel_for(static_cast<int>(diff.size()), jobs, [&](int i) {
        Ctx w(ctx, 1);
        double v = vs[i / nxi], xi = 2 * M_PI * (i % nxi) / nxi + 0.1;
        double Ld = 0, Ls = 0;
        status[i] = rei3bp_melnikov_direct(w.p, v, xi, 1e-13, &Ld, nullptr);
        if (status[i] != REI3BP_OK) {
          msg[i] = rei3bp_last_error(w.p);
          return;
        }
        rei3bp_series_evaluate(s, v, xi, &Ls, nullptr);
        diff[i] = std::abs(Ld - Ls) / std::max(std::abs(Ls), 1e-300);
      });
      for (size_t i = 0; i < diff.size(); ++i) {
        if (status[i] != REI3BP_OK)
          throw Failure{exit_for_status(status[i]), std::string("melnikov_direct: ") + msg[i]};
        out[g].max_diff = std::max(out[g].max_diff, diff[i]);
      }
      if (out[g].max_diff > 1e-10) res.exit_code = kExitTolerance;
    }
  }
  cli::Series sv;
  for (size_t g = 0; g < Gs.size(); ++g)
    for (auto& row : out[g].rows) {
      if (c.check_direct) row.push_back(out[g].max_diff);
      if (row[1].get<int>() > 0) {
        sv.x.push_back(row[1].get<int>() + 0.0);
        sv.y.push_back(std::log(std::abs(row[2].get<double>())) + row[1].get<int>() * std::pow(Gs[g], 3) / 3);
      }
      res.table.add(row);
    }
  {
    std::ostringstream se;
    for (size_t g = 0; g < Gs.size(); ++g) se << (g ? " " : "") << num(out[g].series_err);
    res.extra.emplace_back("series_err_est", se.str());
  }
  if (c.check_direct) {
    double worst = 0;
    for (const auto& o : out) worst = std::max(worst, o.max_diff);
    res.extra.emplace_back("direct_check", res.exit_code == kExitOk ? "PASS" : "FAIL");
    res.extra.emplace_back("max_rel_direct_diff", num(worst));
  }
  res.svg = [sv, Gs](std::ostream& os) mutable {
    sv.label = "log|L_l| + l G^3/3";
    sv.color = "#1f77b4";
    sv.markers = true;
    cli::svg_plot(os, "Melnikov harmonic envelope", "l", "log|L_l| + l G^3/3", {sv});
  };
  return res;
}

// splitting

struct SplitTask {
  double G;
  double xi0;
};

Result cmd_splitting(const RunConfig& c) {
  auto Gs = G_values(c);
  Ctx base = make_context(c);
  const int jobs = static_cast<int>(base.get("jobs"));
  int n = c.sweep_xi0 > 0 ? c.sweep_xi0 : (c.fit ? 16 : 0);
  if (c.fit && n < 4) throw Failure{kExitUsage, "--fit needs --sweep-xi0 >= 4"};
  std::vector<SplitTask> tasks;
  for (double G : Gs) {
    if (n == 0) tasks.push_back({G, c.xi0});
    for (int j = 0; j < n; ++j) tasks.push_back({G, 2 * M_PI * j / n});
  }
  std::vector<rei3bp_splitting_record> recs(tasks.size());
  {
    std::vector<int> status(tasks.size(), REI3BP_OK);
    std::vector<std::string> msg(tasks.size());
    rei3bp::parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
      Ctx w(base, 1);
      status[i] = rei3bp_set_param(w.p, "G", tasks[i].G);
      if (status[i] == REI3BP_OK) status[i] = rei3bp_splitting_distance(w.p, tasks[i].xi0, c.v_star, &recs[i]);
      if (status[i] != REI3BP_OK) msg[i] = rei3bp_last_error(w.p);
    });
    for (size_t i = 0; i < tasks.size(); ++i)
      if (status[i] != REI3BP_OK)
        throw Failure{exit_for_status(status[i]), "splitting_distance at G=" + num(tasks[i].G) +
                                                      " xi0=" + num(tasks[i].xi0) + ": " +
                                                      rei3bp_status_name(status[i]) + ": " + msg[i]};
  }

  if (!c.fit) {
    Result res{Table({"G", "xi0", "v_star", "d_measured", "d_melnikov", "d_formula", "noise_floor", "valid", "flag"})};
    bool all_valid = true;
    std::vector<cli::Series> series;
    const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    size_t i = 0;
    for (size_t g = 0; g < Gs.size(); ++g) {
      cli::Series meas{"d measured G=" + num(Gs[g]), colours[(2 * g) % 6], {}, {}, true};
      cli::Series mel{"d Melnikov G=" + num(Gs[g]), colours[(2 * g + 1) % 6], {}, {}, false};
      size_t cnt = n == 0 ? 1 : static_cast<size_t>(n);
      for (size_t j = 0; j < cnt; ++j, ++i) {
        const auto& r = recs[i];
        all_valid = all_valid && r.valid;
        res.table.add({r.G, r.xi0, r.v_star, r.d_measured, r.d_melnikov, r.d_formula, r.noise_floor, r.valid != 0,
                       r.valid ? "VALID" : "NOISE_FLOOR"});
        meas.x.push_back(r.xi0);
        meas.y.push_back(r.d_measured);
        mel.x.push_back(r.xi0);
        mel.y.push_back(r.d_melnikov);
      }
      series.push_back(meas);
      series.push_back(mel);
    }
    if (n > 0) {
      // sign changes per G over one period (cyclic)
      std::ostringstream sc;
      size_t k = 0;
      for (size_t g = 0; g < Gs.size(); ++g) {
        int changes = 0;
        for (int j = 0; j < n; ++j) {
          double a = recs[k + j].d_measured, b = recs[k + (j + 1) % n].d_measured;
          if ((a < 0) != (b < 0)) ++changes;
        }
        sc << (g ? " " : "") << changes;
        k += n;
      }
      res.extra.emplace_back("sign_changes", sc.str());
    }
    if (!all_valid) {
      res.exit_code = kExitNoiseFloor;
      std::cerr << "warning: NOISE_FLOOR: some records are below 10x the noise floor; raise --precision\n";
    }
    res.svg = [series](std::ostream& os) {
      cli::svg_plot(os, "Splitting distance", "xi0", "d", series, true);
    };
    return res;
  }

  // fit: first xi0-harmonic amplitude per G and regression of log d_peak on
  // X = -G^3/3 + log(G)/2 with free slope and intercept
  Result res{Table({"G", "d_peak", "noise_floor", "valid", "c_hat", "log_d_peak", "X", "fit_residual"})};
  double yh = 0;
  {
    double hv[5];
    base.check(rei3bp_homoclinic_from_v(base.p, c.v_star, hv), "homoclinic_from_v");
    yh = std::abs(hv[3]);
  }
  std::vector<double> peak(Gs.size()), noise(Gs.size()), X(Gs.size()), Y(Gs.size()), chat(Gs.size());
  bool all_valid = true;
  for (size_t g = 0; g < Gs.size(); ++g) {
    std::complex<double> acc = 0;
    double nmax = 0;
    for (int j = 0; j < n; ++j) {
      const auto& r = recs[g * n + j];
      acc += r.d_measured * std::exp(std::complex<double>(0, -r.xi0));
      nmax = std::max(nmax, r.noise_floor);
    }
    peak[g] = 2 * std::abs(acc) / n;
    noise[g] = nmax;
    all_valid = all_valid && peak[g] >= 10 * nmax;
    X[g] = -std::pow(Gs[g], 3) / 3 + 0.5 * std::log(Gs[g]);
    Y[g] = std::log(peak[g]);
    chat[g] = peak[g] * yh * std::exp(std::pow(Gs[g], 3) / 3) / std::sqrt(Gs[g]);
  }
  double slope = NAN, intercept = NAN, max_res = NAN;
  std::vector<double> resid(Gs.size(), NAN);
  if (Gs.size() >= 2) {
    double mx = 0, my = 0;
    for (size_t g = 0; g < Gs.size(); ++g) mx += X[g], my += Y[g];
    mx /= Gs.size();
    my /= Gs.size();
    double sxx = 0, sxy = 0;
    for (size_t g = 0; g < Gs.size(); ++g) sxx += (X[g] - mx) * (X[g] - mx), sxy += (X[g] - mx) * (Y[g] - my);
    slope = sxy / sxx;
    intercept = my - slope * mx;
    max_res = 0;
    for (size_t g = 0; g < Gs.size(); ++g) {
      resid[g] = Y[g] - (slope * X[g] + intercept);
      max_res = std::max(max_res, std::abs(resid[g]));
    }
  }
  double cmin = *std::min_element(chat.begin(), chat.end());
  double cmax = *std::max_element(chat.begin(), chat.end());
  double cmean = 0;
  for (double v : chat) cmean += v;
  cmean /= chat.size();
  for (size_t g = 0; g < Gs.size(); ++g)
    res.table.add({Gs[g], peak[g], noise[g], peak[g] >= 10 * noise[g], chat[g], Y[g], X[g], resid[g]});
  res.extra.emplace_back("fit_slope", num(slope));
  res.extra.emplace_back("fit_intercept", num(intercept));
  res.extra.emplace_back("fit_max_residual", num(max_res));
  res.extra.emplace_back("c_hat_mean", num(cmean));
  res.extra.emplace_back("c_hat_spread", num((cmax - cmin) / cmean));
  bool narrow = std::abs(std::log(cmean / kConstNarrow)) < std::abs(std::log(cmean / kConstWide));
  res.extra.emplace_back("c_hat_match",
                         narrow ? "J1(1)*sqrt(pi/2) = " + num(kConstNarrow) : "J1(1)*sqrt(2*pi) = " + num(kConstWide));
  if (!all_valid) {
    res.exit_code = kExitNoiseFloor;
    std::cerr << "warning: NOISE_FLOOR: some d_peak values are below 10x the noise floor\n";
  }
  cli::Series pts{"log d_peak", "#1f77b4", {}, {}, true};
  cli::Series line{"fit", "#d62728", {}, {}, false};
  for (size_t g = 0; g < Gs.size(); ++g) {
    pts.x.push_back(Gs[g]);
    pts.y.push_back(Y[g]);
    line.x.push_back(Gs[g]);
    line.y.push_back(slope * X[g] + intercept);
  }
  res.svg = [pts, line](std::ostream& os) {
    cli::svg_plot(os, "Exponential law of the splitting", "G", "log d_peak", {pts, line});
  };
  return res;
}

// homoclinics

Result cmd_homoclinics(const RunConfig& c) {
  auto Gs = G_values(c);
  Ctx base = make_context(c);
  Result res{Table({"G", "root", "xi0", "slope", "offset", "d_peak", "noise_floor"})};
  std::ostringstream gaps;
  for (size_t g = 0; g < Gs.size(); ++g) {
    base.set("G", Gs[g]);
    rei3bp_homoclinics* h = nullptr;
    base.check(rei3bp_find_homoclinics(base.p, c.v_star, &h), "find_homoclinics");
    std::unique_ptr<rei3bp_homoclinics, decltype(&rei3bp_homoclinics_destroy)> guard(h, rei3bp_homoclinics_destroy);
    double peak = 0, noise = 0;
    rei3bp_homoclinics_summary(h, &peak, &noise);
    std::vector<double> roots;
    for (size_t i = 0; i < rei3bp_homoclinics_count(h); ++i) {
      double xi = 0, slope = 0, off = 0;
      rei3bp_homoclinics_root(h, i, &xi, &slope, &off);
      roots.push_back(xi);
      res.table.add({Gs[g], static_cast<int>(i), xi, slope, off, peak, noise});
    }
    gaps << (g ? " " : "");
    if (roots.size() == 2) gaps << num(roots[1] - roots[0]);
    else gaps << "n/a";
  }
  res.extra.emplace_back("root_gap", gaps.str());
  return res;
}

// scan

Result cmd_scan(const RunConfig& c) {
  if (c.grid < 1) throw Failure{kExitUsage, "--grid must be positive"};
  if (!(c.box > 0)) throw Failure{kExitUsage, "--box must be positive"};
  Ctx ctx = make_context(c);
  double r0 = c.r0, xi0 = c.xi0;
  std::string centre_kind = "given";
  if (std::isnan(r0)) {
    ctx.check(rei3bp_homoclinic_sigma_point(ctx.p, c.v_star, c.root, &r0, &xi0), "homoclinic_sigma_point");
    centre_kind = "homoclinic root " + std::to_string(c.root);
  }
  const double half = c.box / 2;
  std::vector<long> a1(static_cast<size_t>(c.grid) * c.grid);
  ctx.check(rei3bp_horseshoe_scan(ctx.p, r0, xi0, half, half, c.grid, c.grid, a1.data()), "horseshoe_scan");
  Result res{Table({"i", "j", "r0", "xi0", "a1"})};
  std::set<long> distinct;
  auto coord = [&](double centre, int k) {
    return c.grid == 1 ? centre : centre - half + 2 * half * k / (c.grid - 1);
  };
  for (int i = 0; i < c.grid; ++i)
    for (int j = 0; j < c.grid; ++j) {
      long a = a1[static_cast<size_t>(i) * c.grid + j];
      if (a >= 0) distinct.insert(a);
      res.table.add({i, j, coord(r0, i), coord(xi0, j), a});
    }
  res.extra.emplace_back("centre", "r0=" + num(r0) + " xi0=" + num(xi0) + " (" + centre_kind + ")");
  res.extra.emplace_back("distinct_symbols", num(static_cast<long>(distinct.size())));
  res.extra.emplace_back("codes", "-1 escape, -2 horizon, -3 not on Sigma+, -4 integration failure");
  int g = c.grid;
  res.svg = [a1, g, r0, xi0, half](std::ostream& os) {
    cli::svg_heatmap(os, "First-return symbol a1", a1, g, g, r0 - half, r0 + half, xi0 - half, xi0 + half);
  };
  return res;
}

// classify

const char* motion_label_name(int m) {
  switch (m) {
    case 0: return "H-candidate";
    case 1: return "P-candidate";
    case 2: return "B-candidate";
    case 3: return "OS-candidate";
    default: return "unresolved";
  }
}

Result cmd_classify(const RunConfig& c) {
  if (std::isnan(c.r0)) throw Failure{kExitUsage, "classify needs --r0"};
  Ctx ctx = make_context(c);
  std::vector<int> dirs;
  if (c.both) dirs = {-1, 1};
  else if (c.direction == "future") dirs = {1};
  else if (c.direction == "past") dirs = {-1};
  else throw Failure{kExitUsage, "--direction must be past or future"};
  Result res{Table({"direction", "motion", "final_r", "final_h", "max_r", "min_r", "returns", "s_used", "horizon",
                    "reason"})};
  for (int d : dirs) {
    rei3bp_motion_label m{};
    ctx.check(rei3bp_classify(ctx.p, c.r0, c.xi0, d, &m), "classify");
    res.table.add({d < 0 ? "past" : "future", motion_label_name(m.motion), m.final_r, m.final_h, m.max_r, m.min_r,
                   m.returns, m.s_used, m.horizon, std::string(m.reason)});
  }
  return res;
}

// sequence

Result cmd_sequence(const RunConfig& c) {
  if (std::isnan(c.r0)) throw Failure{kExitUsage, "sequence needs --r0"};
  if (c.n_forward < 0 || c.n_backward < 0) throw Failure{kExitUsage, "negative sequence length"};
  Ctx ctx = make_context(c);
  std::vector<long> fut(c.n_forward + 1), past(c.n_backward + 1);
  int nf = 0, np = 0, fe = 0, pe = 0;
  ctx.check(rei3bp_symbol_sequence(ctx.p, c.r0, c.xi0, c.n_forward, c.n_backward, fut.data(), &nf, &fe, past.data(),
                                   &np, &pe),
            "symbol_sequence");
  static const char* ends[] = {"FINITE", "ESCAPED", "HORIZON"};
  Result res{Table({"n", "a_n"})};
  for (int i = np - 1; i >= 0; --i) res.table.add({-i, past[i]});
  for (int i = 0; i < nf; ++i) res.table.add({i + 1, fut[i]});
  res.extra.emplace_back("past_end", ends[pe]);
  res.extra.emplace_back("future_end", ends[fe]);
  return res;
}

// section

Result cmd_section(const RunConfig& c) {
  Ctx ctx = make_context(c);
  std::vector<int> sides;
  if (c.side == "both") sides = {1, 0};
  else if (c.side == "unstable") sides = {1};
  else if (c.side == "stable") sides = {0};
  else throw Failure{kExitUsage, "--side must be stable, unstable or both"};
  Result res{Table({"side", "i", "label", "v_tag", "r", "y"})};
  std::vector<cli::Series> series;
  for (int sd : sides) {
    rei3bp_curve* cv = nullptr;
    ctx.check(rei3bp_trace_section_curve(ctx.p, c.xi0, c.v_lo, c.v_hi, sd, &cv), "trace_section_curve");
    std::unique_ptr<rei3bp_curve, decltype(&rei3bp_curve_destroy)> guard(cv, rei3bp_curve_destroy);
    cli::Series s{sd ? "unstable" : "stable", sd ? "#d62728" : "#1f77b4", {}, {}, false};
    for (size_t i = 0; i < rei3bp_curve_size(cv); ++i) {
      double r = 0, y = 0, lab = 0, tag = 0;
      rei3bp_curve_point(cv, i, &r, &y, &lab, &tag);
      res.table.add({sd ? "unstable" : "stable", static_cast<long>(i), lab, tag, r, y});
      s.x.push_back(r);
      s.y.push_back(y);
    }
    series.push_back(s);
  }
  res.svg = [series](std::ostream& os) { cli::svg_plot(os, "Section curves", "r", "y", series); };
  return res;
}

int run(const RunConfig& c) {
  Result res = [&] {
    if (c.command == "melnikov") return cmd_melnikov(c);
    if (c.command == "splitting") return cmd_splitting(c);
    if (c.command == "homoclinics") return cmd_homoclinics(c);
    if (c.command == "scan") return cmd_scan(c);
    if (c.command == "classify") return cmd_classify(c);
    if (c.command == "sequence") return cmd_sequence(c);
    if (c.command == "section") return cmd_section(c);
    throw Failure{kExitUsage, "unknown command " + c.command};
  }();
  Ctx ctx = make_context(c);
  Header header = make_header(c, ctx);
  header.insert(header.end(), res.extra.begin(), res.extra.end());
  std::string fmt = c.format;
  if (fmt == "auto") fmt = c.command == "classify" ? "json" : "csv";
  open_output(c.output, [&](std::ostream& os) {
    if (fmt == "json") res.table.write_json(os, header, res.json_extra);
    else res.table.write_csv(os, header);
  });
  if (!c.svg.empty()) {
    if (!res.svg) throw Failure{kExitUsage, "command " + c.command + " has no plot"};
    open_output(c.svg, res.svg);
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  try {
    c.lib = library_params();
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }

  CLI::App app{"rei3bp: Melnikov harmonics, manifold splitting and first-return symbols near the parabolic orbit"};
  app.set_version_flag("--version", std::string("rei3bp ") + rei3bp_version());
  app.set_config("--config", "", "flat key=value file; keys are flag names, flags override the file");
  app.require_subcommand(1, 1);

  app.add_option("--G", c.G, "angular momentum G")->capture_default_str();
  auto* glist = app.add_option("--G-list", c.G_list, "G sweep as a:b:step or a,b,c");
  app.add_option("--vstar", c.v_star, "homoclinic time of the radius section r = r_h(v*)")->capture_default_str();
  app.add_option("--xi0", c.xi0, "section phase / point phase")->capture_default_str();
  app.add_option("--r0", c.r0, "pericentre radius of a Sigma+ point");
  app.add_option("--sweep-xi0", c.sweep_xi0, "number of xi0 samples over one period");
  app.add_flag("--fit", c.fit, "fit log d_peak against -G^3/3 + log(G)/2");
  app.add_option("--lmax", c.lmax, "number of harmonics (0: adaptive)")->capture_default_str();
  app.add_option("--kmax", c.kmax, "terms per harmonic (0: adaptive)")->capture_default_str();
  app.add_flag("--check-direct", c.check_direct, "compare the series with direct quadrature");
  app.add_option("--box", c.box, "side length of the scan box")->capture_default_str();
  app.add_option("--grid", c.grid, "scan points per side")->capture_default_str();
  app.add_option("--root", c.root, "homoclinic root used as scan centre")->capture_default_str();
  app.add_flag("--both-directions", c.both, "classify the past and the future");
  app.add_option("--direction", c.direction, "past or future")->capture_default_str();
  app.add_option("--n-forward", c.n_forward, "future symbols")->capture_default_str();
  app.add_option("--n-backward", c.n_backward, "past symbols")->capture_default_str();
  app.add_option("--side", c.side, "stable, unstable or both")->capture_default_str();
  app.add_option("--v-lo", c.v_lo, "lowest curve label")->capture_default_str();
  app.add_option("--v-hi", c.v_hi, "highest curve label")->capture_default_str();
  app.add_flag("--unperturbed", c.unperturbed, "drop the perturbation (integrable Kepler limit)");
  app.add_option("--format", c.format, "csv, json or auto")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  app.add_option("-o,--output", c.output, "table output path (default stdout)");
  app.add_option("--svg", c.svg, "write an SVG plot to this path");
  for (auto& p : c.lib) {
    auto* o = app.add_option(std::string("--") + p.flag, p.value, std::string("library parameter ") + p.key)
                  ->capture_default_str();
    if (std::string(p.key) == "tol_ode") o->envname("REI3BP_TOL");
    if (std::string(p.key) == "jobs") o->envname("REI3BP_JOBS");
  }

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"melnikov", "Melnikov harmonics L_l and error estimates"},
      {"splitting", "measured splitting distance d(xi0) and the exponential law"},
      {"homoclinics", "zeros of d(xi0) with slopes"},
      {"scan", "first-return symbol map near a homoclinic point"},
      {"classify", "final-motion labels of a Sigma+ point"},
      {"sequence", "symbol sequence of a Sigma+ point"},
      {"section", "stable and unstable section curves"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    sub->callback([&c, n = std::string(name)] { c.command = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  c.have_G_list = glist->count() > 0;

  try {
    return run(c);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
