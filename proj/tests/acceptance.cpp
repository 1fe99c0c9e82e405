// Acceptance gate: ten end-to-end criteria, one line of output each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "jetlag/checks.hpp"
#include "jetlag/dynamics.hpp"
#include "jetlag/fieldeqs.hpp"
#include "jetlag/geometry.hpp"
#include "jetlag/model.hpp"
#include "jetlag/semigeom.hpp"

using namespace jetlag;

namespace {

const std::string kModels = JETLAG_MODELS_DIR;
const double kPi = std::acos(-1.0);
const char* kAllModels[] = {"flat",        "lorentz",     "lorentz_t", "sphere",
                            "sphere_u",    "curved_time", "polyquartic", "minkowski"};

int failures = 0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void report(int criterion, bool ok, const std::string& what) {
  std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  if (!ok) ++failures;
}

ModelDef load(const char* name) { return load_model_file(kModels + "/" + name + ".model"); }

geometry::JetPoint sample_point(const ModelDef& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  geometry::JetPoint pt;
  for (const auto& iv : m.probes.t) pt.t.push_back(iv.first + (iv.second - iv.first) * unit(rng));
  for (const auto& iv : m.probes.x) pt.x.push_back(iv.first + (iv.second - iv.first) * unit(rng));
  for (int k = 0; k < m.p * m.n; ++k) pt.v.push_back(2.0 * unit(rng) - 1.0);
  return pt;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

dynamics::DiscreteMap curve(double lo, double hi, int nodes, double (*f1)(double),
                            double (*f2)(double)) {
  dynamics::DiscreteMap m;
  m.p = 1;
  m.n = 2;
  m.lo = {lo};
  m.hi = {hi};
  m.nodes = {nodes};
  for (int k = 0; k < nodes; ++k) {
    const double t = lo + (hi - lo) * k / (nodes - 1);
    m.values.push_back(f1(t));
    m.values.push_back(f2(t));
  }
  return m;
}

// 1. Closed-form nonlinear connection vs. the finite-difference velocity
//    derivative of the spray scalar, 100 points over four models.
void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (const char* name : {"flat", "lorentz", "sphere", "curved_time"}) {
    const ModelDef m = load(name);
    for (int s = 0; s < 25; ++s)
      worst = std::max(worst, geometry::nonlinear_from_spray_check(m, sample_point(m, rng)));
  }
  const double dt = seconds_since(t0);
  report(1, worst < 1e-6 && dt < 5.0,
         "N matches d(script G)/dv: max dev " + fmt(worst) + ", " +
             fmt(dt) + " s");
}

// 2. Definitional deflection tensors equal their closed forms.
void criterion2() {
  double worst = 0.0;
  std::mt19937_64 rng(2);
  for (const char* name : kAllModels) {
    const ModelDef m = load(name);
    for (int s = 0; s < 5; ++s) {
      const auto pt = sample_point(m, rng);
      const auto de = fieldeqs::deflections(m, pt);
      worst = std::max(worst, de.route_deviation);
      for (const double v : de.Dbar) worst = std::max(worst, std::abs(v));
      const auto base = geometry::base_eval(m, pt.t, pt.x, 1);
      for (int i = 0; i < m.n; ++i)
        for (int a = 0; a < m.p; ++a)
          for (int b = 0; b < m.p; ++b)
            for (int j = 0; j < m.n; ++j) {
              worst = std::max(worst, std::abs(de.d_vert(i, a, b, j) -
                                               (i == j && a == b ? 1.0 : 0.0)));
              worst = std::max(worst, std::abs(de.d_low(a, b, i, j) -
                                               base.hinv(a, b).value() * base.g(i, j).value()));
            }
    }
  }
  report(2, worst < 1e-10, "deflection tensors, both routes: max dev " + fmt(worst));
}

// 3. Maxwell-type equations on five+ models plus the hand-derived case.
void criterion3() {
  double worst = 0.0;
  std::mt19937_64 rng(3);
  for (const char* name : {"flat", "lorentz", "lorentz_t", "sphere", "sphere_u", "curved_time",
                           "polyquartic"}) {
    const ModelDef m = load(name);
    for (int s = 0; s < 15; ++s) {
      const auto mr = fieldeqs::maxwell_residuals(m, sample_point(m, rng));
      worst = std::max({worst, mr.eq1, mr.eq2, mr.eq3});
    }
  }
  const ModelDef lt = load("lorentz_t");
  const auto hand = fieldeqs::maxwell_residuals(lt, {{0.9}, {0.2, -0.6}, {0.5, 0.3}});
  const auto f1 = fieldeqs::em_tensor(lt, {1.0}, {0.2, -0.6});
  const bool hand_ok = hand.eq1 < 1e-12 && std::abs(f1.F(0, 0, 1) + 0.5) < 1e-12;
  report(3, worst < 1e-8 && hand_ok,
         "Maxwell equations: max residual " + fmt(worst) +
             ", hand case F_12 = -1/2 at t=1");
}

// 4. Conservation laws, including curved polynomial metrics; exact on flat.
void criterion4() {
  double worst = 0.0;
  std::mt19937_64 rng(4);
  for (const char* name : {"polyquartic", "curved_time", "sphere_u", "minkowski"}) {
    const ModelDef m = load(name);
    for (int s = 0; s < 25; ++s) {
      const auto pt = sample_point(m, rng);
      const auto cr = fieldeqs::conservation_residuals(m, pt.t, pt.x);
      for (const double v : cr.temporal) worst = std::max(worst, std::abs(v));
      for (const double v : cr.spatial) worst = std::max(worst, std::abs(v));
      for (const double v : cr.temporal_tilde) worst = std::max(worst, std::abs(v));
      for (const double v : cr.spatial_tilde) worst = std::max(worst, std::abs(v));
    }
  }
  const ModelDef flat = load("flat");
  const auto cf = fieldeqs::conservation_residuals(flat, {0.3}, {0.2, -0.4});
  double flat_worst = 0.0;
  for (const double v : cf.temporal) flat_worst = std::max(flat_worst, std::abs(v));
  for (const double v : cf.spatial) flat_worst = std::max(flat_worst, std::abs(v));
  report(4, worst < 1e-8 && flat_worst == 0.0,
         "conservation laws: max residual " + fmt(worst) + ", flat exactly 0");
}

// 5. Static sphere stress-energy worked case.
void criterion5() {
  const ModelDef sphere = load("sphere");
  const std::vector<double> x = {kPi / 3, 0.2};
  const auto ein = fieldeqs::einstein_blocks(sphere, {0.0}, x, 1.0);
  const auto me = semigeom::metric_eval(sphere.g, 2, semigeom::CoordKind::Spatial, x);
  double worst = std::abs(ein.T_tt(0, 0) + 1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      worst = std::max(worst, std::abs(ein.T_xx(i, j)));
      worst = std::max(worst, std::abs(ein.T_vv(0, 0, i, j) + me.components(i, j)));
      worst = std::max(worst, std::abs(ein.Ttilde_xx(i, j)));
    }
  worst = std::max(worst, std::abs(ein.Ttilde_tt(0, 0)));
  report(5, worst < 1e-10,
         "sphere stress-energy: T_11 = -1, T_ij = 0, vertical -g_ij, reduced blocks 0");
}

// 6. Trajectory dynamics: closed orbit, equator geodesic, energy drift.
void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelDef lorentz = load("lorentz");
  const auto orbit =
      dynamics::integrate_extremal(lorentz, {0.0, 0.0}, {1.0, 0.0}, 0.0, 2.0 * kPi, 6283);
  const double orbit_time = seconds_since(t0);
  const double ret =
      std::max(std::abs(orbit.x.back()[0]), std::abs(orbit.x.back()[1]));

  const ModelDef sphere = load("sphere");
  const auto eq =
      dynamics::integrate_extremal(sphere, {kPi / 2, 0.0}, {0.0, 1.0}, 0.0, kPi, 10000);
  double colat = 0.0;
  for (const auto& xs : eq.x) colat = std::max(colat, std::abs(xs[0] - kPi / 2));
  const auto tilted =
      dynamics::integrate_extremal(sphere, {kPi / 2, 0.0}, {0.3, 1.0}, 0.0, 2.0, 10000);

  report(6,
         ret < 1e-6 && orbit_time < 1.0 && colat < 1e-7 && tilted.energy_drift >= 0.0 &&
             tilted.energy_drift < 1e-7,
         "dynamics: orbit return " + fmt(ret) + " in " + fmt(orbit_time) +
             " s, equator dev " + fmt(colat) + ", energy drift " +
             fmt(tilted.energy_drift));
}

// 7. Action quadrature and variational stationarity.
void criterion7() {
  const ModelDef flat = load("flat");
  const auto quad = curve(0.0, 1.0, 401, [](double t) { return t * t; },
                          [](double) { return 0.0; });
  const double a = dynamics::action(flat, quad).value;

  const ModelDef sphere = load("sphere");
  const auto equator = curve(0.0, kPi, 201, [](double) { return kPi / 2; },
                             [](double t) { return t; });
  const auto eta = curve(0.0, kPi, 201, [](double t) { return std::sin(t); },
                         [](double t) { return std::sin(2.0 * t); });
  const auto var = dynamics::variational_check(sphere, equator, eta, {1e-2, 1e-3, 1e-4});

  report(7, std::abs(a - 4.0 / 3.0) < 1e-4 && var.fitted_order >= 1.9,
         "action = " + fmt(a) + " (4/3 within 1e-4), first-variation order " +
             fmt(var.fitted_order));
}

// 8. Curvature kernel oracles and derivative cross-check.
void criterion8() {
  const auto sphere_g = std::vector<ExprPtr>{
      parse_expression("1", 0, 2), parse_expression("0", 0, 2), parse_expression("0", 0, 2),
      parse_expression("sin(x1)^2", 0, 2)};
  const auto cv = semigeom::curvature(sphere_g, 2, semigeom::CoordKind::Spatial, {1.1, 0.3});
  const bool scalar_ok = std::abs(cv.scalar - 2.0) < 1e-10;

  const auto polar = std::vector<ExprPtr>{
      parse_expression("1", 0, 2), parse_expression("0", 0, 2), parse_expression("0", 0, 2),
      parse_expression("x1^2", 0, 2)};
  const auto pv = semigeom::curvature(polar, 2, semigeom::CoordKind::Spatial, {2.0, 0.7});
  double flat_worst = 0.0;
  for (const double v : pv.riemann) flat_worst = std::max(flat_worst, std::abs(v));

  // Exact Christoffel derivatives against central finite differences.
  const double step = 1e-5;
  double rel = 0.0;
  const auto ch = semigeom::christoffel(sphere_g, 2, semigeom::CoordKind::Spatial, {1.1, 0.3});
  const auto chp = semigeom::christoffel(sphere_g, 2, semigeom::CoordKind::Spatial,
                                         {1.1 + step, 0.3});
  const auto chm = semigeom::christoffel(sphere_g, 2, semigeom::CoordKind::Spatial,
                                         {1.1 - step, 0.3});
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double fd = (chp.gamma(k, i, j) - chm.gamma(k, i, j)) / (2 * step);
        const double ad = ch.d1(0, k, i, j);
        const double scale = std::max(1.0, std::abs(fd));
        rel = std::max(rel, std::abs(ad - fd) / scale);
      }
  report(8, scalar_ok && flat_worst < 1e-10 && rel < 1e-5,
         "curvature kernel: sphere scalar 2, polar-flat Riemann " + fmt(flat_worst) +
             ", derivative cross-check rel " + fmt(rel));
}

// 9. Mutation sensitivity: without the 1/4 potential factor in N the suite
//    must fail through the temporal Maxwell equation.
void criterion9() {
  checks::CheckOptions opts;
  opts.samples = 20;
  opts.geometry.n_potential_factor = 0.0;
  const auto suite = checks::run_check_suite(load("lorentz_t"), opts);
  double maxwell1 = 0.0;
  for (const auto& r : suite.results)
    if (r.name == "maxwell_eq1") maxwell1 = r.max_residual;
  report(9, !suite.passed && maxwell1 > 1e-3,
         "mutated N: suite fails, Maxwell eq1 residual " + fmt(maxwell1));
}

// 10. Full identity suite on every bundled model, 100 samples, under 10 s.
void criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  bool all_passed = true;
  double worst = 0.0;
  checks::CheckOptions opts;  // 100 samples, tol 1e-8
  for (const char* name : kAllModels) {
    const auto suite = checks::run_check_suite(load(name), opts);
    all_passed = all_passed && suite.passed;
    worst = std::max(worst, suite.max_residual);
  }
  const double dt = seconds_since(t0);
  report(10, all_passed && dt < 10.0,
         "full check suite on 8 models: max residual " + fmt(worst) + ", " +
             fmt(dt) + " s");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
