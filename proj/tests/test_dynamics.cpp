#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jetlag/dynamics.hpp"
#include "jetlag/errors.hpp"
#include "jetlag/model.hpp"

using namespace jetlag;
using namespace jetlag::dynamics;

namespace {

const std::string kModels = JETLAG_MODELS_DIR;
const double kPi = std::acos(-1.0);

ModelDef load(const char* name) { return load_model_file(kModels + "/" + name + ".model"); }

DiscreteMap curve_map(double lo, double hi, int nodes,
                      const std::function<std::vector<double>(double)>& f) {
  DiscreteMap m;
  m.p = 1;
  m.lo = {lo};
  m.hi = {hi};
  m.nodes = {nodes};
  const auto first = f(lo);
  m.n = static_cast<int>(first.size());
  for (int k = 0; k < nodes; ++k) {
    const double t = lo + (hi - lo) * k / (nodes - 1);
    for (double xi : f(t)) m.values.push_back(xi);
  }
  return m;
}

}  // namespace

TEST_CASE("finite-difference stencils on a quadratic are exact inside") {
  const auto f = curve_map(0.0, 1.0, 11, [](double t) {
    return std::vector<double>{t * t, 3.0 * t};
  });
  // Interior: central first and second differences are exact for t^2.
  CHECK(f.d1({5}, 0, 0) == doctest::Approx(2.0 * 0.5).epsilon(1e-12));
  CHECK(f.d1({5}, 0, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.d2({5}, 0, 0, 0) == doctest::Approx(2.0).epsilon(1e-10));
  // Boundary: one-sided first-order values.
  CHECK(f.d1({0}, 0, 0) == doctest::Approx(0.1).epsilon(1e-12));   // (h^2-0)/h
  CHECK(f.d1({10}, 0, 0) == doctest::Approx(1.9).epsilon(1e-12));  // (1-0.81)/h
}

TEST_CASE("harmonic_rhs: magnetic force law, and p must be 1") {
  const ModelDef lorentz = load("lorentz");
  const auto a = harmonic_rhs(lorentz, {{0.0}, {0.2, 0.4}, {0.8, -0.3}});
  CHECK(a[0] == doctest::Approx(0.3).epsilon(1e-12));   // -v2
  CHECK(a[1] == doctest::Approx(0.8).epsilon(1e-12));   // v1
  const ModelDef ct = load("curved_time");
  CHECK_THROWS_AS(harmonic_rhs(ct, {{0.0, 0.0}, {0.5, 0.5}, {1, 0, 0, 1}}), ConfigError);
}

TEST_CASE("free particle on the flat model moves on an exact line") {
  const ModelDef flat = load("flat");
  const auto traj = integrate_extremal(flat, {0.1, -0.2}, {0.3, 0.4}, 0.0, 2.0, 200);
  for (std::size_t s = 0; s < traj.t.size(); ++s) {
    CHECK(traj.x[s][0] == doctest::Approx(0.1 + 0.3 * traj.t[s]).epsilon(1e-12));
    CHECK(traj.x[s][1] == doctest::Approx(-0.2 + 0.4 * traj.t[s]).epsilon(1e-12));
  }
  CHECK(traj.energy_drift >= 0.0);
  CHECK(traj.energy_drift < 1e-12);
}

TEST_CASE("rotational potential: circular orbit closes after one period") {
  const ModelDef lorentz = load("lorentz");
  const auto traj = integrate_extremal(lorentz, {0.0, 0.0}, {1.0, 0.0}, 0.0, 2.0 * kPi, 6283);
  CHECK(std::abs(traj.x.back()[0]) < 1e-6);
  CHECK(std::abs(traj.x.back()[1]) < 1e-6);
  CHECK(std::abs(traj.v.back()[0] - 1.0) < 1e-6);
  // Closed form x = (sin t, 1 - cos t) along the way.
  for (std::size_t s = 0; s < traj.t.size(); s += 500) {
    CHECK(traj.x[s][0] == doctest::Approx(std::sin(traj.t[s])).epsilon(1e-6));
    CHECK(traj.x[s][1] == doctest::Approx(1.0 - std::cos(traj.t[s])).epsilon(1e-6));
  }
}

TEST_CASE("sphere equator is an exact geodesic; energy is conserved") {
  const ModelDef sphere = load("sphere");
  const auto traj = integrate_extremal(sphere, {kPi / 2, 0.0}, {0.0, 1.0}, 0.0, kPi, 10000);
  double worst = 0.0;
  for (const auto& xs : traj.x) worst = std::max(worst, std::abs(xs[0] - kPi / 2));
  CHECK(worst < 1e-7);
  CHECK(traj.energy_drift >= 0.0);
  CHECK(traj.energy_drift < 1e-7);

  // A tilted geodesic also conserves g_ij v^i v^j.
  const auto tilted = integrate_extremal(sphere, {kPi / 2, 0.0}, {0.3, 1.0}, 0.0, 2.0, 10000);
  CHECK(tilted.energy_drift < 1e-7);
}

TEST_CASE("integration argument validation") {
  const ModelDef flat = load("flat");
  CHECK_THROWS_AS(integrate_extremal(flat, {0.0}, {1.0, 0.0}, 0.0, 1.0, 10), ConfigError);
  CHECK_THROWS_AS(integrate_extremal(flat, {0.0, 0.0}, {1.0, 0.0}, 0.0, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(integrate_extremal(flat, {0.0, 0.0}, {1.0, 0.0}, 1.0, 0.5, 10), ConfigError);
}

TEST_CASE("harmonic residual: affine maps on the flat model are exact") {
  const ModelDef flat = load("flat");
  const auto f = curve_map(0.0, 1.0, 21, [](double t) {
    return std::vector<double>{0.2 + 0.7 * t, -1.0 + 0.1 * t};
  });
  const auto res = harmonic_residual(flat, f);
  CHECK(res.max_abs < 1e-12);
  CHECK(res.residuals.dims() == std::vector<int>{19, 2});
}

TEST_CASE("harmonic residual of a resampled geodesic converges at second order") {
  const ModelDef sphere = load("sphere");
  auto residual_at = [&](int nodes) {
    const auto traj =
        integrate_extremal(sphere, {kPi / 2, 0.0}, {0.3, 1.0}, 0.0, 2.0, nodes - 1);
    return harmonic_residual(sphere, trajectory_to_map(traj, 2)).max_abs;
  };
  const double coarse = residual_at(101);
  const double fine = residual_at(401);
  CHECK(fine < 1e-3);
  // Central stencils: quartering the spacing divides the residual by ~16.
  CHECK(coarse / fine > 10.0);
  CHECK(coarse / fine < 22.0);
}

TEST_CASE("harmonic residual on a p=2 box: x1 = t1*t2 under diag(1,-1)") {
  const ModelDef mink = load("minkowski");
  DiscreteMap f;
  f.p = 2;
  f.n = 2;
  f.lo = {0.0, 0.0};
  f.hi = {1.0, 1.0};
  f.nodes = {41, 41};
  for (int i = 0; i < 41; ++i) {
    for (int j = 0; j < 41; ++j) {
      const double t1 = i / 40.0, t2 = j / 40.0;
      f.values.push_back(t1 * t2);  // x_11 = x_22 = 0: h-trace vanishes
      f.values.push_back(0.0);
    }
  }
  CHECK(harmonic_residual(mink, f).max_abs < 1e-9);
}

TEST_CASE("action of closed-form maps") {
  const ModelDef flat = load("flat");
  // Unit-speed line: L = 1 on [0,1].
  const auto line = curve_map(0.0, 1.0, 401, [](double t) {
    return std::vector<double>{t, 0.0};
  });
  CHECK(action(flat, line).value == doctest::Approx(1.0).epsilon(1e-12));

  // f(t) = t^2 e1: integral of 4t^2 = 4/3.
  const auto quad = curve_map(0.0, 1.0, 401, [](double t) {
    return std::vector<double>{t * t, 0.0};
  });
  const auto a = action(flat, quad);
  CHECK(a.value == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
  CHECK(std::abs(a.value - 4.0 / 3.0) < 1e-4);
  CHECK(a.quadrature == "trapezoid");
  CHECK(a.error_estimate > 0.0);
  CHECK(a.error_estimate < 1e-4);

  // Self-convergence against a 10x finer grid.
  const auto fine = curve_map(0.0, 1.0, 4001, [](double t) {
    return std::vector<double>{t * t, 0.0};
  });
  CHECK(std::abs(a.value - action(flat, fine).value) < 1e-5);
}

TEST_CASE("variational check: extremals are discrete critical points") {
  const std::vector<double> ladder = {1e-2, 1e-3, 1e-4};
  const ModelDef flat = load("flat");
  const auto line = curve_map(0.0, 1.0, 101, [](double t) {
    return std::vector<double>{t, 0.5 * t};
  });
  const auto eta = curve_map(0.0, 1.0, 101, [](double t) {
    return std::vector<double>{std::sin(kPi * t), std::sin(2.0 * kPi * t)};
  });
  const auto flat_var = variational_check(flat, line, eta, ladder);
  for (const double fv : flat_var.first_variation) CHECK(std::abs(fv) < 1e-9);

  const ModelDef sphere = load("sphere");
  const auto equator = curve_map(0.0, kPi, 201, [](double t) {
    return std::vector<double>{kPi / 2, t};
  });
  const auto eta_s = curve_map(0.0, kPi, 201, [](double t) {
    return std::vector<double>{std::sin(t), std::sin(2.0 * t)};
  });
  const auto var = variational_check(sphere, equator, eta_s, ladder);
  CHECK(var.fitted_order >= 1.9);
  CHECK(var.fitted_order <= 2.5);

  // A latitude circle is not a geodesic: the first variation stays O(1).
  const auto latitude = curve_map(0.0, kPi, 201, [](double t) {
    return std::vector<double>{1.0, t};
  });
  const auto bad = variational_check(sphere, latitude, eta_s, ladder);
  CHECK(std::abs(bad.first_variation.front()) > 1e-2);
}

TEST_CASE("variational check input validation") {
  const ModelDef flat = load("flat");
  const auto line = curve_map(0.0, 1.0, 51, [](double t) {
    return std::vector<double>{t, 0.0};
  });
  const auto bad_eta = curve_map(0.0, 1.0, 51, [](double t) {
    return std::vector<double>{1.0 + t, 0.0};  // nonzero at the ends
  });
  CHECK_THROWS_AS(variational_check(flat, line, bad_eta, {1e-2}), ConfigError);
  const auto wrong_grid = curve_map(0.0, 1.0, 41, [](double) {
    return std::vector<double>{0.0, 0.0};
  });
  CHECK_THROWS_AS(variational_check(flat, line, wrong_grid, {1e-2}), ConfigError);
  const auto ok_eta = curve_map(0.0, 1.0, 51, [](double t) {
    return std::vector<double>{std::sin(kPi * t), 0.0};
  });
  CHECK_THROWS_AS(variational_check(flat, line, ok_eta, {}), ConfigError);
  CHECK_THROWS_AS(variational_check(flat, line, ok_eta, {-1e-2}), ConfigError);
}

TEST_CASE("grids below five nodes per axis are rejected") {
  const ModelDef flat = load("flat");
  const auto tiny = curve_map(0.0, 1.0, 4, [](double t) {
    return std::vector<double>{t, 0.0};
  });
  CHECK_THROWS_AS(action(flat, tiny), ConfigError);
  CHECK_THROWS_AS(harmonic_residual(flat, tiny), ConfigError);
}

TEST_CASE("map tables round-trip") {
  std::ostringstream table;
  table << "# a straight line\n";
  for (int k = 0; k < 11; ++k) {
    const double t = k / 10.0;
    table << t << " " << 2 * t << " " << -t << "\n";
  }
  std::istringstream in(table.str());
  const auto f = read_map(in, 1, 2);
  CHECK(f.nodes == std::vector<int>{11});
  CHECK(f.lo[0] == doctest::Approx(0.0));
  CHECK(f.hi[0] == doctest::Approx(1.0));
  CHECK(f.value(5, 0) == doctest::Approx(1.0));
  CHECK(f.value(5, 1) == doctest::Approx(-0.5));

  // p = 2 requires a grid directive; row-major node order.
  std::ostringstream t2;
  t2 << "# grid 3 5\n";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j)
      t2 << i * 0.5 << " " << j * 0.25 << " " << i + j << " 0\n";
  std::istringstream in2(t2.str());
  const auto g = read_map(in2, 2, 2);
  CHECK(g.nodes == std::vector<int>{3, 5});
  CHECK(g.value(7, 0) == doctest::Approx(3.0));  // node (1,2)

  std::istringstream no_grid(t2.str().substr(t2.str().find('\n') + 1));
  CHECK_THROWS_AS(read_map(no_grid, 2, 2), ConfigError);

  std::istringstream short_row("0 1\n0.5 2\n1 3\n");
  CHECK_THROWS_AS(read_map(short_row, 1, 2), ParseError);

  std::istringstream uneven("0 1 1\n0.1 1 1\n0.9 1 1\n1 1 1\n");
  CHECK_THROWS_AS(read_map(uneven, 1, 2), ConfigError);
}

TEST_CASE("trajectory export and resampling") {
  const ModelDef flat = load("flat");
  const auto traj = integrate_extremal(flat, {0.0, 0.0}, {1.0, 2.0}, 0.0, 1.0, 10);
  std::ostringstream out;
  write_trajectory(out, traj);
  CHECK(out.str().find("# columns: t x1 x2 v1 v2") == 0);

  // A written trajectory reads back as a map (velocity columns ignored).
  std::istringstream in(out.str());
  const auto f = read_map(in, 1, 2);
  CHECK(f.nodes == std::vector<int>{11});
  CHECK(f.value(10, 1) == doctest::Approx(2.0).epsilon(1e-12));

  const auto g = trajectory_to_map(traj, 2);
  CHECK(g.nodes == std::vector<int>{11});
  CHECK(g.value(10, 0) == doctest::Approx(1.0).epsilon(1e-12));
}
