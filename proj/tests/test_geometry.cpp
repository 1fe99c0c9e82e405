#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "jetlag/errors.hpp"
#include "jetlag/geometry.hpp"
#include "jetlag/model.hpp"

using namespace jetlag;
using namespace jetlag::geometry;

namespace {

const std::string kModels = JETLAG_MODELS_DIR;
const double kPi = std::acos(-1.0);

ModelDef load(const char* name) { return load_model_file(kModels + "/" + name + ".model"); }

}  // namespace

TEST_CASE("Lagrangian values") {
  // Flat with no potential: L = |v|^2.
  const ModelDef flat = load("flat");
  CHECK(lagrangian_at(flat, {{0.0}, {1.0, 2.0}, {3.0, 4.0}}) == doctest::Approx(25.0));

  // Rotational potential adds U_i v^i.
  const ModelDef lorentz = load("lorentz");
  // x = (1,2), v = (3,4): 25 + x2*3 - x1*4 = 25 + 6 - 4.
  CHECK(lagrangian_at(lorentz, {{0.0}, {1.0, 2.0}, {3.0, 4.0}}) == doctest::Approx(27.0));

  // Sphere kinetic term uses g.
  const ModelDef sphere = load("sphere");
  const double L = lagrangian_at(sphere, {{0.0}, {kPi / 4, 0.0}, {2.0, 3.0}});
  CHECK(L == doctest::Approx(4.0 + 0.5 * 9.0).epsilon(1e-12));
}

TEST_CASE("vertical metric equals half the velocity Hessian of L") {
  for (const char* name : {"flat", "lorentz", "sphere_u", "curved_time", "polyquartic"}) {
    const ModelDef m = load(name);
    JetPoint pt;
    pt.t.assign(static_cast<std::size_t>(m.p), 0.7);
    pt.x.assign(static_cast<std::size_t>(m.n), 0.6);
    pt.v.assign(static_cast<std::size_t>(m.p) * m.n, 0.25);
    const auto vm = vertical_metric(m, pt);
    CHECK(vm.max_discrepancy < 1e-8);
  }
  // Block values on the sphere: h^{11} g_ij.
  const ModelDef sphere = load("sphere");
  const auto vm = vertical_metric(sphere, {{0.0}, {kPi / 4, 0.1}, {1.0, 1.0}});
  CHECK(vm.block(0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(vm.block(0, 0, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vm.block(0, 0, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("potential curl hand values") {
  const ModelDef lt = load("lorentz_t");
  const auto pc = potential_curl(lt, {2.0}, {0.4, -0.9});
  // U_1 = t1 x2, U_2 = -t1 x1: curl_12 = 2 t1.
  CHECK(pc.curl(0, 0, 1) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(pc.curl(0, 1, 0) == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(pc.curl(0, 0, 0) == doctest::Approx(0.0));
  CHECK(pc.dt(0, 0, 0, 1) == doctest::Approx(2.0).epsilon(1e-13));
  for (const double v : pc.dx) CHECK(std::abs(v) < 1e-13);
  // Flat g: covariant x-derivative equals the plain one (zero here).
  for (const double v : pc.cov) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("spray on the flat model vanishes") {
  const ModelDef flat = load("flat");
  const auto sp = spray(flat, {{0.3}, {0.1, -0.2}, {0.5, 0.8}});
  for (const double v : sp.H) CHECK(v == 0.0);
  for (const double v : sp.G) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("rotational potential gives the magnetic acceleration") {
  // Euler-Lagrange for L = |v|^2 + U.v: 2 a_i = -curl_ij v^j, so the
  // acceleration -2(H+G) must equal (-v2, v1).
  const ModelDef lorentz = load("lorentz");
  const double v1 = 0.8, v2 = -0.4;
  const auto sp = spray(lorentz, {{0.0}, {0.3, 0.9}, {v1, v2}});
  CHECK(-2.0 * sp.G(0, 0, 0) == doctest::Approx(-v2).epsilon(1e-13));
  CHECK(-2.0 * sp.G(1, 0, 0) == doctest::Approx(v1).epsilon(1e-13));
  for (const double v : sp.H) CHECK(v == 0.0);
  CHECK(sp.script_g[0] == doctest::Approx(sp.G(0, 0, 0)));
}

TEST_CASE("sphere spray is the geodesic quadratic form") {
  const ModelDef sphere = load("sphere");
  const auto sp = spray(sphere, {{0.0}, {kPi / 4, 0.2}, {0.0, 1.0}});
  // G^(i) = (1/2) gamma^i_jk v^j v^k; gamma^1_22 = -sin cos = -1/2 here.
  CHECK(sp.G(0, 0, 0) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(sp.G(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("temporal spray components on curved time") {
  const ModelDef ct = load("curved_time");
  JetPoint pt{{2.0, 0.5}, {0.7, 0.2}, {1.0, 0.0, 0.0, 1.0}};
  const auto sp = spray(ct, pt);
  // H^(i)_(a)b = -(1/2) Gamma^c_ab(h) v^i_c with Gamma^1_22 = -2, Gamma^2_12 = 1/2.
  CHECK(sp.H(0, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sp.H(1, 0, 1) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(sp.H(1, 1, 0) == doctest::Approx(-0.25).epsilon(1e-12));
  const auto conn = nonlinear_connection(ct, pt);
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(conn.M(i, a, b) == doctest::Approx(2.0 * sp.H(i, a, b)).epsilon(1e-12));
}

TEST_CASE("nonlinear connection hand values") {
  const ModelDef lorentz = load("lorentz");
  const auto conn = nonlinear_connection(lorentz, {{0.0}, {0.2, -0.7}, {0.9, 0.1}});
  // N = (1/4) h g^{-1} curl with curl_12 = 2 (velocity-independent here).
  CHECK(conn.N(0, 0, 1) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(conn.N(1, 0, 0) == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(conn.N(0, 0, 0) == doctest::Approx(0.0));

  // The mutation hook scales exactly the potential term.
  GeometryOptions mutated;
  mutated.n_potential_factor = 0.0;
  const auto mut = nonlinear_connection(lorentz, {{0.0}, {0.2, -0.7}, {0.9, 0.1}}, mutated);
  CHECK(mut.N(0, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("nonlinear connection matches the spray derivative") {
  for (const char* name : {"flat", "lorentz", "sphere", "curved_time", "polyquartic"}) {
    const ModelDef m = load(name);
    JetPoint pt;
    pt.t.assign(static_cast<std::size_t>(m.p), 0.8);
    pt.x.assign(static_cast<std::size_t>(m.n), 0.7);
    pt.v.assign(static_cast<std::size_t>(m.p) * m.n, 0.4);
    CHECK(nonlinear_from_spray_check(m, pt) < 1e-8);
  }
}

TEST_CASE("Cartan connection blocks") {
  const ModelDef sphere = load("sphere");
  const auto cc = cartan_connection(sphere, {0.0}, {kPi / 4, 0.1});
  CHECK(cc.L(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(cc.L(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (const double v : cc.G) CHECK(v == 0.0);
  for (const double v : cc.C) CHECK(v == 0.0);

  const ModelDef ct = load("curved_time");
  const auto cct = cartan_connection(ct, {2.0, 0.5}, {0.7, 0.2});
  CHECK(cct.H(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(cct.H(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("torsion vanishes on flat models") {
  const ModelDef flat = load("flat");
  const auto tor = torsion(flat, {{0.1}, {0.2, 0.3}, {0.4, 0.5}});
  for (const double v : tor.R_tt) CHECK(std::abs(v) < 1e-14);
  for (const double v : tor.R_tj) CHECK(std::abs(v) < 1e-14);
  for (const double v : tor.R_ij) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("torsion hand values") {
  // Time-dependent potential: R_tj = -(1/4) d(curl)/dt with curl_12 = 2 t1.
  const ModelDef lt = load("lorentz_t");
  const auto tor = torsion(lt, {{0.5}, {0.3, 0.8}, {0.0, 0.0}});
  CHECK(tor.R_tj(0, 0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(tor.R_tj(1, 0, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));

  // Sphere: R_ij(m, mu, i, j) = R^m_ijk(g) v^k_mu; constant curvature form.
  const ModelDef sphere = load("sphere");
  const auto ts = torsion(sphere, {{0.0}, {kPi / 4, 0.2}, {0.0, 1.0}});
  CHECK(ts.R_ij(0, 0, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));  // g_22 v^2
  CHECK(ts.R_ij(1, 0, 0, 0) == doctest::Approx(-1.0).epsilon(1e-12));  // -g_11 v^2
}

TEST_CASE("curvature d-tensors are the two factor curvatures") {
  const ModelDef ct = load("curved_time");
  const auto [hc, gc] = curvature_d(ct, {1.3, 0.4}, {1.1, 0.2});
  for (const double v : hc.riemann) CHECK(std::abs(v) < 1e-10);  // diag(1, t1^2) is flat
  CHECK(gc.scalar == doctest::Approx(2.0).epsilon(1e-10));       // unit sphere factor
}

TEST_CASE("point validation") {
  const ModelDef flat = load("flat");
  CHECK_THROWS_AS(lagrangian_at(flat, {{0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(lagrangian_at(flat, {{0.0}, {0.0}, {0.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(lagrangian_at(flat, {{0.0}, {0.0, 0.0}, {0.0}}), ConfigError);
}
