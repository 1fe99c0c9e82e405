#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>

#include "jetlag/checks.hpp"
#include "jetlag/errors.hpp"
#include "jetlag/model.hpp"

using namespace jetlag;
using namespace jetlag::checks;

namespace {
const std::string kModels = JETLAG_MODELS_DIR;
ModelDef load(const char* name) { return load_model_file(kModels + "/" + name + ".model"); }
}  // namespace

TEST_CASE("every bundled model passes the identity suite") {
  CheckOptions opts;
  opts.samples = 25;
  for (const char* name : {"flat", "lorentz", "lorentz_t", "sphere", "sphere_u", "curved_time",
                           "polyquartic", "minkowski"}) {
    const auto suite = run_check_suite(load(name), opts);
    INFO("model ", name, " max residual ", suite.max_residual);
    CHECK(suite.passed);
    CHECK(suite.max_residual < opts.tol);
  }
}

TEST_CASE("the suite lists each identity exactly once") {
  CheckOptions opts;
  opts.samples = 2;
  const auto suite = run_check_suite(load("flat"), opts);
  std::set<std::string> names;
  for (const auto& r : suite.results) {
    CHECK(names.insert(r.name).second);
    CHECK(r.samples == 2);
  }
  CHECK(names.size() == 17);
  CHECK(names.count("maxwell_eq1") == 1);
  CHECK(names.count("conservation_spatial") == 1);
  CHECK(names.count("nonlinear_N_vs_spray_derivative") == 1);
}

TEST_CASE("identical seeds reproduce identical residuals") {
  CheckOptions opts;
  opts.samples = 10;
  opts.seed = 123;
  const auto a = run_check_suite(load("polyquartic"), opts);
  const auto b = run_check_suite(load("polyquartic"), opts);
  REQUIRE(a.results.size() == b.results.size());
  for (std::size_t k = 0; k < a.results.size(); ++k) {
    CHECK(a.results[k].max_residual == b.results[k].max_residual);
    CHECK(a.results[k].worst.t == b.results[k].worst.t);
    CHECK(a.results[k].worst.v == b.results[k].worst.v);
  }
}

TEST_CASE("flat models come out exactly zero on the curvature identities") {
  CheckOptions opts;
  opts.samples = 10;
  const auto suite = run_check_suite(load("flat"), opts);
  for (const auto& r : suite.results) {
    if (r.name == "conservation_temporal" || r.name == "conservation_spatial" ||
        r.name == "first_bianchi_g" || r.name == "maxwell_eq1") {
      CHECK(r.max_residual == 0.0);
    }
  }
}

TEST_CASE("removing the quarter factor from N makes the suite fail loudly") {
  CheckOptions opts;
  opts.samples = 10;
  opts.geometry.n_potential_factor = 0.0;
  const auto suite = run_check_suite(load("lorentz_t"), opts);
  CHECK_FALSE(suite.passed);
  double maxwell1 = 0.0;
  for (const auto& r : suite.results)
    if (r.name == "maxwell_eq1") maxwell1 = r.max_residual;
  CHECK(maxwell1 > 1e-3);
}

TEST_CASE("option validation") {
  CheckOptions opts;
  opts.samples = 0;
  CHECK_THROWS_AS(run_check_suite(load("flat"), opts), ConfigError);
  opts.samples = 1;
  opts.tol = 0.0;
  CHECK_THROWS_AS(run_check_suite(load("flat"), opts), ConfigError);
  opts.tol = 1e-8;
  opts.einstein_K = 1.0;
  CHECK_THROWS_AS(run_check_suite(load("flat"), opts), ConfigError);
}
