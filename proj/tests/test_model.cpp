#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "jetlag/errors.hpp"
#include "jetlag/model.hpp"

using namespace jetlag;

namespace {
const std::string kModels = JETLAG_MODELS_DIR;
}

TEST_CASE("bundled models load") {
  for (const char* name : {"flat", "lorentz", "lorentz_t", "sphere", "sphere_u", "curved_time",
                           "polyquartic", "minkowski"}) {
    const ModelDef m = load_model_file(kModels + "/" + name + ".model");
    CHECK(m.name == name);
    CHECK(m.p >= 1);
    CHECK(m.n >= 1);
  }
}

TEST_CASE("flat model structure") {
  const ModelDef m = load_model_file(kModels + "/flat.model");
  CHECK(m.p == 1);
  CHECK(m.n == 2);
  CHECK(m.U[0] == nullptr);
  CHECK(m.F == nullptr);
  CHECK(m.probes.x[0].first == doctest::Approx(-1.0));
  CHECK(m.probes.x[0].second == doctest::Approx(1.0));
  // Off-diagonal entries default to zero expressions, not null.
  CHECK(m.g_at(0, 1) != nullptr);
  CHECK(print_expression(m.g_at(0, 1)) == print_expression(m.g_at(1, 0)));
}

TEST_CASE("sphere probe domain override") {
  const ModelDef m = load_model_file(kModels + "/sphere.model");
  CHECK(m.probes.x[0].first == doctest::Approx(0.4));
  CHECK(m.probes.x[0].second == doctest::Approx(2.7));
  CHECK(m.probes.x[1].first == doctest::Approx(-1.0));
}

TEST_CASE("symmetry: single triangle entry is mirrored") {
  const ModelDef m = load_model(R"(
[space]
p = 2
n = 1
name = tri
[temporal_metric]
h_1_1 = 2
h_2_2 = 2
h_1_2 = t1/4
[spatial_metric]
g_1_1 = 1
)");
  CHECK(print_expression(m.h_at(1, 0)) == print_expression(m.h_at(0, 1)));
}

TEST_CASE("symmetry conflict is rejected") {
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 2
n = 1
name = bad
[temporal_metric]
h_1_1 = 2
h_2_2 = 2
h_1_2 = t1
h_2_1 = 2*t1
[spatial_metric]
g_1_1 = 1
)"),
                  ModelError);
}

TEST_CASE("autonomy violations are rejected") {
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 1
n = 1
name = bad
[temporal_metric]
h_1_1 = 1
[spatial_metric]
g_1_1 = 1 + t1^2
)"),
                  ModelError);
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 1
n = 1
name = bad
[temporal_metric]
h_1_1 = 1 + x1^2
[spatial_metric]
g_1_1 = 1
)"),
                  ModelError);
}

TEST_CASE("degenerate metrics are rejected") {
  // Missing g_2_2 leaves a zero row: det g = 0 at every probe point.
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 1
n = 2
name = bad
[temporal_metric]
h_1_1 = 1
[spatial_metric]
g_1_1 = 1
)"),
                  ModelError);
}

TEST_CASE("parse diagnostics") {
  CHECK_THROWS_AS(load_model("p = 1\n"), ParseError);  // entry before any section
  CHECK_THROWS_AS(load_model("[space\n"), ParseError);
  CHECK_THROWS_AS(load_model("[space]\np = 1\nn = 1\n[nonsense]\nq = 2\n"), ParseError);
  CHECK_THROWS_AS(load_model("[space]\np = 1\nn = 1\n[temporal_metric]\nbogus = 1\n"), ParseError);
  try {
    load_model("[space]\np = 1\nn = 1\n[temporal_metric]\nh_1_1 = 1 +\n[spatial_metric]\ng_1_1 = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 5);  // reported against the model file, not the expression
  }
  CHECK_THROWS_AS(load_model("[space]\nn = 1\n[temporal_metric]\nh_1_1 = 1\n[spatial_metric]\ng_1_1 = 1\n"),
                  ModelError);  // p missing
  CHECK_THROWS_AS(load_model_file(kModels + "/does_not_exist.model"), ModelError);
}

TEST_CASE("out-of-range indices are rejected") {
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 1
n = 1
name = bad
[temporal_metric]
h_1_1 = 1
h_2_2 = 1
[spatial_metric]
g_1_1 = 1
)"),
                  ModelError);
  CHECK_THROWS_AS(load_model(R"(
[space]
p = 1
n = 1
name = bad
[temporal_metric]
h_1_1 = 1
[spatial_metric]
g_1_1 = 1
[potential]
U_2_1 = x1
)"),
                  ModelError);
}
