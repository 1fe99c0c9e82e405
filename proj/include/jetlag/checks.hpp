#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jetlag/fieldeqs.hpp"
#include "jetlag/geometry.hpp"

namespace jetlag::checks {

using geometry::GeometryOptions;
using geometry::JetPoint;

struct IdentityResult {
  std::string name;
  int samples = 0;
  double max_residual = 0.0;
  JetPoint worst;  // sample realizing the max
};

struct CheckOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  GeometryOptions geometry;  // mutation hook plumbed through to N-derived routes
  double einstein_K = 2.0;   // second K for the linearity check (first is 1)
};

struct SuiteResult {
  std::string model_name;
  std::vector<IdentityResult> results;
  double max_residual = 0.0;
  bool passed = false;  // max_residual < options tol
};

// Draws jet points from the model's probe domain (velocities from [-1,1])
// with a seeded generator and evaluates every structural identity of the
// construction at each.
SuiteResult run_check_suite(const ModelDef& model, const CheckOptions& opts = {});

}  // namespace jetlag::checks
