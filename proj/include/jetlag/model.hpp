#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jetlag/expr.hpp"

namespace jetlag {

// Per-coordinate sampling intervals used for nondegeneracy probes and for
// randomized identity checks. Defaults to [-1, 1] everywhere; model files
// override individual coordinates (e.g. to keep clear of chart
// singularities like sphere poles).
struct ProbeDomain {
  std::vector<std::pair<double, double>> t;  // size p
  std::vector<std::pair<double, double>> x;  // size n
};

// The defining quadruple of the space: temporal metric h(t), spatial
// metric g(x), distinguished potential U(t,x), scalar F(t,x). Immutable
// after load; matrices are stored fully symmetrized, absent entries are
// null (meaning 0).
struct ModelDef {
  int p = 0;
  int n = 0;
  std::string name;
  std::string description;
  std::vector<ExprPtr> h;  // p*p, row-major
  std::vector<ExprPtr> g;  // n*n, row-major
  std::vector<ExprPtr> U;  // p*n, U[alpha*n + i]; null => 0
  ExprPtr F;               // null => 0
  ProbeDomain probes;

  const ExprPtr& h_at(int a, int b) const { return h[static_cast<std::size_t>(a) * p + b]; }
  const ExprPtr& g_at(int i, int j) const { return g[static_cast<std::size_t>(i) * n + j]; }
  const ExprPtr& U_at(int a, int i) const { return U[static_cast<std::size_t>(a) * n + i]; }
};

// Parses the sectioned model file format and validates symmetry, autonomy
// (h free of x, g free of t), and nondegeneracy of both metrics at 8
// pseudo-random probe points drawn with a fixed seed from the probe domain.
ModelDef load_model(const std::string& document);

ModelDef load_model_file(const std::string& path);

}  // namespace jetlag
