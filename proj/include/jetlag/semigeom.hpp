#pragma once

#include <vector>

#include "jetlag/expr.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag::semigeom {

enum class CoordKind { Temporal, Spatial };

// ---------------------------------------------------------------------------
// Jet-level kernel. Works on metric components given as jets in an arbitrary
// ambient variable set; `vars` names the jet variable backing each of the
// `dim` coordinate directions. Each differentiation step lowers the jet
// order by one, so order-3 components yield curvature with first
// derivatives.
// ---------------------------------------------------------------------------

struct MetricJets {
  int dim = 0;
  std::vector<int> vars;
  NdArray<Jet> comp;  // (i,j)
  NdArray<Jet> inv;   // (i,j)
};

// Inverts a square jet matrix by Gauss-Jordan elimination, pivoting on
// constant terms. Throws SingularPointError when the constant-term matrix
// is singular.
NdArray<Jet> invert_jet_matrix(const NdArray<Jet>& m);

MetricJets metric_jets(NdArray<Jet> comp, std::vector<int> vars);

// Levi-Civita connection coefficients gamma(k,i,j), one order below comp.
NdArray<Jet> christoffel_jets(const MetricJets& m);

struct CurvatureJets {
  NdArray<Jet> riemann;   // (l,i,j,k): R^l_{ijk}, antisymmetric in j,k
  NdArray<Jet> ricci;     // (i,j) = R^m_{imj}
  Jet scalar;             // inv^{ij} ricci_{ij}
  NdArray<Jet> einstein;  // ricci - (scalar/2) comp
};

CurvatureJets curvature_jets(const MetricJets& m, const NdArray<Jet>& gamma);

// Covariant divergence of the mixed Einstein tensor, per lower index.
// Identically zero for Levi-Civita connections (contracted Bianchi).
std::vector<double> bianchi_residual_jets(const MetricJets& m, const NdArray<Jet>& gamma,
                                          const CurvatureJets& curv);

// ---------------------------------------------------------------------------
// Expression-level interface for a standalone metric. Entries use variables
// t1..t_dim (Temporal) or x1..x_dim (Spatial).
// ---------------------------------------------------------------------------

struct MetricEval {
  int dim = 0;
  std::vector<double> point;
  NdArray<double> components;  // (i,j)
  NdArray<double> inverse;     // (i,j)
  NdArray<double> d1;          // (k,i,j)       = d_k g_ij
  NdArray<double> d2;          // (k,l,i,j)
  NdArray<double> d3;          // (k,l,m,i,j)
};

struct ChristoffelEval {
  int dim = 0;
  NdArray<double> gamma;  // (k,i,j)
  NdArray<double> d1;     // (l,k,i,j)    = d_l gamma^k_ij
  NdArray<double> d2;     // (l,m,k,i,j)
};

struct CurvatureEval {
  int dim = 0;
  NdArray<double> riemann;   // (l,i,j,k)
  NdArray<double> ricci;     // (i,j)
  double scalar = 0.0;       // unit 2-sphere convention: +2
  NdArray<double> einstein;  // (i,j)
};

MetricJets metric_jets_at(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                          const std::vector<double>& point, int order = 3);

MetricEval metric_eval(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                       const std::vector<double>& point);

ChristoffelEval christoffel(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                            const std::vector<double>& point);

CurvatureEval curvature(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                        const std::vector<double>& point);

std::vector<double> contracted_bianchi_residual(const std::vector<ExprPtr>& metric, int dim,
                                                CoordKind kind, const std::vector<double>& point);

// Compares the curvature scalar of `metric` at the image point against the
// scalar of the pulled-back metric at `preimage_point`, where
// `coordinate_map` gives the old coordinates as expressions in the new ones
// (same variable names). Returns the absolute difference.
double scalar_invariance_check(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                               const std::vector<ExprPtr>& coordinate_map,
                               const std::vector<double>& preimage_point);

}  // namespace jetlag::semigeom
