#pragma once

#include <utility>
#include <vector>

#include "jetlag/model.hpp"
#include "jetlag/semigeom.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag::geometry {

// A point (t^alpha, x^i, x^i_alpha) of the 1-jet space. Velocities are
// stored alpha-major: v[alpha * n + i].
struct JetPoint {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> v;

  double vel(int alpha, int i, int n) const { return v[static_cast<std::size_t>(alpha) * n + i]; }
};

// Mutation hook for the identity-suite sensitivity tests: the coefficient of
// the potential-curl term in the nonlinear connection N (0.25 in the correct
// build). Everything derived definitionally from N inherits the mutation;
// closed forms and torsion keep their own coefficients.
struct GeometryOptions {
  double n_potential_factor = 0.25;
};

// All jet-valued fields at a base point (t,x): metrics, Christoffels,
// curvatures, potential and its curl. Jets run over the p+n base variables
// (t first), at the given truncation order.
struct BaseEval {
  int p = 0;
  int n = 0;
  int order = 3;
  NdArray<Jet> h, hinv;                 // (alpha,beta), order
  NdArray<Jet> g, ginv;                 // (i,j), order
  NdArray<Jet> Hgam;                    // (gamma,alpha,beta), order-1
  NdArray<Jet> ggam;                    // (k,i,j), order-1
  semigeom::CurvatureJets hcurv, gcurv; // order-2
  NdArray<Jet> U;                       // (alpha,i), order; zero jets where absent
  Jet F;                                // order
  NdArray<Jet> Ucurl;                   // (alpha,i,j), order-1
  NdArray<Jet> UcurlCov;                // (alpha,i,j,k) = U^(a)_(i)j|k, order-2
  bool has_potential = false;
};

// Evaluates every (t,x)-dependent field once; order 3 gives the third
// derivatives needed by the conservation laws, order 2 suffices for
// dynamics. Curvature jets are only populated for order >= 2.
BaseEval base_eval(const ModelDef& model, const std::vector<double>& t,
                   const std::vector<double>& x, int order = 3);

void validate_point(const ModelDef& model, const JetPoint& pt);

// L = h^{ab} g_ij v^i_a v^j_b + U^(a)_(i) v^i_a + F.
double lagrangian_at(const ModelDef& model, const JetPoint& pt);
double lagrangian_at(const BaseEval& base, const JetPoint& pt);

struct VerticalMetricEval {
  NdArray<double> block;     // (alpha,beta,i,j) = h^{ab} g_ij
  double max_discrepancy;    // vs. 0.5 * velocity Hessian of L
};

// The vertical fundamental metric, cross-checked against half the velocity
// Hessian of L computed by central finite differences.
VerticalMetricEval vertical_metric(const ModelDef& model, const JetPoint& pt);

struct PotentialCurlEval {
  NdArray<double> curl;  // (alpha,i,j) = dU^(a)_(i)/dx^j - dU^(a)_(j)/dx^i
  NdArray<double> dt;    // (beta,alpha,i,j) = d curl / dt^beta
  NdArray<double> dx;    // (k,alpha,i,j)   = d curl / dx^k
  NdArray<double> cov;   // (alpha,i,j,k)   = U^(a)_(i)j|k
};

PotentialCurlEval potential_curl(const ModelDef& model, const std::vector<double>& t,
                                 const std::vector<double>& x);

struct SprayEval {
  NdArray<double> H;              // (i,alpha,beta) temporal components
  NdArray<double> G;              // (i,alpha,beta) spatial components
  std::vector<double> script_g;   // G^i = h^{ab} G^(i)_(a)b
};

SprayEval spray(const ModelDef& model, const JetPoint& pt);
SprayEval spray(const BaseEval& base, const JetPoint& pt);

struct NonlinearConnectionEval {
  NdArray<double> M;  // (i,alpha,beta) = 2 H^(i)_(a)b
  NdArray<double> N;  // (i,alpha,j)
};

NonlinearConnectionEval nonlinear_connection(const ModelDef& model, const JetPoint& pt,
                                             const GeometryOptions& opts = {});
NonlinearConnectionEval nonlinear_connection(const BaseEval& base, const JetPoint& pt,
                                             const GeometryOptions& opts = {});

// Max deviation between the closed-form N and the h-contracted central
// finite-difference velocity derivative of script G.
double nonlinear_from_spray_check(const ModelDef& model, const JetPoint& pt);

struct CartanConnectionEval {
  NdArray<double> H;  // (gamma,alpha,beta): temporal Christoffels
  NdArray<double> G;  // (k,j,gamma): identically zero
  NdArray<double> L;  // (i,j,k): spatial Christoffels
  NdArray<double> C;  // (i,j,gamma,k): identically zero
};

CartanConnectionEval cartan_connection(const ModelDef& model, const std::vector<double>& t,
                                       const std::vector<double>& x);

struct TorsionEval {
  NdArray<double> R_tt;  // (m,mu,alpha,beta)
  NdArray<double> R_tj;  // (m,mu,alpha,j)
  NdArray<double> R_ij;  // (m,mu,i,j)
};

TorsionEval torsion(const ModelDef& model, const JetPoint& pt);
TorsionEval torsion(const BaseEval& base, const JetPoint& pt);

// Curvature d-tensors of the canonical connection: exactly the curvatures
// of h and of g; every other block vanishes.
std::pair<semigeom::CurvatureEval, semigeom::CurvatureEval> curvature_d(
    const ModelDef& model, const std::vector<double>& t, const std::vector<double>& x);

}  // namespace jetlag::geometry
