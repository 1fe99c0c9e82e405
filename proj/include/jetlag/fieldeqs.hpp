#pragma once

#include <vector>

#include "jetlag/geometry.hpp"

namespace jetlag::fieldeqs {

using geometry::GeometryOptions;
using geometry::JetPoint;

// Covariant derivatives of the Liouville tensor v^i_a d/dv^i_a, computed
// both definitionally (adapted-basis rules through the nonlinear
// connection) and from the closed forms; the two routes must agree.
struct DeflectionEval {
  NdArray<double> Dbar;        // (i,alpha,beta), definitional; must vanish
  NdArray<double> D;           // (i,alpha,j), definitional
  NdArray<double> D_closed;    // (i,alpha,j) = -1/4 g^{im} h_{a mu} U^(mu)_(m)j
  NdArray<double> d_vert;      // (i,alpha,beta,j) = delta^i_j delta^beta_alpha
  NdArray<double> Dbar_low;    // (alpha,i,beta)
  NdArray<double> D_low;       // (alpha,i,j)
  NdArray<double> d_low;       // (alpha,beta,i,j) = h^{ab} g_ij
  double route_deviation = 0.0;  // max |D - D_closed|
};

DeflectionEval deflections(const ModelDef& model, const JetPoint& pt,
                           const GeometryOptions& opts = {});

struct ElectromagneticEval {
  NdArray<double> F;             // (alpha,i,j) = -1/4 U-curl; antisymmetric in i,j
  NdArray<double> F_skew;        // skew part of the lowered deflection tensor
  double route_deviation = 0.0;  // max |F - F_skew|
  // The f^{(a)(b)}_{(i)(j)} block is structurally zero.
};

ElectromagneticEval em_tensor(const ModelDef& model, const std::vector<double>& t,
                              const std::vector<double>& x, const GeometryOptions& opts = {});

// Max-abs residual of each Maxwell-type equation. The field tensor is taken
// from the deflection route, so a corrupted nonlinear connection shows up
// here. Equation 3 (vertical cyclic sum) is exactly zero because F depends
// on (t,x) only.
struct MaxwellResiduals {
  double eq1 = 0.0;
  double eq2 = 0.0;
  double eq3 = 0.0;
};

MaxwellResiduals maxwell_residuals(const ModelDef& model, const JetPoint& pt,
                                   const GeometryOptions& opts = {});

struct EinsteinEval {
  // (E1) left-hand blocks.
  NdArray<double> e1_tt;  // (alpha,beta) = H_ab - ((H+r)/2) h_ab
  NdArray<double> e1_xx;  // (i,j)        = r_ij - ((H+r)/2) g_ij
  NdArray<double> e1_vv;  // (alpha,beta,i,j) = -((H+r)/2) h^{ab} g_ij
  // Extracted stress-energy: left side / K.
  NdArray<double> T_tt, T_xx, T_vv;
  // (E'1) blocks and their stress-energy.
  NdArray<double> ep1_tt, ep1_xx;
  NdArray<double> Ttilde_tt, Ttilde_xx;
  double scalar_h = 0.0;   // H
  double scalar_g = 0.0;   // r
  double scalar_S = 0.0;   // vertical contribution; identically zero
  double scalar_total = 0.0;  // Sc = H + r
  // The six mixed stress-energy blocks vanish a priori ((E2)).
};

EinsteinEval einstein_blocks(const ModelDef& model, const std::vector<double>& t,
                             const std::vector<double>& x, double K);

// Residuals of the conservation laws: covariant divergence of the mixed
// temporal and spatial Einstein-type brackets, plus the simplified
// stress-energy forms. All are identities of the construction.
struct ConservationResiduals {
  std::vector<double> temporal;        // per beta: [H^mu_b - ((H+r)/2) d^mu_b]_{/mu}
  std::vector<double> spatial;         // per j:    [r^m_j - ((H+r)/2) d^m_j]_{|m}
  std::vector<double> temporal_tilde;  // per beta: Ttilde^mu_{b/mu} * K
  std::vector<double> spatial_tilde;   // per j:    Ttilde^m_{j|m} * K
};

ConservationResiduals conservation_residuals(const ModelDef& model, const std::vector<double>& t,
                                             const std::vector<double>& x);

}  // namespace jetlag::fieldeqs
