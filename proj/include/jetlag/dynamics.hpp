#pragma once

#include <string>
#include <vector>

#include "jetlag/geometry.hpp"

namespace jetlag::dynamics {

using geometry::JetPoint;

// A map T -> M sampled on a uniform tensor-product grid over a box in T.
// Node ordering is row-major over the axes; values holds the n spatial
// coordinates per node.
struct DiscreteMap {
  int p = 0;
  int n = 0;
  std::vector<double> lo, hi;  // box, size p
  std::vector<int> nodes;      // per-axis node counts
  std::vector<double> values;  // (prod nodes) * n

  double spacing(int axis) const {
    return (hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]) /
           (nodes[static_cast<std::size_t>(axis)] - 1);
  }
  std::size_t node_count() const;
  double coord(int axis, int index) const {
    return lo[static_cast<std::size_t>(axis)] + index * spacing(axis);
  }
  double value(std::size_t flat_node, int i) const {
    return values[flat_node * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
  }

  // First derivative d x^i / d t^axis at a node: central differences in the
  // interior, first-order one-sided at the boundary. The one-sided choice
  // makes the trapezoidal action discretely integration-by-parts exact.
  double d1(const std::vector<int>& node, int axis, int i) const;
  // Second derivative d^2 x^i / d t^a d t^b; interior nodes only.
  double d2(const std::vector<int>& node, int a, int b, int i) const;
};

struct Trajectory {
  std::vector<double> t;               // strictly increasing
  std::vector<std::vector<double>> x;  // n coordinates per sample
  std::vector<std::vector<double>> v;
  int steps = 0;
  // Max |g_ij v^i v^j - initial| along the trajectory; populated when
  // U = F = 0 and h is constant, negative otherwise.
  double energy_drift = -1.0;
};

struct ActionEval {
  double value = 0.0;
  std::string quadrature = "trapezoid";
  double error_estimate = 0.0;  // Richardson estimate against the half grid
};

struct ResidualField {
  NdArray<double> residuals;  // (interior nodes ...) x n, row-major
  double max_abs = 0.0;
};

struct VariationEval {
  std::vector<double> eps;
  std::vector<double> first_variation;  // central difference of the action
  double fitted_order = 0.0;            // least-squares slope in log-log
};

// Acceleration of the p = 1 extremal equation: a^i = -2 (H + G)^(i)_(1)1.
std::vector<double> harmonic_rhs(const ModelDef& model, const JetPoint& pt);

// Classical fixed-step 4th-order integration of (x', v') = (v, harmonic_rhs).
Trajectory integrate_extremal(const ModelDef& model, const std::vector<double>& x0,
                              const std::vector<double>& v0, double t0, double t1, int steps);

// Residual of h^{ab} { x^i_ab + 2 H^(i)_(a)b + 2 G^(i)_(a)b } at the
// interior nodes of the grid.
ResidualField harmonic_residual(const ModelDef& model, const DiscreteMap& f);

// Tensor-product trapezoidal quadrature of L sqrt(|det h|) over the box.
ActionEval action(const ModelDef& model, const DiscreteMap& f);

// Central-difference first variation of the action along a
// boundary-vanishing perturbation, over a ladder of step sizes.
VariationEval variational_check(const ModelDef& model, const DiscreteMap& f,
                                const DiscreteMap& perturbation,
                                const std::vector<double>& eps_ladder);

// Whitespace-separated node table: p temporal columns then n spatial
// columns, '#' comments. Multi-axis grids need a "# grid n1 n2 ..." line.
DiscreteMap read_map(std::istream& in, int p, int n);
DiscreteMap read_map_file(const std::string& path, int p, int n);
void write_trajectory(std::ostream& out, const Trajectory& traj);

// Resamples a trajectory onto a DiscreteMap grid (p = 1) for residual and
// action evaluation; sample count must match the node count.
DiscreteMap trajectory_to_map(const Trajectory& traj, int n);

}  // namespace jetlag::dynamics
