#include "jetlag/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "jetlag/errors.hpp"
#include "jetlag/expr.hpp"

namespace jetlag::dynamics {

namespace {

std::size_t flat_index(const std::vector<int>& nodes, const std::vector<int>& idx) {
  std::size_t f = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    f = f * static_cast<std::size_t>(nodes[a]) + static_cast<std::size_t>(idx[a]);
  }
  return f;
}

bool advance_index(const std::vector<int>& nodes, std::vector<int>& idx) {
  for (int a = static_cast<int>(nodes.size()) - 1; a >= 0; --a) {
    if (++idx[static_cast<std::size_t>(a)] < nodes[static_cast<std::size_t>(a)]) return true;
    idx[static_cast<std::size_t>(a)] = 0;
  }
  return false;
}

void validate_map(const DiscreteMap& f, int min_nodes) {
  if (f.p <= 0 || f.n <= 0) throw ConfigError("discrete map: p and n must be positive");
  if (f.lo.size() != static_cast<std::size_t>(f.p) || f.hi.size() != static_cast<std::size_t>(f.p) ||
      f.nodes.size() != static_cast<std::size_t>(f.p)) {
    throw ConfigError("discrete map: box/node arrays must have size p");
  }
  std::size_t count = 1;
  for (int a = 0; a < f.p; ++a) {
    if (f.nodes[static_cast<std::size_t>(a)] < min_nodes) {
      throw ConfigError("discrete map: grid too small (need at least " + std::to_string(min_nodes) +
                        " nodes per axis)");
    }
    if (!(f.hi[static_cast<std::size_t>(a)] > f.lo[static_cast<std::size_t>(a)])) {
      throw ConfigError("discrete map: box must have positive extent on every axis");
    }
    count *= static_cast<std::size_t>(f.nodes[static_cast<std::size_t>(a)]);
  }
  if (f.values.size() != count * static_cast<std::size_t>(f.n)) {
    throw ConfigError("discrete map: values array has wrong size");
  }
}

double det_values(const NdArray<double>& m, int dim) {
  std::vector<double> a(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a[static_cast<std::size_t>(i) * dim + j] = m(i, j);
  double det = 1.0;
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r) {
      if (std::abs(a[static_cast<std::size_t>(r) * dim + c]) >
          std::abs(a[static_cast<std::size_t>(piv) * dim + c]))
        piv = r;
    }
    if (a[static_cast<std::size_t>(piv) * dim + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < dim; ++k)
        std::swap(a[static_cast<std::size_t>(piv) * dim + k],
                  a[static_cast<std::size_t>(c) * dim + k]);
      det = -det;
    }
    det *= a[static_cast<std::size_t>(c) * dim + c];
    for (int r = c + 1; r < dim; ++r) {
      double factor = a[static_cast<std::size_t>(r) * dim + c] /
                      a[static_cast<std::size_t>(c) * dim + c];
      for (int k = c; k < dim; ++k)
        a[static_cast<std::size_t>(r) * dim + k] -= factor * a[static_cast<std::size_t>(c) * dim + k];
    }
  }
  return det;
}

// Trapezoidal sum of L sqrt(|det h|); shared by the public entry point and
// the half-grid error estimate (which may fall below the node minimum).
double action_sum(const ModelDef& model, const DiscreteMap& f) {
  const int p = f.p;
  const int n = f.n;
  double cell = 1.0;
  for (int a = 0; a < p; ++a) cell *= f.spacing(a);

  double total = 0.0;
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  JetPoint pt;
  pt.t.resize(static_cast<std::size_t>(p));
  pt.x.resize(static_cast<std::size_t>(n));
  pt.v.resize(static_cast<std::size_t>(p) * n);
  do {
    double w = cell;
    for (int a = 0; a < p; ++a) {
      pt.t[static_cast<std::size_t>(a)] = f.coord(a, idx[static_cast<std::size_t>(a)]);
      if (idx[static_cast<std::size_t>(a)] == 0 ||
          idx[static_cast<std::size_t>(a)] == f.nodes[static_cast<std::size_t>(a)] - 1)
        w *= 0.5;
    }
    const std::size_t node = flat_index(f.nodes, idx);
    for (int i = 0; i < n; ++i) pt.x[static_cast<std::size_t>(i)] = f.value(node, i);
    for (int a = 0; a < p; ++a)
      for (int i = 0; i < n; ++i)
        pt.v[static_cast<std::size_t>(a) * n + i] = f.d1(idx, a, i);

    const auto base = geometry::base_eval(model, pt.t, pt.x, 1);
    NdArray<double> hval({p, p});
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) hval(a, b) = base.h(a, b).value();
    const double det = det_values(hval, p);
    if (std::abs(det) < 1e-12) {
      throw SingularPointError("action: temporal metric degenerate on the grid");
    }
    total += w * geometry::lagrangian_at(base, pt) * std::sqrt(std::abs(det));
  } while (advance_index(f.nodes, idx));
  return total;
}

bool model_is_kinetic(const ModelDef& model) {
  for (const auto& u : model.U)
    if (u) return false;
  if (model.F) return false;
  for (const auto& e : model.h)
    if (e && references_temporal(e)) return false;
  return true;
}

double kinetic_energy(const ModelDef& model, const std::vector<double>& x,
                      const std::vector<double>& v) {
  const int n = model.n;
  JetEnv env;
  env.t.reserve(static_cast<std::size_t>(model.p));
  for (int a = 0; a < model.p; ++a) env.t.push_back(Jet::constant(0.0, n, 1));
  env.x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    env.x.push_back(Jet::variable(i, x[static_cast<std::size_t>(i)], n, 1));
  double e = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      e += eval_expression(model.g_at(i, j), env).value() * v[static_cast<std::size_t>(i)] *
           v[static_cast<std::size_t>(j)];
  return e;
}

}  // namespace

std::size_t DiscreteMap::node_count() const {
  std::size_t count = 1;
  for (int c : nodes) count *= static_cast<std::size_t>(c);
  return count;
}

double DiscreteMap::d1(const std::vector<int>& node, int axis, int i) const {
  const double dt = spacing(axis);
  const int k = node[static_cast<std::size_t>(axis)];
  const int last = nodes[static_cast<std::size_t>(axis)] - 1;
  std::vector<int> nb = node;
  if (k == 0) {
    nb[static_cast<std::size_t>(axis)] = 1;
    return (value(flat_index(nodes, nb), i) - value(flat_index(nodes, node), i)) / dt;
  }
  if (k == last) {
    nb[static_cast<std::size_t>(axis)] = last - 1;
    return (value(flat_index(nodes, node), i) - value(flat_index(nodes, nb), i)) / dt;
  }
  nb[static_cast<std::size_t>(axis)] = k + 1;
  const double fp = value(flat_index(nodes, nb), i);
  nb[static_cast<std::size_t>(axis)] = k - 1;
  const double fm = value(flat_index(nodes, nb), i);
  return (fp - fm) / (2.0 * dt);
}

double DiscreteMap::d2(const std::vector<int>& node, int a, int b, int i) const {
  std::vector<int> nb = node;
  if (a == b) {
    const double dt = spacing(a);
    const double f0 = value(flat_index(nodes, node), i);
    nb[static_cast<std::size_t>(a)] = node[static_cast<std::size_t>(a)] + 1;
    const double fp = value(flat_index(nodes, nb), i);
    nb[static_cast<std::size_t>(a)] = node[static_cast<std::size_t>(a)] - 1;
    const double fm = value(flat_index(nodes, nb), i);
    return (fp - 2.0 * f0 + fm) / (dt * dt);
  }
  const double da = spacing(a), db = spacing(b);
  double acc = 0.0;
  for (int sa : {+1, -1}) {
    for (int sb : {+1, -1}) {
      nb[static_cast<std::size_t>(a)] = node[static_cast<std::size_t>(a)] + sa;
      nb[static_cast<std::size_t>(b)] = node[static_cast<std::size_t>(b)] + sb;
      acc += sa * sb * value(flat_index(nodes, nb), i);
    }
  }
  return acc / (4.0 * da * db);
}

std::vector<double> harmonic_rhs(const ModelDef& model, const JetPoint& pt) {
  if (model.p != 1) {
    throw ConfigError("harmonic_rhs: trajectory integration requires p = 1, model has p = " +
                      std::to_string(model.p));
  }
  geometry::validate_point(model, pt);
  const auto base = geometry::base_eval(model, pt.t, pt.x, 1);
  const auto sp = geometry::spray(base, pt);
  std::vector<double> a(static_cast<std::size_t>(model.n));
  for (int i = 0; i < model.n; ++i) {
    a[static_cast<std::size_t>(i)] = -2.0 * (sp.H(i, 0, 0) + sp.G(i, 0, 0));
  }
  return a;
}

Trajectory integrate_extremal(const ModelDef& model, const std::vector<double>& x0,
                              const std::vector<double>& v0, double t0, double t1, int steps) {
  if (model.p != 1) throw ConfigError("integrate_extremal: requires p = 1");
  const int n = model.n;
  if (x0.size() != static_cast<std::size_t>(n) || v0.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("integrate_extremal: x0/v0 must have size n");
  }
  if (steps < 1) throw ConfigError("integrate_extremal: steps must be positive");
  if (!(t1 > t0)) throw ConfigError("integrate_extremal: need t1 > t0");

  const double dt = (t1 - t0) / steps;
  std::vector<double> x = x0, v = v0;

  Trajectory traj;
  traj.steps = steps;
  traj.t.reserve(static_cast<std::size_t>(steps) + 1);
  traj.x.reserve(static_cast<std::size_t>(steps) + 1);
  traj.v.reserve(static_cast<std::size_t>(steps) + 1);
  traj.t.push_back(t0);
  traj.x.push_back(x);
  traj.v.push_back(v);

  auto accel = [&](double t, const std::vector<double>& xs, const std::vector<double>& vs) {
    JetPoint pt;
    pt.t = {t};
    pt.x = xs;
    pt.v = vs;
    return harmonic_rhs(model, pt);
  };

  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    try {
      const auto a1 = accel(t, x, v);
      std::vector<double> x2(static_cast<std::size_t>(n)), v2(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        x2[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + 0.5 * dt * v[static_cast<std::size_t>(i)];
        v2[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + 0.5 * dt * a1[static_cast<std::size_t>(i)];
      }
      const auto a2 = accel(t + 0.5 * dt, x2, v2);
      std::vector<double> x3(static_cast<std::size_t>(n)), v3(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        x3[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + 0.5 * dt * v2[static_cast<std::size_t>(i)];
        v3[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + 0.5 * dt * a2[static_cast<std::size_t>(i)];
      }
      const auto a3 = accel(t + 0.5 * dt, x3, v3);
      std::vector<double> x4(static_cast<std::size_t>(n)), v4(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        x4[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + dt * v3[static_cast<std::size_t>(i)];
        v4[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] + dt * a3[static_cast<std::size_t>(i)];
      }
      const auto a4 = accel(t + dt, x4, v4);
      for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] +=
            dt / 6.0 * (v[static_cast<std::size_t>(i)] + 2.0 * v2[static_cast<std::size_t>(i)] +
                        2.0 * v3[static_cast<std::size_t>(i)] + v4[static_cast<std::size_t>(i)]);
        v[static_cast<std::size_t>(i)] +=
            dt / 6.0 * (a1[static_cast<std::size_t>(i)] + 2.0 * a2[static_cast<std::size_t>(i)] +
                        2.0 * a3[static_cast<std::size_t>(i)] + a4[static_cast<std::size_t>(i)]);
      }
    } catch (const SingularPointError& e) {
      std::ostringstream msg;
      msg << e.what() << " [integration stopped at t = " << std::setprecision(10) << t
          << ", step " << s << " of " << steps << "]";
      throw SingularPointError(msg.str());
    }
    traj.t.push_back(t0 + (s + 1) * dt);
    traj.x.push_back(x);
    traj.v.push_back(v);
  }

  if (model_is_kinetic(model)) {
    const double e0 = kinetic_energy(model, traj.x.front(), traj.v.front());
    double drift = 0.0;
    for (std::size_t s = 1; s < traj.x.size(); ++s) {
      drift = std::max(drift, std::abs(kinetic_energy(model, traj.x[s], traj.v[s]) - e0));
    }
    traj.energy_drift = drift;
  }
  return traj;
}

ResidualField harmonic_residual(const ModelDef& model, const DiscreteMap& f) {
  validate_map(f, 5);
  if (f.p != model.p || f.n != model.n) {
    throw ConfigError("harmonic_residual: map dimensions do not match the model");
  }
  const int p = f.p;
  const int n = f.n;

  std::vector<int> rdims;
  rdims.reserve(static_cast<std::size_t>(p) + 1);
  for (int a = 0; a < p; ++a) rdims.push_back(f.nodes[static_cast<std::size_t>(a)] - 2);
  rdims.push_back(n);

  ResidualField out{NdArray<double>(rdims), 0.0};

  std::vector<int> inner(static_cast<std::size_t>(p), 0);
  std::vector<int> inner_dims(rdims.begin(), rdims.end() - 1);
  std::vector<int> idx(static_cast<std::size_t>(p));
  JetPoint pt;
  pt.t.resize(static_cast<std::size_t>(p));
  pt.x.resize(static_cast<std::size_t>(n));
  pt.v.resize(static_cast<std::size_t>(p) * n);
  std::size_t slot = 0;
  do {
    for (int a = 0; a < p; ++a) {
      idx[static_cast<std::size_t>(a)] = inner[static_cast<std::size_t>(a)] + 1;
      pt.t[static_cast<std::size_t>(a)] = f.coord(a, idx[static_cast<std::size_t>(a)]);
    }
    const std::size_t node = flat_index(f.nodes, idx);
    for (int i = 0; i < n; ++i) pt.x[static_cast<std::size_t>(i)] = f.value(node, i);
    for (int a = 0; a < p; ++a)
      for (int i = 0; i < n; ++i)
        pt.v[static_cast<std::size_t>(a) * n + i] = f.d1(idx, a, i);

    const auto base = geometry::base_eval(model, pt.t, pt.x, 1);
    const auto sp = geometry::spray(base, pt);
    for (int i = 0; i < n; ++i) {
      double r = 0.0;
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          r += base.hinv(a, b).value() *
               (f.d2(idx, a, b, i) + 2.0 * sp.H(i, a, b) + 2.0 * sp.G(i, a, b));
        }
      }
      out.residuals.at_flat(slot * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) = r;
      out.max_abs = std::max(out.max_abs, std::abs(r));
    }
    ++slot;
  } while (advance_index(inner_dims, inner));
  return out;
}

ActionEval action(const ModelDef& model, const DiscreteMap& f) {
  validate_map(f, 5);
  if (f.p != model.p || f.n != model.n) {
    throw ConfigError("action: map dimensions do not match the model");
  }
  ActionEval out;
  out.value = action_sum(model, f);

  bool can_coarsen = true;
  for (int c : f.nodes) can_coarsen = can_coarsen && (c % 2 == 1) && (c >= 9);
  if (can_coarsen) {
    DiscreteMap half;
    half.p = f.p;
    half.n = f.n;
    half.lo = f.lo;
    half.hi = f.hi;
    for (int c : f.nodes) half.nodes.push_back((c + 1) / 2);
    half.values.resize(half.node_count() * static_cast<std::size_t>(f.n));
    std::vector<int> idx(static_cast<std::size_t>(f.p), 0);
    std::vector<int> fine(static_cast<std::size_t>(f.p));
    std::size_t slot = 0;
    do {
      for (int a = 0; a < f.p; ++a) fine[static_cast<std::size_t>(a)] = 2 * idx[static_cast<std::size_t>(a)];
      const std::size_t src = flat_index(f.nodes, fine);
      for (int i = 0; i < f.n; ++i)
        half.values[slot * static_cast<std::size_t>(f.n) + static_cast<std::size_t>(i)] =
            f.value(src, i);
      ++slot;
    } while (advance_index(half.nodes, idx));
    out.error_estimate = std::abs(out.value - action_sum(model, half)) / 3.0;
  }
  return out;
}

VariationEval variational_check(const ModelDef& model, const DiscreteMap& f,
                                const DiscreteMap& perturbation,
                                const std::vector<double>& eps_ladder) {
  validate_map(f, 5);
  validate_map(perturbation, 5);
  if (perturbation.p != f.p || perturbation.n != f.n || perturbation.nodes != f.nodes ||
      perturbation.lo != f.lo || perturbation.hi != f.hi) {
    throw ConfigError("variational_check: perturbation must live on the same grid as the map");
  }
  if (eps_ladder.empty()) throw ConfigError("variational_check: empty eps ladder");
  for (double e : eps_ladder)
    if (!(e > 0.0)) throw ConfigError("variational_check: eps values must be positive");

  // Boundary-vanishing requirement.
  std::vector<int> idx(static_cast<std::size_t>(f.p), 0);
  do {
    bool boundary = false;
    for (int a = 0; a < f.p; ++a) {
      if (idx[static_cast<std::size_t>(a)] == 0 ||
          idx[static_cast<std::size_t>(a)] == f.nodes[static_cast<std::size_t>(a)] - 1)
        boundary = true;
    }
    if (boundary) {
      const std::size_t node = flat_index(f.nodes, idx);
      for (int i = 0; i < f.n; ++i) {
        if (std::abs(perturbation.value(node, i)) > 1e-12) {
          throw ConfigError("variational_check: perturbation must vanish on the grid boundary");
        }
      }
    }
  } while (advance_index(f.nodes, idx));

  VariationEval out;
  out.eps = eps_ladder;
  DiscreteMap shifted = f;
  for (double eps : eps_ladder) {
    for (std::size_t k = 0; k < f.values.size(); ++k)
      shifted.values[k] = f.values[k] + eps * perturbation.values[k];
    const double splus = action_sum(model, shifted);
    for (std::size_t k = 0; k < f.values.size(); ++k)
      shifted.values[k] = f.values[k] - eps * perturbation.values[k];
    const double sminus = action_sum(model, shifted);
    out.first_variation.push_back((splus - sminus) / (2.0 * eps));
  }

  // Least-squares slope of log|fv| against log eps, over points above the
  // rounding floor.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < out.eps.size(); ++k) {
    const double fv = std::abs(out.first_variation[k]);
    if (fv < 1e-14) continue;
    const double lx = std::log(out.eps[k]);
    const double ly = std::log(fv);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 0.0) {
    out.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    out.fitted_order = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

DiscreteMap read_map(std::istream& in, int p, int n) {
  if (p <= 0 || n <= 0) throw ConfigError("read_map: p and n must be positive");
  std::vector<std::vector<double>> rows;
  std::vector<int> grid;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    const auto hash = body.find('#');
    if (hash != std::string::npos) {
      std::istringstream directive(body.substr(hash + 1));
      std::string word;
      if (directive >> word && word == "grid") {
        grid.clear();
        int c;
        while (directive >> c) grid.push_back(c);
        if (grid.size() != static_cast<std::size_t>(p)) {
          throw ParseError("grid directive must list one node count per temporal axis", lineno, 1);
        }
      }
      body.resize(hash);
    }
    std::istringstream fields(body);
    std::vector<double> row;
    double v;
    while (fields >> v) row.push_back(v);
    if (row.empty()) continue;
    if (row.size() < static_cast<std::size_t>(p + n)) {
      throw ParseError("node row needs at least " + std::to_string(p + n) + " columns", lineno, 1);
    }
    row.resize(static_cast<std::size_t>(p + n));  // trailing columns (e.g. velocities) ignored
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("read_map: no node rows found");

  DiscreteMap f;
  f.p = p;
  f.n = n;
  if (grid.empty()) {
    if (p != 1) throw ConfigError("read_map: multi-axis tables need a '# grid n1 n2 ...' line");
    grid = {static_cast<int>(rows.size())};
  }
  f.nodes = grid;
  if (f.node_count() != rows.size()) {
    throw ConfigError("read_map: row count does not match the grid (" +
                      std::to_string(rows.size()) + " rows)");
  }
  f.lo.resize(static_cast<std::size_t>(p));
  f.hi.resize(static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a) {
    f.lo[static_cast<std::size_t>(a)] = rows.front()[static_cast<std::size_t>(a)];
    f.hi[static_cast<std::size_t>(a)] = rows.back()[static_cast<std::size_t>(a)];
  }
  validate_map(DiscreteMap{p, n, f.lo, f.hi, f.nodes,
                           std::vector<double>(f.node_count() * static_cast<std::size_t>(n), 0.0)},
               2);

  // Rows must enumerate the grid in row-major order with uniform spacing.
  f.values.resize(f.node_count() * static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  std::size_t r = 0;
  do {
    for (int a = 0; a < p; ++a) {
      const double expect = f.coord(a, idx[static_cast<std::size_t>(a)]);
      const double got = rows[r][static_cast<std::size_t>(a)];
      const double scale = std::max(1.0, std::abs(f.hi[static_cast<std::size_t>(a)]) +
                                             std::abs(f.lo[static_cast<std::size_t>(a)]));
      if (std::abs(got - expect) > 1e-8 * scale) {
        throw ConfigError("read_map: node coordinates are not a uniform row-major grid (row " +
                          std::to_string(r + 1) + ")");
      }
    }
    for (int i = 0; i < n; ++i)
      f.values[r * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
          rows[r][static_cast<std::size_t>(p + i)];
    ++r;
  } while (advance_index(f.nodes, idx));
  return f;
}

DiscreteMap read_map_file(const std::string& path, int p, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file: " + path);
  return read_map(in, p, n);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
  out << "# columns: t";
  const std::size_t n = traj.x.empty() ? 0 : traj.x.front().size();
  for (std::size_t i = 0; i < n; ++i) out << " x" << (i + 1);
  for (std::size_t i = 0; i < n; ++i) out << " v" << (i + 1);
  out << "\n";
  out << std::setprecision(17);
  for (std::size_t s = 0; s < traj.t.size(); ++s) {
    out << traj.t[s];
    for (double xi : traj.x[s]) out << " " << xi;
    for (double vi : traj.v[s]) out << " " << vi;
    out << "\n";
  }
}

DiscreteMap trajectory_to_map(const Trajectory& traj, int n) {
  if (traj.t.size() < 2) throw ConfigError("trajectory_to_map: need at least two samples");
  DiscreteMap f;
  f.p = 1;
  f.n = n;
  f.lo = {traj.t.front()};
  f.hi = {traj.t.back()};
  f.nodes = {static_cast<int>(traj.t.size())};
  f.values.reserve(traj.t.size() * static_cast<std::size_t>(n));
  for (const auto& xs : traj.x) {
    if (xs.size() != static_cast<std::size_t>(n))
      throw ConfigError("trajectory_to_map: sample dimension mismatch");
    f.values.insert(f.values.end(), xs.begin(), xs.end());
  }
  return f;
}

}  // namespace jetlag::dynamics
