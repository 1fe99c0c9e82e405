#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <utility>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jetlag/checks.hpp"
#include "jetlag/dynamics.hpp"
#include "jetlag/errors.hpp"
#include "jetlag/fieldeqs.hpp"
#include "jetlag/geometry.hpp"
#include "jetlag/model.hpp"
#include "jetlag/semigeom.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kReportSchema = "jetlag-report/1";

using jetlag::ModelDef;
using jetlag::NdArray;
using nlohmann::json;

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations; only
// the signs are reported (metric signature).
std::vector<double> symmetric_eigenvalues(NdArray<double> m, int dim) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-24) break;
    for (int i = 0; i < dim; ++i) {
      for (int j = i + 1; j < dim; ++j) {
        if (std::abs(m(i, j)) < 1e-18) continue;
        const double theta = 0.5 * std::atan2(2.0 * m(i, j), m(j, j) - m(i, i));
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < dim; ++k) {
          const double mik = m(i, k), mjk = m(j, k);
          m(i, k) = c * mik - s * mjk;
          m(j, k) = s * mik + c * mjk;
        }
        for (int k = 0; k < dim; ++k) {
          const double mki = m(k, i), mkj = m(k, j);
          m(k, i) = c * mki - s * mkj;
          m(k, j) = s * mki + c * mkj;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) eig[static_cast<std::size_t>(i)] = m(i, i);
  return eig;
}

std::string signature_string(const std::vector<double>& eig) {
  std::string s = "(";
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (i) s += ",";
    s += eig[i] > 0 ? "+" : (eig[i] < 0 ? "-" : "0");
  }
  s += ")";
  return s;
}

std::vector<double> midpoint(const std::vector<std::pair<double, double>>& iv) {
  std::vector<double> m;
  m.reserve(iv.size());
  for (const auto& ab : iv) m.push_back(0.5 * (ab.first + ab.second));
  return m;
}

json to_json(const NdArray<double>& a) {
  // Nested arrays matching the index order of the block.
  std::function<json(std::size_t, std::size_t&)> build = [&](std::size_t depth,
                                                             std::size_t& flat) -> json {
    json node = json::array();
    const int extent = a.dim(static_cast<int>(depth));
    for (int k = 0; k < extent; ++k) {
      if (depth + 1 == a.dims().size()) {
        node.push_back(a.at_flat(flat++));
      } else {
        node.push_back(build(depth + 1, flat));
      }
    }
    return node;
  };
  if (a.dims().empty()) return json::array();
  std::size_t flat = 0;
  return build(0, flat);
}

json point_json(const jetlag::geometry::JetPoint& pt) {
  return json{{"t", pt.t}, {"x", pt.x}, {"v", pt.v}};
}

int fail(const std::string& what, int code = 1) {
  std::cerr << "error: " << what << "\n";
  return code;
}

ModelDef load_or_die(const std::string& path) { return jetlag::load_model_file(path); }

int cmd_inspect(const std::string& path) {
  ModelDef model;
  try {
    model = load_or_die(path);
  } catch (const jetlag::ParseError& e) {
    return fail(std::string(e.what()) + " (line " + std::to_string(e.line) + ", column " +
                std::to_string(e.col) + ")");
  } catch (const jetlag::Error& e) {
    return fail(e.what());
  }
  const auto t0 = midpoint(model.probes.t);
  const auto x0 = midpoint(model.probes.x);
  const auto h = jetlag::semigeom::metric_eval(model.h, model.p, jetlag::semigeom::CoordKind::Temporal, t0);
  const auto g = jetlag::semigeom::metric_eval(model.g, model.n, jetlag::semigeom::CoordKind::Spatial, x0);
  bool has_u = false;
  for (const auto& u : model.U) has_u = has_u || static_cast<bool>(u);

  std::cout << "model: " << model.name << "\n";
  if (!model.description.empty()) std::cout << "description: " << model.description << "\n";
  std::cout << "p=" << model.p << " n=" << model.n
            << ", h signature " << signature_string(symmetric_eigenvalues(h.components, model.p))
            << ", g signature " << signature_string(symmetric_eigenvalues(g.components, model.n))
            << "\n";
  std::cout << "components: h " << model.p << "x" << model.p << ", g " << model.n << "x" << model.n
            << ", U " << (has_u ? "present" : "absent") << ", F "
            << (model.F ? "present" : "absent") << "\n";
  return 0;
}

int cmd_compute(const std::string& path, std::vector<double> t, std::vector<double> x,
                std::vector<double> v, double K) {
  ModelDef model;
  try {
    model = load_or_die(path);
  } catch (const jetlag::Error& e) {
    return fail(e.what(), 2);
  }
  try {
    if (t.empty() && model.p == 1) t = {0.0};
    if (t.size() != static_cast<std::size_t>(model.p))
      throw jetlag::ConfigError("--t needs " + std::to_string(model.p) + " values");
    if (x.size() != static_cast<std::size_t>(model.n))
      throw jetlag::ConfigError("--x needs " + std::to_string(model.n) + " values");
    if (v.empty()) v.assign(static_cast<std::size_t>(model.p) * model.n, 0.0);
    if (v.size() != static_cast<std::size_t>(model.p) * model.n)
      throw jetlag::ConfigError("--v needs " + std::to_string(model.p * model.n) + " values");

    jetlag::geometry::JetPoint pt{t, x, v};
    const auto cartan = jetlag::geometry::cartan_connection(model, t, x);
    const auto sp = jetlag::geometry::spray(model, pt);
    const auto conn = jetlag::geometry::nonlinear_connection(model, pt);
    const auto tor = jetlag::geometry::torsion(model, pt);
    const auto curv = jetlag::geometry::curvature_d(model, t, x);
    const auto em = jetlag::fieldeqs::em_tensor(model, t, x);
    const auto de = jetlag::fieldeqs::deflections(model, pt);
    const auto ein = jetlag::fieldeqs::einstein_blocks(model, t, x, K);

    json rep;
    rep["schema"] = kReportSchema;
    rep["tool_version"] = kToolVersion;
    rep["kind"] = "compute";
    rep["model"] = model.name;
    rep["point"] = point_json(pt);
    rep["christoffel_h"] = to_json(cartan.H);
    rep["christoffel_g"] = to_json(cartan.L);
    rep["spray_H"] = to_json(sp.H);
    rep["spray_G"] = to_json(sp.G);
    rep["spray_script_G"] = json(sp.script_g);
    rep["nonlinear_M"] = to_json(conn.M);
    rep["nonlinear_N"] = to_json(conn.N);
    rep["torsion_R_mu_tt"] = to_json(tor.R_tt);
    rep["torsion_R_mu_tj"] = to_json(tor.R_tj);
    rep["torsion_R_mu_ij"] = to_json(tor.R_ij);
    rep["curvature_h_riemann"] = to_json(curv.first.riemann);
    rep["curvature_g_riemann"] = to_json(curv.second.riemann);
    rep["curvature_h_scalar"] = curv.first.scalar;
    rep["curvature_g_scalar"] = curv.second.scalar;
    rep["em_F"] = to_json(em.F);
    rep["deflection_D"] = to_json(de.D);
    rep["deflection_Dbar"] = to_json(de.Dbar);
    rep["einstein_K"] = K;
    rep["einstein_T"] = json{{"tt", to_json(ein.T_tt)},
                             {"xx", to_json(ein.T_xx)},
                             {"vv", to_json(ein.T_vv)}};
    rep["einstein_T_tilde"] = json{{"tt", to_json(ein.Ttilde_tt)}, {"xx", to_json(ein.Ttilde_xx)}};
    rep["scalar_curvature"] = json{{"h", ein.scalar_h},
                                   {"g", ein.scalar_g},
                                   {"S", ein.scalar_S},
                                   {"total", ein.scalar_total}};
    std::cout << rep.dump(2) << "\n";
    return 0;
  } catch (const jetlag::Error& e) {
    return fail(e.what());
  }
}

int cmd_check(const std::string& path, int samples, std::uint64_t seed, double tol,
              const std::string& report_path, double n_potential_factor) {
  ModelDef model;
  try {
    model = load_or_die(path);
  } catch (const jetlag::Error& e) {
    return fail(e.what(), 2);
  }
  try {
    jetlag::checks::CheckOptions opts;
    opts.samples = samples;
    opts.seed = seed;
    opts.tol = tol;
    opts.geometry.n_potential_factor = n_potential_factor;
    const auto suite = jetlag::checks::run_check_suite(model, opts);

    json rep;
    rep["schema"] = kReportSchema;
    rep["tool_version"] = kToolVersion;
    rep["kind"] = "check";
    rep["model"] = model.name;
    rep["samples"] = samples;
    rep["seed"] = seed;
    rep["tolerance"] = tol;
    rep["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
    json ids = json::array();
    for (const auto& r : suite.results) {
      ids.push_back(json{{"identity", r.name},
                         {"samples", r.samples},
                         {"max_residual", r.max_residual},
                         {"worst_point", point_json(r.worst)}});
    }
    rep["identities"] = ids;
    rep["max_residual"] = suite.max_residual;
    rep["passed"] = suite.passed;

    const std::string text = rep.dump(2);
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      if (!out) return fail("cannot write report: " + report_path, 2);
      out << text << "\n";
    }
    std::cout << text << "\n";
    return suite.passed ? 0 : 1;
  } catch (const jetlag::Error& e) {
    return fail(e.what(), 2);
  }
}

int cmd_integrate(const std::string& path, const std::vector<double>& x0,
                  const std::vector<double>& v0, double t0, double t1, int steps,
                  const std::string& out_path) {
  ModelDef model;
  try {
    model = load_or_die(path);
  } catch (const jetlag::Error& e) {
    return fail(e.what(), 2);
  }
  try {
    const auto traj = jetlag::dynamics::integrate_extremal(model, x0, v0, t0, t1, steps);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) return fail("cannot write trajectory: " + out_path, 2);
      jetlag::dynamics::write_trajectory(out, traj);
    }
    std::cout.precision(12);
    std::cout << "final t = " << traj.t.back() << "\nfinal x =";
    for (double xi : traj.x.back()) std::cout << " " << xi;
    std::cout << "\nfinal v =";
    for (double vi : traj.v.back()) std::cout << " " << vi;
    std::cout << "\n";
    if (traj.energy_drift >= 0.0) std::cout << "energy drift = " << traj.energy_drift << "\n";
    if (traj.t.size() >= 5) {
      const auto f = jetlag::dynamics::trajectory_to_map(traj, model.n);
      std::cout << "harmonic residual (resampled) = "
                << jetlag::dynamics::harmonic_residual(model, f).max_abs << "\n";
    }
    return 0;
  } catch (const jetlag::Error& e) {
    return fail(e.what());
  }
}

int cmd_action(const std::string& path, const std::string& map_path) {
  ModelDef model;
  try {
    model = load_or_die(path);
  } catch (const jetlag::Error& e) {
    return fail(e.what(), 2);
  }
  try {
    const auto f = jetlag::dynamics::read_map_file(map_path, model.p, model.n);
    const auto a = jetlag::dynamics::action(model, f);
    std::cout.precision(12);
    std::cout << "action = " << a.value << "\nquadrature = " << a.quadrature
              << "\nerror estimate = " << a.error_estimate << "\n";
    return 0;
  } catch (const jetlag::ParseError& e) {
    return fail(std::string(e.what()) + " (line " + std::to_string(e.line) + ")");
  } catch (const jetlag::Error& e) {
    return fail(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of multi-time Lagrange spaces: evaluation, identity checks, dynamics"};
  app.require_subcommand(1);

  std::string model_path;
  std::vector<double> t_vals, x_vals, v_vals, x0, v0;
  double K = 1.0, tol = 1e-8, t0 = 0.0, t1 = 1.0;
  int samples = 100, steps = 1000;
  std::uint64_t seed = 42;
  double n_potential_factor = 0.25;
  std::string report_path, out_path, map_path;

  auto* inspect = app.add_subcommand("inspect", "Summarize a model file");
  inspect->add_option("model", model_path, "model file")->required();

  auto* compute = app.add_subcommand("compute", "Evaluate all tensor blocks at a jet point");
  compute->add_option("model", model_path, "model file")->required();
  compute->add_option("--t", t_vals, "temporal coordinates (p values)");
  compute->add_option("--x", x_vals, "spatial coordinates (n values)")->required();
  compute->add_option("--v", v_vals, "velocities, alpha-major (p*n values)");
  compute->add_option("--K", K, "Einstein-block constant")->capture_default_str();

  auto* check = app.add_subcommand("check", "Run the structural identity suite");
  check->add_option("model", model_path, "model file")->required();
  check->add_option("--samples", samples, "random jet points")->capture_default_str();
  check->add_option("--seed", seed, "RNG seed")->capture_default_str();
  check->add_option("--tol", tol, "pass tolerance")->capture_default_str();
  check->add_option("--report", report_path, "write the JSON report here too");
  check->add_option("--n-potential-factor", n_potential_factor,
                    "potential coefficient in N (mutation hook)")->capture_default_str();

  auto* integrate = app.add_subcommand("integrate", "Integrate an extremal trajectory (p = 1)");
  integrate->add_option("model", model_path, "model file")->required();
  integrate->add_option("--x0", x0, "initial position (n values)")->required();
  integrate->add_option("--v0", v0, "initial velocity (n values)")->required();
  integrate->add_option("--t0", t0, "start time")->capture_default_str();
  integrate->add_option("--t1", t1, "end time")->capture_default_str();
  integrate->add_option("--steps", steps, "fixed steps")->capture_default_str();
  integrate->add_option("--out", out_path, "trajectory table output path");

  auto* action = app.add_subcommand("action", "Evaluate the energy action of a discrete map");
  action->add_option("model", model_path, "model file")->required();
  action->add_option("--map", map_path, "node table")->required();

  CLI11_PARSE(app, argc, argv);

  if (inspect->parsed()) return cmd_inspect(model_path);
  if (compute->parsed()) return cmd_compute(model_path, t_vals, x_vals, v_vals, K);
  if (check->parsed())
    return cmd_check(model_path, samples, seed, tol, report_path, n_potential_factor);
  if (integrate->parsed()) return cmd_integrate(model_path, x0, v0, t0, t1, steps, out_path);
  if (action->parsed()) return cmd_action(model_path, map_path);
  return 1;
}
