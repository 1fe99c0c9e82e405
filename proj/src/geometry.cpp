#include "jetlag/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "jetlag/errors.hpp"

namespace jetlag::geometry {

namespace {

bool is_zero_expr(const ExprPtr& e) {
  return !e || (e->kind == ExprKind::Constant && e->constant == 0.0);
}

}  // namespace

void validate_point(const ModelDef& model, const JetPoint& pt) {
  if (static_cast<int>(pt.t.size()) != model.p || static_cast<int>(pt.x.size()) != model.n ||
      static_cast<int>(pt.v.size()) != model.p * model.n) {
    throw ConfigError("jet point dimensions do not match the model (need p, n, p*n coordinates)");
  }
}

BaseEval base_eval(const ModelDef& model, const std::vector<double>& t,
                   const std::vector<double>& x, int order) {
  if (static_cast<int>(t.size()) != model.p || static_cast<int>(x.size()) != model.n) {
    throw ConfigError("base point dimensions do not match the model");
  }
  const int p = model.p, n = model.n, nv = p + n;
  BaseEval out;
  out.p = p;
  out.n = n;
  out.order = order;

  JetEnv env;
  for (int a = 0; a < p; ++a) env.t.push_back(Jet::variable(a, t[static_cast<std::size_t>(a)], nv, order));
  for (int i = 0; i < n; ++i) env.x.push_back(Jet::variable(p + i, x[static_cast<std::size_t>(i)], nv, order));
  const Jet zero = Jet::constant(0.0, nv, order);

  out.h = NdArray<Jet>({p, p}, zero);
  out.g = NdArray<Jet>({n, n}, zero);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) out.h(a, b) = eval_expression(model.h_at(a, b), env);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.g(i, j) = eval_expression(model.g_at(i, j), env);
  }

  std::vector<int> tvars(static_cast<std::size_t>(p)), xvars(static_cast<std::size_t>(n));
  for (int a = 0; a < p; ++a) tvars[static_cast<std::size_t>(a)] = a;
  for (int i = 0; i < n; ++i) xvars[static_cast<std::size_t>(i)] = p + i;
  semigeom::MetricJets hm = semigeom::metric_jets(out.h, tvars);
  semigeom::MetricJets gm = semigeom::metric_jets(out.g, xvars);
  out.hinv = hm.inv;
  out.ginv = gm.inv;

  if (order >= 1) {
    out.Hgam = semigeom::christoffel_jets(hm);
    out.ggam = semigeom::christoffel_jets(gm);
  }
  if (order >= 2) {
    out.hcurv = semigeom::curvature_jets(hm, out.Hgam);
    out.gcurv = semigeom::curvature_jets(gm, out.ggam);
  }

  out.U = NdArray<Jet>({p, n}, zero);
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      const ExprPtr& e = model.U_at(a, i);
      if (!is_zero_expr(e)) {
        out.U(a, i) = eval_expression(e, env);
        out.has_potential = true;
      }
    }
  }
  out.F = is_zero_expr(model.F) ? zero : eval_expression(model.F, env);

  if (order >= 1) {
    out.Ucurl = NdArray<Jet>({p, n, n}, Jet::constant(0.0, nv, order - 1));
    for (int a = 0; a < p; ++a) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out.Ucurl(a, i, j) = jet_partial(out.U(a, i), p + j) - jet_partial(out.U(a, j), p + i);
        }
      }
    }
  }
  if (order >= 2) {
    out.UcurlCov = NdArray<Jet>({p, n, n, n}, Jet::constant(0.0, nv, order - 2));
    for (int a = 0; a < p; ++a) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            Jet cov = jet_partial(out.Ucurl(a, i, j), p + k);
            for (int m = 0; m < n; ++m) {
              cov -= out.ggam(m, i, k) * out.Ucurl(a, m, j);
              cov -= out.ggam(m, j, k) * out.Ucurl(a, i, m);
            }
            out.UcurlCov(a, i, j, k) = cov;
          }
        }
      }
    }
  }
  return out;
}

double lagrangian_at(const BaseEval& base, const JetPoint& pt) {
  const int p = base.p, n = base.n;
  double L = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          L += base.hinv(a, b).value() * base.g(i, j).value() * pt.vel(a, i, n) * pt.vel(b, j, n);
        }
      }
    }
  }
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      L += base.U(a, i).value() * pt.vel(a, i, n);
    }
  }
  return L + base.F.value();
}

double lagrangian_at(const ModelDef& model, const JetPoint& pt) {
  validate_point(model, pt);
  return lagrangian_at(base_eval(model, pt.t, pt.x, 1), pt);
}

VerticalMetricEval vertical_metric(const ModelDef& model, const JetPoint& pt) {
  validate_point(model, pt);
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, pt.t, pt.x, 1);

  VerticalMetricEval out;
  out.block = NdArray<double>({p, p, n, n});
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out.block(a, b, i, j) = base.hinv(a, b).value() * base.g(i, j).value();
        }
      }
    }
  }

  // L is quadratic in the velocities, so the central stencil is exact up to
  // rounding; the step only balances cancellation noise.
  const double step = 0.05;
  double max_disc = 0.0;
  JetPoint work = pt;
  auto L_at = [&](const std::vector<double>& v) {
    work.v = v;
    return lagrangian_at(base, work);
  };
  const double L0 = L_at(pt.v);
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < p; ++b) {
        for (int j = 0; j < n; ++j) {
          std::size_t ka = static_cast<std::size_t>(a) * n + i;
          std::size_t kb = static_cast<std::size_t>(b) * n + j;
          double hess;
          if (ka == kb) {
            std::vector<double> vp = pt.v, vm = pt.v;
            vp[ka] += step;
            vm[ka] -= step;
            hess = (L_at(vp) + L_at(vm) - 2.0 * L0) / (step * step);
          } else {
            std::vector<double> vpp = pt.v, vpm = pt.v, vmp = pt.v, vmm = pt.v;
            vpp[ka] += step; vpp[kb] += step;
            vpm[ka] += step; vpm[kb] -= step;
            vmp[ka] -= step; vmp[kb] += step;
            vmm[ka] -= step; vmm[kb] -= step;
            hess = (L_at(vpp) - L_at(vpm) - L_at(vmp) + L_at(vmm)) / (4.0 * step * step);
          }
          max_disc = std::max(max_disc, std::abs(out.block(a, b, i, j) - 0.5 * hess));
        }
      }
    }
  }
  out.max_discrepancy = max_disc;
  return out;
}

PotentialCurlEval potential_curl(const ModelDef& model, const std::vector<double>& t,
                                 const std::vector<double>& x) {
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, t, x, 3);
  PotentialCurlEval out;
  out.curl = NdArray<double>({p, n, n});
  out.dt = NdArray<double>({p, p, n, n});
  out.dx = NdArray<double>({n, p, n, n});
  out.cov = NdArray<double>({p, n, n, n});
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.curl(a, i, j) = base.Ucurl(a, i, j).value();
        for (int b = 0; b < p; ++b) out.dt(b, a, i, j) = base.Ucurl(a, i, j).partial(b);
        for (int k = 0; k < n; ++k) {
          out.dx(k, a, i, j) = base.Ucurl(a, i, j).partial(p + k);
          out.cov(a, i, j, k) = base.UcurlCov(a, i, j, k).value();
        }
      }
    }
  }
  return out;
}

SprayEval spray(const BaseEval& base, const JetPoint& pt) {
  const int p = base.p, n = base.n;
  SprayEval out;
  out.H = NdArray<double>({n, p, p});
  out.G = NdArray<double>({n, p, p});
  out.script_g.assign(static_cast<std::size_t>(n), 0.0);

  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        double acc = 0.0;
        for (int c = 0; c < p; ++c) acc += base.Hgam(c, a, b).value() * pt.vel(c, i, n);
        out.H(i, a, b) = -0.5 * acc;
      }
    }
  }

  // bracket(l) = U^(mu)_(l)m v^m_mu + dU^(mu)_(l)/dt^mu
  //            + U^(mu)_(l) H^gamma_{mu gamma} - dF/dx^l
  std::vector<double> bracket(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    double acc = 0.0;
    for (int mu = 0; mu < p; ++mu) {
      for (int m = 0; m < n; ++m) acc += base.Ucurl(mu, l, m).value() * pt.vel(mu, m, n);
      acc += base.U(mu, l).partial(mu);
      double trace = 0.0;
      for (int c = 0; c < p; ++c) trace += base.Hgam(c, mu, c).value();
      acc += base.U(mu, l).value() * trace;
    }
    acc -= base.F.partial(p + l);
    bracket[static_cast<std::size_t>(l)] = acc;
  }

  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        double geo = 0.0;
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            geo += base.ggam(i, j, k).value() * pt.vel(a, j, n) * pt.vel(b, k, n);
          }
        }
        double pot = 0.0;
        for (int l = 0; l < n; ++l) pot += base.ginv(i, l).value() * bracket[static_cast<std::size_t>(l)];
        out.G(i, a, b) = 0.5 * geo + base.h(a, b).value() * pot / (4.0 * p);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) acc += base.hinv(a, b).value() * out.G(i, a, b);
    }
    out.script_g[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

SprayEval spray(const ModelDef& model, const JetPoint& pt) {
  validate_point(model, pt);
  return spray(base_eval(model, pt.t, pt.x, 1), pt);
}

NonlinearConnectionEval nonlinear_connection(const BaseEval& base, const JetPoint& pt,
                                             const GeometryOptions& opts) {
  const int p = base.p, n = base.n;
  NonlinearConnectionEval out;
  out.M = NdArray<double>({n, p, p});
  out.N = NdArray<double>({n, p, n});

  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        double acc = 0.0;
        for (int c = 0; c < p; ++c) acc += base.Hgam(c, a, b).value() * pt.vel(c, i, n);
        out.M(i, a, b) = -acc;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += base.ggam(i, j, k).value() * pt.vel(a, k, n);
        double pot = 0.0;
        for (int c = 0; c < p; ++c) {
          for (int l = 0; l < n; ++l) {
            pot += base.h(a, c).value() * base.ginv(i, l).value() * base.Ucurl(c, l, j).value();
          }
        }
        out.N(i, a, j) = acc + opts.n_potential_factor * pot;
      }
    }
  }
  return out;
}

NonlinearConnectionEval nonlinear_connection(const ModelDef& model, const JetPoint& pt,
                                             const GeometryOptions& opts) {
  validate_point(model, pt);
  return nonlinear_connection(base_eval(model, pt.t, pt.x, 1), pt, opts);
}

double nonlinear_from_spray_check(const ModelDef& model, const JetPoint& pt) {
  validate_point(model, pt);
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, pt.t, pt.x, 1);
  NonlinearConnectionEval closed = nonlinear_connection(base, pt, {});

  double vmax = 0.0;
  for (double v : pt.v) vmax = std::max(vmax, std::abs(v));
  const double step = 1e-6 * std::max(1.0, vmax);

  // dG^i/dv^j_c by central differences, contracted with h_{ac}.
  NdArray<double> dscript({n, p, n});
  JetPoint work = pt;
  for (int c = 0; c < p; ++c) {
    for (int j = 0; j < n; ++j) {
      std::size_t k = static_cast<std::size_t>(c) * n + j;
      work.v = pt.v;
      work.v[k] += step;
      std::vector<double> plus = spray(base, work).script_g;
      work.v[k] = pt.v[k] - step;
      std::vector<double> minus = spray(base, work).script_g;
      for (int i = 0; i < n; ++i) {
        dscript(i, c, j) = (plus[static_cast<std::size_t>(i)] - minus[static_cast<std::size_t>(i)]) /
                           (2.0 * step);
      }
    }
  }

  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int j = 0; j < n; ++j) {
        double fd = 0.0;
        for (int c = 0; c < p; ++c) fd += base.h(a, c).value() * dscript(i, c, j);
        dev = std::max(dev, std::abs(fd - closed.N(i, a, j)));
      }
    }
  }
  return dev;
}

CartanConnectionEval cartan_connection(const ModelDef& model, const std::vector<double>& t,
                                       const std::vector<double>& x) {
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, t, x, 1);
  CartanConnectionEval out;
  out.H = NdArray<double>({p, p, p});
  out.G = NdArray<double>({n, n, p});  // structurally zero
  out.L = NdArray<double>({n, n, n});
  out.C = NdArray<double>({n, n, p, n});  // structurally zero
  for (int c = 0; c < p; ++c) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) out.H(c, a, b) = base.Hgam(c, a, b).value();
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) out.L(i, j, k) = base.ggam(i, j, k).value();
    }
  }
  return out;
}

TorsionEval torsion(const BaseEval& base, const JetPoint& pt) {
  const int p = base.p, n = base.n;
  TorsionEval out;
  out.R_tt = NdArray<double>({n, p, p, p});
  out.R_tj = NdArray<double>({n, p, p, n});
  out.R_ij = NdArray<double>({n, p, n, n});

  for (int m = 0; m < n; ++m) {
    for (int mu = 0; mu < p; ++mu) {
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          double acc = 0.0;
          for (int c = 0; c < p; ++c) {
            acc += base.hcurv.riemann(c, mu, a, b).value() * pt.vel(c, m, n);
          }
          out.R_tt(m, mu, a, b) = -acc;
        }
      }
    }
  }

  for (int m = 0; m < n; ++m) {
    for (int mu = 0; mu < p; ++mu) {
      for (int a = 0; a < p; ++a) {
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int e = 0; e < p; ++e) {
            for (int k = 0; k < n; ++k) {
              double inner = base.Ucurl(e, k, j).partial(a);
              for (int c = 0; c < p; ++c) {
                inner += base.Hgam(e, a, c).value() * base.Ucurl(c, k, j).value();
              }
              acc += base.h(mu, e).value() * base.ginv(m, k).value() * inner;
            }
          }
          out.R_tj(m, mu, a, j) = -0.25 * acc;
        }
      }
    }
  }

  for (int m = 0; m < n; ++m) {
    for (int mu = 0; mu < p; ++mu) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) {
            acc += base.gcurv.riemann(m, i, j, k).value() * pt.vel(mu, k, n);
          }
          double pot = 0.0;
          for (int e = 0; e < p; ++e) {
            for (int k = 0; k < n; ++k) {
              pot += base.h(mu, e).value() * base.ginv(m, k).value() *
                     (base.UcurlCov(e, k, i, j).value() + base.UcurlCov(e, k, j, i).value());
            }
          }
          out.R_ij(m, mu, i, j) = acc + 0.25 * pot;
        }
      }
    }
  }
  return out;
}

TorsionEval torsion(const ModelDef& model, const JetPoint& pt) {
  validate_point(model, pt);
  return torsion(base_eval(model, pt.t, pt.x, 2), pt);
}

std::pair<semigeom::CurvatureEval, semigeom::CurvatureEval> curvature_d(
    const ModelDef& model, const std::vector<double>& t, const std::vector<double>& x) {
  return {semigeom::curvature(model.h, model.p, semigeom::CoordKind::Temporal, t),
          semigeom::curvature(model.g, model.n, semigeom::CoordKind::Spatial, x)};
}

}  // namespace jetlag::geometry
