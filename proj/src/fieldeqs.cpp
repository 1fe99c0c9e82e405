#include "jetlag/fieldeqs.hpp"

#include <algorithm>
#include <cmath>

#include "jetlag/errors.hpp"

namespace jetlag::fieldeqs {

using geometry::BaseEval;
using geometry::base_eval;
using geometry::validate_point;

namespace {

// F^(a)_(i)j as order-(base.order-1) jets via the deflection route:
// lower the definitional covariant derivative of the Liouville tensor with
// h^{ab} g_ij and take the skew part. The velocity terms cancel exactly, so
// the result is velocity independent; the nonlinear connection enters
// through opts.
NdArray<Jet> em_jets(const BaseEval& base, const std::vector<double>& v,
                     const GeometryOptions& opts) {
  const int p = base.p, n = base.n;
  const int ord = base.order - 1;
  const Jet zero = Jet::constant(0.0, p + n, ord);

  auto vel = [&](int a, int i) { return v[static_cast<std::size_t>(a) * n + i]; };

  // Definitional deflection D^(i)_(a)j = -N^(i)_(a)j + v^m_a L^i_mj.
  NdArray<Jet> defl({n, p, n}, zero);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int j = 0; j < n; ++j) {
        Jet acc = zero;
        for (int k = 0; k < n; ++k) acc -= base.ggam(i, j, k) * vel(a, k);
        for (int c = 0; c < p; ++c) {
          for (int l = 0; l < n; ++l) {
            acc -= opts.n_potential_factor * (base.h(a, c) * base.ginv(i, l) * base.Ucurl(c, l, j));
          }
        }
        for (int m = 0; m < n; ++m) acc += vel(a, m) * base.ggam(i, m, j);
        defl(i, a, j) = acc;
      }
    }
  }

  NdArray<Jet> low({p, n, n}, zero);
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Jet acc = zero;
        for (int mu = 0; mu < p; ++mu) {
          for (int m = 0; m < n; ++m) {
            acc += base.hinv(a, mu) * base.g(i, m) * defl(m, mu, j);
          }
        }
        low(a, i, j) = acc;
      }
    }
  }

  NdArray<Jet> F({p, n, n}, zero);
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        F(a, i, j) = 0.5 * (low(a, i, j) - low(a, j, i));
      }
    }
  }
  return F;
}

}  // namespace

DeflectionEval deflections(const ModelDef& model, const JetPoint& pt,
                           const GeometryOptions& opts) {
  validate_point(model, pt);
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, pt.t, pt.x, 1);
  geometry::NonlinearConnectionEval conn = geometry::nonlinear_connection(base, pt, opts);

  DeflectionEval out;
  out.Dbar = NdArray<double>({n, p, p});
  out.D = NdArray<double>({n, p, n});
  out.D_closed = NdArray<double>({n, p, n});
  out.d_vert = NdArray<double>({n, p, p, n});
  out.Dbar_low = NdArray<double>({p, n, p});
  out.D_low = NdArray<double>({p, n, n});
  out.d_low = NdArray<double>({p, p, n, n});

  // Dbar^(i)_(a)b = delta(v^i_a)/delta t^b - v^i_mu H^mu_ab; the delta
  // derivative contributes -M^(i)_(a)b = +H^c_ab v^i_c, so both terms are
  // the same contraction and cancel identically.
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        double from_delta = 0.0, from_index = 0.0;
        for (int c = 0; c < p; ++c) from_delta += base.Hgam(c, a, b).value() * pt.vel(c, i, n);
        for (int mu = 0; mu < p; ++mu) from_index += pt.vel(mu, i, n) * base.Hgam(mu, a, b).value();
        out.Dbar(i, a, b) = from_delta - from_index;
      }
    }
  }

  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int j = 0; j < n; ++j) {
        double def = -conn.N(i, a, j);
        for (int m = 0; m < n; ++m) def += pt.vel(a, m, n) * base.ggam(i, m, j).value();
        out.D(i, a, j) = def;
        double closed = 0.0;
        for (int m = 0; m < n; ++m) {
          for (int mu = 0; mu < p; ++mu) {
            closed += base.ginv(i, m).value() * base.h(a, mu).value() * base.Ucurl(mu, m, j).value();
          }
        }
        closed *= -0.25;
        out.D_closed(i, a, j) = closed;
        dev = std::max(dev, std::abs(def - closed));
      }
    }
  }
  out.route_deviation = dev;

  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        for (int j = 0; j < n; ++j) {
          out.d_vert(i, a, b, j) = (i == j && a == b) ? 1.0 : 0.0;
        }
      }
    }
  }

  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int b = 0; b < p; ++b) {
        double acc = 0.0;
        for (int mu = 0; mu < p; ++mu) {
          for (int m = 0; m < n; ++m) {
            acc += base.hinv(a, mu).value() * base.g(i, m).value() * out.Dbar(m, mu, b);
          }
        }
        out.Dbar_low(a, i, b) = acc;
      }
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int mu = 0; mu < p; ++mu) {
          for (int m = 0; m < n; ++m) {
            acc += base.hinv(a, mu).value() * base.g(i, m).value() * out.D(m, mu, j);
          }
        }
        out.D_low(a, i, j) = acc;
      }
    }
  }
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out.d_low(a, b, i, j) = base.hinv(a, b).value() * base.g(i, j).value();
        }
      }
    }
  }
  return out;
}

ElectromagneticEval em_tensor(const ModelDef& model, const std::vector<double>& t,
                              const std::vector<double>& x, const GeometryOptions& opts) {
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, t, x, 1);
  std::vector<double> v0(static_cast<std::size_t>(p) * n, 0.0);
  NdArray<Jet> Fj = em_jets(base, v0, opts);

  ElectromagneticEval out;
  out.F = NdArray<double>({p, n, n});
  out.F_skew = NdArray<double>({p, n, n});
  double dev = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.F(a, i, j) = -0.25 * base.Ucurl(a, i, j).value();
        out.F_skew(a, i, j) = Fj(a, i, j).value();
        dev = std::max(dev, std::abs(out.F(a, i, j) - out.F_skew(a, i, j)));
      }
    }
  }
  out.route_deviation = dev;
  return out;
}

MaxwellResiduals maxwell_residuals(const ModelDef& model, const JetPoint& pt,
                                   const GeometryOptions& opts) {
  validate_point(model, pt);
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, pt.t, pt.x, 3);
  NdArray<Jet> F = em_jets(base, pt.v, opts);
  geometry::TorsionEval tor = geometry::torsion(base, pt);

  MaxwellResiduals out;

  // Equation 1: F^(a)_(i)j/b = 1/2 A_{i,j} h^{a mu} g_im R^(m)_(mu)bj.
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int b = 0; b < p; ++b) {
          double lhs = F(a, i, j).partial(b);
          for (int mu = 0; mu < p; ++mu) {
            lhs += F(mu, i, j).value() * base.Hgam(a, mu, b).value();
          }
          double rhs = 0.0;
          for (int mu = 0; mu < p; ++mu) {
            for (int m = 0; m < n; ++m) {
              rhs += base.hinv(a, mu).value() *
                     (base.g(i, m).value() * tor.R_tj(m, mu, b, j) -
                      base.g(j, m).value() * tor.R_tj(m, mu, b, i));
            }
          }
          rhs *= 0.5;
          out.eq1 = std::max(out.eq1, std::abs(lhs - rhs));
        }
      }
    }
  }

  // Equation 2: cyclic sum of the spatial covariant derivative.
  auto cov = [&](int a, int i, int j, int k) {
    double acc = F(a, i, j).partial(p + k);
    for (int m = 0; m < n; ++m) {
      acc -= base.ggam(m, i, k).value() * F(a, m, j).value();
      acc -= base.ggam(m, j, k).value() * F(a, i, m).value();
    }
    return acc;
  };
  for (int a = 0; a < p; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double cyc = cov(a, i, j, k) + cov(a, j, k, i) + cov(a, k, i, j);
          out.eq2 = std::max(out.eq2, std::abs(cyc));
        }
      }
    }
  }

  // Equation 3: vertical derivatives of F vanish structurally.
  out.eq3 = 0.0;
  return out;
}

EinsteinEval einstein_blocks(const ModelDef& model, const std::vector<double>& t,
                             const std::vector<double>& x, double K) {
  if (K == 0.0) throw ConfigError("einstein_blocks: the constant K must be nonzero");
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, t, x, 2);

  const double H = base.hcurv.scalar.value();
  const double r = base.gcurv.scalar.value();
  const double half_sum = 0.5 * (H + r);

  EinsteinEval out;
  out.scalar_h = H;
  out.scalar_g = r;
  out.scalar_S = 0.0;
  out.scalar_total = H + r;

  out.e1_tt = NdArray<double>({p, p});
  out.ep1_tt = NdArray<double>({p, p});
  out.T_tt = NdArray<double>({p, p});
  out.Ttilde_tt = NdArray<double>({p, p});
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      double ric = base.hcurv.ricci(a, b).value();
      double hv = base.h(a, b).value();
      out.e1_tt(a, b) = ric - half_sum * hv;
      out.ep1_tt(a, b) = ric - 0.5 * H * hv;
      out.T_tt(a, b) = out.e1_tt(a, b) / K;
      out.Ttilde_tt(a, b) = out.ep1_tt(a, b) / K;
    }
  }

  out.e1_xx = NdArray<double>({n, n});
  out.ep1_xx = NdArray<double>({n, n});
  out.T_xx = NdArray<double>({n, n});
  out.Ttilde_xx = NdArray<double>({n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double ric = base.gcurv.ricci(i, j).value();
      double gv = base.g(i, j).value();
      out.e1_xx(i, j) = ric - half_sum * gv;
      out.ep1_xx(i, j) = ric - 0.5 * r * gv;
      out.T_xx(i, j) = out.e1_xx(i, j) / K;
      out.Ttilde_xx(i, j) = out.ep1_xx(i, j) / K;
    }
  }

  out.e1_vv = NdArray<double>({p, p, n, n});
  out.T_vv = NdArray<double>({p, p, n, n});
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out.e1_vv(a, b, i, j) = -half_sum * base.hinv(a, b).value() * base.g(i, j).value();
          out.T_vv(a, b, i, j) = out.e1_vv(a, b, i, j) / K;
        }
      }
    }
  }
  return out;
}

ConservationResiduals conservation_residuals(const ModelDef& model, const std::vector<double>& t,
                                             const std::vector<double>& x) {
  const int p = model.p, n = model.n;
  BaseEval base = base_eval(model, t, x, 3);
  const Jet zero = Jet::constant(0.0, p + n, 1);

  ConservationResiduals out;

  // Temporal side: A^mu_b = h^{mu nu} H_{nu b} - (scalar/2) delta, with the
  // spatial scalar entering as a constant in t (autonomy). Divergence uses
  // the Levi-Civita connection of h.
  auto temporal_div = [&](bool include_r) {
    std::vector<double> res(static_cast<std::size_t>(p), 0.0);
    NdArray<Jet> A({p, p}, zero);
    Jet half_scalar = 0.5 * (include_r ? base.hcurv.scalar + base.gcurv.scalar : base.hcurv.scalar);
    for (int mu = 0; mu < p; ++mu) {
      for (int b = 0; b < p; ++b) {
        Jet acc = zero;
        for (int nu = 0; nu < p; ++nu) acc += base.hinv(mu, nu) * base.hcurv.ricci(nu, b);
        if (mu == b) acc -= half_scalar;
        A(mu, b) = acc;
      }
    }
    for (int b = 0; b < p; ++b) {
      double div = 0.0;
      for (int mu = 0; mu < p; ++mu) {
        div += A(mu, b).partial(mu);
        for (int nu = 0; nu < p; ++nu) {
          div += base.Hgam(mu, mu, nu).value() * A(nu, b).value();
          div -= base.Hgam(nu, mu, b).value() * A(mu, nu).value();
        }
      }
      res[static_cast<std::size_t>(b)] = div;
    }
    return res;
  };

  auto spatial_div = [&](bool include_h) {
    std::vector<double> res(static_cast<std::size_t>(n), 0.0);
    NdArray<Jet> A({n, n}, zero);
    Jet half_scalar = 0.5 * (include_h ? base.hcurv.scalar + base.gcurv.scalar : base.gcurv.scalar);
    for (int m = 0; m < n; ++m) {
      for (int j = 0; j < n; ++j) {
        Jet acc = zero;
        for (int i = 0; i < n; ++i) acc += base.ginv(m, i) * base.gcurv.ricci(i, j);
        if (m == j) acc -= half_scalar;
        A(m, j) = acc;
      }
    }
    for (int j = 0; j < n; ++j) {
      double div = 0.0;
      for (int m = 0; m < n; ++m) {
        div += A(m, j).partial(p + m);
        for (int l = 0; l < n; ++l) {
          div += base.ggam(m, m, l).value() * A(l, j).value();
          div -= base.ggam(l, m, j).value() * A(m, l).value();
        }
      }
      res[static_cast<std::size_t>(j)] = div;
    }
    return res;
  };

  out.temporal = temporal_div(true);
  out.spatial = spatial_div(true);
  out.temporal_tilde = temporal_div(false);
  out.spatial_tilde = spatial_div(false);
  return out;
}

}  // namespace jetlag::fieldeqs
