#include "jetlag/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jetlag/errors.hpp"
#include "jetlag/semigeom.hpp"

namespace jetlag::checks {

namespace {

struct Tracker {
  IdentityResult res;

  explicit Tracker(std::string name) { res.name = std::move(name); }

  void record(double residual, const JetPoint& pt) {
    ++res.samples;
    const double r = std::abs(residual);
    if (r >= res.max_residual) {
      res.max_residual = r;
      res.worst = pt;
    }
  }
};

double max_abs(const NdArray<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

SuiteResult run_check_suite(const ModelDef& model, const CheckOptions& opts) {
  if (opts.samples < 1) throw ConfigError("check suite: samples must be >= 1");
  if (!(opts.tol > 0.0)) throw ConfigError("check suite: tolerance must be positive");
  if (opts.einstein_K == 0.0 || opts.einstein_K == 1.0) {
    throw ConfigError("check suite: einstein_K must differ from 0 and 1");
  }

  const int p = model.p;
  const int n = model.n;

  Tracker compat_h("metric_compatibility_h");
  Tracker compat_g("metric_compatibility_g");
  Tracker bianchi1_h("first_bianchi_h");
  Tracker bianchi1_g("first_bianchi_g");
  Tracker bianchi2_h("contracted_bianchi_h");
  Tracker bianchi2_g("contracted_bianchi_g");
  Tracker ricci_h("ricci_symmetry_h");
  Tracker ricci_g("ricci_symmetry_g");
  Tracker m2h("spray_M_equals_2H");
  Tracker nspray("nonlinear_N_vs_spray_derivative");
  Tracker defl("deflection_closed_vs_definitional");
  Tracker mx1("maxwell_eq1");
  Tracker mx2("maxwell_eq2");
  Tracker mx3("maxwell_eq3");
  Tracker cons_t("conservation_temporal");
  Tracker cons_x("conservation_spatial");
  Tracker einlin("einstein_K_linearity");

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int s = 0; s < opts.samples; ++s) {
    JetPoint pt;
    pt.t.resize(static_cast<std::size_t>(p));
    pt.x.resize(static_cast<std::size_t>(n));
    pt.v.resize(static_cast<std::size_t>(p) * n);
    for (int a = 0; a < p; ++a) {
      const auto& iv = model.probes.t[static_cast<std::size_t>(a)];
      pt.t[static_cast<std::size_t>(a)] =
          iv.first + (iv.second - iv.first) * (0.5 + 0.5 * unit(rng));
    }
    for (int i = 0; i < n; ++i) {
      const auto& iv = model.probes.x[static_cast<std::size_t>(i)];
      pt.x[static_cast<std::size_t>(i)] =
          iv.first + (iv.second - iv.first) * (0.5 + 0.5 * unit(rng));
    }
    for (auto& vi : pt.v) vi = unit(rng);

    const auto base = geometry::base_eval(model, pt.t, pt.x, 3);

    // Covariant constancy of each metric under its own Christoffels.
    {
      double r = 0.0;
      for (int c = 0; c < p; ++c)
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b) {
            double d = base.h(a, b).partial(c);
            for (int e = 0; e < p; ++e) {
              d -= base.Hgam(e, c, a).value() * base.h(e, b).value();
              d -= base.Hgam(e, c, b).value() * base.h(a, e).value();
            }
            r = std::max(r, std::abs(d));
          }
      compat_h.record(r, pt);
      r = 0.0;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double d = base.g(i, j).partial(p + k);
            for (int m = 0; m < n; ++m) {
              d -= base.ggam(m, k, i).value() * base.g(m, j).value();
              d -= base.ggam(m, k, j).value() * base.g(i, m).value();
            }
            r = std::max(r, std::abs(d));
          }
      compat_g.record(r, pt);
    }

    // First Bianchi identity (cyclic sum over the lower indices).
    {
      double r = 0.0;
      for (int l = 0; l < p; ++l)
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
              r = std::max(r, std::abs(base.hcurv.riemann(l, i, j, k).value() +
                                       base.hcurv.riemann(l, j, k, i).value() +
                                       base.hcurv.riemann(l, k, i, j).value()));
      bianchi1_h.record(r, pt);
      r = 0.0;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              r = std::max(r, std::abs(base.gcurv.riemann(l, i, j, k).value() +
                                       base.gcurv.riemann(l, j, k, i).value() +
                                       base.gcurv.riemann(l, k, i, j).value()));
      bianchi1_g.record(r, pt);
    }

    // Contracted Bianchi (divergence-free mixed Einstein tensor).
    {
      const auto rh = semigeom::contracted_bianchi_residual(model.h, p, semigeom::CoordKind::Temporal, pt.t);
      double r = 0.0;
      for (double v : rh) r = std::max(r, std::abs(v));
      bianchi2_h.record(r, pt);
      const auto rg = semigeom::contracted_bianchi_residual(model.g, n, semigeom::CoordKind::Spatial, pt.x);
      r = 0.0;
      for (double v : rg) r = std::max(r, std::abs(v));
      bianchi2_g.record(r, pt);
    }

    // Ricci symmetry.
    {
      double r = 0.0;
      for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b)
          r = std::max(r, std::abs(base.hcurv.ricci(a, b).value() - base.hcurv.ricci(b, a).value()));
      ricci_h.record(r, pt);
      r = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          r = std::max(r, std::abs(base.gcurv.ricci(i, j).value() - base.gcurv.ricci(j, i).value()));
      ricci_g.record(r, pt);
    }

    // M = 2H and N against the velocity derivative of script G.
    {
      const auto sp = geometry::spray(base, pt);
      const auto conn = geometry::nonlinear_connection(base, pt, opts.geometry);
      double r = 0.0;
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a)
          for (int b = 0; b < p; ++b)
            r = std::max(r, std::abs(conn.M(i, a, b) - 2.0 * sp.H(i, a, b)));
      m2h.record(r, pt);
      nspray.record(geometry::nonlinear_from_spray_check(model, pt), pt);
    }

    // Deflection tensors: both routes, plus the vanishing mixed block.
    {
      const auto de = fieldeqs::deflections(model, pt, opts.geometry);
      defl.record(std::max(de.route_deviation, max_abs(de.Dbar)), pt);
    }

    // Maxwell-type equations.
    {
      const auto mr = fieldeqs::maxwell_residuals(model, pt, opts.geometry);
      mx1.record(mr.eq1, pt);
      mx2.record(mr.eq2, pt);
      mx3.record(mr.eq3, pt);
    }

    // Conservation laws.
    {
      const auto cr = fieldeqs::conservation_residuals(model, pt.t, pt.x);
      double rt = 0.0, rx = 0.0;
      for (double v : cr.temporal) rt = std::max(rt, std::abs(v));
      for (double v : cr.temporal_tilde) rt = std::max(rt, std::abs(v));
      for (double v : cr.spatial) rx = std::max(rx, std::abs(v));
      for (double v : cr.spatial_tilde) rx = std::max(rx, std::abs(v));
      cons_t.record(rt, pt);
      cons_x.record(rx, pt);
    }

    // The extracted stress-energy must scale exactly as 1/K.
    {
      const auto e1 = fieldeqs::einstein_blocks(model, pt.t, pt.x, 1.0);
      const auto eK = fieldeqs::einstein_blocks(model, pt.t, pt.x, opts.einstein_K);
      double r = 0.0;
      auto cmp = [&](const NdArray<double>& one, const NdArray<double>& k) {
        for (std::size_t q = 0; q < one.size(); ++q)
          r = std::max(r, std::abs(opts.einstein_K * k.at_flat(q) - one.at_flat(q)));
      };
      cmp(e1.T_tt, eK.T_tt);
      cmp(e1.T_xx, eK.T_xx);
      cmp(e1.T_vv, eK.T_vv);
      cmp(e1.Ttilde_tt, eK.Ttilde_tt);
      cmp(e1.Ttilde_xx, eK.Ttilde_xx);
      einlin.record(r, pt);
    }
  }

  SuiteResult out;
  out.model_name = model.name;
  for (Tracker* t : {&compat_h, &compat_g, &bianchi1_h, &bianchi1_g, &bianchi2_h, &bianchi2_g,
                     &ricci_h, &ricci_g, &m2h, &nspray, &defl, &mx1, &mx2, &mx3, &cons_t, &cons_x,
                     &einlin}) {
    out.max_residual = std::max(out.max_residual, t->res.max_residual);
    out.results.push_back(std::move(t->res));
  }
  out.passed = out.max_residual < opts.tol;
  return out;
}

}  // namespace jetlag::checks
