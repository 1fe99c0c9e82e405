#include "jetlag/semigeom.hpp"

#include <cmath>

#include "jetlag/errors.hpp"

namespace jetlag::semigeom {

namespace {

Jet zero_like(const Jet& ref) { return Jet::constant(0.0, ref.num_vars(), ref.order()); }

JetEnv seeded_env(CoordKind kind, const std::vector<double>& point, int dim, int order) {
  JetEnv env;
  std::vector<Jet> seeds;
  seeds.reserve(static_cast<std::size_t>(dim));
  for (int v = 0; v < dim; ++v) {
    seeds.push_back(Jet::variable(v, point[static_cast<std::size_t>(v)], dim, order));
  }
  if (kind == CoordKind::Temporal) {
    env.t = std::move(seeds);
  } else {
    env.x = std::move(seeds);
  }
  return env;
}

}  // namespace

NdArray<Jet> invert_jet_matrix(const NdArray<Jet>& m) {
  int dim = m.dim(0);
  const Jet& ref = m(0, 0);
  NdArray<Jet> a = m;
  NdArray<Jet> inv({dim, dim}, zero_like(ref));
  for (int i = 0; i < dim; ++i) inv(i, i) = Jet::constant(1.0, ref.num_vars(), ref.order());

  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r) {
      if (std::abs(a(r, c).value()) > std::abs(a(piv, c).value())) piv = r;
    }
    if (std::abs(a(piv, c).value()) < 1e-300) {
      throw SingularPointError("singular metric: jet matrix not invertible");
    }
    if (piv != c) {
      for (int k = 0; k < dim; ++k) {
        std::swap(a(c, k), a(piv, k));
        std::swap(inv(c, k), inv(piv, k));
      }
    }
    Jet d = a(c, c);
    for (int k = 0; k < dim; ++k) {
      a(c, k) = a(c, k) / d;
      inv(c, k) = inv(c, k) / d;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == c) continue;
      Jet f = a(r, c);
      if (f.value() == 0.0) {
        bool all_zero = true;
        for (int q = 0; q < f.table().size(); ++q) {
          if (f.coeff(q) != 0.0) {
            all_zero = false;
            break;
          }
        }
        if (all_zero) continue;
      }
      for (int k = 0; k < dim; ++k) {
        a(r, k) = a(r, k) - f * a(c, k);
        inv(r, k) = inv(r, k) - f * inv(c, k);
      }
    }
  }
  return inv;
}

MetricJets metric_jets(NdArray<Jet> comp, std::vector<int> vars) {
  MetricJets m;
  m.dim = comp.dim(0);
  m.vars = std::move(vars);
  m.inv = invert_jet_matrix(comp);
  m.comp = std::move(comp);
  return m;
}

NdArray<Jet> christoffel_jets(const MetricJets& m) {
  int dim = m.dim;
  int lower = m.comp(0, 0).order() - 1;
  // dg(l,i,j) = d_l g_ij
  NdArray<Jet> dg({dim, dim, dim}, Jet::constant(0.0, m.comp(0, 0).num_vars(), lower));
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        dg(l, i, j) = jet_partial(m.comp(i, j), m.vars[static_cast<std::size_t>(l)]);
      }
    }
  }
  NdArray<Jet> gamma({dim, dim, dim}, Jet::constant(0.0, m.comp(0, 0).num_vars(), lower));
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        Jet acc = Jet::constant(0.0, m.comp(0, 0).num_vars(), lower);
        for (int l = 0; l < dim; ++l) {
          acc += m.inv(k, l) * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        }
        gamma(k, i, j) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

CurvatureJets curvature_jets(const MetricJets& m, const NdArray<Jet>& gamma) {
  int dim = m.dim;
  int nv = m.comp(0, 0).num_vars();
  int lower = gamma(0, 0, 0).order() - 1;
  Jet zero = Jet::constant(0.0, nv, lower);

  NdArray<Jet> dgam({dim, dim, dim, dim}, zero);  // (l, k, i, j) = d_l gamma^k_ij
  for (int l = 0; l < dim; ++l) {
    for (int k = 0; k < dim; ++k) {
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          dgam(l, k, i, j) = jet_partial(gamma(k, i, j), m.vars[static_cast<std::size_t>(l)]);
        }
      }
    }
  }

  CurvatureJets out;
  out.riemann = NdArray<Jet>({dim, dim, dim, dim}, zero);
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          Jet r = dgam(j, l, i, k) - dgam(k, l, i, j);
          for (int mm = 0; mm < dim; ++mm) {
            r += gamma(l, j, mm) * gamma(mm, i, k) - gamma(l, k, mm) * gamma(mm, i, j);
          }
          out.riemann(l, i, j, k) = r;
        }
      }
    }
  }
  out.ricci = NdArray<Jet>({dim, dim}, zero);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      Jet acc = zero;
      for (int mm = 0; mm < dim; ++mm) acc += out.riemann(mm, i, mm, j);
      out.ricci(i, j) = acc;
    }
  }
  out.scalar = zero;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.scalar += m.inv(i, j) * out.ricci(i, j);
    }
  }
  out.einstein = NdArray<Jet>({dim, dim}, zero);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.einstein(i, j) = out.ricci(i, j) - 0.5 * (out.scalar * m.comp(i, j));
    }
  }
  return out;
}

std::vector<double> bianchi_residual_jets(const MetricJets& m, const NdArray<Jet>& gamma,
                                          const CurvatureJets& curv) {
  int dim = m.dim;
  int nv = m.comp(0, 0).num_vars();
  int lower = curv.scalar.order();
  Jet zero = Jet::constant(0.0, nv, lower);

  // Mixed Einstein tensor E^m_j = inv^{mi} ricci_ij - (scalar/2) delta^m_j.
  NdArray<Jet> mixed({dim, dim}, zero);
  for (int mm = 0; mm < dim; ++mm) {
    for (int j = 0; j < dim; ++j) {
      Jet acc = zero;
      for (int i = 0; i < dim; ++i) acc += m.inv(mm, i) * curv.ricci(i, j);
      if (mm == j) acc -= 0.5 * curv.scalar;
      mixed(mm, j) = acc;
    }
  }

  std::vector<double> residual(static_cast<std::size_t>(dim), 0.0);
  for (int j = 0; j < dim; ++j) {
    double div = 0.0;
    for (int mm = 0; mm < dim; ++mm) {
      div += jet_partial(mixed(mm, j), m.vars[static_cast<std::size_t>(mm)]).value();
      for (int l = 0; l < dim; ++l) {
        div += gamma(mm, mm, l).value() * mixed(l, j).value();
        div -= gamma(l, mm, j).value() * mixed(mm, l).value();
      }
    }
    residual[static_cast<std::size_t>(j)] = div;
  }
  return residual;
}

MetricJets metric_jets_at(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                          const std::vector<double>& point, int order) {
  if (static_cast<int>(point.size()) != dim) {
    throw ConfigError("metric evaluation point has wrong dimension");
  }
  JetEnv env = seeded_env(kind, point, dim, order);
  NdArray<Jet> comp({dim, dim}, Jet::constant(0.0, dim, order));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      comp(i, j) = eval_expression(metric[static_cast<std::size_t>(i) * dim + j], env);
    }
  }
  std::vector<int> vars(static_cast<std::size_t>(dim));
  for (int v = 0; v < dim; ++v) vars[static_cast<std::size_t>(v)] = v;
  return metric_jets(std::move(comp), std::move(vars));
}

MetricEval metric_eval(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                       const std::vector<double>& point) {
  MetricJets m = metric_jets_at(metric, dim, kind, point);
  MetricEval out;
  out.dim = dim;
  out.point = point;
  out.components = NdArray<double>({dim, dim});
  out.inverse = NdArray<double>({dim, dim});
  out.d1 = NdArray<double>({dim, dim, dim});
  out.d2 = NdArray<double>({dim, dim, dim, dim});
  out.d3 = NdArray<double>({dim, dim, dim, dim, dim});
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.components(i, j) = m.comp(i, j).value();
      out.inverse(i, j) = m.inv(i, j).value();
      for (int k = 0; k < dim; ++k) {
        out.d1(k, i, j) = m.comp(i, j).partial(k);
        for (int l = 0; l < dim; ++l) {
          out.d2(k, l, i, j) = m.comp(i, j).partial(k, l);
          for (int q = 0; q < dim; ++q) {
            out.d3(k, l, q, i, j) = m.comp(i, j).partial(k, l, q);
          }
        }
      }
    }
  }
  return out;
}

ChristoffelEval christoffel(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                            const std::vector<double>& point) {
  MetricJets m = metric_jets_at(metric, dim, kind, point);
  NdArray<Jet> gamma = christoffel_jets(m);
  ChristoffelEval out;
  out.dim = dim;
  out.gamma = NdArray<double>({dim, dim, dim});
  out.d1 = NdArray<double>({dim, dim, dim, dim});
  out.d2 = NdArray<double>({dim, dim, dim, dim, dim});
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        out.gamma(k, i, j) = gamma(k, i, j).value();
        for (int l = 0; l < dim; ++l) {
          out.d1(l, k, i, j) = gamma(k, i, j).partial(l);
          for (int q = 0; q < dim; ++q) {
            out.d2(l, q, k, i, j) = gamma(k, i, j).partial(l, q);
          }
        }
      }
    }
  }
  return out;
}

CurvatureEval curvature(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                        const std::vector<double>& point) {
  MetricJets m = metric_jets_at(metric, dim, kind, point);
  NdArray<Jet> gamma = christoffel_jets(m);
  CurvatureJets c = curvature_jets(m, gamma);
  CurvatureEval out;
  out.dim = dim;
  out.riemann = NdArray<double>({dim, dim, dim, dim});
  out.ricci = NdArray<double>({dim, dim});
  out.einstein = NdArray<double>({dim, dim});
  for (int l = 0; l < dim; ++l) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          out.riemann(l, i, j, k) = c.riemann(l, i, j, k).value();
        }
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.ricci(i, j) = c.ricci(i, j).value();
      out.einstein(i, j) = c.einstein(i, j).value();
    }
  }
  out.scalar = c.scalar.value();
  return out;
}

std::vector<double> contracted_bianchi_residual(const std::vector<ExprPtr>& metric, int dim,
                                                CoordKind kind, const std::vector<double>& point) {
  MetricJets m = metric_jets_at(metric, dim, kind, point);
  NdArray<Jet> gamma = christoffel_jets(m);
  CurvatureJets c = curvature_jets(m, gamma);
  return bianchi_residual_jets(m, gamma, c);
}

double scalar_invariance_check(const std::vector<ExprPtr>& metric, int dim, CoordKind kind,
                               const std::vector<ExprPtr>& coordinate_map,
                               const std::vector<double>& preimage_point) {
  if (static_cast<int>(coordinate_map.size()) != dim) {
    throw ConfigError("coordinate_map must supply one expression per coordinate");
  }
  JetEnv env = seeded_env(kind, preimage_point, dim, 3);

  // Old coordinates as jets of the new ones.
  std::vector<Jet> phi;
  phi.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    phi.push_back(eval_expression(coordinate_map[static_cast<std::size_t>(i)], env));
  }

  // Jacobian nondegeneracy at the preimage point.
  NdArray<Jet> jac({dim, dim}, Jet::constant(0.0, dim, 2));
  for (int i = 0; i < dim; ++i) {
    for (int a = 0; a < dim; ++a) {
      jac(i, a) = jet_partial(phi[static_cast<std::size_t>(i)], a);
    }
  }
  {
    // LU determinant on constant terms.
    NdArray<double> jm({dim, dim});
    for (int i = 0; i < dim; ++i) {
      for (int a = 0; a < dim; ++a) jm(i, a) = jac(i, a).value();
    }
    double det = 1.0;
    for (int c = 0; c < dim; ++c) {
      int piv = c;
      for (int r = c + 1; r < dim; ++r) {
        if (std::abs(jm(r, c)) > std::abs(jm(piv, c))) piv = r;
      }
      if (std::abs(jm(piv, c)) < 1e-10) {
        throw SingularPointError("scalar_invariance_check: degenerate Jacobian");
      }
      if (piv != c) {
        for (int k = 0; k < dim; ++k) std::swap(jm(c, k), jm(piv, k));
        det = -det;
      }
      det *= jm(c, c);
      for (int r = c + 1; r < dim; ++r) {
        double f = jm(r, c) / jm(c, c);
        for (int k = c; k < dim; ++k) jm(r, k) -= f * jm(c, k);
      }
    }
  }

  // Metric components at the image, composed through the map.
  JetEnv image_env;
  if (kind == CoordKind::Temporal) {
    image_env.t = phi;
  } else {
    image_env.x = phi;
  }
  NdArray<Jet> gphi({dim, dim}, Jet::constant(0.0, dim, 3));
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      gphi(i, j) = eval_expression(metric[static_cast<std::size_t>(i) * dim + j], image_env);
    }
  }

  // Pullback metric in the new chart, order 2.
  NdArray<Jet> pulled({dim, dim}, Jet::constant(0.0, dim, 2));
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      Jet acc = Jet::constant(0.0, dim, 2);
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
          acc += jac(i, a) * jac(j, b) * gphi(i, j);
        }
      }
      pulled(a, b) = acc;
    }
  }
  std::vector<int> vars(static_cast<std::size_t>(dim));
  for (int v = 0; v < dim; ++v) vars[static_cast<std::size_t>(v)] = v;
  MetricJets pm = metric_jets(std::move(pulled), vars);
  CurvatureJets pc = curvature_jets(pm, christoffel_jets(pm));

  std::vector<double> image(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) image[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i)].value();
  CurvatureEval direct = curvature(metric, dim, kind, image);

  return std::abs(direct.scalar - pc.scalar.value());
}

}  // namespace jetlag::semigeom
