#include "jetlag/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace jetlag {

namespace {

constexpr int kMaxVars = 16;
constexpr int kMaxOrder = 3;

[[noreturn]] void throw_singular(const char* fn, double value) {
  std::ostringstream os;
  os << fn << " out of domain at constant term " << value;
  throw SingularPointError(os.str());
}

// Enumerates multi-indices of total degree <= order over num_vars variables
// in graded lexicographic order (constant term first).
void enumerate(int num_vars, int order, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(num_vars), 0);
  for (int deg = 0; deg <= order; ++deg) {
    // Recursive distribution of `deg` among the variables, lexicographic.
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == num_vars - 1) {
        cur[static_cast<std::size_t>(var)] = remaining;
        out.push_back(cur);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = e;
        self(self, var + 1, remaining - e);
      }
    };
    if (num_vars == 0) {
      if (deg == 0) out.push_back(cur);
    } else {
      rec(rec, 0, deg);
    }
  }
}

}  // namespace

JetTable::JetTable(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  std::vector<std::vector<int>> mis;
  enumerate(num_vars, order, mis);
  size_ = static_cast<int>(mis.size());
  exps_.resize(static_cast<std::size_t>(size_) * num_vars_);
  degree_.resize(static_cast<std::size_t>(size_));
  factorial_.resize(static_cast<std::size_t>(size_));
  for (int i = 0; i < size_; ++i) {
    int deg = 0;
    double fact = 1.0;
    for (int v = 0; v < num_vars_; ++v) {
      int e = mis[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)];
      exps_[static_cast<std::size_t>(i) * num_vars_ + v] = static_cast<std::uint16_t>(e);
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degree_[static_cast<std::size_t>(i)] = deg;
    factorial_[static_cast<std::size_t>(i)] = fact;
    pos_[encode(mis[static_cast<std::size_t>(i)])] = i;
  }
  conv_.resize(static_cast<std::size_t>(size_));
  std::vector<int> sum(static_cast<std::size_t>(num_vars_));
  for (int a = 0; a < size_; ++a) {
    for (int b = 0; b < size_; ++b) {
      if (degree_[a] + degree_[b] > order_) continue;
      for (int v = 0; v < num_vars_; ++v) {
        sum[static_cast<std::size_t>(v)] = exponent(a, v) + exponent(b, v);
      }
      int out = position(sum);
      conv_[static_cast<std::size_t>(out)].emplace_back(a, b);
    }
  }
}

std::uint64_t JetTable::encode(std::span<const int> exps) const {
  std::uint64_t key = 0;
  for (int v = 0; v < num_vars_; ++v) {
    key |= static_cast<std::uint64_t>(exps[static_cast<std::size_t>(v)] & 0xF) << (4 * v);
  }
  return key;
}

int JetTable::position(std::span<const int> exps) const {
  int deg = 0;
  for (int v = 0; v < num_vars_; ++v) deg += exps[static_cast<std::size_t>(v)];
  if (deg > order_) return -1;
  auto it = pos_.find(encode(exps));
  return it == pos_.end() ? -1 : it->second;
}

const JetTable& JetTable::get(int num_vars, int order) {
  if (num_vars < 1 || num_vars > kMaxVars) {
    throw ConfigError("jet num_vars must be in [1, " + std::to_string(kMaxVars) + "], got " +
                      std::to_string(num_vars));
  }
  if (order < 0 || order > kMaxOrder) {
    throw ConfigError("jet order must be in [0, 3], got " + std::to_string(order));
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{num_vars, order}];
  if (!slot) slot.reset(new JetTable(num_vars, order));
  return *slot;
}

Jet Jet::constant(double value, int num_vars, int order) {
  Jet j(JetTable::get(num_vars, order));
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int var_index, double value, int num_vars, int order) {
  if (order < 1 || order > kMaxOrder) {
    throw ConfigError("seeded variable requires order in {1,2,3}, got " + std::to_string(order));
  }
  if (var_index < 0 || var_index >= num_vars) {
    throw ConfigError("variable index " + std::to_string(var_index) + " out of range for " +
                      std::to_string(num_vars) + " variables");
  }
  Jet j(JetTable::get(num_vars, order));
  j.coeffs_[0] = value;
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  e[static_cast<std::size_t>(var_index)] = 1;
  j.coeffs_[static_cast<std::size_t>(j.table_->position(e))] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> vars) const {
  std::vector<int> e(static_cast<std::size_t>(num_vars()), 0);
  for (int v : vars) {
    if (v < 0 || v >= num_vars()) throw ConfigError("partial: variable index out of range");
    ++e[static_cast<std::size_t>(v)];
  }
  int pos = table_->position(e);
  if (pos < 0) throw ConfigError("partial: requested order exceeds jet order");
  return coeffs_[static_cast<std::size_t>(pos)] * table_->mi_factorial(pos);
}

double Jet::partial(int v) const {
  const int vars[] = {v};
  return partial(std::span<const int>(vars));
}

double Jet::partial(int v1, int v2) const {
  const int vars[] = {v1, v2};
  return partial(std::span<const int>(vars));
}

double Jet::partial(int v1, int v2, int v3) const {
  const int vars[] = {v1, v2, v3};
  return partial(std::span<const int>(vars));
}

namespace {

// Aligns two jets to a common table: num_vars must match, orders are
// truncated to the smaller one.
std::pair<Jet, Jet> aligned(const Jet& a, const Jet& b) {
  if (a.num_vars() != b.num_vars()) {
    throw ConfigError("jet arithmetic requires matching num_vars");
  }
  int ord = std::min(a.order(), b.order());
  return {truncated(a, ord), truncated(b, ord)};
}

}  // namespace

Jet truncated(const Jet& a, int order) {
  if (order == a.order()) return a;
  if (order > a.order()) throw ConfigError("cannot truncate a jet to a higher order");
  Jet out(JetTable::get(a.num_vars(), order));
  // Graded enumeration means the first out.table size entries coincide.
  for (int i = 0; i < out.table_->size(); ++i) out.coeffs_[static_cast<std::size_t>(i)] = a.coeffs_[static_cast<std::size_t>(i)];
  return out;
}

Jet jet_partial(const Jet& a, int var) {
  if (a.order() < 1) throw ConfigError("jet_partial requires order >= 1");
  if (var < 0 || var >= a.num_vars()) throw ConfigError("jet_partial: variable out of range");
  Jet out(JetTable::get(a.num_vars(), a.order() - 1));
  const JetTable& lo = *out.table_;
  const JetTable& hi = *a.table_;
  std::vector<int> e(static_cast<std::size_t>(a.num_vars()));
  for (int i = 0; i < lo.size(); ++i) {
    for (int v = 0; v < a.num_vars(); ++v) e[static_cast<std::size_t>(v)] = lo.exponent(i, v);
    ++e[static_cast<std::size_t>(var)];
    int src = hi.position(e);
    out.coeffs_[static_cast<std::size_t>(i)] =
        a.coeffs_[static_cast<std::size_t>(src)] * e[static_cast<std::size_t>(var)];
    --e[static_cast<std::size_t>(var)];
  }
  return out;
}

Jet operator+(const Jet& a, const Jet& b) {
  auto [x, y] = aligned(a, b);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
  return x;
}

Jet operator-(const Jet& a, const Jet& b) {
  auto [x, y] = aligned(a, b);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
  return x;
}

Jet operator*(const Jet& a, const Jet& b) {
  auto [x, y] = aligned(a, b);
  Jet out(*x.table_);
  for (int k = 0; k < x.table_->size(); ++k) {
    double acc = 0.0;
    for (const auto& [i, j] : x.table_->conv_pairs(k)) {
      acc += x.coeffs_[static_cast<std::size_t>(i)] * y.coeffs_[static_cast<std::size_t>(j)];
    }
    out.coeffs_[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet operator+(const Jet& a, double b) {
  Jet out = a;
  out.coeffs_[0] += b;
  return out;
}
Jet operator+(double a, const Jet& b) { return b + a; }
Jet operator-(const Jet& a, double b) { return a + (-b); }
Jet operator-(double a, const Jet& b) { return -(b - a); }
Jet operator*(const Jet& a, double b) {
  Jet out = a;
  for (double& c : out.coeffs_) c *= b;
  return out;
}
Jet operator*(double a, const Jet& b) { return b * a; }
Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }

// Univariate Taylor composition: taylor holds f(c), f'(c), f''(c)/2!,
// f'''(c)/3! (one entry per stored order); evaluated by Horner in w = a - c.
Jet compose_univariate(const Jet& a, std::span<const double> taylor, const char*) {
  Jet w = a;
  w.coeffs_[0] = 0.0;
  int ord = a.order();
  Jet acc = Jet::constant(taylor[static_cast<std::size_t>(ord)], a.num_vars(), ord);
  for (int k = ord - 1; k >= 0; --k) {
    acc = acc * w + taylor[static_cast<std::size_t>(k)];
  }
  return acc;
}

namespace {

Jet reciprocal(const Jet& b, const char* ctx) {
  double c = b.value();
  if (c == 0.0) throw_singular(ctx, c);
  double taylor[4] = {1.0 / c, -1.0 / (c * c), 1.0 / (c * c * c), -1.0 / (c * c * c * c)};
  return compose_univariate(b, std::span<const double>(taylor, static_cast<std::size_t>(b.order()) + 1), ctx);
}

}  // namespace

Jet operator/(const Jet& a, const Jet& b) {
  auto [x, y] = aligned(a, b);
  return x * reciprocal(y, "div");
}

Jet operator/(double a, const Jet& b) { return reciprocal(b, "div") * a; }

Jet sin(const Jet& a) {
  double c = a.value();
  double s = std::sin(c), co = std::cos(c);
  double taylor[4] = {s, co, -s / 2.0, -co / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "sin");
}

Jet cos(const Jet& a) {
  double c = a.value();
  double s = std::sin(c), co = std::cos(c);
  double taylor[4] = {co, -s, -co / 2.0, s / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "cos");
}

Jet tan(const Jet& a) {
  double c = a.value();
  if (std::abs(std::cos(c)) < 1e-12) throw_singular("tan", c);
  double t = std::tan(c);
  double u = 1.0 + t * t;
  double taylor[4] = {t, u, t * u, u * (1.0 + 3.0 * t * t) / 3.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "tan");
}

Jet exp(const Jet& a) {
  double e = std::exp(a.value());
  double taylor[4] = {e, e, e / 2.0, e / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "exp");
}

Jet log(const Jet& a) {
  double c = a.value();
  if (c <= 0.0) throw_singular("log", c);
  double taylor[4] = {std::log(c), 1.0 / c, -1.0 / (2.0 * c * c), 1.0 / (3.0 * c * c * c)};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "log");
}

Jet sqrt(const Jet& a) {
  double c = a.value();
  if (c <= 0.0) throw_singular("sqrt", c);
  double s = std::sqrt(c);
  double taylor[4] = {s, 0.5 / s, -1.0 / (8.0 * c * s), 1.0 / (16.0 * c * c * s)};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "sqrt");
}

Jet sinh(const Jet& a) {
  double c = a.value();
  double s = std::sinh(c), co = std::cosh(c);
  double taylor[4] = {s, co, s / 2.0, co / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "sinh");
}

Jet cosh(const Jet& a) {
  double c = a.value();
  double s = std::sinh(c), co = std::cosh(c);
  double taylor[4] = {co, s, co / 2.0, s / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "cosh");
}

Jet pow(const Jet& a, double exponent) {
  double rounded = std::round(exponent);
  if (std::abs(exponent - rounded) < 1e-12 && std::abs(rounded) <= 64.0) {
    int e = static_cast<int>(rounded);
    Jet acc = Jet::constant(1.0, a.num_vars(), a.order());
    Jet base = a;
    int k = e < 0 ? -e : e;
    while (k > 0) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    if (e < 0) acc = reciprocal(acc, "pow");
    return acc;
  }
  double c = a.value();
  if (c <= 0.0) throw_singular("pow", c);
  double p = exponent;
  double taylor[4] = {std::pow(c, p), p * std::pow(c, p - 1.0),
                      p * (p - 1.0) * std::pow(c, p - 2.0) / 2.0,
                      p * (p - 1.0) * (p - 2.0) * std::pow(c, p - 3.0) / 6.0};
  return compose_univariate(a, std::span<const double>(taylor, static_cast<std::size_t>(a.order()) + 1), "pow");
}

}  // namespace jetlag
