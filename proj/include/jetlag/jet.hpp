#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jetlag/errors.hpp"

namespace jetlag {

// Shared multi-index bookkeeping for one (num_vars, order) combination.
// Tables are interned and immutable; Jet values keep a plain pointer.
class JetTable {
 public:
  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  int size() const { return size_; }

  // Exponent of variable v in the multi-index at position idx.
  int exponent(int idx, int v) const { return exps_[static_cast<std::size_t>(idx) * num_vars_ + v]; }
  int degree(int idx) const { return degree_[static_cast<std::size_t>(idx)]; }

  // Position of a multi-index given by exponents, or -1 when its total
  // degree exceeds the truncation order.
  int position(std::span<const int> exps) const;

  // (a_pos, b_pos) pairs whose multi-indices sum to the one at out_pos.
  const std::vector<std::pair<int, int>>& conv_pairs(int out_pos) const {
    return conv_[static_cast<std::size_t>(out_pos)];
  }

  // Product of factorials of the exponents at idx (converts a Taylor
  // coefficient into a partial derivative).
  double mi_factorial(int idx) const { return factorial_[static_cast<std::size_t>(idx)]; }

  static const JetTable& get(int num_vars, int order);

 private:
  JetTable(int num_vars, int order);

  std::uint64_t encode(std::span<const int> exps) const;

  int num_vars_ = 0;
  int order_ = 0;
  int size_ = 0;
  std::vector<std::uint16_t> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::unordered_map<std::uint64_t, int> pos_;
  std::vector<std::vector<std::pair<int, int>>> conv_;
};

// Truncated multivariate Taylor value: all partial derivatives of a scalar
// quantity with respect to the base variables, up to total degree `order`
// (at most 3). Coefficients are stored in Taylor normalization, so products
// are plain truncated convolutions. Values are immutable in practice: every
// operation returns a fresh Jet.
class Jet {
 public:
  Jet() = default;

  static Jet constant(double value, int num_vars, int order);

  // The coordinate function of variable var_index, seeded at `value`.
  static Jet variable(int var_index, double value, int num_vars, int order);

  bool valid() const { return table_ != nullptr; }
  int num_vars() const { return table_->num_vars(); }
  int order() const { return table_->order(); }
  const JetTable& table() const { return *table_; }

  double value() const { return coeffs_[0]; }

  // Taylor coefficient at a stored multi-index position.
  double coeff(int pos) const { return coeffs_[static_cast<std::size_t>(pos)]; }
  double& coeff(int pos) { return coeffs_[static_cast<std::size_t>(pos)]; }

  // Partial derivatives; vars lists the differentiation variables with
  // multiplicity, e.g. {0, 0, 1} for d^3/dv0^2 dv1.
  double partial(std::span<const int> vars) const;
  double partial(int v) const;
  double partial(int v1, int v2) const;
  double partial(int v1, int v2, int v3) const;

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);

  friend Jet operator+(const Jet& a, double b);
  friend Jet operator+(double a, const Jet& b);
  friend Jet operator-(const Jet& a, double b);
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(const Jet& a, double b);
  friend Jet operator*(double a, const Jet& b);
  friend Jet operator/(const Jet& a, double b);
  friend Jet operator/(double a, const Jet& b);

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

 private:
  explicit Jet(const JetTable& table) : table_(&table), coeffs_(table.size(), 0.0) {}

  const JetTable* table_ = nullptr;
  std::vector<double> coeffs_;

  friend Jet truncated(const Jet& a, int order);
  friend Jet jet_partial(const Jet& a, int var);
  friend Jet compose_univariate(const Jet& a, std::span<const double> taylor, const char* fn_name);
};

// Copy of `a` truncated to a lower order (same num_vars).
Jet truncated(const Jet& a, int order);

// d(a)/d(var) as a jet of one order less.
Jet jet_partial(const Jet& a, int var);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);

// a raised to a constant exponent. Integer exponents (within 1e-12) are
// evaluated by repeated multiplication and admit nonpositive bases; other
// exponents require a positive constant term.
Jet pow(const Jet& a, double exponent);

}  // namespace jetlag
