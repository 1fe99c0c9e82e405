#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jetlag/jet.hpp"

namespace jetlag {

enum class ExprKind {
  Constant,     // numeric literal or pi
  TemporalVar,  // t1..tp, var_index 0-based
  SpatialVar,   // x1..xn, var_index 0-based
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // child ^ constant exponent (folded at parse time)
  Call,
};

enum class FuncId { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

// 1-based line, half-open column range on that line.
struct SourceSpan {
  int line = 1;
  int col_begin = 1;
  int col_end = 1;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  double constant = 0.0;   // Constant value or Pow exponent
  int var_index = 0;       // TemporalVar / SpatialVar
  FuncId fn = FuncId::Sin; // Call
  std::vector<ExprPtr> children;
  SourceSpan span;
};

// Recursive-descent parse over variables t1..tp, x1..xn. Precedence
// ^ > unary minus > * / > + -, with ^ right-associative and the other
// binary operators left-associative. Pow exponents must be constant
// expressions and are folded at parse time.
ExprPtr parse_expression(const std::string& text, int p, int n);

// Canonical fully-parenthesized rendering; parse(print(e)) == print-stable.
std::string print_expression(const ExprPtr& e);

// Variable bindings for evaluation; all jets must share num_vars/order.
struct JetEnv {
  std::vector<Jet> t;
  std::vector<Jet> x;
};

// Bottom-up jet evaluation. Domain errors are rethrown with the offending
// subexpression's source span attached.
Jet eval_expression(const ExprPtr& e, const JetEnv& env);

// True when the expression references any temporal (resp. spatial) variable.
bool references_temporal(const ExprPtr& e);
bool references_spatial(const ExprPtr& e);

}  // namespace jetlag
