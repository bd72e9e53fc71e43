#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kshift/logreal.hpp"

namespace kshift::dsl {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset(offset) {}
  size_t offset;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression AST over variables (n, and m for matrix entries), literals,
// operators + - * / ^, and the fixed function set
// log, exp, factorial, floor, max, min, block.
class Expr {
 public:
  enum class Kind { Literal, Variable, Unary, Binary, Call };
  Kind kind;
  real literal = 0;            // Literal
  std::string name;            // Variable, Call
  char op = 0;                 // Binary: + - * / ^ ; Unary: -
  std::vector<std::shared_ptr<const Expr>> args;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Precedence: ^ (right-assoc) > unary minus > * / > + -.
ExprPtr parse(std::string_view text);

// Canonical rendering; parse(print(e)) is structurally equal to e.
std::string print(const ExprPtr& e);
bool equal(const ExprPtr& a, const ExprPtr& b);

// Signed magnitude carried in log domain; sign 0 encodes exact zero.
struct SignedLog {
  int sign = 0;
  real ln = kNegInf;
};

using Bindings = std::map<std::string, real>;

// Log-domain evaluation: products and powers stay exact in log space, sums go
// through log-sum-exp. Exponents and integer-like arguments (floor, block,
// factorial) are materialized as plain values and must stay below 1e15.
SignedLog eval(const ExprPtr& e, const Bindings& b);

// Evaluation for nonnegative quantities; a negative result is an EvalError.
LogReal eval_log(const ExprPtr& e, const Bindings& b);

// ln of a strictly positive result (EvalError if zero or negative).
real eval_ln_positive(const ExprPtr& e, const Bindings& b);

// Plain-double evaluation (may overflow for extreme magnitudes).
double eval_plain(const ExprPtr& e, const Bindings& b);

}  // namespace kshift::dsl
