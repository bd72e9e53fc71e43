#include "kshift/seqdsl.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace kshift::dsl {

namespace {

const char* kFunctions[] = {"log", "exp", "factorial", "floor", "max", "min", "block"};
const char* kVariables[] = {"n", "m"};

bool known_function(const std::string& s) {
  for (const char* f : kFunctions)
    if (s == f) return true;
  return false;
}

bool known_variable(const std::string& s) {
  for (const char* v : kVariables)
    if (s == v) return true;
  return false;
}

ExprPtr make_literal(real v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = v;
  return e;
}

ExprPtr make_variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Variable;
  e->name = std::move(name);
  return e;
}

ExprPtr make_unary(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Unary;
  e->op = '-';
  e->args = {std::move(a)};
  return e;
}

ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr make_call(std::string name, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Call;
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input, expected operator or end", pos_);
    return e;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_product();
    while (true) {
      const char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        e = make_binary(c, e, parse_product());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_product() {
    ExprPtr e = parse_unary();
    while (true) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        e = make_binary(c, e, parse_unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary() {
    if (eat('-')) return make_unary(parse_unary());
    return parse_power();
  }

  // ^ is right-associative and binds tighter than unary minus
  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (eat('^')) return make_binary('^', base, parse_unary());
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input, expected number, name or '('", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    throw ParseError(std::string("unexpected character '") + c +
                         "', expected number, name or '('",
                     pos_);
  }

  ExprPtr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const real v = std::strtold(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<size_t>(end - begin);
    return make_literal(v);
  }

  ExprPtr parse_name() {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (eat('(')) {
      if (!known_function(name))
        throw ParseError("unknown function '" + name + "'", start);
      std::vector<ExprPtr> args;
      if (!eat(')')) {
        args.push_back(parse_sum());
        while (eat(',')) args.push_back(parse_sum());
        if (!eat(')')) throw ParseError("expected ')' or ','", pos_);
      }
      check_arity(name, args.size(), start);
      return make_call(std::move(name), std::move(args));
    }
    if (!known_variable(name))
      throw ParseError("unknown identifier '" + name + "'", start);
    return make_variable(std::move(name));
  }

  static void check_arity(const std::string& name, size_t n, size_t at) {
    const size_t want = (name == "max" || name == "min" || name == "block") ? 2 : 1;
    if (n != want)
      throw ParseError("function '" + name + "' expects " + std::to_string(want) +
                           " argument(s), got " + std::to_string(n),
                       at);
  }
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      if (e.op == '+' || e.op == '-') return 1;
      if (e.op == '*' || e.op == '/') return 2;
      return 4;  // ^
    case Expr::Kind::Unary:
      return 3;
    default:
      return 5;
  }
}

void print_rec(const ExprPtr& e, std::ostringstream& os) {
  auto wrap = [&](const ExprPtr& child, bool parens) {
    if (parens) os << '(';
    print_rec(child, os);
    if (parens) os << ')';
  };
  switch (e->kind) {
    case Expr::Kind::Literal: {
      std::ostringstream num;
      num.precision(17);
      num << static_cast<double>(e->literal);
      os << num.str();
      return;
    }
    case Expr::Kind::Variable:
      os << e->name;
      return;
    case Expr::Kind::Unary:
      os << '-';
      wrap(e->args[0], precedence(*e->args[0]) < 3);
      return;
    case Expr::Kind::Binary: {
      const int p = precedence(*e);
      const bool right_assoc = e->op == '^';
      const int pl = precedence(*e->args[0]);
      const int pr = precedence(*e->args[1]);
      wrap(e->args[0], right_assoc ? pl <= p : pl < p);
      os << ' ' << e->op << ' ';
      const bool needs_right =
          right_assoc ? pr < p : (e->op == '-' || e->op == '/' ? pr <= p : pr < p);
      wrap(e->args[1], needs_right);
      return;
    }
    case Expr::Kind::Call: {
      os << e->name << '(';
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) os << ", ";
        print_rec(e->args[i], os);
      }
      os << ')';
      return;
    }
  }
}

constexpr real kPlainLimitLn = 34.538776394910684L;  // ln(1e15)

SignedLog from_plain(real v) {
  if (v == 0) return {0, kNegInf};
  return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
}

real to_plain(const SignedLog& x, const char* what) {
  if (x.sign == 0) return 0;
  if (x.ln > kPlainLimitLn)
    throw EvalError(std::string(what) + ": magnitude too large for exact arithmetic");
  return static_cast<real>(x.sign) * std::exp(x.ln);
}

// Integer-ish intake for floor/block/factorial: the log-domain round trip can
// land a hair off an exact integer (exp(ln 6 - ln 3) vs 2), so values within
// 1e-9 relative of an integer snap to it.
real to_plain_snapped(const SignedLog& x, const char* what) {
  const real v = to_plain(x, what);
  const real r = std::round(v);
  if (std::fabs(v - r) <= 1e-9L * std::max(1.0L, std::fabs(v))) return r;
  return v;
}

SignedLog add(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.sign == b.sign) {
    const real lns[2] = {a.ln, b.ln};
    return {a.sign, log_sum_exp(std::span<const real>(lns, 2))};
  }
  if (a.ln == b.ln) return {0, kNegInf};
  const SignedLog& big = a.ln > b.ln ? a : b;
  const SignedLog& small = a.ln > b.ln ? b : a;
  return {big.sign, big.ln + std::log1p(-std::exp(small.ln - big.ln))};
}

SignedLog neg(SignedLog a) {
  a.sign = -a.sign;
  return a;
}

SignedLog mul(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0 || b.sign == 0) return {0, kNegInf};
  return {a.sign * b.sign, a.ln + b.ln};
}

SignedLog div(const SignedLog& a, const SignedLog& b) {
  if (b.sign == 0) throw EvalError("division by zero");
  if (a.sign == 0) return {0, kNegInf};
  return {a.sign * b.sign, a.ln - b.ln};
}

SignedLog power(const SignedLog& base, const SignedLog& expo) {
  const real e = to_plain(expo, "exponent");
  if (base.sign == 0) {
    if (e > 0) return {0, kNegInf};
    if (e == 0) return {1, 0};
    throw EvalError("zero raised to a negative power");
  }
  if (base.sign < 0) {
    const real r = std::round(e);
    if (std::fabs(e - r) > 1e-9L)
      throw EvalError("negative base with non-integer exponent");
    const bool odd = std::fmod(std::fabs(r), 2.0L) >= 0.5L;
    return {odd ? -1 : 1, e * base.ln};
  }
  return {1, e * base.ln};
}

bool less(const SignedLog& a, const SignedLog& b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign > 0) return a.ln < b.ln;
  if (a.sign < 0) return a.ln > b.ln;
  return false;
}

SignedLog call(const std::string& name, std::vector<SignedLog> args) {
  if (name == "log") {
    if (args[0].sign <= 0) throw EvalError("log of nonpositive value");
    return from_plain(args[0].ln);  // stored ln is exactly ln(x)
  }
  if (name == "exp") return {1, to_plain(args[0], "exp argument")};
  if (name == "factorial") {
    const real x = to_plain_snapped(args[0], "factorial argument");
    if (x < 0) throw EvalError("factorial of negative value");
    return {1, std::lgamma(x + 1)};
  }
  if (name == "floor")
    return from_plain(std::floor(to_plain_snapped(args[0], "floor argument")));
  if (name == "max") return less(args[0], args[1]) ? args[1] : args[0];
  if (name == "min") return less(args[0], args[1]) ? args[0] : args[1];
  if (name == "block") {
    const real n = to_plain_snapped(args[0], "block argument");
    const real base = to_plain_snapped(args[1], "block base");
    if (n < 1) throw EvalError("block: first argument must be >= 1");
    if (base <= 1) throw EvalError("block: base must be > 1");
    long k = 0;
    real p = 1;
    while (p < n) {
      p *= base;
      ++k;
      if (k > 4096) throw EvalError("block: argument out of range");
    }
    return from_plain(static_cast<real>(k));
  }
  throw EvalError("unknown function '" + name + "'");
}

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).run(); }

std::string print(const ExprPtr& e) {
  std::ostringstream os;
  print_rec(e, os);
  return os.str();
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Literal:
      return a->literal == b->literal;
    case Expr::Kind::Variable:
      return a->name == b->name;
    case Expr::Kind::Unary:
      return equal(a->args[0], b->args[0]);
    case Expr::Kind::Binary:
      return a->op == b->op && equal(a->args[0], b->args[0]) &&
             equal(a->args[1], b->args[1]);
    case Expr::Kind::Call:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
  }
  return false;
}

SignedLog eval(const ExprPtr& e, const Bindings& b) {
  switch (e->kind) {
    case Expr::Kind::Literal:
      return from_plain(e->literal);
    case Expr::Kind::Variable: {
      auto it = b.find(e->name);
      if (it == b.end()) throw EvalError("unbound variable '" + e->name + "'");
      return from_plain(it->second);
    }
    case Expr::Kind::Unary:
      return neg(eval(e->args[0], b));
    case Expr::Kind::Binary: {
      const SignedLog lhs = eval(e->args[0], b);
      const SignedLog rhs = eval(e->args[1], b);
      switch (e->op) {
        case '+': return add(lhs, rhs);
        case '-': return add(lhs, neg(rhs));
        case '*': return mul(lhs, rhs);
        case '/': return div(lhs, rhs);
        case '^': return power(lhs, rhs);
      }
      throw EvalError("bad operator");
    }
    case Expr::Kind::Call: {
      std::vector<SignedLog> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(eval(a, b));
      return call(e->name, std::move(args));
    }
  }
  throw EvalError("bad expression node");
}

LogReal eval_log(const ExprPtr& e, const Bindings& b) {
  const SignedLog v = eval(e, b);
  if (v.sign < 0) throw EvalError("expression evaluated to a negative value");
  if (v.sign == 0) return LogReal::zero();
  return LogReal::from_ln(v.ln);
}

real eval_ln_positive(const ExprPtr& e, const Bindings& b) {
  const SignedLog v = eval(e, b);
  if (v.sign <= 0) throw EvalError("expression must evaluate to a positive value");
  return v.ln;
}

double eval_plain(const ExprPtr& e, const Bindings& b) {
  const SignedLog v = eval(e, b);
  if (v.sign == 0) return 0.0;
  return static_cast<double>(v.sign) * static_cast<double>(std::exp(v.ln));
}

}  // namespace kshift::dsl
