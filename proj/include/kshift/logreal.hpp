#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace kshift {

// Extended-precision scalar for all log-domain arithmetic. Köthe entries such
// as a_{m,n} = m^(2^n) have logarithms around 10^3000 at working horizons,
// beyond double range; 80-bit long double carries exponents up to ~1e4932.
using real = long double;

inline constexpr real kNegInf = -std::numeric_limits<real>::infinity();
inline constexpr real kPosInf = std::numeric_limits<real>::infinity();

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A nonnegative extended real stored as its natural logarithm.
// ln == -inf encodes zero; +inf and NaN are rejected on construction.
class LogReal {
 public:
  LogReal() = default;  // zero

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return LogReal(0.0L); }

  static LogReal from_value(real v) {
    if (std::isnan(v) || v < 0)
      throw DomainError("LogReal::from_value: negative or NaN input");
    return LogReal(std::log(v));
  }

  static LogReal from_ln(real ln) {
    if (std::isnan(ln) || ln == kPosInf)
      throw DomainError("LogReal::from_ln: NaN or +inf logarithm");
    return LogReal(ln);
  }

  real ln() const { return ln_; }
  // May overflow to +inf for magnitudes outside native range.
  real value() const { return std::exp(ln_); }
  bool is_zero() const { return ln_ == kNegInf; }

  LogReal operator*(LogReal o) const {
    if (is_zero() || o.is_zero()) return zero();
    return LogReal(ln_ + o.ln_);
  }
  LogReal operator/(LogReal o) const {
    if (o.is_zero()) throw DomainError("LogReal: division by zero");
    if (is_zero()) return zero();
    return LogReal(ln_ - o.ln_);
  }
  LogReal& operator*=(LogReal o) { return *this = *this * o; }
  LogReal& operator/=(LogReal o) { return *this = *this / o; }

  // x^e for real e; 0^e is 0 for e > 0, 1 for e == 0, undefined for e < 0.
  LogReal pow(real e) const {
    if (is_zero()) {
      if (e > 0) return zero();
      if (e == 0) return one();
      throw DomainError("LogReal::pow: zero to negative power");
    }
    return LogReal(ln_ * e);
  }

  bool operator==(const LogReal&) const = default;
  bool operator<(LogReal o) const { return ln_ < o.ln_; }
  bool operator<=(LogReal o) const { return ln_ <= o.ln_; }
  bool operator>(LogReal o) const { return ln_ > o.ln_; }
  bool operator>=(LogReal o) const { return ln_ >= o.ln_; }

 private:
  explicit LogReal(real ln) : ln_(ln) {}
  real ln_ = kNegInf;
};

// log(sum(exp(x_i))) with max-shift stabilization; empty input gives -inf.
real log_sum_exp(std::span<const real> lns);
LogReal log_sum_exp(std::span<const LogReal> xs);

// Streaming accumulator for log-domain sums (and running max for sup-norms).
class LogSumAcc {
 public:
  void add_ln(real ln);
  real sum_ln() const;
  real max_ln() const { return max_; }
  long count() const { return count_; }

 private:
  real max_ = kNegInf;
  real acc_ = 0;  // sum of exp(ln - max_)
  long count_ = 0;
};

}  // namespace kshift
