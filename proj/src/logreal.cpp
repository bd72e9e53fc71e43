#include "kshift/logreal.hpp"

#include <algorithm>

namespace kshift {

real log_sum_exp(std::span<const real> lns) {
  real mx = kNegInf;
  for (real v : lns) mx = std::max(mx, v);
  if (mx == kNegInf) return kNegInf;
  real acc = 0;
  for (real v : lns) acc += std::exp(v - mx);
  return mx + std::log(acc);
}

LogReal log_sum_exp(std::span<const LogReal> xs) {
  std::vector<real> lns;
  lns.reserve(xs.size());
  for (const LogReal& x : xs) lns.push_back(x.ln());
  return LogReal::from_ln(log_sum_exp(lns));
}

void LogSumAcc::add_ln(real ln) {
  ++count_;
  if (ln == kNegInf) return;
  if (ln <= max_) {
    acc_ += std::exp(ln - max_);
    return;
  }
  // rescale existing accumulator to the new maximum
  acc_ = acc_ * std::exp(max_ - ln) + 1.0L;
  max_ = ln;
}

real LogSumAcc::sum_ln() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(acc_);
}

}  // namespace kshift
