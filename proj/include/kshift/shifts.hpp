#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "kshift/spaces.hpp"

namespace kshift {

// Strictly positive weight sequence w (n >= 1) with the associated sequence
// v_n = 1/(w_1 ... w_n) cached in log domain (ln v_n = -sum ln w_k, v_0 = 1).
// Prefix caches grow monotonically under an internal lock.
class WeightSeq {
 public:
  static WeightSeq from_ln_w(std::function<real(long)> ln_w, std::string description);
  static WeightSeq from_ln_v(std::function<real(long)> ln_v, std::string description);
  static WeightSeq from_values(std::span<const double> w);
  static WeightSeq constant(double c);
  // w_n = c^n
  static WeightSeq geometric(double c);

  real ln_w(long n) const;  // n >= 1
  real ln_v(long n) const;  // n >= 0
  const std::string& description() const { return state_->description; }

 private:
  struct State {
    std::function<real(long)> ln_w;  // primary generator (w-form)
    std::function<real(long)> ln_v;  // primary generator (v-form), may be empty
    std::string description;
    std::mutex mu;
    std::vector<real> ln_v_cache;  // ln_v_cache[n] = ln v_n
  };
  std::shared_ptr<State> state_;
};

// Plain-prefix conversions; both validate strict positivity (and v_0 = 1).
std::vector<real> v_from_w(std::span<const real> w);
std::vector<real> w_from_v(std::span<const real> v);

// Continuity of the shift on the space: for each probe m a ladder mu and a
// constant C with v_{n-1}^p a_{m,n-1} <= C v_n^p a_{mu,n} over the horizon.
Verdict check_operator(const SpaceSpec& space, const WeightSeq& w, long horizon,
                       const Params& p = {});

// Convergence of sum v_n e_n in the space (all probe seminorms): the chaos
// series test. `operator_verdict`, when given and not Holds, only flags the
// result as advisory.
Verdict check_chaotic(const SpaceSpec& space, const WeightSeq& w, long horizon,
                      const Params& p = {}, const Verdict* operator_verdict = nullptr);

// n-th power of the backward shift on a finite vector:
// coordinate k of the result is (v_k / v_{k+n}) x_{k+n}.
FiniteVector apply_power(const WeightSeq& w, const FiniteVector& x, long n);

// Boundedness of the partial sums sum_{n<=N} v_n e_n across probe seminorms,
// realized as stabilization of the growing-prefix seminorms at the horizon.
Verdict check_ufhc_necessary(const SpaceSpec& space, const WeightSeq& w, long horizon,
                             const Params& p = {});

}  // namespace kshift
