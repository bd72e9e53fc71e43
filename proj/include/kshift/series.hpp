#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kshift/logreal.hpp"

namespace kshift {

enum class Tail { Converges, Diverges, Undetermined };

inline const char* to_string(Tail t) {
  switch (t) {
    case Tail::Converges: return "converges";
    case Tail::Diverges: return "diverges";
    default: return "undetermined";
  }
}

struct TailOptions {
  long window = 64;          // final-window length for ratio/level certificates
  double margin = 0.05;      // tau: geometric certificate needs ratios <= 1 - tau
  double floor_rel = 1e-2;   // recurrence floor relative to the first-window max
  double level_rel = 0.5;    // bounded-below threshold relative to the first-window max
  double gap_factor = 10.0;  // recurrence witnesses may be spaced by at most this factor
  long gap_slack = 16;       // additive slack for small indices
  int min_witnesses = 5;     // recurrences needed before divergence is certified
};

struct TailVerdict {
  Tail verdict = Tail::Undetermined;
  long horizon = 0;
  std::string evidence;
  std::vector<long> witnesses;  // indices of non-vanishing recurrences, when relevant
};

// ln of term n; terms are nonnegative reals carried in log domain.
using LnTermFn = std::function<real(long)>;

// Certifies convergence/divergence of sum(terms) from windowed evidence:
//   Converges  - every successive ratio over the final window is <= 1 - margin
//                and no non-vanishing recurrence pattern spans the prefix;
//   Diverges   - terms are bounded below over the final window (relative to
//                their initial scale), or terms >= floor recur with bounded
//                geometric gaps all the way to the horizon;
//   otherwise Undetermined.
TailVerdict tail_sum_test(const LnTermFn& term, long start, long horizon,
                          const TailOptions& opt = {});

// Same test over an explicitly enumerated term list (index = position).
TailVerdict tail_sum_test(std::span<const real> ln_terms, const TailOptions& opt = {});

struct SeriesOptions {
  TailOptions tail;
  double cauchy_shrink = 0.75;  // doubling-window increments must shrink by this factor
  double cauchy_grow = 0.8333;  // increments staying above this ratio certify divergence
  int cauchy_steps = 3;         // consecutive schedule steps the pattern must persist
};

struct SeriesVerdict {
  Tail verdict = Tail::Undetermined;
  std::string route;    // which certificate fired
  std::string evidence;
  std::vector<long> witnesses;
  real partial_sum_ln = kNegInf;  // ln of the partial sum at the horizon
};

// Full series analysis: the windowed certificates of tail_sum_test plus
// partial-sum (Cauchy) certificates over a dyadic schedule, which also decide
// polynomially convergent or divergent series.
SeriesVerdict analyze_series(const LnTermFn& term, long start, long horizon,
                             const SeriesOptions& opt = {});
SeriesVerdict analyze_series(std::span<const real> ln_terms, const SeriesOptions& opt = {});

// Certifies terms -> 0 (order-0 membership): Converges means the final-window
// maximum has dropped below floor_rel times the initial scale and no
// non-vanishing recurrence spans the prefix; Diverges means terms are bounded
// below or recur at the initial scale.
TailVerdict vanishes_test(const LnTermFn& term, long start, long horizon,
                          const TailOptions& opt = {});

struct RatioEstimate {
  real ln_lo = 0;  // ln of the minimal lag ratio over the trailing half
  real ln_hi = 0;  // ln of the maximal lag ratio over the trailing half
  long samples = 0;
};

// min/max of seq(n+lag)/seq(n) over the trailing half of [0, horizon].
// `ln_value` must return ln of a strictly positive sequence.
RatioEstimate limit_ratio_estimate(const std::function<real(long)>& ln_value,
                                   long lag, long horizon);

}  // namespace kshift
