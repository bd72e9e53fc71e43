#include "kshift/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kshift/verdict.hpp"

namespace kshift {

namespace {

std::string fmt_ln(real ln) {
  std::ostringstream os;
  os << "exp(" << static_cast<double>(ln) << ")";
  return os.str();
}

struct Windows {
  real first_max = kNegInf;  // max over the leading window
  real global_max = kNegInf;
  real last_min = kPosInf;
  real last_max = kNegInf;
  bool last_ratios_geometric = true;  // successive ratios <= 1 - margin
};

Windows window_stats(std::span<const real> t, long window, double margin) {
  Windows w;
  const long n = static_cast<long>(t.size());
  const long wlen = std::min(window, n);
  for (long i = 0; i < wlen; ++i) w.first_max = std::max(w.first_max, t[i]);
  for (long i = 0; i < n; ++i) w.global_max = std::max(w.global_max, t[i]);
  const long lo = n - wlen;
  for (long i = lo; i < n; ++i) {
    w.last_min = std::min(w.last_min, t[i]);
    w.last_max = std::max(w.last_max, t[i]);
  }
  const real bound = std::log1p(static_cast<real>(-margin));
  for (long i = lo; i + 1 < n; ++i) {
    if (t[i + 1] == kNegInf) continue;      // a vanished term never breaks decay
    if (t[i] == kNegInf) {                  // revival from zero
      w.last_ratios_geometric = false;
      break;
    }
    if (t[i + 1] - t[i] > bound) {
      w.last_ratios_geometric = false;
      break;
    }
  }
  return w;
}

// Witnesses >= floor spaced by bounded geometric gaps through the prefix:
// the empirical refutation of "terms tend to zero".
std::vector<long> recurrence_witnesses(std::span<const real> t, real floor_ln,
                                       const TailOptions& opt) {
  const long n = static_cast<long>(t.size());
  std::vector<long> wit;
  for (long i = 0; i < n; ++i)
    if (t[i] >= floor_ln) wit.push_back(i);
  if (static_cast<long>(wit.size()) < opt.min_witnesses) return {};
  for (size_t i = 0; i + 1 < wit.size(); ++i) {
    const long limit = std::max(static_cast<long>(opt.gap_factor * static_cast<double>(std::max(wit[i], 1L))),
                                wit[i] + opt.gap_slack);
    if (wit[i + 1] > limit) return {};
  }
  const long last = wit.back();
  if (last < opt.window) return {};  // confined to the head: no recurrence
  if (opt.gap_factor * static_cast<double>(std::max(last, 1L)) < static_cast<double>(n - 1))
    return {};  // pattern does not reach the horizon
  return wit;
}

TailVerdict classify_windows(std::span<const real> t, const TailOptions& opt) {
  TailVerdict out;
  out.horizon = static_cast<long>(t.size()) - 1;
  const Windows w = window_stats(t, opt.window, opt.margin);

  if (w.global_max == kNegInf) {
    out.verdict = Tail::Converges;
    out.evidence = "all terms zero";
    return out;
  }

  // bounded below over the final window, at the sequence's own scale
  const real level = w.global_max + std::log(static_cast<real>(opt.level_rel));
  if (w.last_min > kNegInf && w.last_min >= level) {
    out.verdict = Tail::Diverges;
    out.evidence = "terms bounded below over final window, min " + fmt_ln(w.last_min);
    return out;
  }

  if (w.first_max > kNegInf) {
    const real floor_ln = w.first_max + std::log(static_cast<real>(opt.floor_rel));
    auto wit = recurrence_witnesses(t, floor_ln, opt);
    if (!wit.empty()) {
      out.verdict = Tail::Diverges;
      out.evidence = "non-vanishing recurrence at scale " + fmt_ln(floor_ln) + ", " +
                     std::to_string(wit.size()) + " witnesses";
      out.witnesses = std::move(wit);
      return out;
    }
  }

  if (w.last_ratios_geometric) {
    out.verdict = Tail::Converges;
    out.evidence = "geometric final window, ratio <= " +
                   std::to_string(1.0 - opt.margin);
    return out;
  }

  out.evidence = "no certificate (final window neither geometric nor bounded below)";
  return out;
}

std::vector<real> materialize(const LnTermFn& term, long start, long horizon) {
  std::vector<real> t;
  t.reserve(static_cast<size_t>(horizon - start + 1));
  for (long n = start; n <= horizon; ++n) t.push_back(term(n));
  return t;
}

}  // namespace

TailVerdict tail_sum_test(std::span<const real> ln_terms, const TailOptions& opt) {
  if (static_cast<long>(ln_terms.size()) <= opt.window + 1)
    throw ConfigError("tail_sum_test: horizon too small for window of " +
                      std::to_string(opt.window));
  return classify_windows(ln_terms, opt);
}

TailVerdict tail_sum_test(const LnTermFn& term, long start, long horizon,
                          const TailOptions& opt) {
  if (horizon <= start + opt.window)
    throw ConfigError("tail_sum_test: horizon too small for window of " +
                      std::to_string(opt.window));
  auto t = materialize(term, start, horizon);
  TailVerdict v = classify_windows(t, opt);
  v.horizon = horizon;
  for (long& w : v.witnesses) w += start;
  return v;
}

SeriesVerdict analyze_series(std::span<const real> t, const SeriesOptions& opt) {
  SeriesVerdict out;
  const long n = static_cast<long>(t.size());
  if (n <= opt.tail.window + 1)
    throw ConfigError("analyze_series: horizon too small");

  LogSumAcc total;
  for (real v : t) total.add_ln(v);
  out.partial_sum_ln = total.sum_ln();

  TailVerdict windowed = classify_windows(t, opt.tail);
  if (windowed.verdict == Tail::Diverges) {
    out.verdict = Tail::Diverges;
    out.route = "window";
    out.evidence = windowed.evidence;
    out.witnesses = std::move(windowed.witnesses);
    return out;
  }
  if (windowed.verdict == Tail::Converges) {
    out.verdict = Tail::Converges;
    out.route = "geometric-window";
    out.evidence = windowed.evidence;
    return out;
  }

  // partial-sum increments over full doubling windows (a truncated final
  // window would distort the growth pattern)
  std::vector<real> increments;
  {
    LogSumAcc chunk;
    long next = 1;
    long pos = 0;
    while (next <= n) {
      chunk = LogSumAcc();
      for (; pos < next; ++pos) chunk.add_ln(t[pos]);
      increments.push_back(chunk.sum_ln());
      next *= 2;
    }
  }
  const int steps = opt.cauchy_steps;
  if (static_cast<int>(increments.size()) >= steps + 1) {
    bool shrinking = true, sustained = true;
    const real shrink_ln = std::log(static_cast<real>(opt.cauchy_shrink));
    const real grow_ln = std::log(static_cast<real>(opt.cauchy_grow));
    for (size_t i = increments.size() - steps; i < increments.size(); ++i) {
      const real cur = increments[i], prev = increments[i - 1];
      if (cur == kNegInf) continue;  // vanished chunk: shrink holds, growth broken
      if (prev == kNegInf || cur - prev > shrink_ln) shrinking = false;
    }
    for (size_t i = increments.size() - steps; i < increments.size(); ++i) {
      const real cur = increments[i], prev = increments[i - 1];
      if (cur == kNegInf || prev == kNegInf || cur - prev < grow_ln) sustained = false;
    }
    if (shrinking) {
      out.verdict = Tail::Converges;
      out.route = "cauchy-shrink";
      out.evidence = "doubling-window increments shrink by factor <= " +
                     std::to_string(opt.cauchy_shrink);
      return out;
    }
    if (sustained) {
      out.verdict = Tail::Diverges;
      out.route = "cauchy-sustained";
      out.evidence = "doubling-window increments do not shrink (factor >= " +
                     std::to_string(opt.cauchy_grow) + ")";
      return out;
    }
  }

  out.route = "none";
  out.evidence = windowed.evidence;
  return out;
}

SeriesVerdict analyze_series(const LnTermFn& term, long start, long horizon,
                             const SeriesOptions& opt) {
  if (horizon <= start + opt.tail.window)
    throw ConfigError("analyze_series: horizon too small");
  auto t = materialize(term, start, horizon);
  SeriesVerdict v = analyze_series(t, opt);
  for (long& w : v.witnesses) w += start;
  return v;
}

TailVerdict vanishes_test(const LnTermFn& term, long start, long horizon,
                          const TailOptions& opt) {
  if (horizon <= start + opt.window)
    throw ConfigError("vanishes_test: horizon too small");
  auto t = materialize(term, start, horizon);
  TailVerdict out;
  out.horizon = horizon;
  const Windows w = window_stats(t, opt.window, opt.margin);
  if (w.global_max == kNegInf) {
    out.verdict = Tail::Converges;
    out.evidence = "all terms zero";
    return out;
  }
  const real level = w.global_max + std::log(static_cast<real>(opt.level_rel));
  if (w.last_min > kNegInf && w.last_min >= level) {
    out.verdict = Tail::Diverges;
    out.evidence = "terms bounded below over final window";
    return out;
  }
  if (w.first_max > kNegInf) {
    const real floor_ln = w.first_max + std::log(static_cast<real>(opt.floor_rel));
    auto wit = recurrence_witnesses(t, floor_ln, opt);
    if (!wit.empty()) {
      out.verdict = Tail::Diverges;
      out.evidence = "non-vanishing recurrence, " + std::to_string(wit.size()) + " witnesses";
      for (long& x : wit) x += start;
      out.witnesses = std::move(wit);
      return out;
    }
    if (w.last_max <= floor_ln) {
      out.verdict = Tail::Converges;
      out.evidence = "final window below " + std::to_string(opt.floor_rel) +
                     " of initial scale";
      return out;
    }
  }
  out.evidence = "no decay certificate at this horizon";
  return out;
}

RatioEstimate limit_ratio_estimate(const std::function<real(long)>& ln_value,
                                   long lag, long horizon) {
  if (lag < 1) throw ConfigError("limit_ratio_estimate: lag must be >= 1");
  if (horizon < 4 * lag)
    throw ConfigError("limit_ratio_estimate: horizon too small for lag " +
                      std::to_string(lag));
  RatioEstimate est;
  est.ln_lo = kPosInf;
  est.ln_hi = kNegInf;
  for (long n = horizon / 2; n + lag <= horizon; ++n) {
    const real d = ln_value(n + lag) - ln_value(n);
    est.ln_lo = std::min(est.ln_lo, d);
    est.ln_hi = std::max(est.ln_hi, d);
    ++est.samples;
  }
  return est;
}

}  // namespace kshift
