#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "kshift/logreal.hpp"
#include "kshift/series.hpp"

namespace kshift {

// Shared search bounds and margins. Every existential condition checked by the
// library quantifies over these bounded ladders; verdicts record the bounds so
// an Undetermined result is reproducible.
struct Params {
  std::vector<long> probe_m = {1, 2, 3, 4};  // "for all m" probe set
  long mu_max = 1 << 16;                     // ladder cap for seminorm indices
  long c_max = 1 << 16;                      // grid cap for constants
  std::vector<long> j_ladder = {1, 2, 4, 8, 16, 32, 64};
  double eta = 1e-3;       // margin separating "lim = 1" from "liminf > 1"
  double stab_tol = 0.01;  // relative growth tolerance for "sup stabilizes"
  double unbounded_level = 100.0;  // level a statistic must clear to count as "-> inf"
  long min_horizon = 256;
  long alpha_probe = 10000;  // prefix length for sequence validation
  int threads = 1;
  TailOptions tail;      // window certificates (margin tau, window size)
  SeriesOptions series;  // adds partial-sum certificates

  // mu-ladder for probe index m: canonical candidates {2m, 4m, m^2, 2^m}
  // first, then a geometric grid up to mu_max.
  std::vector<long> mu_ladder(long m) const {
    std::vector<long> out;
    auto push = [&](long mu) {
      if (mu > m && mu <= mu_max &&
          std::find(out.begin(), out.end(), mu) == out.end())
        out.push_back(mu);
    };
    push(2 * m);
    push(4 * m);
    push(m * m);
    if (m <= 16) push(1L << m);
    for (long g = 8; g <= mu_max; g *= 8) push(g);
    push(mu_max);
    return out;
  }

  // per-m witness ladder for gamma-type searches, starting at `lo`
  std::vector<long> j_ladder_from(long lo) const {
    std::vector<long> out;
    for (long j = std::max(lo, 1L); j <= 64 * std::max(lo, 1L) && j <= mu_max; j *= 2)
      out.push_back(j);
    return out;
  }

  std::vector<long> c_grid() const {
    std::vector<long> out;
    for (long c = 1; c <= c_max; c *= 4) out.push_back(c);
    return out;
  }

  // Sampling schedule N_j = 2^j, terminated by the horizon itself.
  std::vector<long> schedule(long horizon) const {
    std::vector<long> out;
    for (long n = 1; n < horizon; n *= 2) out.push_back(n);
    out.push_back(horizon);
    return out;
  }

  static std::span<const long> schedule_tail(std::span<const long> sched,
                                             int tail_points = 4) {
    const size_t k = std::min<size_t>(sched.size(), static_cast<size_t>(tail_points));
    return sched.subspan(sched.size() - k);
  }
};

}  // namespace kshift
