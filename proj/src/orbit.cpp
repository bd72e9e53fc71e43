#include "kshift/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "kshift/parallel.hpp"

namespace kshift {

FiniteVector LazyVector::section(long lo, long hi) const {
  FiniteVector out;
  for (long i = std::max(lo, 0L); i <= hi; ++i) {
    const real ln = ln_coord(i);
    if (ln == kNegInf) continue;
    const double v = static_cast<double>(std::exp(ln));
    if (v == 0.0) continue;  // magnitude below the native range
    if (!std::isfinite(v))
      throw DomainError("section coordinate exceeds the native range at index " +
                        std::to_string(i));
    out.idx.push_back(i);
    out.val.push_back(v);
  }
  return out;
}

FhcConditionsReport check_fhc_conditions(const SpaceSpec& space, const WeightSeq& w,
                                         const Blocks& blocks, long horizon,
                                         const Params& p, double c_const) {
  FhcConditionsReport rep;
  rep.c_const = c_const;
  rep.horizon = horizon;
  const long r_max = blocks.r_max();
  const real pe = space.p_eff();

  // (i): convergence along each block set
  for (long r = 1; r <= r_max; ++r) {
    const auto& set = blocks.sets()[static_cast<size_t>(r - 1)];
    std::vector<long> elems;
    for (long n : set)
      if (n + r <= 8 * horizon) elems.push_back(n);
    Verdict v;
    v.horizon = horizon;
    bool all_ok = true;
    for (long m : p.probe_m) {
      std::vector<real> terms;
      terms.reserve(elems.size());
      for (long n : elems) terms.push_back(pe * w.ln_v(n + r) + space.ln_entry(m, n + r));
      if (static_cast<long>(terms.size()) <= p.tail.window + 1)
        throw ConfigError("check_fhc_conditions: block set too short for the window");
      auto by_pos = [&terms](long i) { return terms[static_cast<size_t>(i)]; };
      if (space.sup_norm()) {
        const TailVerdict tv =
            vanishes_test(by_pos, 0, static_cast<long>(terms.size()) - 1, p.tail);
        if (tv.verdict != Tail::Converges) {
          all_ok = false;
          v.note = "set " + std::to_string(r) + ", m = " + std::to_string(m) + ": " +
                   tv.evidence;
          if (tv.verdict == Tail::Diverges) v.outcome = Outcome::Fails;
          break;
        }
      } else {
        const SeriesVerdict sv = analyze_series(std::span<const real>(terms), p.series);
        if (sv.verdict != Tail::Converges) {
          all_ok = false;
          v.note = "set " + std::to_string(r) + ", m = " + std::to_string(m) + ": " +
                   sv.evidence;
          if (sv.verdict == Tail::Diverges) v.outcome = Outcome::Fails;
          break;
        }
      }
    }
    if (all_ok) {
      v.outcome = Outcome::Holds;
      v.route = "orbit tail series converges for every probe seminorm";
    } else if (v.outcome != Outcome::Fails) {
      v.outcome = Outcome::Undetermined;
    }
    rep.cond_i.push_back(v);
  }

  // (ii): smallness of cross-block partial sums
  rep.cond_ii.assign(static_cast<size_t>(r_max), {});
  for (long r = 1; r <= r_max; ++r) {
    for (long s = 1; s <= r_max; ++s) {
      Verdict v;
      v.horizon = horizon;
      const double eps = c_const / std::pow(2.0, static_cast<double>(std::max(r, s)));
      const real thresh_ln = std::log(static_cast<real>(eps));
      const auto& a_r = blocks.sets()[static_cast<size_t>(r - 1)];
      const auto& a_s = blocks.sets()[static_cast<size_t>(s - 1)];

      // sample m across the whole prefix of A_s
      std::vector<long> samples;
      for (size_t i = 0; i < a_s.size() && samples.size() < 8; ++i)
        samples.push_back(a_s[i]);
      for (size_t step = std::max<size_t>(1, a_s.size() / 4), i = step; i < a_s.size();
           i += step)
        samples.push_back(a_s[i]);
      if (!a_s.empty()) samples.push_back(a_s.back());
      std::sort(samples.begin(), samples.end());
      samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

      real worst_ln = kNegInf;
      bool ok = true;
      for (long m : samples) {
        for (long j = 0; j <= r && ok; ++j) {
          LogSumAcc acc;
          for (long n : a_r) {
            if (n <= m) continue;
            const long idx = n - m + j;
            acc.add_ln(pe * w.ln_v(idx) + space.ln_entry(s, idx));
          }
          const real sum_ln = acc.sum_ln();
          worst_ln = std::max(worst_ln, sum_ln);
          if (!(sum_ln < thresh_ln)) ok = false;
        }
        if (!ok) break;
      }
      v.outcome = ok ? Outcome::Holds : Outcome::Fails;
      v.route = "partial p-power sums below min(eps_r, eps_s)";
      v.witness["eps"] = static_cast<real>(eps);
      v.witness["worst_sum"] = std::exp(worst_ln);
      v.witness["samples"] = static_cast<real>(samples.size());
      rep.cond_ii[static_cast<size_t>(r - 1)].push_back(v);
    }
  }

  bool all = true;
  for (const auto& v : rep.cond_i) all = all && v.holds();
  for (const auto& row : rep.cond_ii)
    for (const auto& v : row) all = all && v.holds();
  rep.overall = all ? Outcome::Holds : Outcome::Fails;
  return rep;
}

LazyVector build_fhc_vector(const SpaceSpec& space, const WeightSeq& w,
                            const Blocks& blocks,
                            std::span<const FiniteVector> targets) {
  (void)space;
  const long r_max = blocks.r_max();
  if (static_cast<long>(targets.size()) != r_max)
    throw ConfigError("build_fhc_vector: need one target per block set");
  for (long r = 1; r <= r_max; ++r) {
    const auto& y = targets[static_cast<size_t>(r - 1)];
    y.validate();
    if (!y.idx.empty() && y.idx.back() > r)
      throw ValidationError("target " + std::to_string(r) +
                            " must be supported in [0, r]");
  }

  // overlapping writes indicate a violation of the block gap properties
  std::unordered_map<long, long> written;  // index -> r
  for (long r = 1; r <= r_max; ++r) {
    const auto& y = targets[static_cast<size_t>(r - 1)];
    for (long n : blocks.sets()[static_cast<size_t>(r - 1)]) {
      for (long j : y.idx) {
        auto [it, fresh] = written.emplace(n + j, r);
        if (!fresh)
          throw ValidationError(
              "overlapping coordinate writes at index " + std::to_string(n + j) +
              " (sets " + std::to_string(it->second) + " and " + std::to_string(r) +
              "): blocks violate the gap properties");
      }
    }
  }

  // pure coordinate rule: x_{n+j} = (v_{n+j}/v_j) y^{(r)}_j for n in A_r
  auto blocks_copy = std::make_shared<Blocks>(blocks);
  std::vector<FiniteVector> ys(targets.begin(), targets.end());
  LazyVector x;
  x.ln_coord = [blocks_copy, ys, w](long i) -> real {
    if (i < 0) return kNegInf;
    for (long r = 1; r <= static_cast<long>(ys.size()); ++r) {
      const auto& y = ys[static_cast<size_t>(r - 1)];
      for (size_t t = 0; t < y.idx.size(); ++t) {
        const long j = y.idx[t];
        if (i - j >= 0 && blocks_copy->member(r, i - j))
          return w.ln_v(i) - w.ln_v(j) + std::log(static_cast<real>(y.val[t]));
      }
    }
    return kNegInf;
  };
  x.description = "orbit vector over " + std::to_string(r_max) + " block sets";
  return x;
}

HitStats hitting_density(const SpaceSpec& space, const WeightSeq& w,
                         const LazyVector& x, const FiniteVector& target, long m,
                         double delta, long N, const Blocks* blocks, long guard,
                         int threads) {
  if (!(delta > 0)) throw ConfigError("hitting_density: delta must be positive");
  target.validate();
  const long width = target.idx.empty() ? 1 : target.support_end() + 1;
  if (guard < 0) guard = 4 * width;
  const long section_end = (target.idx.empty() ? 0 : target.support_end()) + guard;

  std::vector<double> tval(static_cast<size_t>(section_end) + 1, 0.0);
  for (size_t i = 0; i < target.idx.size(); ++i)
    tval[static_cast<size_t>(target.idx[i])] = target.val[i];

  HitStats stats;
  stats.rows.resize(static_cast<size_t>(N) + 1);
  const real ln_delta = std::log(static_cast<real>(delta));
  const real pe = space.p_eff();

  parallel_for(0, N + 1, threads, [&](long n) {
    // distance of the sectioned orbit point to the target
    real sem = kNegInf;
    LogSumAcc acc;
    for (long k = 0; k <= section_end; ++k) {
      const real ln_orbit = w.ln_v(k) - w.ln_v(k + n) + x.ln_coord(k + n);
      const double orbit = ln_orbit == kNegInf
                               ? 0.0
                               : static_cast<double>(std::exp(ln_orbit));
      const double diff = orbit - tval[static_cast<size_t>(k)];
      if (diff == 0.0) continue;
      const real ln_diff = std::log(std::fabs(static_cast<real>(diff)));
      if (space.sup_norm())
        sem = std::max(sem, ln_diff + space.ln_entry(m, k));
      else
        acc.add_ln(pe * ln_diff + space.ln_entry(m, k));
    }
    if (!space.sup_norm()) sem = acc.sum_ln() / pe;
    auto& row = stats.rows[static_cast<size_t>(n)];
    row.n = n;
    row.hit = sem < ln_delta;
    row.log_seminorm = static_cast<double>(sem);
  });

  long hits = 0;
  for (long n = 0; n <= N; ++n) {
    hits += stats.rows[static_cast<size_t>(n)].hit;
    stats.rows[static_cast<size_t>(n)].cum_density =
        static_cast<double>(hits) / static_cast<double>(n + 1);
  }
  stats.hits = hits;
  stats.density = static_cast<double>(hits) / static_cast<double>(N + 1);
  if (blocks) {
    long count = 0;
    for (const auto& s : blocks->sets())
      count += std::upper_bound(s.begin(), s.end(), N) - s.begin();
    stats.blocks_density = static_cast<double>(count) / static_cast<double>(N + 1);
  }
  return stats;
}

}  // namespace kshift
