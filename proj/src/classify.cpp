#include "kshift/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kshift {

namespace {

struct ScheduleValues {
  std::vector<long> points;
  std::vector<real> ln_values;
};

enum class Growth { Infinite, Bounded, Ambiguous };

// max-statistic growth classification over the schedule tail
Growth growth_max(const ScheduleValues& sv, real level_ln) {
  const auto tail = Params::schedule_tail(sv.points);
  const size_t split = sv.points.size() - tail.size();
  real head = kNegInf, tailmax = kNegInf;
  for (size_t i = 0; i < sv.ln_values.size(); ++i)
    (i < split ? head : tailmax) = std::max(i < split ? head : tailmax, sv.ln_values[i]);
  if (tailmax >= level_ln && tailmax >= head + std::log(1.5L)) return Growth::Infinite;
  if (tailmax <= head + std::log(1.05L)) return Growth::Bounded;
  return Growth::Ambiguous;
}

Growth growth_min(const ScheduleValues& sv, real level_ln) {
  const auto tail = Params::schedule_tail(sv.points);
  const size_t split = sv.points.size() - tail.size();
  real head = kPosInf, tailmin = kPosInf;
  for (size_t i = 0; i < sv.ln_values.size(); ++i)
    (i < split ? head : tailmin) = std::min(i < split ? head : tailmin, sv.ln_values[i]);
  if (tailmin >= level_ln && tailmin >= head + std::log(1.5L)) return Growth::Infinite;
  if (tailmin <= head + std::log(1.05L) && tailmin < level_ln) return Growth::Bounded;
  return Growth::Ambiguous;
}

// ratio sums sum_{n<N} alpha_n / alpha_N at the schedule points
ScheduleValues ratio_sums(const AlphaSeq& alpha, long horizon, const Params& p) {
  ScheduleValues sv;
  sv.points = p.schedule(horizon);
  LogSumAcc acc;
  size_t si = 0;
  for (long n = 0; n <= horizon && si < sv.points.size(); ++n) {
    while (si < sv.points.size() && sv.points[si] == n) {
      sv.ln_values.push_back(acc.sum_ln() - alpha.ln_at(n));
      ++si;
    }
    acc.add_ln(alpha.ln_at(n));
  }
  return sv;
}

constexpr const char* kRouteInfUnbounded = "infinite-type: ratio sums unbounded";
constexpr const char* kRouteInfBounded = "infinite-type: ratio sums bounded";
constexpr const char* kRouteFinDiverge = "finite-type: lag-1 ratios diverge";
constexpr const char* kRouteFinBounded = "finite-type: iterated lag ratios bounded";
constexpr const char* kRouteFinMixed =
    "finite-type: lag-1 bounded, deep-lag liminf unbounded";
constexpr const char* kRouteGenericGrid = "regularity bound + product-grid search";

}  // namespace

RhoReport rho_report(const AlphaSeq& alpha, long horizon, const Params& p) {
  RhoReport rep;
  rep.eta = p.eta;
  rep.horizon = horizon;
  auto ln_alpha = [&alpha](long n) { return alpha.ln_at(n); };
  for (long lag : p.j_ladder) {
    const RatioEstimate est = limit_ratio_estimate(ln_alpha, lag, horizon);
    rep.lags.push_back({lag, est.ln_lo, est.ln_hi});
  }
  return rep;
}

Verdict exists_hc_shift(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  const real level_ln = std::log(static_cast<real>(p.unbounded_level));
  switch (space.kind()) {
    case SpaceKind::PowerSeriesInfinite: {
      const auto sv = ratio_sums(*space.alpha(), horizon, p);
      const Growth g = growth_max(sv, level_ln);
      v.witness["ratio_sum_at_horizon"] = std::exp(sv.ln_values.back());
      if (g == Growth::Infinite) {
        v.outcome = Outcome::Holds;
        v.route = kRouteInfUnbounded;
      } else if (g == Growth::Bounded) {
        v.outcome = Outcome::Fails;
        v.route = kRouteInfBounded;
      } else {
        v.outcome = Outcome::Undetermined;
        v.route = "infinite-type: ratio-sum growth ambiguous";
      }
      return v;
    }
    case SpaceKind::PowerSeriesFinite: {
      const RhoReport rho = rho_report(*space.alpha(), horizon, p);
      const auto& l1 = rho.lag1();
      if (l1.ln_lo >= level_ln) {
        v.outcome = Outcome::Fails;
        v.route = kRouteFinDiverge;
        v.witness["lag1_liminf"] = std::exp(l1.ln_lo);
        return v;
      }
      if (rho.lags.back().ln_hi <= level_ln) {
        v.outcome = Outcome::Holds;
        v.route = kRouteFinBounded;
        v.witness["deep_lag_limsup"] = std::exp(rho.lags.back().ln_hi);
        return v;
      }
      bool lo_increasing = true;
      for (size_t i = 1; i < rho.lags.size(); ++i)
        if (rho.lags[i].ln_lo + 1e-12L < rho.lags[i - 1].ln_lo) lo_increasing = false;
      if (l1.ln_hi <= level_ln && lo_increasing && rho.lags.back().ln_lo >= level_ln) {
        v.outcome = Outcome::Holds;
        v.route = kRouteFinMixed;
        return v;
      }
      v.outcome = Outcome::Undetermined;
      v.route = "finite-type: lag-ratio rules inconclusive";
      return v;
    }
    default: break;
  }

  // generic matrix: regularity bound, then the product-grid criterion
  const Verdict reg = check_regularity_bound(space, horizon, p);
  if (!reg.holds()) {
    // fallback ladder search: nu_n = min_k C a_{k+1,n}/a_{k,n-1}, then the
    // product quotients must dip toward zero for every probe
    const long K = 8;
    for (long c : p.c_grid()) {
      const real ln_c = std::log(static_cast<real>(c));
      std::vector<real> prefix(static_cast<size_t>(horizon) + 1, 0.0L);
      for (long n = 1; n <= horizon; ++n) {
        real nu = kPosInf;
        for (long k = 1; k <= K; ++k)
          nu = std::min(nu, ln_c + space.ln_entry(k + 1, n) - space.ln_entry(k, n - 1));
        prefix[static_cast<size_t>(n)] = prefix[static_cast<size_t>(n - 1)] + nu;
      }
      bool all_vanish = true;
      for (long m : p.probe_m) {
        real tail_min = kPosInf, head_min = kPosInf;
        const auto sched = p.schedule(horizon);
        const auto tail = Params::schedule_tail(sched);
        for (size_t i = 0; i < sched.size(); ++i) {
          const real q = space.ln_entry(m, sched[i]) - prefix[static_cast<size_t>(sched[i])];
          (i < sched.size() - tail.size() ? head_min : tail_min) =
              std::min(i < sched.size() - tail.size() ? head_min : tail_min, q);
        }
        if (!(tail_min <= std::min(head_min, std::log(1e-6L)))) all_vanish = false;
      }
      if (all_vanish) {
        v.outcome = Outcome::Holds;
        v.route = "generic: ladder weight drives the product quotients to zero";
        v.witness["C"] = static_cast<real>(c);
        return v;
      }
    }
    v.outcome = Outcome::Undetermined;
    v.route = "generic: regularity bound undetermined; ladder search exhausted";
    v.note = reg.note;
    return v;
  }
  const auto sched = p.schedule(horizon);
  std::vector<long> mu_grid = {1};
  for (long g = 2; g <= p.mu_max; g *= 2) mu_grid.push_back(g);
  bool all_refuted = true;
  for (long mu : mu_grid) {
    // prefix sums of ln(a_{1,n-1}/a_{mu,n}) at the schedule points
    std::vector<real> s_at(sched.size());
    {
      real s = 0;
      size_t si = 0;
      for (long n = 0; n <= horizon && si < sched.size(); ++n) {
        if (n >= 1) s += space.ln_entry(1, n - 1) - space.ln_entry(mu, n);
        while (si < sched.size() && sched[si] == n) s_at[si++] = s;
      }
    }
    std::vector<long> probes = p.probe_m;
    probes.push_back(2 * mu * mu + 1);  // growth witness beyond mu^2
    for (long c : p.c_grid()) {
      const real ln_c = std::log(static_cast<real>(c));
      bool all_vanish = true;
      bool refuted = false;
      for (long m : probes) {
        ScheduleValues sv;
        sv.points = sched;
        for (size_t i = 0; i < sched.size(); ++i)
          sv.ln_values.push_back(s_at[i] - static_cast<real>(sched[i]) * ln_c +
                                 space.ln_entry(m, sched[i]));
        const auto tail = Params::schedule_tail(sv.points);
        const size_t split = sv.points.size() - tail.size();
        real tail_min = kPosInf, head_min = kPosInf;
        for (size_t i = 0; i < sv.ln_values.size(); ++i)
          (i < split ? head_min : tail_min) =
              std::min(i < split ? head_min : tail_min, sv.ln_values[i]);
        if (!(tail_min <= std::min(head_min, std::log(1e-6L)))) all_vanish = false;
        if (growth_min(sv, std::log(1e6L)) == Growth::Infinite ||
            (tail_min >= head_min + std::log(1.5L) && tail_min >= 0)) {
          refuted = true;
          break;
        }
      }
      if (all_vanish) {
        v.outcome = Outcome::Holds;
        v.route = kRouteGenericGrid;
        v.witness["mu"] = static_cast<real>(mu);
        v.witness["C"] = static_cast<real>(c);
        return v;
      }
      if (!refuted) all_refuted = false;
    }
  }
  v.outcome = all_refuted ? Outcome::Fails : Outcome::Undetermined;
  v.route = all_refuted
                ? "generic: product criterion refuted on the whole grid"
                : "generic: grid search exhausted without certificate";
  return v;
}

Verdict exists_chaotic_shift(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  const real level_ln = std::log(static_cast<real>(p.unbounded_level));
  switch (space.kind()) {
    case SpaceKind::PowerSeriesInfinite: {
      const auto sv = ratio_sums(*space.alpha(), horizon, p);
      const Growth gmin = growth_min(sv, level_ln);
      v.witness["ratio_sum_at_horizon"] = std::exp(sv.ln_values.back());
      if (gmin == Growth::Infinite) {
        v.outcome = Outcome::Holds;
        v.route = "infinite-type: ratio sums tend to infinity";
      } else if (growth_max(sv, level_ln) == Growth::Bounded) {
        v.outcome = Outcome::Fails;
        v.route = kRouteInfBounded;
      } else {
        v.outcome = Outcome::Undetermined;
        v.route = "infinite-type: ratio-sum limit ambiguous";
      }
      return v;
    }
    case SpaceKind::PowerSeriesFinite: {
      const RhoReport rho = rho_report(*space.alpha(), horizon, p);
      const auto& l1 = rho.lag1();
      if (l1.ln_hi <= level_ln) {
        v.outcome = Outcome::Holds;
        v.route = "finite-type: bounded lag-1 ratios admit a constant chaotic weight";
        v.witness["lag1_limsup"] = std::exp(l1.ln_hi);
        return v;
      }
      if (l1.ln_lo >= level_ln) {
        v.outcome = Outcome::Fails;
        v.route = kRouteFinDiverge;
        return v;
      }
      v.outcome = Outcome::Undetermined;
      v.route = "finite-type: lag-1 ratio estimates inconclusive";
      return v;
    }
    default: break;
  }

  const Verdict reg = check_regularity_bound(space, horizon, p);
  if (reg.holds()) {
    const real pe = space.p_eff();
    std::vector<long> mu_grid = {1};
    for (long g = 2; g <= p.mu_max; g *= 2) mu_grid.push_back(g);
    bool all_refuted = true;
    for (long mu : mu_grid) {
      std::vector<real> prefix(static_cast<size_t>(horizon) + 1, 0.0L);
      for (long n = 1; n <= horizon; ++n)
        prefix[static_cast<size_t>(n)] = prefix[static_cast<size_t>(n - 1)] +
                                         space.ln_entry(1, n - 1) -
                                         space.ln_entry(mu, n);
      for (long c : p.c_grid()) {
        const real ln_c = std::log(static_cast<real>(c));
        bool all_ok = true, any_diverge = false;
        std::vector<long> probes = p.probe_m;
        probes.push_back(2 * mu * mu + 1);
        for (long m : probes) {
          auto term = [&](long n) {
            const real ln_x = prefix[static_cast<size_t>(n)] / pe -
                              static_cast<real>(n) * ln_c;
            return space.sup_norm() ? ln_x + space.ln_entry(m, n)
                                    : pe * ln_x + space.ln_entry(m, n);
          };
          if (space.sup_norm()) {
            const TailVerdict tv = vanishes_test(term, 0, horizon, p.tail);
            if (tv.verdict != Tail::Converges) all_ok = false;
            if (tv.verdict == Tail::Diverges) any_diverge = true;
          } else {
            const SeriesVerdict sv = analyze_series(term, 0, horizon, p.series);
            if (sv.verdict != Tail::Converges) all_ok = false;
            if (sv.verdict == Tail::Diverges) any_diverge = true;
          }
          if (any_diverge) break;
        }
        if (all_ok) {
          v.outcome = Outcome::Holds;
          v.route = "generic: product sequence lies in the space";
          v.witness["mu"] = static_cast<real>(mu);
          v.witness["C"] = static_cast<real>(c);
          return v;
        }
        if (!any_diverge) all_refuted = false;
      }
    }
    v.outcome = all_refuted ? Outcome::Fails : Outcome::Undetermined;
    v.route = all_refuted ? "generic: product sequence escapes the space on the grid"
                          : "generic: grid search exhausted without certificate";
    return v;
  }
  // fallback without the regularity bound: a ladder weight that the chaos
  // test certifies is itself the existence witness
  for (long c : p.c_grid()) {
    const real ln_c = std::log(static_cast<real>(c));
    const real pe = space.p_eff();
    auto ln_w = [space, ln_c, pe](long n) {
      real nu = kPosInf;
      for (long k = 1; k <= 8; ++k)
        nu = std::min(nu, ln_c + space.ln_entry(k + 1, n) - space.ln_entry(k, n - 1));
      return nu / pe;
    };
    const WeightSeq cand = WeightSeq::from_ln_w(ln_w, "ladder weight");
    if (check_chaotic(space, cand, horizon, p).holds()) {
      v.outcome = Outcome::Holds;
      v.route = "generic: ladder weight passes the chaos series test";
      v.witness["C"] = static_cast<real>(c);
      return v;
    }
  }
  v.outcome = Outcome::Undetermined;
  v.route = "generic: regularity bound undetermined; ladder search exhausted";
  return v;
}

namespace {

// Auxiliary domination hypotheses used when the lag-ratio rules are silent.
bool aux_infinite_domination(const SpaceSpec& space, long horizon, const Params& p,
                             std::string& note) {
  const AlphaSeq& alpha = *space.alpha();
  const real ln_inv_eps = std::log(2.0L);  // eps = 1/2
  const std::vector<real> c_grid = {1.0L, 2.0L, 4.0L, 8.0L};
  for (real c : c_grid) {
    bool found_j = false;
    for (long j : p.j_ladder) {
      if (horizon <= j + p.tail.window + 1) break;
      try {
        if (!space.sup_norm()) {
          auto term = [&](long n) {
            const real s = alpha.prefix_value_sum(n) - alpha.prefix_value_sum(n - j);
            return -ln_inv_eps * (s - c * alpha.value_at(n));
          };
          if (analyze_series(term, j, horizon, p.series).verdict == Tail::Converges) {
            found_j = true;
            break;
          }
        } else {
          real tail_min = kPosInf, head_min = kPosInf;
          for (long n = j; n <= horizon; ++n) {
            const real s = alpha.prefix_value_sum(n) - alpha.prefix_value_sum(n - j) -
                           c * alpha.value_at(n);
            (n >= horizon / 2 ? tail_min : head_min) =
                std::min(n >= horizon / 2 ? tail_min : head_min, s);
          }
          if (tail_min >= head_min - 1e-9L && tail_min > kNegInf) {
            found_j = true;
            break;
          }
        }
      } catch (const DomainError&) {
        break;  // alpha outgrew the value range: no certificate at this horizon
      }
    }
    if (!found_j) {
      std::ostringstream os;
      os << "domination fails for C = " << static_cast<double>(c);
      note = os.str();
      return false;
    }
  }
  note = "partial-sum domination certified for the C-grid";
  return true;
}

bool aux_finite_domination(const SpaceSpec& space, long horizon, const Params& p,
                           std::string& note) {
  const AlphaSeq& alpha = *space.alpha();
  const real ln_inv_eps = std::log(2.0L);
  const std::vector<real> delta_grid = {1.0L, 0.5L, 0.25L, 0.125L};
  for (real d : delta_grid) {
    bool found_j = false;
    for (long j : p.j_ladder) {
      if (horizon <= j + p.tail.window + 1) break;
      auto term = [&](long n) {
        return ln_inv_eps * (alpha.value_at(n - j) - d * alpha.value_at(n));
      };
      try {
        if (analyze_series(term, j, horizon, p.series).verdict == Tail::Converges) {
          found_j = true;
          break;
        }
      } catch (const DomainError&) {
        break;
      }
    }
    if (!found_j) {
      std::ostringstream os;
      os << "deep-lag domination fails for delta = " << static_cast<double>(d);
      note = os.str();
      return false;
    }
  }
  note = "deep-lag domination certified for the delta-grid";
  return true;
}

}  // namespace

Classification classify_power_series(const SpaceSpec& space, long horizon,
                                     const Params& p) {
  if (space.kind() == SpaceKind::GenericKothe)
    throw ConfigError("classify_power_series: space is not a power series space");
  Classification c;
  c.rho = rho_report(*space.alpha(), horizon, p);
  c.exists_hc = exists_hc_shift(space, horizon, p);
  c.exists_chaotic = exists_chaotic_shift(space, horizon, p);
  if (c.exists_chaotic.holds() && !c.exists_hc.holds()) {
    c.exists_hc.outcome = Outcome::Holds;
    c.exists_hc.route += "; implied by chaotic existence";
  }

  const auto& l1 = c.rho.lag1();
  const real eta_ln = std::log1p(static_cast<real>(p.eta));
  const real level_ln = std::log(static_cast<real>(p.unbounded_level));
  auto vacuous = [&](const char* route) {
    c.pattern = "x";
    c.fhc_implies_chaos =
        Verdict::make(Outcome::Holds, horizon, std::string(route) + " (vacuous)");
    c.exists_fhc_not_chaotic = Verdict::make(Outcome::Fails, horizon, route);
  };

  if (space.kind() == SpaceKind::PowerSeriesInfinite) {
    if (l1.ln_lo >= eta_ln) {
      vacuous("infinite-type: lag-1 liminf exceeds 1; no hypercyclic shifts");
    } else if (l1.ln_hi <= eta_ln) {
      c.pattern = "!=";
      c.exists_fhc_not_chaotic = Verdict::make(
          Outcome::Holds, horizon, "infinite-type: lag-1 ratio limit 1",
          {{"lag1_limsup", std::exp(l1.ln_hi)}});
      c.fhc_implies_chaos =
          Verdict::make(Outcome::Fails, horizon, "infinite-type: lag-1 ratio limit 1");
    } else {
      c.pattern = "?";
      std::string note;
      if (aux_infinite_domination(space, horizon, p, note)) {
        c.exists_fhc_not_chaotic = Verdict::make(
            Outcome::Holds, horizon, "infinite-type: partial-sum domination", {}, note);
        c.fhc_implies_chaos = Verdict::make(Outcome::Fails, horizon,
                                            "infinite-type: partial-sum domination");
        c.pattern = "!=";
      } else {
        c.exists_fhc_not_chaotic =
            Verdict::make(Outcome::Undetermined, horizon,
                          "infinite-type: lag rules and domination silent", {}, note);
        c.fhc_implies_chaos = Verdict::make(Outcome::Undetermined, horizon,
                                            "infinite-type: no applicable rule");
        if (c.exists_chaotic.holds())
          c.open_notes.push_back(
              "space supports chaotic shifts but whether every frequently "
              "hypercyclic shift is chaotic here is an open case");
      }
    }
  } else {
    if (l1.ln_lo >= level_ln) {
      vacuous("finite-type: lag-1 ratios diverge; no hypercyclic shifts");
    } else if (c.rho.lags.back().ln_hi <= level_ln) {
      c.pattern = "=";
      c.fhc_implies_chaos = Verdict::make(
          Outcome::Holds, horizon, kRouteFinBounded,
          {{"deep_lag_limsup", std::exp(c.rho.lags.back().ln_hi)}});
      c.exists_fhc_not_chaotic =
          Verdict::make(Outcome::Fails, horizon, kRouteFinBounded);
    } else {
      bool lo_increasing = true;
      for (size_t i = 1; i < c.rho.lags.size(); ++i)
        if (c.rho.lags[i].ln_lo + 1e-12L < c.rho.lags[i - 1].ln_lo)
          lo_increasing = false;
      std::string note;
      if (l1.ln_hi <= level_ln && lo_increasing && c.rho.lags.back().ln_lo >= level_ln) {
        c.pattern = "!=";
        c.exists_fhc_not_chaotic = Verdict::make(
            Outcome::Holds, horizon, kRouteFinMixed,
            {{"deep_lag_liminf", std::exp(c.rho.lags.back().ln_lo)}});
        c.fhc_implies_chaos = Verdict::make(Outcome::Fails, horizon, kRouteFinMixed);
      } else if (l1.ln_hi <= level_ln && !space.sup_norm() &&
                 aux_finite_domination(space, horizon, p, note)) {
        c.pattern = "!=";
        c.exists_fhc_not_chaotic = Verdict::make(
            Outcome::Holds, horizon, "finite-type: deep-lag domination", {}, note);
        c.fhc_implies_chaos =
            Verdict::make(Outcome::Fails, horizon, "finite-type: deep-lag domination");
      } else {
        c.pattern = "?";
        c.fhc_implies_chaos = Verdict::make(Outcome::Undetermined, horizon,
                                            "finite-type: no applicable rule");
        c.exists_fhc_not_chaotic = Verdict::make(
            Outcome::Undetermined, horizon, "finite-type: no applicable rule");
      }
    }
  }

  if (c.exists_hc.fails() && c.pattern != "x" && c.pattern != "?")
    c.open_notes.push_back("inconsistent: existence verdict disagrees with lag rules");
  return c;
}

namespace {

// Largest n <= horizon at which alpha_n itself (and hence every ln-entry of
// the matrix) still fits the extended floating range. Sequences like 2^n
// outgrow any native type; checks scan the representable prefix and record
// the cap.
long representable_horizon(const SpaceSpec& space, long horizon) {
  if (!space.alpha()) return horizon;
  const real cap_ln_alpha = 11290.0L;
  const AlphaSeq& a = *space.alpha();
  if (a.ln_at(horizon) <= cap_ln_alpha) return horizon;
  long lo = 0, hi = horizon;
  while (lo + 1 < hi) {
    const long mid = lo + (hi - lo) / 2;
    (a.ln_at(mid) <= cap_ln_alpha ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TransferWitnessReport check_transfer_witness(const SpaceSpec& space, const WeightSeq& v,
                                 long horizon, const Params& p) {
  TransferWitnessReport rep;
  const long full_horizon = horizon;
  horizon = representable_horizon(space, horizon);
  rep.premise.horizon = rep.conclusion.horizon = horizon;
  rep.premise.route = "one-step transfer over the mu-ladder";
  rep.conclusion.route = "iterate transfer with the premise witness mu";
  if (horizon < full_horizon) {
    const std::string capnote =
        "scan capped at n = " + std::to_string(horizon) +
        ": beyond it the exponents leave the extended floating range; ";
    rep.premise.note = capnote;
    rep.conclusion.note = capnote;
  }
  const real tol_ln = std::log1p(static_cast<real>(p.stab_tol));

  std::map<long, long> premise_mu;
  bool premise_all = true;
  for (long m : p.probe_m) {
    bool certified = false;
    for (long mu : p.mu_ladder(m)) {
      // v_{n-1}/v_n = w_n; the w-form keeps exact cancellations exact
      auto q = [&](long n) {
        return v.ln_w(n) + space.ln_entry(m, n - 1) - space.ln_entry(mu, n);
      };
      const SupEstimate est = sup_stabilized(q, 1, horizon, tol_ln);
      if (est.stabilized) {
        premise_mu[m] = mu;
        rep.premise.witness["mu_for_m_" + std::to_string(m)] = static_cast<real>(mu);
        rep.premise.witness["C_for_m_" + std::to_string(m)] =
            est.sup_ln <= 0 ? 1.0L : std::exp(est.sup_ln);
        certified = true;
        break;
      }
    }
    if (!certified) {
      premise_all = false;
      break;
    }
  }
  rep.premise.outcome = premise_all ? Outcome::Holds : Outcome::Undetermined;
  if (!premise_all) {
    rep.conclusion.outcome = Outcome::Undetermined;
    rep.conclusion.note += "premise not certified; conclusion not evaluated";
    return rep;
  }

  // v_{n-j}/v_n = w_{n-j+1} ... w_n, accumulated in the w-form
  auto iterate_ratio = [&v](long n, long j) {
    real s = 0;
    for (long i = n - j + 1; i <= n; ++i) s += v.ln_w(i);
    return s;
  };

  bool conclusion_all = true;
  for (long m : p.probe_m) {
    const long mu = premise_mu[m];
    long failing_j = 0;
    for (long j : p.j_ladder) {
      if (horizon <= 2 * j) break;
      auto q = [&](long n) {
        return iterate_ratio(n, j) + space.ln_entry(m, n - j) - space.ln_entry(mu, n);
      };
      const SupEstimate est = sup_stabilized(q, j, horizon, tol_ln);
      if (!est.stabilized) {
        failing_j = j;
        break;
      }
      rep.conclusion.witness["C_m" + std::to_string(m) + "_j" + std::to_string(j)] =
          est.sup_ln <= 0 ? 1.0L : std::exp(est.sup_ln);
    }
    if (failing_j > 0) {
      conclusion_all = false;
      rep.conclusion.witness["failing_m"] = static_cast<real>(m);
      rep.conclusion.witness["failing_j"] = static_cast<real>(failing_j);
      // diagnostic: does a larger mu serve every ladder j?
      for (long mu2 : p.mu_ladder(m)) {
        if (mu2 <= mu) continue;
        bool serves = true;
        for (long j : p.j_ladder) {
          if (horizon <= 2 * j) break;
          auto q2 = [&](long n) {
            return iterate_ratio(n, j) + space.ln_entry(m, n - j) -
                   space.ln_entry(mu2, n);
          };
          if (!sup_stabilized(q2, j, horizon, tol_ln).stabilized) {
            serves = false;
            break;
          }
        }
        if (serves) {
          rep.conclusion.note +=
              "a larger mu restores the iterate bound (mu = " + std::to_string(mu2) +
              "); the premise witness mu = " + std::to_string(mu) +
              " fails at j = " + std::to_string(failing_j);
          break;
        }
      }
      if (rep.conclusion.note.find("restores") == std::string::npos)
        rep.conclusion.note += "no ladder mu serves every iterate depth";
      break;
    }
  }
  rep.conclusion.outcome = conclusion_all ? Outcome::Holds : Outcome::Fails;
  return rep;
}

Verdict check_transfer_property(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  const real level_ln = std::log(static_cast<real>(p.unbounded_level));
  switch (space.kind()) {
    case SpaceKind::PowerSeriesFinite: {
      const RhoReport rho = rho_report(*space.alpha(), horizon, p);
      if (rho.lags.back().ln_hi <= level_ln) {
        v.outcome = Outcome::Holds;
        v.route = kRouteFinBounded;
        v.witness["deep_lag_limsup"] = std::exp(rho.lags.back().ln_hi);
      } else {
        v.outcome = Outcome::Undetermined;
        v.route = "finite-type: iterated lag ratios not certified bounded";
      }
      return v;
    }
    case SpaceKind::PowerSeriesInfinite: {
      const Verdict hc = exists_hc_shift(space, horizon, p);
      if (hc.holds()) {
        v.outcome = Outcome::Fails;
        v.route = "infinite-type: incompatible with existing hypercyclic shifts";
      } else {
        v.outcome = Outcome::Undetermined;
        v.route = hc.fails()
                      ? "infinite-type: no hypercyclic shifts; transfer not decided"
                      : "infinite-type: existence undetermined";
      }
      return v;
    }
    default:
      v.outcome = Outcome::Undetermined;
      v.route = "generic: transfer quantifies over all admissible sequences";
      return v;
  }
}

}  // namespace kshift
