#include "kshift/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kshift {

namespace {

constexpr real kValueGuardLn = 11300.0L;  // exp() beyond this leaves the extended range

std::string fmt(real v) {
  std::ostringstream os;
  os << static_cast<double>(v);
  return os.str();
}

}  // namespace

AlphaSeq AlphaSeq::from_values(std::function<real(long)> gen, std::string provenance) {
  auto state = std::make_shared<State>();
  state->ln_gen = [g = std::move(gen)](long n) {
    const real v = g(n);
    if (!(v > 0) || std::isnan(static_cast<double>(v)))
      throw ValidationError("alpha sequence not strictly positive at index " +
                            std::to_string(n));
    return std::log(v);
  };
  state->provenance = std::move(provenance);
  AlphaSeq a;
  a.state_ = std::move(state);
  return a;
}

AlphaSeq AlphaSeq::from_ln(std::function<real(long)> gen, std::string provenance) {
  auto state = std::make_shared<State>();
  state->ln_gen = std::move(gen);
  state->provenance = std::move(provenance);
  AlphaSeq a;
  a.state_ = std::move(state);
  return a;
}

real AlphaSeq::ln_at(long n) const {
  if (n < 0) throw DomainError("AlphaSeq: negative index");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto& lns = state_->lns;
  while (static_cast<long>(lns.size()) <= n)
    lns.push_back(state_->ln_gen(static_cast<long>(lns.size())));
  return lns[n];
}

real AlphaSeq::value_at(long n) const {
  const real ln = ln_at(n);
  if (ln > kValueGuardLn)
    throw DomainError("alpha_" + std::to_string(n) +
                      " exceeds the extended floating range; only ln(alpha) is usable");
  return std::exp(ln);
}

real AlphaSeq::prefix_value_sum(long n) const {
  if (n < 0) throw DomainError("AlphaSeq: negative prefix length");
  ln_at(std::max(0L, n - 1));  // materialize lns first (separate lock scope)
  std::lock_guard<std::mutex> lock(state_->mu);
  auto& ps = state_->psums;
  if (ps.empty()) ps.push_back(0);
  while (static_cast<long>(ps.size()) <= n) {
    const long i = static_cast<long>(ps.size()) - 1;
    const real ln = state_->lns[i];
    if (ln > kValueGuardLn)
      throw DomainError("alpha prefix sum exceeds the extended floating range");
    ps.push_back(ps.back() + std::exp(ln));
  }
  return ps[n];
}

void AlphaSeq::validate(long probe) const {
  real prev = kNegInf;
  for (long n = 0; n <= probe; ++n) {
    const real ln = ln_at(n);
    if (std::isnan(static_cast<double>(ln)) || ln == kPosInf)
      throw ValidationError("alpha sequence invalid at index " + std::to_string(n));
    if (ln == kNegInf)
      throw ValidationError("alpha sequence not strictly positive at index " +
                            std::to_string(n));
    if (ln < prev)
      throw ValidationError("alpha sequence decreases at index " + std::to_string(n));
    prev = ln;
  }
  if (!(ln_at(probe) > ln_at(probe / 2)))
    throw ValidationError("alpha sequence shows no growth over the probe prefix (" +
                          std::to_string(probe / 2) + " .. " + std::to_string(probe) +
                          "); it must tend to infinity");
}

void validate_matrix(const KotheMatrix& a, long m_probe, long n_probe) {
  for (long n = 0; n <= n_probe; ++n) {
    for (long m = 1; m <= m_probe; ++m) {
      const real cur = a.ln_entry(m, n);
      if (std::isnan(static_cast<double>(cur)) || cur == kPosInf || cur == kNegInf)
        throw ValidationError("matrix entry not strictly positive and finite at (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n) + ")");
      if (m > 1) {
        const real below = a.ln_entry(m - 1, n);
        if (below > cur + 1e-10L)
          throw ValidationError("column monotonicity violated at (m=" +
                                std::to_string(m - 1) + " -> " + std::to_string(m) +
                                ", n=" + std::to_string(n) + ")");
      }
    }
  }
}

SpaceSpec SpaceSpec::generic(KotheMatrix matrix, real order, std::string name) {
  if (order != 0 && order < 1)
    throw ValidationError("order must be 0 or in [1, inf)");
  validate_matrix(matrix, 6, 256);
  SpaceSpec s;
  s.matrix_ = std::move(matrix);
  s.order_ = order;
  s.kind_ = SpaceKind::GenericKothe;
  s.name_ = std::move(name);
  return s;
}

SpaceSpec make_power_series(real order, bool infinite_type, real type_r,
                            AlphaSeq alpha, long probe) {
  if (order != 0 && order < 1)
    throw ValidationError("order must be 0 or in [1, inf)");
  alpha.validate(probe);
  SpaceSpec s;
  s.order_ = order;
  s.alpha_ = alpha;
  s.finite_type_r_ = infinite_type ? kPosInf : type_r;
  s.kind_ = infinite_type ? SpaceKind::PowerSeriesInfinite : SpaceKind::PowerSeriesFinite;
  if (infinite_type) {
    s.matrix_.ln_entry = [alpha](long m, long n) {
      return alpha.value_at(n) * std::log(static_cast<real>(m));
    };
    s.matrix_.provenance = "m^alpha_n (" + alpha.provenance() + ")";
  } else {
    // type-0 reduction; the original type is metadata only
    s.matrix_.ln_entry = [alpha](long m, long n) {
      return -alpha.value_at(n) * std::log1p(1.0L / static_cast<real>(m));
    };
    s.matrix_.provenance = "(1+1/m)^-alpha_n (" + alpha.provenance() + ")";
  }
  return s;
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  if (!name_.empty()) os << name_ << ": ";
  os << to_string(kind_) << ", order " << fmt(order_);
  if (kind_ == SpaceKind::PowerSeriesFinite) os << ", type " << fmt(finite_type_r_);
  if (alpha_) os << ", alpha " << alpha_->provenance();
  return os.str();
}

FiniteVector FiniteVector::from_pairs(std::vector<std::pair<long, double>> coords) {
  std::sort(coords.begin(), coords.end());
  FiniteVector x;
  for (const auto& [i, v] : coords) {
    if (v == 0) continue;
    if (!x.idx.empty() && x.idx.back() == i)
      throw ValidationError("duplicate index in finite vector: " + std::to_string(i));
    x.idx.push_back(i);
    x.val.push_back(v);
  }
  x.validate();
  return x;
}

void FiniteVector::validate() const {
  if (idx.size() != val.size())
    throw ValidationError("finite vector: index/value size mismatch");
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i > 0 && idx[i] <= idx[i - 1])
      throw ValidationError("finite vector support not strictly increasing");
    if (idx[i] < 0) throw ValidationError("finite vector: negative index");
    if (!(val[i] > 0))
      throw ValidationError("finite vector coordinates must be positive at support");
  }
}

LogReal seminorm(const SpaceSpec& space, const FiniteVector& x, long m) {
  std::vector<std::pair<long, real>> coords;
  coords.reserve(x.idx.size());
  for (size_t i = 0; i < x.idx.size(); ++i)
    coords.emplace_back(x.idx[i], std::log(static_cast<real>(x.val[i])));
  return LogReal::from_ln(seminorm_ln(space, coords, m));
}

real seminorm_ln(const SpaceSpec& space,
                 std::span<const std::pair<long, real>> ln_coords, long m) {
  if (m < 1) throw DomainError("seminorm index must be >= 1");
  if (space.sup_norm()) {
    real mx = kNegInf;
    for (const auto& [n, ln] : ln_coords)
      mx = std::max(mx, ln + space.ln_entry(m, n));
    return mx;
  }
  const real p = space.order();
  LogSumAcc acc;
  for (const auto& [n, ln] : ln_coords) acc.add_ln(p * ln + space.ln_entry(m, n));
  return acc.sum_ln() / p;
}

SupEstimate sup_stabilized(const std::function<real(long)>& fn, long lo, long hi,
                           real tol_ln) {
  SupEstimate est;
  const long mid = lo + (hi - lo) / 2;
  for (long n = lo; n <= hi; ++n) {
    const real v = fn(n);
    if (v > est.sup_ln) {
      est.sup_ln = v;
      est.argmax = n;
    }
    if (n <= mid)
      est.head_sup_ln = std::max(est.head_sup_ln, v);
    else
      est.tail_sup_ln = std::max(est.tail_sup_ln, v);
  }
  est.stabilized = est.tail_sup_ln <= est.head_sup_ln + tol_ln;
  return est;
}

Verdict check_condition_N(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  v.route = "mu-ladder with summability certificates";
  v.witness["mu_max"] = static_cast<real>(p.mu_max);
  bool all_hold = true, any_fail = false;
  for (long m : p.probe_m) {
    bool certified = false, all_diverge = true;
    for (long mu : p.mu_ladder(m)) {
      auto term = [&](long n) { return space.ln_entry(m, n) - space.ln_entry(mu, n); };
      const SeriesVerdict sv = analyze_series(term, 0, horizon, p.series);
      if (sv.verdict == Tail::Converges) {
        v.witness["mu_for_m_" + std::to_string(m)] = static_cast<real>(mu);
        certified = true;
        break;
      }
      if (sv.verdict != Tail::Diverges) all_diverge = false;
    }
    if (!certified) {
      all_hold = false;
      if (all_diverge) {
        any_fail = true;
        v.witness["failing_m"] = static_cast<real>(m);
        v.note = "every ladder mu gave a divergent column-ratio series for m = " +
                 std::to_string(m);
        break;
      }
    }
  }
  v.outcome = all_hold ? Outcome::Holds
                       : (any_fail ? Outcome::Fails : Outcome::Undetermined);
  return v;
}

Verdict check_condition_BC(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  if (!space.sup_norm()) {
    v.outcome = Outcome::Holds;
    v.route = "order >= 1: the unit sequences are always boundedly complete";
    return v;
  }
  const Verdict n_verdict = check_condition_N(space, horizon, p);
  if (n_verdict.holds()) {
    v.outcome = Outcome::Holds;
    v.route = "implied by the summable column-ratio condition";
    v.witness = n_verdict.witness;
    return v;
  }
  // tail-infimum threshold shrinking with the horizon
  const real thresh_ln = std::log(2.0L / std::log2(static_cast<real>(horizon)));
  v.witness["threshold"] = std::exp(thresh_ln);
  bool all_hold = true;
  for (long m : p.probe_m) {
    bool certified = false;
    bool flat_for_all_mu = true;
    for (long mu : p.mu_ladder(m)) {
      real tail_inf = kPosInf, head_inf = kPosInf;
      for (long n = 0; n <= horizon; ++n) {
        const real r = space.ln_entry(m, n) - space.ln_entry(mu, n);
        if (n >= horizon / 2)
          tail_inf = std::min(tail_inf, r);
        else
          head_inf = std::min(head_inf, r);
      }
      if (tail_inf <= thresh_ln) {
        v.witness["mu_for_m_" + std::to_string(m)] = static_cast<real>(mu);
        certified = true;
        break;
      }
      // flat, bounded-below ratios: evidence of mu-equivalence for this pair
      if (!(tail_inf >= std::log(0.1L) && tail_inf >= head_inf - 0.1L))
        flat_for_all_mu = false;
    }
    if (!certified) {
      all_hold = false;
      if (flat_for_all_mu) {
        v.outcome = Outcome::Fails;
        v.route = "column ratios bounded below for every ladder mu";
        v.witness["failing_m"] = static_cast<real>(m);
        return v;
      }
    }
  }
  if (all_hold) {
    v.outcome = Outcome::Holds;
    v.route = "tail infimum below horizon-shrinking threshold";
  } else {
    v.outcome = Outcome::Undetermined;
    v.route = "no vanishing certificate within ladder";
  }
  return v;
}

Verdict check_regularity_bound(const SpaceSpec& space, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  v.route = "J-ladder with stabilized suprema";
  v.witness["mu_max"] = static_cast<real>(p.mu_max);
  const real tol_ln = std::log1p(static_cast<real>(p.stab_tol));
  real worst_c_ln = kNegInf;
  for (long m : p.probe_m) {
    for (long j : p.j_ladder) {
      bool certified = false;
      std::vector<long> j_candidates;
      for (long cand : {j, m, m * j, 2 * m * j, 4 * m * j})
        if (cand >= 1 && cand <= p.mu_max) j_candidates.push_back(cand);
      for (long g = 1; g <= p.mu_max; g *= 4) j_candidates.push_back(g);
      std::sort(j_candidates.begin(), j_candidates.end());
      j_candidates.erase(std::unique(j_candidates.begin(), j_candidates.end()),
                         j_candidates.end());
      for (long J : j_candidates) {
        auto ratio = [&](long n) {
          return space.ln_entry(m, n + 1) - space.ln_entry(1, n) -
                 space.ln_entry(J, n + 1) + space.ln_entry(j, n);
        };
        const SupEstimate est = sup_stabilized(ratio, 0, horizon - 1, tol_ln);
        if (est.stabilized) {
          const std::string key = "m" + std::to_string(m) + "_j" + std::to_string(j);
          v.witness["J_" + key] = static_cast<real>(J);
          v.witness["C_" + key] = est.sup_ln <= 0 ? 1.0L : std::exp(est.sup_ln);
          worst_c_ln = std::max(worst_c_ln, est.sup_ln);
          certified = true;
          break;
        }
      }
      if (!certified) {
        v.outcome = Outcome::Undetermined;
        v.note = "no stabilized J found for (m=" + std::to_string(m) +
                 ", j=" + std::to_string(j) + ")";
        return v;
      }
    }
  }
  v.outcome = Outcome::Holds;
  v.witness["C_max"] = worst_c_ln <= 0 ? 1.0L : std::exp(worst_c_ln);
  return v;
}

}  // namespace kshift
