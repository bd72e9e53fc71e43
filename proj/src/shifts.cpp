#include "kshift/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kshift {

namespace {

real checked_ln(real v, const char* what) {
  if (std::isnan(static_cast<double>(v)) || v == kPosInf || v == kNegInf)
    throw ValidationError(std::string(what) + ": entry must be strictly positive and finite");
  return v;
}

}  // namespace

WeightSeq WeightSeq::from_ln_w(std::function<real(long)> ln_w, std::string description) {
  auto st = std::make_shared<State>();
  st->ln_w = std::move(ln_w);
  st->description = std::move(description);
  st->ln_v_cache = {0.0L};  // v_0 = 1
  WeightSeq w;
  w.state_ = std::move(st);
  return w;
}

WeightSeq WeightSeq::from_ln_v(std::function<real(long)> ln_v, std::string description) {
  if (std::fabs(ln_v(0)) > 1e-15L)
    throw ValidationError("associated sequence must have v_0 = 1");
  auto st = std::make_shared<State>();
  st->ln_v = std::move(ln_v);
  st->ln_w = [gen = st->ln_v](long n) { return gen(n - 1) - gen(n); };
  st->description = std::move(description);
  st->ln_v_cache = {0.0L};
  WeightSeq w;
  w.state_ = std::move(st);
  return w;
}

WeightSeq WeightSeq::from_values(std::span<const double> w) {
  std::vector<real> lnw;
  lnw.reserve(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0))
      throw ValidationError("weight w_" + std::to_string(i + 1) +
                            " must be strictly positive");
    lnw.push_back(std::log(static_cast<real>(w[i])));
  }
  return from_ln_w(
      [lnw = std::move(lnw)](long n) {
        if (n < 1 || n > static_cast<long>(lnw.size()))
          throw DomainError("weight table index out of range: " + std::to_string(n));
        return lnw[static_cast<size_t>(n - 1)];
      },
      "table[" + std::to_string(w.size()) + "]");
}

WeightSeq WeightSeq::constant(double c) {
  if (!(c > 0)) throw ValidationError("constant weight must be strictly positive");
  const real ln = std::log(static_cast<real>(c));
  std::ostringstream os;
  os << "constant:" << c;
  return from_ln_w([ln](long) { return ln; }, os.str());
}

WeightSeq WeightSeq::geometric(double c) {
  if (!(c > 0)) throw ValidationError("geometric weight base must be strictly positive");
  const real ln = std::log(static_cast<real>(c));
  std::ostringstream os;
  os << "geometric:" << c;
  return from_ln_w([ln](long n) { return static_cast<real>(n) * ln; }, os.str());
}

real WeightSeq::ln_w(long n) const {
  if (n < 1) throw DomainError("weights are indexed from 1");
  return checked_ln(state_->ln_w(n), "weight");
}

real WeightSeq::ln_v(long n) const {
  if (n < 0) throw DomainError("associated sequence indexed from 0");
  if (state_->ln_v) return checked_ln(n == 0 ? 0.0L : state_->ln_v(n), "associated sequence");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto& cache = state_->ln_v_cache;
  while (static_cast<long>(cache.size()) <= n) {
    const long k = static_cast<long>(cache.size());
    cache.push_back(cache.back() - checked_ln(state_->ln_w(k), "weight"));
  }
  return cache[static_cast<size_t>(n)];
}

std::vector<real> v_from_w(std::span<const real> w) {
  std::vector<real> v;
  v.reserve(w.size() + 1);
  v.push_back(1.0L);
  real ln = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0))
      throw ValidationError("weight w_" + std::to_string(i + 1) +
                            " must be strictly positive");
    ln -= std::log(w[i]);
    v.push_back(std::exp(ln));
  }
  return v;
}

std::vector<real> w_from_v(std::span<const real> v) {
  if (v.empty() || std::fabs(v[0] - 1.0L) > 1e-15L)
    throw ValidationError("associated sequence must start with v_0 = 1");
  std::vector<real> w;
  w.reserve(v.size() - 1);
  for (size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > 0))
      throw ValidationError("v_" + std::to_string(i) + " must be strictly positive");
    w.push_back(v[i - 1] / v[i]);
  }
  return w;
}

Verdict check_operator(const SpaceSpec& space, const WeightSeq& w, long horizon,
                       const Params& p) {
  Verdict v;
  v.horizon = horizon;
  v.route = "one-step shifted-seminorm bound over mu-ladder";
  v.witness["mu_max"] = static_cast<real>(p.mu_max);
  const real pe = space.p_eff();
  const real tol_ln = std::log1p(static_cast<real>(p.stab_tol));
  bool all_hold = true, any_growth_everywhere = false;
  for (long m : p.probe_m) {
    bool certified = false, growth_for_all_mu = true;
    for (long mu : p.mu_ladder(m)) {
      // v_{n-1}/v_n = w_n; the w-form avoids cancellation between huge v-logs
      auto ratio = [&](long n) {
        return pe * w.ln_w(n) + space.ln_entry(m, n - 1) - space.ln_entry(mu, n);
      };
      const SupEstimate est = sup_stabilized(ratio, 1, horizon, tol_ln);
      if (est.stabilized) {
        const std::string key = std::to_string(m);
        v.witness["mu_for_m_" + key] = static_cast<real>(mu);
        v.witness["C_for_m_" + key] = est.sup_ln <= 0 ? 1.0L : std::exp(est.sup_ln);
        certified = true;
        break;
      }
      // clear, persistent growth: tail sup exceeds head sup by a margin
      if (!(est.tail_sup_ln > est.head_sup_ln + std::log(1.5L)))
        growth_for_all_mu = false;
    }
    if (!certified) {
      all_hold = false;
      if (growth_for_all_mu) {
        any_growth_everywhere = true;
        v.witness["failing_m"] = static_cast<real>(m);
      }
    }
  }
  v.outcome = all_hold ? Outcome::Holds
                       : (any_growth_everywhere ? Outcome::Fails : Outcome::Undetermined);
  return v;
}

Verdict check_chaotic(const SpaceSpec& space, const WeightSeq& w, long horizon,
                      const Params& p, const Verdict* operator_verdict) {
  Verdict v;
  v.horizon = horizon;
  if (operator_verdict && !operator_verdict->holds())
    v.note = "advisory: operator continuity not certified at this horizon; ";
  const real pe = space.p_eff();
  bool all_converge = true;
  for (long m : p.probe_m) {
    auto term_m = [&](long n) { return pe * w.ln_v(n) + space.ln_entry(m, n); };
    if (space.sup_norm()) {
      const TailVerdict tv = vanishes_test(
          [&](long n) { return w.ln_v(n) + space.ln_entry(m, n); }, 0, horizon, p.tail);
      if (tv.verdict == Tail::Diverges) {
        v.outcome = Outcome::Fails;
        v.route = "coordinates v_n a_{m,n} do not vanish (m = " + std::to_string(m) + ")";
        v.witness["failing_m"] = static_cast<real>(m);
        for (size_t i = 0; i < tv.witnesses.size(); ++i)
          v.witness["witness_n_" + std::to_string(i)] = static_cast<real>(tv.witnesses[i]);
        v.note += tv.evidence;
        return v;
      }
      if (tv.verdict != Tail::Converges) all_converge = false;
    } else {
      const SeriesVerdict sv = analyze_series(term_m, 0, horizon, p.series);
      if (sv.verdict == Tail::Diverges) {
        v.outcome = Outcome::Fails;
        v.route = "series sum v_n^p a_{m,n} diverges (m = " + std::to_string(m) + ")";
        v.witness["failing_m"] = static_cast<real>(m);
        for (size_t i = 0; i < sv.witnesses.size(); ++i)
          v.witness["witness_n_" + std::to_string(i)] = static_cast<real>(sv.witnesses[i]);
        v.note += sv.evidence;
        return v;
      }
      if (sv.verdict != Tail::Converges) all_converge = false;
    }
  }
  v.outcome = all_converge ? Outcome::Holds : Outcome::Undetermined;
  v.route = all_converge ? "series sum v_n e_n converges in every probe seminorm"
                         : "no certificate for some probe seminorm";
  return v;
}

FiniteVector apply_power(const WeightSeq& w, const FiniteVector& x, long n) {
  if (n < 0) throw DomainError("apply_power: iterate must be nonnegative");
  x.validate();
  FiniteVector out;
  for (size_t i = 0; i < x.idx.size(); ++i) {
    const long src = x.idx[i];
    if (src < n) continue;  // shifted below coordinate 0
    const long k = src - n;
    const real ln_factor = w.ln_v(k) - w.ln_v(src);
    out.idx.push_back(k);
    out.val.push_back(static_cast<double>(
        std::exp(ln_factor + std::log(static_cast<real>(x.val[i])))));
  }
  return out;
}

Verdict check_ufhc_necessary(const SpaceSpec& space, const WeightSeq& w, long horizon,
                             const Params& p) {
  Verdict v;
  v.horizon = horizon;
  v.route = "partial-sum seminorms stabilize over the trailing half";
  // Boundedness of the partial sums is a necessary condition on Banach
  // sequence spaces; on non-normable spaces without uniform iterate bounds
  // the verdict is advisory.
  v.note = "necessary condition on normable spaces; advisory on non-normable "
           "spaces without uniform iterate bounds";
  const real pe = space.p_eff();
  const real grow_tol = std::log1p(static_cast<real>(p.stab_tol));
  bool all_stable = true, any_clear_growth = false;
  for (long m : p.probe_m) {
    real half_ln = kNegInf, full_ln = kNegInf;
    if (space.sup_norm()) {
      real running = kNegInf;
      for (long n = 0; n <= horizon; ++n) {
        running = std::max(running, w.ln_v(n) + space.ln_entry(m, n));
        if (n == horizon / 2) half_ln = running;
      }
      full_ln = running;
    } else {
      // p-th power of the seminorm; growth ratios are scale-free
      LogSumAcc acc;
      for (long n = 0; n <= horizon; ++n) {
        acc.add_ln(pe * w.ln_v(n) + space.ln_entry(m, n));
        if (n == horizon / 2) half_ln = acc.sum_ln();
      }
      full_ln = acc.sum_ln();
    }
    const real growth = full_ln - half_ln;
    v.witness["growth_m_" + std::to_string(m)] = std::exp(growth);
    if (growth > grow_tol) {
      all_stable = false;
      if (growth > std::log(1.5L)) {
        any_clear_growth = true;
        v.witness["failing_m"] = static_cast<real>(m);
      }
    }
  }
  v.outcome = all_stable ? Outcome::Holds
                         : (any_clear_growth ? Outcome::Fails : Outcome::Undetermined);
  return v;
}

}  // namespace kshift
