// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "kshift/classify.hpp"
#include "kshift/config.hpp"
#include "kshift/construct.hpp"
#include "kshift/density.hpp"
#include "kshift/orbit.hpp"

using namespace kshift;

namespace {

int failures = 0;

double run_criterion(int number, const std::string& title,
                     const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %2d: %-58s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", number,
              title.c_str(), secs, detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
  return secs;
}

SpaceSpec power(const std::string& alpha, bool infinite, long probe) {
  SpaceDesc d;
  d.kind = infinite ? "power-series-infinite" : "power-series-finite";
  d.alpha_expr = alpha;
  d.order = 1;
  return d.build(probe);
}

struct EntireConstruction {
  long h = 100000;
  SpaceSpec space;
  Blocks blocks;
  BMatrix b;
  FhcConstruction fhc;
  EntireConstruction()
      : space(builtin_space("entire").build(10000)),
        blocks(build_blocks(3, h)),
        b(build_B(space, BFamily::BilinearPowers)),
        fhc(build_fhc_nonchaotic_weight(space, b, blocks, h)) {}
};

}  // namespace

int main() {
  Params params;
  std::unique_ptr<EntireConstruction> built;

  // 1: the power-series classification table
  run_criterion(1, "classification table over six power-series configurations",
                [&](std::string& d) {
    const long h = 100000;
    const auto t0 = std::chrono::steady_clock::now();
    struct Row {
      const char* alpha;
      bool infinite;
      const char* pattern;
      const char* route_key;  // fragment of the route that must have fired
    };
    const Row rows[] = {
        {"n + 1", false, "=", "iterated lag ratios bounded"},
        {"2 ^ n", false, "!=", "deep-lag liminf unbounded"},
        {"factorial(n + 1)", false, "x", "lag-1 ratios diverge"},
        {"n + 1", true, "!=", "lag-1 ratio limit 1"},
        {"2 ^ n", true, "x", "lag-1 liminf exceeds 1"},
        {"factorial(n + 1)", true, "x", "lag-1 liminf exceeds 1"},
    };
    for (const Row& r : rows) {
      const SpaceSpec sp = power(r.alpha, r.infinite, 10000);
      const Classification c = classify_power_series(sp, h, params);
      if (c.pattern != r.pattern) {
        d = std::string(r.alpha) + (r.infinite ? " (inf)" : " (fin)") + ": pattern " +
            c.pattern + ", wanted " + r.pattern;
        return false;
      }
      const std::string routes = c.fhc_implies_chaos.route + " | " +
                                 c.exists_fhc_not_chaotic.route + " | " +
                                 c.exists_hc.route;
      if (routes.find(r.route_key) == std::string::npos) {
        d = std::string(r.alpha) + ": route '" + routes + "' misses '" + r.route_key +
            "'";
        return false;
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 30.0) {
      d = "runtime " + std::to_string(secs) + "s exceeds 30s";
      return false;
    }
    return true;
  });

  // 2: the named spaces
  run_criterion(2, "named spaces: disk, entire, s", [&](std::string& d) {
    const long h = 100000;
    struct Named {
      const char* name;
      const char* pattern;
      const char* route_key;
    };
    const Named rows[] = {
        {"disk", "=", "iterated lag ratios bounded"},
        {"entire", "!=", "lag-1 ratio limit 1"},
        {"s", "!=", "lag-1 ratio limit 1"},
    };
    for (const Named& r : rows) {
      const auto t0 = std::chrono::steady_clock::now();
      const Classification c =
          classify_power_series(builtin_space(r.name).build(10000), h, params);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (c.pattern != r.pattern) {
        d = std::string(r.name) + ": pattern " + c.pattern;
        return false;
      }
      const std::string& route = c.pattern == std::string("=")
                                     ? c.fhc_implies_chaos.route
                                     : c.exists_fhc_not_chaotic.route;
      if (route.find(r.route_key) == std::string::npos) {
        d = std::string(r.name) + ": route " + route;
        return false;
      }
      if (secs >= 10.0) {
        d = std::string(r.name) + " took " + std::to_string(secs) + "s";
        return false;
      }
    }
    return true;
  });

  // 3: the doubly exponential matrix supports no hypercyclic shift
  run_criterion(3, "m^(2^n): regularity bound holds, existence refuted",
                [&](std::string& d) {
    const long h = 10000;
    const SpaceSpec lac = builtin_space("lacunary2n").build(64);
    const Verdict reg = check_regularity_bound(lac, h, params);
    if (!reg.holds()) {
      d = "regularity bound: " + std::string(to_string(reg.outcome));
      return false;
    }
    const Verdict hc = exists_hc_shift(lac, h, params);
    if (!hc.fails()) {
      d = "existence: " + std::string(to_string(hc.outcome)) + " via " + hc.route;
      return false;
    }
    return true;
  });

  // 4: the dyadic-factorial space supports chaotic shifts, with the exact
  // ratio-sum lower bound at dyadic checkpoints
  run_criterion(4, "dyadic-factorial: chaotic shifts exist, exact ratio bound",
                [&](std::string& d) {
    const long h = 100000;
    const SpaceSpec sp = builtin_space("dyadic-factorial").build(10000);
    const Verdict ch = exists_chaotic_shift(sp, h, params);
    if (!ch.holds()) {
      d = "existence: " + std::string(to_string(ch.outcome));
      return false;
    }
    const AlphaSeq& alpha = *sp.alpha();
    LogSumAcc acc;
    long next_check = 1 << 10;
    long k = 10;
    for (long n = 0; n <= (1 << 16); ++n) {
      if (n == next_check) {
        const real ratio_ln = acc.sum_ln() - alpha.ln_at(n);
        const real bound_ln = static_cast<real>(k - 2) * std::log(2.0L) -
                              std::log(static_cast<real>(k));
        if (!(ratio_ln > bound_ln)) {  // exact inequality, no tolerance
          d = "bound violated at N = 2^" + std::to_string(k);
          return false;
        }
        ++k;
        next_check *= 2;
      }
      acc.add_ln(alpha.ln_at(n));
    }
    return true;
  });

  // 5: the auxiliary-matrix certificate with its exact witnesses
  run_criterion(5, "power-family certificate: exact witnesses mu=4m, C=1, j_m=m",
                [&](std::string& d) {
    const long h = 2000;
    const SpaceSpec sp = builtin_space("entire").build(2000);
    const BMatrix b = build_B(sp, BFamily::BilinearPowers);
    const ConditionBReport rep = check_condition_B(sp, b, h, params);
    if (!rep.alpha.holds() || !rep.beta.holds() || !rep.gamma.holds()) {
      d = "clauses: " + rep.failing_clause();
      return false;
    }
    for (long m : params.probe_m) {
      if (rep.alpha.witness.at("mu_for_m_" + std::to_string(m)) !=
          static_cast<real>(4 * m)) {
        d = "alpha witness mu for m=" + std::to_string(m);
        return false;
      }
      if (rep.alpha.witness.at("C_for_m_" + std::to_string(m)) != 1.0L) {
        d = "alpha witness C for m=" + std::to_string(m);
        return false;
      }
      if (rep.gamma.witness.at("j_for_m_" + std::to_string(m)) !=
          static_cast<real>(m)) {
        d = "gamma witness j for m=" + std::to_string(m);
        return false;
      }
    }
    if (rep.beta.witness.at("inf_ln") != 0.0L) {  // inf = 1 exactly
      d = "beta infimum not exactly 1";
      return false;
    }
    return true;
  });

  // 6: the non-chaotic frequently hypercyclic construction
  run_criterion(6, "entire-model construction: operator, non-chaos, orbit bounds",
                [&](std::string& d) {
    built = std::make_unique<EntireConstruction>();
    const long h = built->h;
    if (!built->fhc.op.holds()) {
      d = "operator: " + std::string(to_string(built->fhc.op.outcome));
      return false;
    }
    const Verdict chaos = check_chaotic(built->space, built->fhc.w, h, params);
    if (!chaos.fails()) {
      d = "chaos: " + std::string(to_string(chaos.outcome));
      return false;
    }
    // exact witness: v_{N_k} a_{1,N_k} = 1 at every block start, 1e-12 in logs
    for (long c : built->blocks.cuts()) {
      if (c > h) break;
      const real ln = built->fhc.w.ln_v(c) + built->space.ln_entry(1, c);
      if (std::fabs(ln) > 1e-12L) {
        d = "block-start witness at N_k = " + std::to_string(c);
        return false;
      }
    }
    if (!built->fhc.not_chaotic.holds()) {
      d = "non-chaos certificate: " +
          std::string(to_string(built->fhc.not_chaotic.outcome));
      return false;
    }
    const Verdict ufhc = check_ufhc_necessary(built->space, built->fhc.w, h, params);
    if (!ufhc.holds()) {
      d = "partial-sum boundedness: " + std::string(to_string(ufhc.outcome));
      return false;
    }
    const FhcConditionsReport cond =
        check_fhc_conditions(built->space, built->fhc.w, built->blocks, h, params, 1.0);
    if (cond.overall != Outcome::Holds) {
      d = "orbit conditions";
      return false;
    }
    for (const auto& row : cond.cond_ii)
      for (const auto& v : row)
        if (v.witness.at("eps") > 0.5L) {
          d = "eps_r exceeds 1/2";  // eps_r = 1/2^r with c = 1
          return false;
        }
    return true;
  });

  // 7: the orbit demonstration
  run_criterion(7, "hitting density of the e_0 target under the construction",
                [&](std::string& d) {
    if (!built) built = std::make_unique<EntireConstruction>();
    const auto t0 = std::chrono::steady_clock::now();
    const long N = 100000;
    const std::vector<FiniteVector> targets(3, FiniteVector::unit(0));
    const LazyVector x =
        build_fhc_vector(built->space, built->fhc.w, built->blocks, targets);
    const HitStats stats = hitting_density(built->space, built->fhc.w, x,
                                           FiniteVector::unit(0), 1, 0.1, N,
                                           &built->blocks);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << "density " << stats.density << " vs blocks " << stats.blocks_density;
    d = os.str();
    if (!(stats.density >= 0.9 * stats.blocks_density)) return false;
    if (!(stats.density > 0.001)) return false;
    if (secs >= 60.0) {
      d += "; runtime " + std::to_string(secs) + "s";
      return false;
    }
    return true;
  });

  // 8: oracle equivalences
  run_criterion(8, "oracles: shift powers, profile round trip, correlations",
                [&](std::string& d) {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> dist(0.3, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> wtab;
      for (int i = 0; i < 40; ++i) wtab.push_back(dist(rng));
      const WeightSeq w = WeightSeq::from_values(wtab);
      FiniteVector x;
      long idx = static_cast<long>(rng() % 3);
      for (int i = 0; i < 4; ++i) {
        x.idx.push_back(idx);
        x.val.push_back(dist(rng));
        idx += 1 + static_cast<long>(rng() % 5);
      }
      const long n = static_cast<long>(rng() % 6);
      const FiniteVector got = apply_power(w, x, n);
      size_t gi = 0;
      for (size_t i = 0; i < x.idx.size(); ++i) {
        if (x.idx[i] < n) continue;
        double prod = 1.0;
        for (long k = x.idx[i] - n + 1; k <= x.idx[i]; ++k)
          prod *= wtab[static_cast<size_t>(k - 1)];
        const double want = prod * x.val[i];
        if (gi >= got.val.size() || got.idx[gi] != x.idx[i] - n ||
            std::fabs(got.val[gi] - want) > 1e-9 * std::fabs(want)) {
          d = "shift-power oracle, trial " + std::to_string(trial);
          return false;
        }
        ++gi;
      }
    }
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<real> w;
      for (int i = 0; i < 60; ++i) w.push_back(static_cast<real>(dist(rng)));
      const auto v = v_from_w(w);
      const auto w2 = w_from_v(v);
      for (size_t i = 0; i < w.size(); ++i)
        if (std::fabs(std::log(w[i]) - std::log(w2[i])) > 1e-12L) {
          d = "profile round trip, trial " + std::to_string(trial);
          return false;
        }
    }
    for (int trial = 0; trial < 20; ++trial) {
      const long q = 2 + static_cast<long>(rng() % 11);
      std::vector<char> res(static_cast<size_t>(q));
      long cnt = 0;
      for (long i = 0; i < q; ++i) cnt += (res[static_cast<size_t>(i)] = rng() % 2);
      if (!cnt) res[0] = 1;
      IndexSet a([res, q](long n) { return n >= 0 && res[static_cast<size_t>(n % q)]; },
                 "periodic");
      const long k = static_cast<long>(rng() % (2 * q));
      const long N = q * (50 + static_cast<long>(rng() % 50)) - 1;
      long expect = 0;
      for (long i = 0; i < q; ++i)
        expect += (res[static_cast<size_t>(i)] && res[static_cast<size_t>((i + k) % q)]);
      if (std::fabs(correlation_density(a, k, N) -
                    static_cast<double>(expect) / static_cast<double>(q)) > 1e-12) {
        d = "correlation oracle, trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  });

  // 9: the correlation-set desk check
  run_criterion(9, "correlation set of the multiples of three", [&](std::string& d) {
    const auto sched = params.schedule(100000);
    const auto f = find_correlation_set(IndexSet::residue(0, 3), 0.05, sched, 100);
    std::vector<long> want;
    for (long k = 0; k <= 99; k += 3) want.push_back(k);
    if (f.members != want) {
      d = "set has " + std::to_string(f.members.size()) + " members";
      return false;
    }
    if (f.gap.gap != 3) {
      d = "gap " + std::to_string(f.gap.gap);
      return false;
    }
    return true;
  });

  // 10: the transfer-property witness
  run_criterion(10, "transfer witness on the lacunary exponent space",
                [&](std::string& d) {
    const long h = 100000;
    const SpaceSpec sp = power("2 ^ n", true, 10000);
    const AlphaSeq alpha = *sp.alpha();
    const WeightSeq v = WeightSeq::from_ln_w(
        [alpha](long n) { return std::log(2.0L) * alpha.value_at(n); },
        "dyadic alpha profile");
    const TransferWitnessReport rep = check_transfer_witness(sp, v, h, params);
    if (!rep.premise.holds()) {
      d = "premise: " + std::string(to_string(rep.premise.outcome));
      return false;
    }
    for (long m : params.probe_m)
      if (rep.premise.witness.at("mu_for_m_" + std::to_string(m)) !=
          static_cast<real>(2 * m)) {
        d = "premise witness for m=" + std::to_string(m);
        return false;
      }
    if (!rep.conclusion.fails()) {
      d = "conclusion: " + std::string(to_string(rep.conclusion.outcome));
      return false;
    }
    if (rep.conclusion.witness.at("failing_j") > 8.0L) {
      d = "failure only at j = " +
          std::to_string(static_cast<double>(rep.conclusion.witness.at("failing_j")));
      return false;
    }
    return true;
  });

  // 11: the block construction verifies cleanly at full scale
  run_criterion(11, "blocks at horizon 1e5: zero violations, density floor",
                [&](std::string& d) {
    const long h = 100000;
    const Blocks b = built ? built->blocks : build_blocks(3, h);
    const BlocksVerification rep = verify_blocks(b.cuts(), b.sets(), h, 0.015625, 2);
    d = rep.detail;
    if (rep.property_a_violations != 0 || rep.property_b_violations != 0 ||
        rep.overlap_violations != 0)
      return false;
    for (double dens : rep.lower_density_est)
      if (!(dens >= 0.015625)) return false;
    return true;
  });

  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
