#include "kshift/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "kshift/classify.hpp"
#include "kshift/config.hpp"
#include "kshift/construct.hpp"
#include "kshift/density.hpp"
#include "kshift/seqdsl.hpp"

namespace kshift {

namespace {

using Runner = std::function<bool(std::string&)>;

CheckResult run_check(const std::string& name, const Runner& fn) {
  CheckResult r{name, false, {}};
  try {
    r.pass = fn(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

bool close_rel(real a, real b, real tol) {
  const real scale = std::max({std::fabs(a), std::fabs(b), 1e-30L});
  return std::fabs(a - b) / scale <= tol;
}

}  // namespace

std::vector<CheckResult> run_verification_suite(long horizon, int threads) {
  std::vector<CheckResult> out;
  Params p;
  p.threads = threads;
  std::mt19937_64 rng(20240);

  out.push_back(run_check("lse-agrees-with-direct-summation", [&](std::string& d) {
    std::uniform_real_distribution<double> dist(-6.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<real> lns;
      real direct = 0;
      const int n = 1 + static_cast<int>(rng() % 24);
      for (int i = 0; i < n; ++i) {
        const real v = std::pow(10.0L, static_cast<real>(dist(rng)));
        direct += v;
        lns.push_back(std::log(v));
      }
      const real got = std::exp(log_sum_exp(std::span<const real>(lns)));
      if (!close_rel(got, direct, 1e-12L)) {
        d = "trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  }));

  out.push_back(run_check("matrix-validator-flags-broken-monotonicity", [&](std::string& d) {
    KotheMatrix bad{[](long m, long n) {
                      return (m == 3 && n == 7) ? -1.0L
                                                : static_cast<real>(m) * 0.1L +
                                                      static_cast<real>(n) * 0.0L;
                    },
                    "injected fault"};
    try {
      validate_matrix(bad, 6, 32);
    } catch (const ValidationError& e) {
      d = e.what();
      return true;
    }
    d = "validator accepted a non-monotone column";
    return false;
  }));

  out.push_back(run_check("builtin-matrices-column-monotone", [&](std::string& d) {
    for (const char* name :
         {"entire", "disk", "s", "ces1plus", "lacunary2n", "dyadic-factorial"}) {
      const SpaceSpec sp = builtin_space(name).build(2000);
      validate_matrix(sp.matrix(), 6, name == std::string("lacunary2n") ? 64 : 512);
      d = name;
    }
    return true;
  }));

  out.push_back(run_check("seminorm-monotone-in-m", [&](std::string& d) {
    const SpaceSpec sp = builtin_space("entire").build(2000);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      FiniteVector x;
      long idx = static_cast<long>(rng() % 5);
      for (int i = 0; i < 4; ++i) {
        x.idx.push_back(idx);
        x.val.push_back(dist(rng));
        idx += 1 + static_cast<long>(rng() % 7);
      }
      for (long m = 1; m < 6; ++m) {
        if (seminorm(sp, x, m) > seminorm(sp, x, m + 1)) {
          d = "trial " + std::to_string(trial) + ", m = " + std::to_string(m);
          return false;
        }
      }
    }
    return true;
  }));

  out.push_back(run_check("weight-profile-roundtrip", [&](std::string& d) {
    std::uniform_real_distribution<double> dist(0.2, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<real> w;
      for (int i = 0; i < 40; ++i) w.push_back(static_cast<real>(dist(rng)));
      const auto v = v_from_w(w);
      const auto w2 = w_from_v(v);
      for (size_t i = 0; i < w.size(); ++i)
        if (!close_rel(std::log(w[i]), std::log(w2[i]), 1e-12L)) {
          d = "trial " + std::to_string(trial);
          return false;
        }
    }
    return true;
  }));

  out.push_back(run_check("shift-power-semigroup-law", [&](std::string& d) {
    std::uniform_real_distribution<double> dist(0.3, 3.0);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<double> wtab;
      for (int i = 0; i < 64; ++i) wtab.push_back(dist(rng));
      const WeightSeq w = WeightSeq::from_values(wtab);
      FiniteVector x;
      long idx = static_cast<long>(rng() % 4);
      for (int i = 0; i < 5; ++i) {
        x.idx.push_back(idx);
        x.val.push_back(dist(rng));
        idx += 1 + static_cast<long>(rng() % 6);
      }
      const long a = static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 4);
      const FiniteVector lhs = apply_power(w, x, a + b);
      const FiniteVector rhs = apply_power(w, apply_power(w, x, b), a);
      if (lhs.idx != rhs.idx) {
        d = "support mismatch, trial " + std::to_string(trial);
        return false;
      }
      for (size_t i = 0; i < lhs.val.size(); ++i)
        if (!close_rel(static_cast<real>(lhs.val[i]), static_cast<real>(rhs.val[i]),
                       1e-12L)) {
          d = "value mismatch, trial " + std::to_string(trial);
          return false;
        }
    }
    return true;
  }));

  out.push_back(run_check("chaos-implies-bounded-partial-sums", [&](std::string& d) {
    const long h = std::max<long>(2048, horizon / 4);
    const std::vector<SpaceSpec> spaces = {builtin_space("lp").build(512),
                                           builtin_space("disk").build(h)};
    const std::vector<WeightSeq> weights = {
        WeightSeq::constant(2.0), WeightSeq::constant(3.0), WeightSeq::geometric(2.0)};
    for (const auto& sp : spaces) {
      for (const auto& w : weights) {
        const Verdict chaos = check_chaotic(sp, w, h, p);
        if (!chaos.holds()) continue;
        const Verdict b = check_ufhc_necessary(sp, w, h, p);
        if (!b.holds()) {
          d = sp.describe() + " / " + w.description();
          return false;
        }
      }
    }
    return true;
  }));

  out.push_back(run_check("lp-chaos-agrees-with-bounded-partials", [&](std::string& d) {
    const long h = std::max<long>(2048, horizon / 4);
    std::uniform_real_distribution<double> dist(0.3, 3.0);
    const SpaceSpec lp = builtin_space("lp").build(512);
    for (int trial = 0; trial < 12; ++trial) {
      const double c = trial % 2 ? 0.4 + 0.2 * (trial % 3) : 1.4 + 0.4 * (trial % 4);
      const WeightSeq w = WeightSeq::constant(c);
      const Verdict chaos = check_chaotic(lp, w, h, p);
      const Verdict bdd = check_ufhc_necessary(lp, w, h, p);
      if (chaos.holds() != bdd.holds()) {
        d = "constant " + std::to_string(c);
        return false;
      }
    }
    return true;
  }));

  out.push_back(run_check("correlation-at-zero-equals-density", [&](std::string& d) {
    const IndexSet a = IndexSet::residue(2, 7);
    for (long N : {13L, 99L, 512L}) {
      if (std::fabs(correlation_density(a, 0, N) - density_at(a, N)) > 1e-15) {
        d = "N = " + std::to_string(N);
        return false;
      }
    }
    return true;
  }));

  out.push_back(run_check("correlation-matches-residue-arithmetic", [&](std::string& d) {
    for (int trial = 0; trial < 20; ++trial) {
      const long q = 2 + static_cast<long>(rng() % 11);
      std::vector<char> res(static_cast<size_t>(q));
      long cnt = 0;
      for (long i = 0; i < q; ++i) cnt += (res[static_cast<size_t>(i)] = rng() % 2);
      if (cnt == 0) res[0] = 1;
      IndexSet a([res, q](long n) { return n >= 0 && res[static_cast<size_t>(n % q)]; },
                 "random residues");
      const long k = static_cast<long>(rng() % (2 * q));
      const long N = q * (40 + static_cast<long>(rng() % 40)) - 1;  // full periods
      long expect = 0;
      for (long i = 0; i < q; ++i)
        expect += (res[static_cast<size_t>(i)] && res[static_cast<size_t>((i + k) % q)]);
      const double want = static_cast<double>(expect) / static_cast<double>(q);
      if (std::fabs(correlation_density(a, k, N) - want) > 1e-12) {
        d = "trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  }));

  out.push_back(run_check("blocks-verifier-zero-violations", [&](std::string& d) {
    const Blocks b = build_blocks(3, horizon);
    const auto rep = verify_blocks(b.cuts(), b.sets(), horizon, 0.015625, threads);
    std::ostringstream os;
    os << rep.detail << " pruned=" << b.verification().pruned;
    d = os.str();
    return rep.ok;
  }));

  out.push_back(run_check("limit-ratio-scale-invariance", [&](std::string& d) {
    auto base = [](long n) { return std::log(static_cast<real>(n + 1)); };
    auto scaled = [](long n) {
      return std::log(7.5L) + std::log(static_cast<real>(n + 1));
    };
    const auto e1 = limit_ratio_estimate(base, 2, 4096);
    const auto e2 = limit_ratio_estimate(scaled, 2, 4096);
    d = "lag 2";
    return close_rel(e1.ln_lo, e2.ln_lo, 1e-12L) && close_rel(e1.ln_hi, e2.ln_hi, 1e-12L);
  }));

  out.push_back(run_check("dsl-roundtrip-and-plain-agreement", [&](std::string& d) {
    const std::vector<std::string> corpus = {
        "n + 1", "log(n + 2)", "2 ^ n", "m ^ (2 ^ n)", "factorial(block(max(n, 1), 2))",
        "(n + 1) * (n + 2) / 2", "n ^ 2 - 3 * n + 1", "-n + 5", "2 ^ -n",
        "min(n, 10) + max(n, 3)", "floor(n / 3)", "exp(log(n + 1))"};
    for (const auto& text : corpus) {
      const auto e = dsl::parse(text);
      const auto e2 = dsl::parse(dsl::print(e));
      if (!dsl::equal(e, e2)) {
        d = "round trip: " + text;
        return false;
      }
      for (long n = 0; n <= 12; ++n) {
        dsl::Bindings b{{"n", static_cast<real>(n)}, {"m", 3.0L}};
        const dsl::SignedLog s = dsl::eval(e, b);
        const double plain = dsl::eval_plain(e, b);
        if (s.sign != 0 && std::isfinite(plain) && std::fabs(plain) > 1e-300 &&
            std::fabs(plain) < 1e300) {
          const real want = std::log(std::fabs(static_cast<real>(plain)));
          if (std::fabs(s.ln - want) > 1e-10L * std::max(1.0L, std::fabs(want))) {
            d = text + " at n = " + std::to_string(n);
            return false;
          }
        }
      }
    }
    return true;
  }));

  out.push_back(run_check("classification-route-consistency", [&](std::string& d) {
    const long h = std::max<long>(4096, horizon / 2);
    for (const char* name : {"entire", "disk", "s", "ces1plus", "dyadic-factorial"}) {
      const SpaceSpec sp = builtin_space(name).build(h);
      const Classification c = classify_power_series(sp, h, p);
      d = std::string(name) + ": " + c.pattern;
      if (c.pattern == "x" && c.exists_hc.holds()) return false;
      if ((c.pattern == "=" || c.pattern == "!=") && c.exists_hc.fails()) return false;
      if (c.exists_chaotic.holds() && c.exists_hc.fails()) return false;
      if (c.fhc_implies_chaos.holds() && c.exists_fhc_not_chaotic.holds()) return false;
    }
    return true;
  }));

  out.push_back(run_check("finite-type-reduction-invariance", [&](std::string& d) {
    const long h = std::max<long>(4096, horizon / 2);
    AlphaSeq a1 = AlphaSeq::from_values(
        [](long n) { return static_cast<real>(n + 1); }, "n+1");
    AlphaSeq a2 = AlphaSeq::from_values(
        [](long n) { return static_cast<real>(n + 1); }, "n+1");
    const SpaceSpec s0 = make_power_series(1, false, 0.0L, a1, h);
    const SpaceSpec slog2 = make_power_series(1, false, std::log(2.0L), a2, h);
    const Classification c0 = classify_power_series(s0, h, p);
    const Classification c1 = classify_power_series(slog2, h, p);
    d = c0.pattern + " vs " + c1.pattern;
    return c0.pattern == c1.pattern &&
           c0.exists_hc.outcome == c1.exists_hc.outcome &&
           c0.exists_chaotic.outcome == c1.exists_chaotic.outcome;
  }));

  return out;
}

}  // namespace kshift
