#include <cmath>
#include <random>

#include "doctest.h"
#include "kshift/logreal.hpp"
#include "kshift/series.hpp"
#include "kshift/verdict.hpp"

using namespace kshift;

TEST_CASE("log_sum_exp basics") {
  const real ln1 = 0.0L;
  std::vector<real> two = {ln1, ln1};
  CHECK(std::fabs(log_sum_exp(std::span<const real>(two)) - std::log(2.0L)) < 1e-15L);

  std::vector<real> empty;
  CHECK(log_sum_exp(std::span<const real>(empty)) == kNegInf);

  std::vector<real> pair = {std::log(3.0L), std::log(4.0L)};
  // plain-float oracle: 3 + 4
  CHECK(std::fabs(log_sum_exp(std::span<const real>(pair)) - std::log(7.0L)) < 1e-15L);
}

TEST_CASE("log_sum_exp agrees with direct summation on random input") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-6.0, 6.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<real> lns;
    real direct = 0;
    const int n = 1 + static_cast<int>(rng() % 32);
    for (int i = 0; i < n; ++i) {
      const real v = std::pow(10.0L, static_cast<real>(dist(rng)));
      direct += v;
      lns.push_back(std::log(v));
    }
    const real got = std::exp(log_sum_exp(std::span<const real>(lns)));
    CHECK(std::fabs(got - direct) / direct < 1e-12L);
  }
}

TEST_CASE("LogReal arithmetic and guards") {
  const LogReal a = LogReal::from_value(6.0L);
  const LogReal b = LogReal::from_value(2.0L);
  CHECK(std::fabs((a / b).ln() - std::log(3.0L)) < 1e-18L);
  CHECK(std::fabs((a * b).ln() - std::log(12.0L)) < 1e-17L);
  CHECK(LogReal::zero().is_zero());
  CHECK((LogReal::zero() * a).is_zero());
  CHECK_THROWS_AS(a / LogReal::zero(), DomainError);
  CHECK_THROWS_AS(LogReal::from_value(-1.0L), DomainError);
  CHECK_THROWS_AS(LogReal::from_ln(kPosInf), DomainError);
  CHECK(std::fabs(a.pow(3).ln() - 3 * std::log(6.0L)) < 1e-17L);
  CHECK(LogReal::zero().pow(2).is_zero());
  CHECK(LogReal::zero().pow(0) == LogReal::one());
}

TEST_CASE("LogSumAcc streaming matches batch") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  std::vector<real> lns;
  LogSumAcc acc;
  for (int i = 0; i < 200; ++i) {
    const real ln = static_cast<real>(dist(rng));
    lns.push_back(ln);
    acc.add_ln(ln);
  }
  CHECK(std::fabs(acc.sum_ln() - log_sum_exp(std::span<const real>(lns))) < 1e-15L);
}

TEST_CASE("tail_sum_test certificates") {
  auto geometric = [](long n) { return -static_cast<real>(n) * std::log(2.0L); };
  auto constant = [](long) { return 0.0L; };
  auto harmonic = [](long n) { return -std::log(static_cast<real>(n + 1)); };

  TailOptions opt;
  opt.margin = 0.1;
  CHECK(tail_sum_test(geometric, 0, 10000, opt).verdict == Tail::Converges);
  CHECK(tail_sum_test(constant, 0, 10000, opt).verdict == Tail::Diverges);
  CHECK(tail_sum_test(harmonic, 0, 10000, opt).verdict == Tail::Undetermined);

  CHECK_THROWS_AS(tail_sum_test(geometric, 0, 50, opt), ConfigError);
}

TEST_CASE("tail_sum_test never certifies harmonic convergence") {
  auto harmonic = [](long n) { return -std::log(static_cast<real>(n + 1)); };
  for (long horizon : {1000L, 10000L, 100000L}) {
    TailOptions opt;
    opt.margin = 0.01;
    CHECK(tail_sum_test(harmonic, 0, horizon, opt).verdict != Tail::Converges);
  }
}

TEST_CASE("recurrence divergence: spikes with bounded geometric gaps") {
  // terms dip between geometrically spaced spikes of height 1
  auto spiky = [](long n) {
    long p = 1;
    while (p < n) p *= 4;
    return p == n || n == 0 ? 0.0L : -static_cast<real>(n);
  };
  const TailVerdict tv = tail_sum_test(spiky, 0, 100000, {});
  CHECK(tv.verdict == Tail::Diverges);
  CHECK(tv.witnesses.size() >= 5);
}

TEST_CASE("analyze_series decides polynomial rates via partial sums") {
  auto p_half = [](long n) { return -0.5L * std::log(static_cast<real>(n + 1)); };
  auto p_two = [](long n) { return -2.0L * std::log(static_cast<real>(n + 1)); };
  CHECK(analyze_series(p_half, 0, 100000).verdict == Tail::Diverges);
  CHECK(analyze_series(p_two, 0, 100000).verdict == Tail::Converges);
}

TEST_CASE("limit_ratio_estimate") {
  auto linear = [](long n) { return std::log(static_cast<real>(n + 1)); };
  const auto est1 = limit_ratio_estimate(linear, 1, 10000);
  CHECK(std::fabs(std::exp(est1.ln_lo) - 1.0L) < 1e-3L);
  CHECK(std::fabs(std::exp(est1.ln_hi) - 1.0L) < 1e-3L);

  auto dyadic = [](long n) { return static_cast<real>(n) * std::log(2.0L); };
  const auto est2 = limit_ratio_estimate(dyadic, 1, 4096);
  CHECK(std::fabs(std::exp(est2.ln_lo) - 2.0L) < 1e-12L);
  CHECK(std::fabs(std::exp(est2.ln_hi) - 2.0L) < 1e-12L);

  // factorial on dyadic blocks: liminf 1, limsup spikes at a block edge
  auto blocky = [](long n) {
    if (n <= 0) return 0.0L;
    long k = 0, pw = 1;
    while (pw < n) {
      pw *= 2;
      ++k;
    }
    return std::lgamma(static_cast<real>(k) + 1.0L);
  };
  const auto est3 = limit_ratio_estimate(blocky, 1, 10000);
  CHECK(std::exp(est3.ln_lo) == 1.0L);
  CHECK(std::exp(est3.ln_hi) >= 10.0L);  // 14 at the edge inside [5000, 10000]
}

TEST_CASE("limit_ratio_estimate is scale invariant") {
  auto base = [](long n) { return std::log(static_cast<real>(n * n + 3)); };
  auto scaled = [base](long n) { return std::log(123.456L) + base(n); };
  const auto a = limit_ratio_estimate(base, 4, 2048);
  const auto b = limit_ratio_estimate(scaled, 4, 2048);
  CHECK(std::fabs(a.ln_lo - b.ln_lo) < 1e-15L);
  CHECK(std::fabs(a.ln_hi - b.ln_hi) < 1e-15L);
}

TEST_CASE("vanishes_test") {
  auto geometric = [](long n) { return -static_cast<real>(n) * std::log(2.0L); };
  CHECK(vanishes_test(geometric, 0, 5000).verdict == Tail::Converges);
  auto constant = [](long) { return 0.0L; };
  CHECK(vanishes_test(constant, 0, 5000).verdict == Tail::Diverges);
}
