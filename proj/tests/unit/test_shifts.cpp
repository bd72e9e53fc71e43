#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "kshift/config.hpp"
#include "kshift/shifts.hpp"

using namespace kshift;

namespace {
SpaceSpec entire(long h = 4096) { return builtin_space("entire").build(h); }
SpaceSpec disk(long h = 4096) { return builtin_space("disk").build(h); }
}  // namespace

TEST_CASE("v/w correspondence") {
  // constant weight 2: v_n = 2^-n
  std::vector<real> w2(10, 2.0L);
  const auto v = v_from_w(w2);
  for (size_t n = 0; n < v.size(); ++n)
    CHECK(std::fabs(v[n] - std::pow(2.0L, -static_cast<real>(n))) < 1e-18L);

  // v_n = 2^(-n(n+1)/2) recovers w_n = 2^n
  std::vector<real> vq;
  for (long n = 0; n <= 12; ++n)
    vq.push_back(std::pow(2.0L, -static_cast<real>(n * (n + 1) / 2)));
  const auto wq = w_from_v(vq);
  for (size_t n = 0; n < wq.size(); ++n)
    CHECK(std::fabs(std::log2(wq[n]) - static_cast<real>(n + 1)) < 1e-12L);

  CHECK_THROWS_AS(v_from_w(std::vector<real>{1.0L, -2.0L}), ValidationError);
  CHECK_THROWS_AS(w_from_v(std::vector<real>{2.0L, 1.0L}), ValidationError);
}

TEST_CASE("round trip w -> v -> w in log domain") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.25, 4.0);
  std::vector<real> w;
  for (int i = 0; i < 200; ++i) w.push_back(static_cast<real>(dist(rng)));
  const auto v = v_from_w(w);
  const auto w2 = w_from_v(v);
  for (size_t i = 0; i < w.size(); ++i)
    CHECK(std::fabs(std::log(w[i]) - std::log(w2[i])) < 1e-12L);
}

TEST_CASE("WeightSeq caches and validates") {
  const WeightSeq w = WeightSeq::geometric(2.0);
  CHECK(std::fabs(w.ln_v(5) + 15.0L * std::log(2.0L)) < 1e-15L);  // v_5 = 2^-15
  CHECK(std::fabs(w.ln_w(3) - 3.0L * std::log(2.0L)) < 1e-18L);
  CHECK_THROWS_AS(WeightSeq::constant(0.0), ValidationError);
  CHECK_THROWS_AS(
      WeightSeq::from_ln_v([](long n) { return static_cast<real>(n + 1); }, "v0 != 1"),
      ValidationError);
}

TEST_CASE("apply_power examples") {
  const WeightSeq w2 = WeightSeq::constant(2.0);
  const FiniteVector e2 = FiniteVector::unit(2);
  const FiniteVector r = apply_power(w2, e2, 2);
  REQUIRE(r.idx.size() == 1);
  CHECK(r.idx[0] == 0);
  CHECK(r.val[0] == doctest::Approx(4.0));  // w_1 w_2 = 4

  FiniteVector x{{1, 4, 9}, {0.5, 2.0, 1.5}};
  const FiniteVector same = apply_power(w2, x, 0);
  CHECK(same.idx == x.idx);
  for (size_t i = 0; i < x.val.size(); ++i)
    CHECK(same.val[i] == doctest::Approx(x.val[i]));

  // coordinates shifted below zero are dropped
  const FiniteVector dropped = apply_power(w2, x, 5);
  REQUIRE(dropped.idx.size() == 1);
  CHECK(dropped.idx[0] == 4);
  CHECK(dropped.val[0] == doctest::Approx(1.5 * 32.0));  // w_5..w_9 = 2^5
}

TEST_CASE("apply_power matches the brute-force product oracle") {
  std::mt19937_64 rng(17);
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
    // oracle: direct product of weights, no associated-sequence cache
    size_t gi = 0;
    for (size_t i = 0; i < x.idx.size(); ++i) {
      if (x.idx[i] < n) continue;
      double prod = 1.0;
      for (long k = x.idx[i] - n + 1; k <= x.idx[i]; ++k)
        prod *= wtab[static_cast<size_t>(k - 1)];
      const double want = prod * x.val[i];
      REQUIRE(gi < got.val.size());
      CHECK(std::fabs(got.val[gi] - want) <= 1e-9 * std::fabs(want));
      CHECK(got.idx[gi] == x.idx[i] - n);
      ++gi;
    }
    CHECK(gi == got.idx.size());
  }
}

TEST_CASE("semigroup law in log domain") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(0.4, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> wtab;
    for (int i = 0; i < 30; ++i) wtab.push_back(dist(rng));
    const WeightSeq w = WeightSeq::from_values(wtab);
    FiniteVector x{{2, 5, 11}, {dist(rng), dist(rng), dist(rng)}};
    const long a = static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 4);
    const FiniteVector lhs = apply_power(w, x, a + b);
    const FiniteVector rhs = apply_power(w, apply_power(w, x, b), a);
    REQUIRE(lhs.idx == rhs.idx);
    for (size_t i = 0; i < lhs.val.size(); ++i)
      CHECK(std::fabs(std::log(lhs.val[i]) - std::log(rhs.val[i])) < 1e-12L);
  }
}

TEST_CASE("operator continuity checks") {
  const long h = 4096;
  // constant weight on the finite-type model
  CHECK(check_operator(disk(h), WeightSeq::constant(2.0), h).holds());
  // growing weight on the infinite-type model: the first ladder step certifies
  const Verdict op = check_operator(entire(h), WeightSeq::geometric(2.0), h);
  CHECK(op.holds());
  for (long m : {1L, 2L, 3L, 4L})
    CHECK(op.witness.at("mu_for_m_" + std::to_string(m)) == static_cast<real>(2 * m));
  // far-too-fast weight on the finite-type model is not an operator
  const Verdict bad = check_operator(disk(h), WeightSeq::geometric(4.0), h);
  CHECK(bad.fails());
}

TEST_CASE("prefix caches are safe under concurrent readers") {
  const WeightSeq w = WeightSeq::geometric(1.5);
  std::vector<real> parallel_vals(4096);
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
      pool.emplace_back([&, t] {
        for (long n = t; n < 4096; n += 4) parallel_vals[static_cast<size_t>(n)] = w.ln_v(n);
      });
    for (auto& th : pool) th.join();
  }
  const WeightSeq w2 = WeightSeq::geometric(1.5);
  for (long n = 0; n < 4096; ++n)
    CHECK(parallel_vals[static_cast<size_t>(n)] == w2.ln_v(n));
}

TEST_CASE("chaos series checks") {
  const long h = 4096;
  // disk, w = 2: terms 2^(-np)(1+1/m)^-(n+1), geometric
  CHECK(check_chaotic(disk(h), WeightSeq::constant(2.0), h).holds());
  // entire, w = 2: terms 2^-n m^(n+1) diverge for m >= 3
  const Verdict f = check_chaotic(entire(h), WeightSeq::constant(2.0), h);
  CHECK(f.fails());
  // entire, w_n = 2^n: super-geometric decay wins
  CHECK(check_chaotic(entire(h), WeightSeq::geometric(2.0), h).holds());
}

TEST_CASE("partial-sum boundedness (upper-density necessary condition)") {
  const long h = 4096;
  const SpaceSpec l1 = builtin_space("lp").build(512);
  CHECK(check_ufhc_necessary(l1, WeightSeq::constant(2.0), h).holds());
  CHECK(check_ufhc_necessary(l1, WeightSeq::constant(1.0), h).fails());

  const SpaceSpec c0 = builtin_space("c0").build(512);
  CHECK(check_ufhc_necessary(c0, WeightSeq::constant(2.0), h).holds());
  CHECK(check_chaotic(c0, WeightSeq::constant(2.0), h).holds());
}

TEST_CASE("chaos implies bounded partial sums at the same horizon") {
  const long h = 4096;
  const std::vector<SpaceSpec> spaces = {builtin_space("lp").build(512), disk(h)};
  const std::vector<WeightSeq> weights = {WeightSeq::constant(1.5),
                                          WeightSeq::constant(2.0),
                                          WeightSeq::geometric(2.0)};
  for (const auto& sp : spaces)
    for (const auto& w : weights) {
      if (check_chaotic(sp, w, h).holds()) CHECK(check_ufhc_necessary(sp, w, h).holds());
    }
}

TEST_CASE("lp-model agreement between chaos and bounded partial sums") {
  const long h = 4096;
  const SpaceSpec l1 = builtin_space("lp").build(512);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = trial % 2 ? 0.4 + 0.1 * trial : 1.3 + 0.2 * trial;
    const WeightSeq w = WeightSeq::constant(c);
    CHECK(check_chaotic(l1, w, h).holds() == check_ufhc_necessary(l1, w, h).holds());
  }
}
