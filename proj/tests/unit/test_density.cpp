#include <cmath>
#include <random>

#include "doctest.h"
#include "kshift/config.hpp"
#include "kshift/density.hpp"

using namespace kshift;

TEST_CASE("density at a point is exact") {
  const IndexSet evens = IndexSet::residue(0, 2);
  CHECK(density_at(evens, 99) == doctest::Approx(0.5));
  const IndexSet empty([](long) { return false; }, "empty");
  CHECK(density_at(empty, 1000) == 0.0);
  const IndexSet threes = IndexSet::residue(0, 3);
  CHECK(density_at(threes, 29) == doctest::Approx(10.0 / 30.0));
}

TEST_CASE("density estimates over the schedule") {
  Params p;
  const auto sched = p.schedule(100000);
  const auto est = density_over_schedule(IndexSet::residue(0, 3), sched);
  CHECK(est.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(est.upper == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(est.lower <= est.upper);
}

TEST_CASE("syndetic gaps") {
  const IndexSet threes = IndexSet::residue(0, 3);
  CHECK(syndetic_gap(threes, 300) == 3);

  const IndexSet powers([](long n) {
    if (n < 1) return false;
    return (n & (n - 1)) == 0;
  }, "powers of two");
  Params p;
  const auto sched = p.schedule(1 << 14);
  const GapReport g = syndetic_report(powers, sched);
  CHECK_FALSE(g.stabilized);  // doubling gaps never settle

  std::vector<long> mixed;
  for (long n = 0; n <= 100; n += 2) mixed.push_back(n);
  mixed.push_back(101);
  std::sort(mixed.begin(), mixed.end());
  const IndexSet evens_plus = IndexSet::from_sorted(mixed, "evens plus one odd");
  CHECK(syndetic_gap(evens_plus, 101) == 2);

  const IndexSet empty([](long) { return false; }, "empty");
  CHECK_THROWS_AS(syndetic_gap(empty, 50), DomainError);
}

TEST_CASE("correlation density examples") {
  const IndexSet threes = IndexSet::residue(0, 3);
  CHECK(correlation_density(threes, 3, 29) == doctest::Approx(10.0 / 30.0));
  CHECK(correlation_density(threes, 1, 500) == 0.0);
  for (long N : {29L, 100L, 999L})
    CHECK(correlation_density(threes, 0, N) == doctest::Approx(density_at(threes, N)));
}

TEST_CASE("correlation of periodic sets approaches the residue value") {
  const IndexSet a = IndexSet::residue(2, 5);
  // |R  (R - k) mod 5| / 5 with R = {2}: 1/5 when k = 0 mod 5, else 0
  for (long N : {1000L, 4000L}) {
    CHECK(std::fabs(correlation_density(a, 5, N) - 0.2) <= 2.0 / N);
    CHECK(correlation_density(a, 2, N) == 0.0);
  }
}

TEST_CASE("find_correlation_set on periodic sets") {
  Params p;
  const auto sched = p.schedule(100000);

  const IndexSet threes = IndexSet::residue(0, 3);
  const auto f = find_correlation_set(threes, 0.05, sched, 100);
  std::vector<long> want;
  for (long k = 0; k <= 99; k += 3) want.push_back(k);
  CHECK(f.members == want);
  CHECK(f.gap.gap == 3);
  CHECK(f.gap.stabilized);

  const IndexSet evens = IndexSet::residue(0, 2);
  const auto fe = find_correlation_set(evens, 0.1, sched, 60);
  std::vector<long> want2;
  for (long k = 0; k <= 60; k += 2) want2.push_back(k);
  CHECK(fe.members == want2);
  CHECK(fe.gap.gap == 2);

  const IndexSet all = IndexSet::all();
  const auto fa = find_correlation_set(all, 0.2, sched, 40);
  CHECK(fa.members.size() == 41);
  CHECK(fa.gap.gap == 1);

  CHECK_THROWS_AS(find_correlation_set(threes, 0.5, sched, 10), ConfigError);

  // worker count never changes the result
  const auto f1 = find_correlation_set(threes, 0.05, sched, 100, 1);
  const auto f4 = find_correlation_set(threes, 0.05, sched, 100, 4);
  CHECK(f1.members == f4.members);
  CHECK(f1.delta_est == f4.delta_est);
}

TEST_CASE("find_correlation_set equals the residue oracle on random periodic sets") {
  std::mt19937_64 rng(31);
  Params p;
  const auto sched = p.schedule(1 << 15);
  for (int trial = 0; trial < 8; ++trial) {
    const long q = 3 + static_cast<long>(rng() % 8);
    std::vector<char> res(static_cast<size_t>(q), 0);
    long cnt = 0;
    for (long i = 0; i < q; ++i) cnt += (res[static_cast<size_t>(i)] = rng() % 2);
    if (cnt == 0) {
      res[0] = 1;
      cnt = 1;
    }
    IndexSet a([res, q](long n) { return n >= 0 && res[static_cast<size_t>(n % q)]; },
               "periodic");
    const double delta = static_cast<double>(cnt) / static_cast<double>(q);
    const double eps = delta * delta / 2;
    const long k_max = 4 * q;
    const auto f = find_correlation_set(a, eps, sched, k_max);
    // oracle: exact residue correlation
    std::vector<long> want;
    for (long k = 0; k <= k_max; ++k) {
      long c = 0;
      for (long i = 0; i < q; ++i)
        c += (res[static_cast<size_t>(i)] && res[static_cast<size_t>((i + k) % q)]);
      const double corr = static_cast<double>(c) / static_cast<double>(q);
      if (corr > delta * delta - eps + 1.0 / (1 << 14)) want.push_back(k);
    }
    CAPTURE(trial);
    CHECK(f.members == want);
  }
}

TEST_CASE("boundedness-transfer harness") {
  Params p;
  const long h = 8192;
  const auto sched = p.schedule(h);

  // full set, geometric profile, summable model: both families bounded
  const SpaceSpec l1 = builtin_space("lp").build(512);
  const auto r1 = boundedness_transfer_harness(l1, IndexSet::all(), WeightSeq::constant(2.0), sched, h, p);
  CHECK(r1.y_bounded);
  CHECK(r1.f_bounded);
  CHECK(r1.consistent);

  // sparse periodic set, flat profile, sup-norm model: bounded by 1
  const SpaceSpec c0 = builtin_space("c0").build(512);
  const auto r2 = boundedness_transfer_harness(c0, IndexSet::residue(0, 3), WeightSeq::constant(1.0),
                                 sched, h, p);
  CHECK(r2.y_bounded);
  CHECK(r2.f_bounded);
  CHECK(r2.consistent);

  // same set and profile on the summable model: both families grow together
  const auto r3 = boundedness_transfer_harness(l1, IndexSet::residue(0, 3), WeightSeq::constant(1.0),
                                 sched, h, p);
  CHECK_FALSE(r3.f_bounded);
  CHECK_FALSE(r3.y_bounded);
  CHECK(r3.consistent);
}
