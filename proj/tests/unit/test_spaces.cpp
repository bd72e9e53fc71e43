#include <cmath>

#include "doctest.h"
#include "kshift/config.hpp"
#include "kshift/spaces.hpp"

using namespace kshift;

namespace {
AlphaSeq alpha_linear() {
  return AlphaSeq::from_values([](long n) { return static_cast<real>(n + 1); }, "n+1");
}
}  // namespace

TEST_CASE("make_power_series entries") {
  // infinite type: ln a_{m,n} = alpha_n ln m
  const SpaceSpec entire = make_power_series(1, true, 0, alpha_linear(), 2000);
  CHECK(std::fabs(entire.ln_entry(3, 5) - 6.0L * std::log(3.0L)) < 1e-15L);
  CHECK(std::fabs(entire.ln_entry(1, 7)) < 1e-18L);  // a_{1,n} = 1

  // finite type stores the type-0 reduction regardless of r
  const SpaceSpec disk = make_power_series(2, false, 0, alpha_linear(), 2000);
  CHECK(std::fabs(disk.ln_entry(2, 4) + 5.0L * std::log(1.5L)) < 1e-15L);
  const SpaceSpec disk_r = make_power_series(2, false, std::log(2.0L), alpha_linear(), 2000);
  CHECK(disk.ln_entry(2, 4) == disk_r.ln_entry(2, 4));
  CHECK(disk_r.finite_type() == std::log(2.0L));

  // s model
  AlphaSeq slog = AlphaSeq::from_values(
      [](long n) { return std::log(static_cast<real>(n + 2)); }, "log(n+2)");
  CHECK_NOTHROW(make_power_series(1, true, 0, std::move(slog), 2000));
}

TEST_CASE("alpha validation names the first violating index") {
  AlphaSeq bad = AlphaSeq::from_values(
      [](long n) { return n == 17 ? 1.0L : static_cast<real>(n + 10); }, "dip");
  try {
    make_power_series(1, true, 0, std::move(bad), 100);
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("17") != std::string::npos);
  }
  AlphaSeq flat = AlphaSeq::from_values([](long) { return 3.0L; }, "flat");
  CHECK_THROWS_AS(make_power_series(1, true, 0, std::move(flat), 100), ValidationError);
}

TEST_CASE("matrix validation") {
  KotheMatrix good{[](long m, long n) {
                     return static_cast<real>(n + 1) * std::log(static_cast<real>(m));
                   },
                   "m^(n+1)"};
  CHECK_NOTHROW(validate_matrix(good, 6, 64));
  KotheMatrix bad{[](long m, long n) {
                    return (m == 2 && n == 3) ? -9.0L : static_cast<real>(m);
                  },
                  "broken"};
  CHECK_THROWS_AS(validate_matrix(bad, 4, 8), ValidationError);
}

TEST_CASE("seminorm examples") {
  const SpaceSpec entire = make_power_series(1, true, 0, alpha_linear(), 2000);
  // a_{m,0} = m^{alpha_0} = m, so the unit vector e_0 has seminorm m
  for (long m = 1; m <= 5; ++m)
    CHECK(std::fabs(seminorm(entire, FiniteVector::unit(0), m).ln() -
                    std::log(static_cast<real>(m))) < 1e-15L);

  // a_{m,n} = m^n, x = (1,1), p = 2, m = 2: (1 + 2)^(1/2)
  KotheMatrix mn{[](long m, long n) {
                   return static_cast<real>(n) * std::log(static_cast<real>(m));
                 },
                 "m^n"};
  const SpaceSpec p2 = SpaceSpec::generic(std::move(mn), 2);
  FiniteVector x{{0, 1}, {1.0, 1.0}};
  CHECK(std::fabs(seminorm(p2, x, 2).ln() - 0.5L * std::log(3.0L)) < 1e-15L);

  // order 0, a == 1: sup of coordinates
  const SpaceSpec c0 = builtin_space("c0").build(512);
  FiniteVector y{{0, 1}, {3.0, 7.0}};
  CHECK(std::fabs(seminorm(c0, y, 1).ln() - std::log(7.0L)) < 1e-15L);
}

TEST_CASE("seminorm monotone in m") {
  const SpaceSpec entire = make_power_series(1, true, 0, alpha_linear(), 2000);
  FiniteVector x{{0, 2, 5}, {0.5, 1.25, 2.0}};
  for (long m = 1; m < 8; ++m) CHECK(seminorm(entire, x, m) <= seminorm(entire, x, m + 1));
}

TEST_CASE("condition (N)") {
  const long h = 8192;
  const SpaceSpec entire = make_power_series(1, true, 0, alpha_linear(), h);
  const Verdict n1 = check_condition_N(entire, h);
  CHECK(n1.holds());
  CHECK(n1.witness.at("mu_for_m_1") == 2.0L);  // mu = 2m certifies geometrically

  // a_{m,n} = (n+1)^(-1/m): ratios are powers of n, never summable
  KotheMatrix slow{[](long m, long n) {
                     return -std::log(static_cast<real>(n + 1)) / static_cast<real>(m);
                   },
                   "(n+1)^(-1/m)"};
  const SpaceSpec nonN = SpaceSpec::generic(std::move(slow), 1);
  CHECK(check_condition_N(nonN, h).fails());

  const SpaceSpec lp = builtin_space("lp").build(512);
  CHECK(check_condition_N(lp, h).fails());
}

TEST_CASE("condition (BC)") {
  const long h = 8192;
  const SpaceSpec c0 = builtin_space("c0").build(512);
  CHECK(check_condition_BC(c0, h).fails());

  const SpaceSpec entire0 = make_power_series(0, true, 0, alpha_linear(), h);
  const Verdict bc = check_condition_BC(entire0, h);
  CHECK(bc.holds());  // implied by (N)

  KotheMatrix slow{[](long m, long n) {
                     return -std::log(static_cast<real>(n + 1)) / static_cast<real>(m);
                   },
                   "(n+1)^(-1/m)"};
  const SpaceSpec nonN0 = SpaceSpec::generic(std::move(slow), 0);
  CHECK(check_condition_BC(nonN0, h).holds());

  // orders >= 1 hold automatically
  const SpaceSpec lp = builtin_space("lp").build(512);
  CHECK(check_condition_BC(lp, h).holds());
}

TEST_CASE("column regularity bound") {
  const long h = 4096;
  const SpaceSpec lac = builtin_space("lacunary2n").build(64);
  CHECK(check_regularity_bound(lac, h).holds());

  const SpaceSpec entire = make_power_series(1, true, 0, alpha_linear(), h);
  CHECK(check_regularity_bound(entire, h).holds());

  const SpaceSpec lp = builtin_space("lp").build(512);
  const Verdict v = check_regularity_bound(lp, h);
  CHECK(v.holds());
  CHECK(v.witness.at("J_m1_j1") == 1.0L);
  CHECK(v.witness.at("C_m1_j1") == 1.0L);
}
