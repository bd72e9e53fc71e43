#include <cmath>

#include "doctest.h"
#include "kshift/config.hpp"
#include "kshift/construct.hpp"

using namespace kshift;

namespace {
SpaceSpec entire(long h = 4096) { return builtin_space("entire").build(h); }
SpaceSpec disk(long h = 4096) { return builtin_space("disk").build(h); }
}  // namespace

TEST_CASE("blocks: construction verifies cleanly") {
  const long h = 20000;
  const Blocks b = build_blocks(3, h);
  const auto& rep = b.verification();
  CHECK(rep.ok);
  CHECK(rep.property_a_violations == 0);
  CHECK(rep.property_b_violations == 0);
  CHECK(rep.overlap_violations == 0);
  for (double d : rep.lower_density_est) CHECK(d >= 0.015625);
  CHECK(b.cuts().front() == 0);
  for (size_t i = 1; i < b.cuts().size(); ++i) CHECK(b.cuts()[i] > b.cuts()[i - 1]);
}

TEST_CASE("blocks: independent verifier agrees and flags tampering") {
  const long h = 20000;
  const Blocks b = build_blocks(3, h);
  auto rep = verify_blocks(b.cuts(), b.sets(), h, 0.015625, 2);
  CHECK(rep.ok);
  CHECK(rep.digest == b.verification().digest);

  // injected fault: push an element right at a cut (violates property (a))
  auto sets = b.sets();
  sets[0].push_back(b.cuts()[4]);
  std::sort(sets[0].begin(), sets[0].end());
  rep = verify_blocks(b.cuts(), sets, h, 0.015625, 1);
  CHECK_FALSE(rep.ok);
  CHECK(rep.property_a_violations > 0);
}

TEST_CASE("blocks: verifier is independent of the worker count") {
  const long h = 20000;
  const Blocks b = build_blocks(3, h);
  const auto r1 = verify_blocks(b.cuts(), b.sets(), h, 0.015625, 1);
  const auto r4 = verify_blocks(b.cuts(), b.sets(), h, 0.015625, 4);
  CHECK(r1.digest == r4.digest);
  CHECK(r1.property_b_violations == r4.property_b_violations);
  CHECK(r1.lower_density_est == r4.lower_density_est);
}

TEST_CASE("blocks: unaligned dense candidates engage the greedy pruner") {
  BlockParams bp;
  bp.align_base = 1;  // disable alignment: differences can hit cut zones
  bp.candidate_modulus = 1;
  bp.candidate_residues = {0};
  const long h = 20000;
  const Blocks b = build_blocks(1, h, bp);
  CHECK(b.verification().ok);           // pruning must restore property (b)
  CHECK(b.verification().pruned > 0);   // and it had work to do
}

TEST_CASE("blocks: four sets need a wider lattice and a lower floor") {
  BlockParams bp;
  bp.density_floor = 0.01;  // candidate density is 1/80 for r_max = 4
  const Blocks b = build_blocks(4, 20000, bp);
  CHECK(b.verification().ok);
  CHECK(b.r_max() == 4);
  CHECK(b.verification().pruned == 0);  // the aligned lattice never conflicts
  for (double d : b.verification().lower_density_est) CHECK(d >= 0.01);
}

TEST_CASE("blocks: residue disjointness") {
  const Blocks b = build_blocks(3, 20000);
  for (size_t r = 0; r < b.sets().size(); ++r)
    for (size_t s = r + 1; s < b.sets().size(); ++s)
      for (long n : b.sets()[r]) CHECK_FALSE(b.member(static_cast<long>(s) + 1, n));
}

TEST_CASE("auxiliary matrix families") {
  const SpaceSpec sp = entire();
  const BMatrix hc = build_B(sp, BFamily::BilinearPowers);
  CHECK(std::fabs(hc.ln_entry(2, 5) - 10.0L * std::log(2.0L)) < 1e-15L);  // 2^10

  const BMatrix ps = build_B(sp, BFamily::AlphaPartialSums);
  CHECK(std::fabs(ps.ln_entry(2, 5) - 9.0L * std::log(2.0L)) < 1e-12L);  // 2^(4+5)
  for (long n : {0L, 3L, 17L}) CHECK(ps.ln_entry(0, n) == 0.0L);         // b_{0,n} = 1

  const BMatrix fin = build_B(disk(), BFamily::AlphaPowerFinite);
  CHECK(std::fabs(fin.ln_entry(2, 5) + 4.0L * std::log(2.0L)) < 1e-15L);  // (1/2)^alpha_3

  CHECK_NOTHROW(validate_B(hc, 256));
  CHECK_NOTHROW(validate_B(ps, 256));
  CHECK_NOTHROW(validate_B(fin, 256));

  const SpaceSpec lp = builtin_space("lp").build(512);
  CHECK_THROWS_AS(build_B(lp, BFamily::Auto), ConfigError);
}

TEST_CASE("condition (B) certificate for the power family on the entire model") {
  const long h = 2000;
  const SpaceSpec sp = entire(h);
  const BMatrix b = build_B(sp, BFamily::BilinearPowers);
  const ConditionBReport rep = check_condition_B(sp, b, h);

  CHECK(rep.alpha.holds());
  for (long m : {1L, 2L, 3L, 4L}) {
    CHECK(rep.alpha.witness.at("mu_for_m_" + std::to_string(m)) ==
          static_cast<real>(4 * m));
    CHECK(rep.alpha.witness.at("C_for_m_" + std::to_string(m)) == 1.0L);
  }
  CHECK(rep.beta.holds());
  CHECK(rep.beta.witness.at("inf_ln") == 0.0L);  // inf = 1 exactly
  CHECK(rep.gamma.holds());
  for (long m : {1L, 2L, 3L, 4L})
    CHECK(rep.gamma.witness.at("j_for_m_" + std::to_string(m)) == static_cast<real>(m));
  CHECK(rep.gamma_tilde.holds());
  CHECK(rep.admissible());
}

TEST_CASE("condition (B) fails on the disk model") {
  const long h = 2000;
  const SpaceSpec sp = disk(h);
  const BMatrix b = build_B(sp, BFamily::AlphaPowerFinite);
  const ConditionBReport rep = check_condition_B(sp, b, h);
  CHECK(rep.alpha.holds());
  CHECK(rep.beta.holds());
  CHECK_FALSE(rep.gamma.holds());
  CHECK_FALSE(rep.gamma_tilde.holds());
  CHECK_FALSE(rep.admissible());
  CHECK(rep.failing_clause().find("gamma") != std::string::npos);
}

TEST_CASE("chaotic weight construction") {
  const long h = 4096;
  Verdict ok = Verdict::make(Outcome::Holds, h, "test prereq");

  const ChaoticWeight cd = build_chaotic_weight(disk(h), h, ok);
  CHECK(cd.op.holds());
  CHECK(cd.chaotic.holds());
  CHECK(std::fabs(cd.w.ln_w(7) - std::log(2.0L)) < 1e-18L);  // constant 2

  const ChaoticWeight ce = build_chaotic_weight(entire(h), h, ok);
  CHECK(ce.op.holds());
  CHECK(ce.chaotic.holds());
  // column increments of the partial-sum family: w_n = 2^alpha_{n-1} = 2^n
  CHECK(std::fabs(ce.w.ln_w(5) - 5.0L * std::log(2.0L)) < 1e-12L);

  const SpaceSpec l1 = builtin_space("lp").build(512);
  const ChaoticWeight cl = build_chaotic_weight(l1, h, ok);
  CHECK(cl.chaotic.holds());

  Verdict no = Verdict::make(Outcome::Fails, h, "test prereq");
  CHECK_THROWS_AS(build_chaotic_weight(entire(h), h, no), PreconditionError);
}

TEST_CASE("block-profile weight on the entire model") {
  const long h = 20000;
  const SpaceSpec sp = entire(h);
  const BMatrix b = build_B(sp, BFamily::BilinearPowers);
  const Blocks blocks = build_blocks(3, h);
  const FhcConstruction fhc = build_fhc_nonchaotic_weight(sp, b, blocks, h);

  // v_{N_k} = 1 at every block start; v_{N_k + j} = 2^(-j(N_k+j))
  for (long k = 0; k + 1 < static_cast<long>(blocks.cuts().size()) &&
                   blocks.cut(k) <= h;
       ++k) {
    CHECK(std::fabs(fhc.w.ln_v(blocks.cut(k))) < 1e-15L);
    if (blocks.cut(k) + 2 < blocks.cut(k + 1)) {
      const long n = blocks.cut(k) + 2;
      CHECK(std::fabs(fhc.w.ln_v(n) + 2.0L * static_cast<real>(n) * std::log(2.0L)) <
            1e-12L);
    }
  }
  CHECK(fhc.op.holds());
  CHECK(fhc.not_chaotic.holds());
  CHECK(fhc.not_chaotic.witness.at("m") == 1.0L);
  // the floor is exactly 1 in both directions
  CHECK(std::fabs(fhc.not_chaotic.witness.at("inf_ln")) < 1e-12L);
  CHECK(std::fabs(fhc.not_chaotic.witness.at("sup_ln")) < 1e-12L);

  // the chaos test itself must fail on this weight
  CHECK(check_chaotic(sp, fhc.w, h).fails());
  // and the partial sums stall below the horizon
  CHECK(check_ufhc_necessary(sp, fhc.w, h).holds());
}

TEST_CASE("construction refuses on the disk model naming the clause") {
  const long h = 6000;
  const SpaceSpec sp = disk(h);
  const BMatrix b = build_B(sp, BFamily::AlphaPowerFinite);
  const Blocks blocks = build_blocks(3, h);
  try {
    build_fhc_nonchaotic_weight(sp, b, blocks, h);
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(e.failing_clause.find("gamma") != std::string::npos);
  }
}

TEST_CASE("verify_not_chaotic rejects genuinely chaotic weights") {
  const long h = 6000;
  const Blocks blocks = build_blocks(3, h);
  const Verdict v = verify_not_chaotic(disk(h), WeightSeq::constant(2.0), blocks, h);
  CHECK(v.fails());
}

TEST_CASE("sup-norm variant: custom auxiliary matrix on the c0 model") {
  // columns constant in n: b_{m,n} = 2^m reproduces the classical profile
  const long h = 20000;
  const SpaceSpec c0 = builtin_space("c0").build(512);
  BMatrix b{[](long m, long n) {
              if (m < 0 || n < m) throw DomainError("upper triangular");
              return static_cast<real>(m) * std::log(2.0L);
            },
            "dyadic-rows"};
  const Blocks blocks = build_blocks(3, h);
  const FhcConstruction fhc = build_fhc_nonchaotic_weight(c0, b, blocks, h);
  CHECK(fhc.op.holds());
  CHECK(fhc.not_chaotic.holds());
  CHECK(check_chaotic(c0, fhc.w, h).fails());
  CHECK(check_ufhc_necessary(c0, fhc.w, h).holds());
}
