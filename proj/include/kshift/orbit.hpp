#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kshift/construct.hpp"
#include "kshift/shifts.hpp"

namespace kshift {

// Lazily evaluated nonnegative vector: coordinates carried as logarithms,
// reproducible as a pure function of the index.
struct LazyVector {
  std::function<real(long)> ln_coord;
  std::string description;
  FiniteVector section(long lo, long hi) const;
};

struct FhcConditionsReport {
  std::vector<Verdict> cond_i;               // per r = 1..r_max
  std::vector<std::vector<Verdict>> cond_ii; // [r-1][s-1]
  Outcome overall = Outcome::Undetermined;
  double c_const = 1.0;  // epsilon_r = c / 2^r
  long horizon = 0;
};

// Orbit-convergence conditions for the block construction:
//  (i)  sum over n in A_r of v_{n+r}^p a_{m,n+r} converges, per probe m;
//  (ii) for sampled m in A_s and every j <= r the partial p-power sums
//       sum_{n in A_r, n>m} v_{n-m+j}^p a_{s,n-m+j} stay below
//       min(eps_r, eps_s) with eps_r = c/2^r.
FhcConditionsReport check_fhc_conditions(const SpaceSpec& space, const WeightSeq& w,
                                         const Blocks& blocks, long horizon,
                                         const Params& p = {}, double c_const = 1.0);

// Vector whose orbit reproduces the targets along the block sets:
// x_{n+j} = (v_{n+j}/v_j) y^{(r)}_j for n in A_r, j in supp(y^{(r)}).
// targets[r-1] must be supported in [0, r]. Overlapping writes indicate a
// blocks violation and raise ValidationError.
LazyVector build_fhc_vector(const SpaceSpec& space, const WeightSeq& w,
                            const Blocks& blocks,
                            std::span<const FiniteVector> targets);

struct OrbitRow {
  long n = 0;
  bool hit = false;
  double log_seminorm = 0;  // ln of the sectioned distance to the target
  double cum_density = 0;
};

struct HitStats {
  double density = 0;         // hits / (N+1)
  long hits = 0;
  double blocks_density = 0;  // density of the union of block sets at N
  std::vector<OrbitRow> rows;
};

// Exact count of n <= N with ||section(B_w^n x) - target||_m < delta, where
// the section spans the target support plus a guard band (default 4x width).
HitStats hitting_density(const SpaceSpec& space, const WeightSeq& w,
                         const LazyVector& x, const FiniteVector& target, long m,
                         double delta, long N, const Blocks* blocks = nullptr,
                         long guard = -1, int threads = 1);

}  // namespace kshift
