#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "kshift/shifts.hpp"
#include "kshift/spaces.hpp"

namespace kshift {

// Subset of the nonnegative integers: a pure membership predicate plus a
// cached materialized prefix.
class IndexSet {
 public:
  IndexSet(std::function<bool(long)> member, std::string description);
  static IndexSet residue(long r, long q);  // { n : n = r (mod q) }
  static IndexSet from_sorted(std::vector<long> elems, std::string description = {});
  static IndexSet all();

  bool contains(long n) const { return state_->member(n); }
  // Sorted elements <= horizon (cached; extends monotonically).
  std::vector<long> prefix(long horizon) const;
  const std::string& description() const { return state_->description; }

 private:
  struct State {
    std::function<bool(long)> member;
    std::string description;
    std::mutex mu;
    std::vector<long> prefix;
    long covered = -1;
  };
  std::shared_ptr<State> state_;
};

// card{ n <= N : n in A } / (N+1), exact.
double density_at(const IndexSet& a, long N);

struct DensityEstimate {
  double lower = 0;  // min over the schedule tail
  double upper = 0;  // max over the schedule tail
};

// liminf/limsup estimates realized as min/max of the exact counting density
// over the tail of the sampling schedule.
DensityEstimate density_over_schedule(const IndexSet& a, std::span<const long> schedule);

// Maximal gap between consecutive elements of the prefix (including the gap
// from 0 to the first element); error on an empty prefix.
long syndetic_gap(const IndexSet& a, long N);

struct GapReport {
  long gap = 0;          // gap at the last schedule point
  bool stabilized = false;  // identical across the schedule tail
};
GapReport syndetic_report(const IndexSet& a, std::span<const long> schedule);

// card{ n <= N : n in A and n+k in A } / (N+1), exact.
double correlation_density(const IndexSet& a, long k, long N);

struct CorrelationSetResult {
  std::vector<long> members;  // F = { k <= k_max : min over schedule tail > threshold }
  double delta_est = 0;       // upper-density estimate over the schedule tail
  double threshold = 0;       // delta_est^2 - epsilon
  GapReport gap;
};

// Correlation-rich shift set with its syndeticity report. epsilon must lie in
// (0, delta_est^2).
CorrelationSetResult find_correlation_set(const IndexSet& a, double epsilon,
                                          std::span<const long> schedule, long k_max,
                                          int threads = 1);

struct TransferRow {
  long N = 0, M = 0;
  double y_seminorm = 0;  // averaged double-sum vector, via its reordered form
  double f_seminorm = 0;  // partial sums over the correlation set F
};

struct TransferReport {
  std::vector<TransferRow> rows;  // seminorm index fixed to the first probe
  bool y_bounded = false;
  bool f_bounded = false;
  bool consistent = false;  // no (y bounded, F-sums unbounded) counterexample
  double delta_est = 0, threshold = 0;
  std::string note;
};

// Desk-scale check of the boundedness transfer: seminorms of
// y_{N,M} = sum_k corr_k(N) v_k e_k against partial sums over F.
TransferReport boundedness_transfer_harness(const SpaceSpec& space, const IndexSet& a,
                            const WeightSeq& v, std::span<const long> schedule,
                            long horizon, const Params& p = {});

}  // namespace kshift
