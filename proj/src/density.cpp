#include "kshift/density.hpp"

#include <algorithm>
#include <cmath>

#include "kshift/parallel.hpp"

namespace kshift {

IndexSet::IndexSet(std::function<bool(long)> member, std::string description) {
  auto st = std::make_shared<State>();
  st->member = std::move(member);
  st->description = std::move(description);
  state_ = std::move(st);
}

IndexSet IndexSet::residue(long r, long q) {
  if (q <= 0) throw DomainError("residue modulus must be positive");
  const long rr = ((r % q) + q) % q;
  return IndexSet([rr, q](long n) { return n >= 0 && n % q == rr; },
                  std::to_string(rr) + " mod " + std::to_string(q));
}

IndexSet IndexSet::from_sorted(std::vector<long> elems, std::string description) {
  for (size_t i = 1; i < elems.size(); ++i)
    if (elems[i] <= elems[i - 1])
      throw ValidationError("index set elements must be strictly increasing");
  auto shared = std::make_shared<std::vector<long>>(std::move(elems));
  return IndexSet(
      [shared](long n) {
        return std::binary_search(shared->begin(), shared->end(), n);
      },
      description.empty() ? "list[" + std::to_string(shared->size()) + "]"
                          : std::move(description));
}

IndexSet IndexSet::all() {
  return IndexSet([](long n) { return n >= 0; }, "all nonnegative integers");
}

std::vector<long> IndexSet::prefix(long horizon) const {
  std::lock_guard<std::mutex> lock(state_->mu);
  if (state_->covered < horizon) {
    for (long n = state_->covered + 1; n <= horizon; ++n)
      if (state_->member(n)) state_->prefix.push_back(n);
    state_->covered = horizon;
  }
  auto end = std::upper_bound(state_->prefix.begin(), state_->prefix.end(), horizon);
  return {state_->prefix.begin(), end};
}

double density_at(const IndexSet& a, long N) {
  if (N < 0) throw DomainError("density_at: N must be nonnegative");
  long count = 0;
  for (long n = 0; n <= N; ++n) count += a.contains(n);
  return static_cast<double>(count) / static_cast<double>(N + 1);
}

DensityEstimate density_over_schedule(const IndexSet& a,
                                      std::span<const long> schedule) {
  if (schedule.empty()) throw ConfigError("density_over_schedule: empty schedule");
  DensityEstimate est{1.0, 0.0};
  for (long N : Params::schedule_tail(schedule)) {
    const double d = density_at(a, N);
    est.lower = std::min(est.lower, d);
    est.upper = std::max(est.upper, d);
  }
  return est;
}

long syndetic_gap(const IndexSet& a, long N) {
  const auto pre = a.prefix(N);
  if (pre.empty()) throw DomainError("syndetic_gap: empty prefix");
  long gap = pre.front();  // gap from 0
  for (size_t i = 1; i < pre.size(); ++i) gap = std::max(gap, pre[i] - pre[i - 1]);
  return std::max(gap, 1L);
}

GapReport syndetic_report(const IndexSet& a, std::span<const long> schedule) {
  GapReport rep;
  const auto tail = Params::schedule_tail(schedule);
  bool first = true;
  bool stable = true;
  for (long N : tail) {
    const long g = syndetic_gap(a, N);
    if (!first && g != rep.gap) stable = false;
    rep.gap = g;
    first = false;
  }
  rep.stabilized = stable && tail.size() > 1;
  return rep;
}

double correlation_density(const IndexSet& a, long k, long N) {
  if (k < 0) throw DomainError("correlation_density: k must be nonnegative");
  if (N < 0) throw DomainError("correlation_density: N must be nonnegative");
  long count = 0;
  for (long n = 0; n <= N; ++n) count += (a.contains(n) && a.contains(n + k));
  return static_cast<double>(count) / static_cast<double>(N + 1);
}

CorrelationSetResult find_correlation_set(const IndexSet& a, double epsilon,
                                          std::span<const long> schedule, long k_max,
                                          int threads) {
  if (schedule.empty()) throw ConfigError("find_correlation_set: empty schedule");
  const long n_max = *std::max_element(schedule.begin(), schedule.end());
  const auto tail = Params::schedule_tail(schedule);

  // membership bitmap to n_max + k_max
  std::vector<char> in(static_cast<size_t>(n_max + k_max + 1));
  for (long n = 0; n <= n_max + k_max; ++n) in[static_cast<size_t>(n)] = a.contains(n);

  CorrelationSetResult out;
  for (long N : tail) {
    long count = 0;
    for (long n = 0; n <= N; ++n) count += in[static_cast<size_t>(n)];
    out.delta_est = std::max(out.delta_est,
                             static_cast<double>(count) / static_cast<double>(N + 1));
  }
  if (!(epsilon > 0) || epsilon >= out.delta_est * out.delta_est)
    throw ConfigError("epsilon must lie in (0, delta_est^2); delta_est = " +
                      std::to_string(out.delta_est));
  out.threshold = out.delta_est * out.delta_est - epsilon;

  std::vector<char> member(static_cast<size_t>(k_max + 1), 0);
  parallel_for(0, k_max + 1, threads, [&](long k) {
    double min_corr = 1.0;
    for (long N : tail) {
      long count = 0;
      for (long n = 0; n <= N; ++n)
        count += (in[static_cast<size_t>(n)] && in[static_cast<size_t>(n + k)]);
      min_corr = std::min(min_corr,
                          static_cast<double>(count) / static_cast<double>(N + 1));
    }
    member[static_cast<size_t>(k)] = min_corr > out.threshold;
  });
  for (long k = 0; k <= k_max; ++k)
    if (member[static_cast<size_t>(k)]) out.members.push_back(k);

  if (!out.members.empty()) {
    IndexSet f = IndexSet::from_sorted(out.members, "correlation set");
    std::vector<long> gap_sched;
    for (long N : schedule)
      if (N <= k_max) gap_sched.push_back(N);
    gap_sched.push_back(k_max);
    out.gap = syndetic_report(f, gap_sched);
  }
  return out;
}

TransferReport boundedness_transfer_harness(const SpaceSpec& space, const IndexSet& a,
                            const WeightSeq& v, std::span<const long> schedule,
                            long horizon, const Params& p) {
  TransferReport rep;
  const long m_grid_cap = std::min<long>(1024, std::max<long>(64, horizon / 4));
  std::vector<long> m_grid;
  for (long m = 16; m < m_grid_cap; m *= 4) m_grid.push_back(m);
  m_grid.push_back(m_grid_cap);

  // membership bitmap to horizon + widest window
  std::vector<char> in(static_cast<size_t>(horizon + m_grid_cap + 1));
  for (long n = 0; n < static_cast<long>(in.size()); ++n)
    in[static_cast<size_t>(n)] = a.contains(n);

  double dens = 0;
  for (long N : Params::schedule_tail(schedule)) {
    long count = 0;
    for (long n = 0; n <= std::min(N, horizon); ++n) count += in[static_cast<size_t>(n)];
    dens = std::max(dens, static_cast<double>(count) /
                              static_cast<double>(std::min(N, horizon) + 1));
  }
  if (!(dens > 0)) throw PreconditionError("positive density", a.description());
  rep.delta_est = dens;
  const double epsilon = dens * dens / 2;
  rep.threshold = dens * dens - epsilon;
  auto f = find_correlation_set(a, epsilon, schedule, m_grid_cap, p.threads);

  const long m_probe = p.probe_m.front();
  std::vector<long> n_points(schedule.begin(), schedule.end());
  for (long& n : n_points) n = std::min(n, horizon);
  n_points.erase(std::unique(n_points.begin(), n_points.end()), n_points.end());

  // corr_count[k][si] = card{ n <= n_points[si] : n in A, n+k in A }
  std::vector<std::vector<long>> corr_count(
      static_cast<size_t>(m_grid_cap + 1),
      std::vector<long>(n_points.size(), 0));
  parallel_for(0, m_grid_cap + 1, p.threads, [&](long k) {
    auto& row = corr_count[static_cast<size_t>(k)];
    long count = 0;
    size_t si = 0;
    for (long n = 0; n <= horizon && si < n_points.size(); ++n) {
      count += (in[static_cast<size_t>(n)] && in[static_cast<size_t>(n + k)]);
      while (si < n_points.size() && n_points[si] == n) row[si++] = count;
    }
  });

  real y_all = kNegInf, y_restricted = kNegInf;
  real f_all = kNegInf, f_restricted = kNegInf;
  const long n_mid = n_points[n_points.size() / 2];
  const long m_mid = m_grid[m_grid.size() / 2];
  for (size_t si = 0; si < n_points.size(); ++si) {
    const long N = n_points[si];
    for (long M : m_grid) {
      // y_{N,M} = sum_k corr_k(N) v_k e_k over k <= M, by the reordered form
      std::vector<std::pair<long, real>> coords;
      coords.reserve(static_cast<size_t>(M + 1));
      for (long k = 0; k <= M; ++k) {
        const long count = corr_count[static_cast<size_t>(k)][si];
        if (count == 0) continue;
        const real corr_ln =
            std::log(static_cast<real>(count) / static_cast<real>(N + 1));
        coords.emplace_back(k, corr_ln + v.ln_v(k));
      }
      const real y_ln = seminorm_ln(space, coords, m_probe);

      std::vector<std::pair<long, real>> fcoords;
      for (long k : f.members) {
        if (k > M) break;
        fcoords.emplace_back(k, v.ln_v(k));
      }
      const real f_ln = seminorm_ln(space, fcoords, m_probe);

      rep.rows.push_back({N, M, static_cast<double>(std::exp(y_ln)),
                          static_cast<double>(std::exp(f_ln))});
      y_all = std::max(y_all, y_ln);
      f_all = std::max(f_all, f_ln);
      if (N <= n_mid && M <= m_mid) {
        y_restricted = std::max(y_restricted, y_ln);
        f_restricted = std::max(f_restricted, f_ln);
      }
    }
  }
  const real tol = std::log(1.1L);
  rep.y_bounded = y_all <= y_restricted + tol;
  rep.f_bounded = f_all <= f_restricted + tol;
  rep.consistent = !(rep.y_bounded && !rep.f_bounded);
  rep.note = "seminorm index " + std::to_string(m_probe) + ", correlation set of " +
             std::to_string(f.members.size()) + " shifts";
  return rep;
}

}  // namespace kshift
