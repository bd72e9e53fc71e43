#include "kshift/construct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "kshift/parallel.hpp"

namespace kshift {

namespace {

long next_pow2(long x) {
  long p = 1;
  while (p < x) p *= 2;
  return p;
}

std::uint64_t fnv1a(std::uint64_t h, long v) {
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<std::uint64_t>(v >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

// j values sampled when a supremum ranges over all j <= n: small values,
// powers of two, and the top end.
void for_each_j_sample(long n, const std::function<void(long)>& f) {
  long prev = -1;
  auto visit = [&](long j) {
    if (j >= 0 && j <= n && j != prev) {
      f(j);
      prev = j;
    }
  };
  for (long j = 0; j <= std::min(n, 4L); ++j) visit(j);
  for (long j = 8; j <= n; j *= 2) visit(j);
  visit(n - 1);
  visit(n);
}

struct CutPlan {
  long base = 8;
  long modulus = 32;
  std::vector<long> residues;
};

CutPlan plan_candidates(const BlockParams& prm, long r_max) {
  CutPlan plan;
  plan.base = prm.align_base > 0 ? prm.align_base : next_pow2(2 * (r_max + 1));
  plan.modulus = prm.candidate_modulus > 0 ? prm.candidate_modulus
                                           : plan.base * (r_max + 1);
  if (!prm.candidate_residues.empty()) {
    plan.residues = prm.candidate_residues;
    if (static_cast<long>(plan.residues.size()) != r_max)
      throw ConfigError("candidate_residues must provide one residue per set");
  } else {
    for (long r = 1; r <= r_max; ++r) plan.residues.push_back(plan.base * r);
  }
  for (size_t i = 0; i < plan.residues.size(); ++i)
    for (size_t j = i + 1; j < plan.residues.size(); ++j)
      if ((plan.residues[i] - plan.residues[j]) % plan.modulus == 0)
        throw ConfigError("candidate residues must be distinct modulo " +
                          std::to_string(plan.modulus));
  return plan;
}

std::vector<long> make_cuts(const BlockParams& prm, long base, long cover) {
  std::vector<long> cuts = {0};
  for (long k = 1;; ++k) {
    const long raw = prm.raw_cut(k);
    // align to base/2 (mod base): candidate differences are multiples of the
    // base and can then never land in a zone of width < base/2 around a cut
    long aligned = raw - (((raw - base / 2) % base + base) % base);
    while (aligned <= cuts.back()) aligned += base;  // keep cuts increasing
    cuts.push_back(aligned);
    if (aligned > cover) break;
    if (k > 200) throw ValidationError("cut generator did not reach the horizon");
  }
  return cuts;
}

long block_of(const std::vector<long>& cuts, long n) {
  auto it = std::upper_bound(cuts.begin(), cuts.end(), n);
  if (it == cuts.begin() || it == cuts.end())
    throw DomainError("index outside cut coverage: " + std::to_string(n));
  return static_cast<long>(it - cuts.begin()) - 1;
}

// property (b) zone test: a difference d with N_k <= d < N_{k+1} must satisfy
// N_k + q <= d < N_{k+1} - q
bool difference_ok(const std::vector<long>& cuts, long d, long q) {
  const long k = block_of(cuts, d);
  return d >= cuts[static_cast<size_t>(k)] + q &&
         d < cuts[static_cast<size_t>(k + 1)] - q;
}

}  // namespace

long Blocks::block_index(long n) const { return block_of(cuts_, n); }

bool Blocks::member(long r, long n) const {
  if (r < 1 || r > r_max()) return false;
  return lookup_[static_cast<size_t>(r - 1)].count(n) > 0;
}

IndexSet Blocks::union_set() const {
  std::vector<long> all;
  for (const auto& s : sets_) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  return IndexSet::from_sorted(std::move(all), "union of block sets");
}

BlocksVerification verify_blocks(const std::vector<long>& cuts,
                                 const std::vector<std::vector<long>>& sets,
                                 long horizon, double density_floor, int threads) {
  BlocksVerification rep;

  // disjointness
  std::vector<std::pair<long, long>> elems;  // (n, r)
  for (size_t r = 0; r < sets.size(); ++r)
    for (long n : sets[r]) elems.emplace_back(n, static_cast<long>(r) + 1);
  std::sort(elems.begin(), elems.end());
  for (size_t i = 1; i < elems.size(); ++i)
    if (elems[i].first == elems[i - 1].first) ++rep.overlap_violations;

  // property (a): elements sit k-deep and r-clear inside their block
  for (size_t r0 = 0; r0 < sets.size(); ++r0) {
    const long r = static_cast<long>(r0) + 1;
    for (long n : sets[r0]) {
      const long k = block_of(cuts, n);
      if (!(n >= cuts[static_cast<size_t>(k)] + k &&
            n < cuts[static_cast<size_t>(k + 1)] - r))
        ++rep.property_a_violations;
    }
  }

  // property (b): all ordered pairs across the union
  std::atomic<long> b_viol{0};
  parallel_for(0, static_cast<long>(elems.size()), threads, [&](long j) {
    const auto [n, r] = elems[static_cast<size_t>(j)];
    long local = 0;
    for (long i = 0; i < j; ++i) {
      const auto [m, s] = elems[static_cast<size_t>(i)];
      const long d = n - m;
      if (d == 0) continue;
      if (!difference_ok(cuts, d, std::max(r, s))) ++local;
    }
    if (local) b_viol += local;
  });
  rep.property_b_violations = b_viol.load();

  // empirical lower densities over the schedule tail
  Params p;
  const auto sched = p.schedule(horizon);
  const auto tail = Params::schedule_tail(sched);
  for (const auto& s : sets) {
    double dmin = 1.0;
    for (long N : tail) {
      const auto hi = std::upper_bound(s.begin(), s.end(), N);
      dmin = std::min(dmin, static_cast<double>(hi - s.begin()) /
                                static_cast<double>(N + 1));
    }
    rep.lower_density_est.push_back(dmin);
  }

  std::uint64_t h = 1469598103934665603ull;
  for (long c : cuts) h = fnv1a(h, c);
  for (const auto& s : sets) {
    h = fnv1a(h, static_cast<long>(s.size()));
    for (long n : s) h = fnv1a(h, n);
  }
  rep.digest = h;

  bool dens_ok = true;
  for (double d : rep.lower_density_est) dens_ok = dens_ok && d >= density_floor;
  rep.ok = rep.property_a_violations == 0 && rep.property_b_violations == 0 &&
           rep.overlap_violations == 0 && dens_ok;
  std::ostringstream os;
  os << "a=" << rep.property_a_violations << " b=" << rep.property_b_violations
     << " overlap=" << rep.overlap_violations << " densities=";
  for (double d : rep.lower_density_est) os << d << " ";
  rep.detail = os.str();
  return rep;
}

Blocks build_blocks(long r_max, long horizon, BlockParams params) {
  if (r_max < 1) throw ConfigError("build_blocks: r_max must be >= 1");
  params.r_max = r_max;
  const CutPlan plan = plan_candidates(params, r_max);
  const auto cuts = make_cuts(params, plan.base, 8 * horizon + 64);

  long cuts_below = 0;
  while (cuts_below < static_cast<long>(cuts.size()) &&
         cuts[static_cast<size_t>(cuts_below)] <= horizon)
    ++cuts_below;
  if (cuts_below < params.min_cuts)
    throw ValidationError("horizon covers only " + std::to_string(cuts_below) +
                          " cuts; need " + std::to_string(params.min_cuts));

  // candidate enumeration per block window, greedy pruning against property (b)
  std::vector<std::vector<long>> sets(static_cast<size_t>(r_max));
  std::vector<std::unordered_set<long>> accepted(static_cast<size_t>(r_max));
  long pruned = 0;

  // zone offsets around each cut that a difference may not hit, per q
  auto conflicts = [&](long n, long r) {
    for (long s = 1; s <= r_max; ++s) {
      const long q = std::max(r, s);
      const auto& acc = accepted[static_cast<size_t>(s - 1)];
      if (acc.empty()) continue;
      for (size_t ci = 0; ci + 1 < cuts.size() && cuts[ci] <= n; ++ci) {
        for (long d = std::max(cuts[ci], 1L); d < cuts[ci] + q; ++d)
          if (d <= n && acc.count(n - d)) return true;
        for (long d = std::max(cuts[ci + 1] - q, 1L); d < cuts[ci + 1]; ++d)
          if (d <= n && acc.count(n - d)) return true;
      }
    }
    return false;
  };

  // merged increasing sweep over all candidates
  for (long k = 0; k + 1 < static_cast<long>(cuts.size()); ++k) {
    const long lo = cuts[static_cast<size_t>(k)] + std::max(k, r_max);
    const long hi = std::min(cuts[static_cast<size_t>(k + 1)] - r_max, horizon + 1);
    if (lo >= hi) continue;
    for (long n = lo; n < hi; ++n) {
      const long rem = n % plan.modulus;
      for (long r = 1; r <= r_max; ++r) {
        if (rem != plan.residues[static_cast<size_t>(r - 1)] % plan.modulus) continue;
        if (conflicts(n, r)) {
          ++pruned;
        } else {
          sets[static_cast<size_t>(r - 1)].push_back(n);
          accepted[static_cast<size_t>(r - 1)].insert(n);
        }
        break;  // residues are distinct; one set per n
      }
    }
    if (cuts[static_cast<size_t>(k)] > horizon) break;
  }

  BlocksVerification rep = verify_blocks(cuts, sets, horizon, params.density_floor, 1);
  rep.pruned = pruned;
  if (!rep.ok)
    throw ValidationError("block construction failed verification: " + rep.detail);

  Blocks b;
  b.cuts_ = cuts;
  b.sets_ = std::move(sets);
  b.horizon_ = horizon;
  b.params_ = std::move(params);
  b.verification_ = rep;
  for (const auto& s : b.sets_)
    b.lookup_.emplace_back(s.begin(), s.end());
  return b;
}

Blocks blocks_from_parts(std::vector<long> cuts, std::vector<std::vector<long>> sets,
                         long horizon, BlockParams params) {
  BlocksVerification rep =
      verify_blocks(cuts, sets, horizon, params.density_floor, 1);
  if (!rep.ok)
    throw ValidationError("deserialized blocks failed verification: " + rep.detail);
  Blocks b;
  b.cuts_ = std::move(cuts);
  b.sets_ = std::move(sets);
  b.horizon_ = horizon;
  b.params_ = std::move(params);
  b.verification_ = rep;
  for (const auto& s : b.sets_)
    b.lookup_.emplace_back(s.begin(), s.end());
  return b;
}

BMatrix build_B(const SpaceSpec& space, BFamily family, real eps) {
  if (!(eps > 0 && eps < 1)) throw ConfigError("build_B: eps must lie in (0,1)");
  if (family == BFamily::Auto) {
    switch (space.kind()) {
      case SpaceKind::PowerSeriesInfinite: family = BFamily::AlphaPartialSums; break;
      case SpaceKind::PowerSeriesFinite: family = BFamily::AlphaPowerFinite; break;
      default:
        throw ConfigError(
            "build_B: generic matrices need a user-supplied auxiliary matrix");
    }
  }
  const real ln_inv_eps = -std::log(eps);
  BMatrix b;
  switch (family) {
    case BFamily::BilinearPowers:
      b.ln_entry = [ln_inv_eps](long m, long n) {
        if (m < 0 || n < m) throw DomainError("BMatrix: need 0 <= m <= n");
        return ln_inv_eps * static_cast<real>(m) * static_cast<real>(n);
      };
      b.family = "bilinear-powers";
      break;
    case BFamily::AlphaPartialSums: {
      if (!space.alpha()) throw ConfigError("build_B: space carries no alpha sequence");
      const AlphaSeq alpha = *space.alpha();
      b.ln_entry = [ln_inv_eps, alpha](long m, long n) {
        if (m < 0 || n < m) throw DomainError("BMatrix: need 0 <= m <= n");
        return ln_inv_eps * (alpha.prefix_value_sum(n) - alpha.prefix_value_sum(n - m));
      };
      b.family = "alpha-partial-sums";
      break;
    }
    case BFamily::AlphaPowerFinite: {
      if (!space.alpha()) throw ConfigError("build_B: space carries no alpha sequence");
      const AlphaSeq alpha = *space.alpha();
      b.ln_entry = [ln_inv_eps, alpha](long m, long n) {
        if (m < 0 || n < m) throw DomainError("BMatrix: need 0 <= m <= n");
        return -ln_inv_eps * alpha.value_at(n - m);
      };
      b.family = "alpha-power-finite";
      break;
    }
    default:
      throw ConfigError("build_B: unsupported family");
  }
  return b;
}

void validate_B(const BMatrix& b, long probe) {
  for (long n = 0; n <= probe; n = n < 8 ? n + 1 : n * 2) {
    real prev = kNegInf;
    for (long m = 0; m <= n; ++m) {
      const real cur = b.ln_entry(m, n);
      if (std::isnan(static_cast<double>(cur)) || cur == kPosInf || cur == kNegInf)
        throw ValidationError("auxiliary matrix entry invalid at (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n) + ")");
      if (m > 0 && prev > cur + 1e-10L)
        throw ValidationError("auxiliary matrix columns not increasing at (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n) + ")");
      prev = cur;
    }
  }
}

std::string ConditionBReport::failing_clause() const {
  std::string out;
  if (!alpha.holds()) out += "(alpha) ";
  if (!beta.holds()) out += "(beta) ";
  if (!gamma.holds() && !gamma_tilde.holds()) out += "(gamma)/(gamma~)";
  return out.empty() ? "none" : out;
}

ConditionBReport check_condition_B(const SpaceSpec& space, const BMatrix& b,
                                   long horizon, const Params& p) {
  ConditionBReport rep;
  const real tol_ln = std::log1p(static_cast<real>(p.stab_tol));

  // (alpha): a_{m,n}/a_{mu,n+1} <= C b_{j,n}/b_{j+1,n+1} for all j <= n
  {
    Verdict v;
    v.horizon = horizon;
    v.route = "mu-ladder over stabilized (n, j)-suprema";
    bool all_hold = true;
    for (long m : p.probe_m) {
      bool certified = false;
      for (long mu : p.mu_ladder(m)) {
        auto val = [&](long n) {
          real worst = kNegInf;
          for_each_j_sample(n, [&](long j) {
            worst = std::max(worst, b.ln_entry(j + 1, n + 1) - b.ln_entry(j, n));
          });
          return space.ln_entry(m, n) - space.ln_entry(mu, n + 1) + worst;
        };
        const SupEstimate est = sup_stabilized(val, 0, horizon - 1, tol_ln);
        if (est.stabilized) {
          const std::string key = std::to_string(m);
          v.witness["mu_for_m_" + key] = static_cast<real>(mu);
          v.witness["C_for_m_" + key] = est.sup_ln <= 0 ? 1.0L : std::exp(est.sup_ln);
          certified = true;
          break;
        }
      }
      if (!certified) {
        all_hold = false;
        v.note = "no stabilized mu for m = " + std::to_string(m);
        break;
      }
    }
    v.outcome = all_hold ? Outcome::Holds : Outcome::Undetermined;
    rep.alpha = v;
  }

  // (beta): inf_n a_{m,n}/b_{0,n} > 0 for some m
  {
    Verdict v;
    v.horizon = horizon;
    v.route = "stabilized infimum over the prefix";
    const real floor_ln = std::log(1e-9L);
    bool all_decreasing = true;
    for (long m : p.probe_m) {
      real inf_all = kPosInf, inf_head = kPosInf;
      for (long n = 0; n <= horizon; ++n) {
        const real r = space.ln_entry(m, n) - b.ln_entry(0, n);
        inf_all = std::min(inf_all, r);
        if (n <= horizon / 2) inf_head = std::min(inf_head, r);
      }
      if (inf_all >= floor_ln && inf_all >= inf_head - 1e-9L) {
        v.outcome = Outcome::Holds;
        v.witness["m"] = static_cast<real>(m);
        v.witness["inf"] = std::exp(inf_all);
        v.witness["inf_ln"] = inf_all;
        rep.beta = v;
        break;
      }
      if (inf_all >= inf_head - 0.1L) all_decreasing = false;
    }
    if (!rep.beta.holds()) {
      v.outcome = all_decreasing ? Outcome::Fails : Outcome::Undetermined;
      v.note = "no probe m with a stabilized positive infimum";
      rep.beta = v;
    }
  }

  // (gamma)
  {
    Verdict v;
    v.horizon = horizon;
    bool all_hold = true, any_fail = false;
    long prev_j = 0;
    if (!space.sup_norm()) {
      v.route = "summability of a_{m,n}/b_{j_m,n} along an increasing j-ladder";
      for (long m : p.probe_m) {
        bool certified = false, all_diverge = true;
        for (long j : p.j_ladder_from(std::max(m, prev_j + 1))) {
          auto term = [&](long n) {
            return space.ln_entry(m, n) - b.ln_entry(j, n);
          };
          if (horizon <= j + p.tail.window + 1) break;
          const SeriesVerdict sv = analyze_series(term, j, horizon, p.series);
          if (sv.verdict == Tail::Converges) {
            v.witness["j_for_m_" + std::to_string(m)] = static_cast<real>(j);
            prev_j = j;
            certified = true;
            break;
          }
          if (sv.verdict != Tail::Diverges) all_diverge = false;
        }
        if (!certified) {
          all_hold = false;
          if (all_diverge) {
            any_fail = true;
            v.witness["failing_m"] = static_cast<real>(m);
          }
          break;
        }
      }
    } else {
      v.route = "per-m vanishing suprema of a_{m,n}/b_{j_m,n}, targets 4^-m";
      for (size_t mi = 0; mi < p.probe_m.size(); ++mi) {
        const long m = p.probe_m[mi];
        const real target = -static_cast<real>(mi + 1) * std::log(4.0L);
        bool certified = false, all_grow = true;
        for (long j : p.j_ladder_from(std::max(m, prev_j + 1))) {
          real sup = kNegInf;
          for (long n = std::max(j, horizon / 2); n <= horizon; ++n)
            sup = std::max(sup, space.ln_entry(m, n) - b.ln_entry(j, n));
          if (sup <= target) {
            v.witness["j_for_m_" + std::to_string(m)] = static_cast<real>(j);
            prev_j = j;
            certified = true;
            break;
          }
          if (sup <= 0) all_grow = false;
        }
        if (!certified) {
          all_hold = false;
          if (all_grow) {
            any_fail = true;
            v.witness["failing_m"] = static_cast<real>(m);
          }
          break;
        }
      }
    }
    v.outcome = all_hold ? Outcome::Holds
                         : (any_fail ? Outcome::Fails : Outcome::Undetermined);
    rep.gamma = v;
  }

  // (gamma~): three clauses
  {
    Verdict v;
    v.horizon = horizon;
    v.route = "ratio-contraction + diagonal-suprema + per-m vanishing";
    bool c1 = true, c2 = true, c3 = true;
    real rho_max = kNegInf;
    for (long m : p.probe_m) {
      auto g = [&](long n) {
        real worst = kNegInf;
        for_each_j_sample(n, [&](long j) {
          worst = std::max(worst, b.ln_entry(j, n) - b.ln_entry(j + 1, n + 1));
        });
        return space.ln_entry(m, n + 1) - space.ln_entry(m, n) + worst;
      };
      real tail_sup = kNegInf;
      for (long n = horizon / 2; n < horizon; ++n) tail_sup = std::max(tail_sup, g(n));
      rho_max = std::max(rho_max, tail_sup);
      if (!(tail_sup <= std::log(0.99L))) {
        c1 = false;
        break;
      }
    }
    if (c1 && rho_max > kNegInf) v.witness["rho"] = std::exp(rho_max);

    if (c1) {
      v.witness["d_max"] = static_cast<real>(p.j_ladder.back());
      v.witness["n_k"] = static_cast<real>(horizon / 2);
      for (long m : p.probe_m) {
        real prev_sup = kPosInf;
        bool shrinks = true;
        real last = kPosInf;
        for (long d : p.j_ladder) {
          real sup = kNegInf;
          for (long n = std::max(d, horizon / 2); n <= horizon; ++n)
            sup = std::max(sup, space.ln_entry(m, n) - b.ln_entry(d, n));
          if (sup > prev_sup + 1e-12L) shrinks = false;
          prev_sup = sup;
          last = sup;
        }
        if (!(shrinks && last <= std::log(1e-3L))) {
          c2 = false;
          break;
        }
      }
    } else {
      c2 = false;
    }

    if (c1) {
      long prev_j = 0;
      for (long m : p.probe_m) {
        bool certified = false;
        for (long j : p.j_ladder_from(std::max(m, prev_j + 1))) {
          real sup = kNegInf;
          for (long n = std::max(j, horizon / 2); n <= horizon; ++n)
            sup = std::max(sup, space.ln_entry(m, n) - b.ln_entry(j, n));
          if (sup <= std::log(0.01L)) {
            v.witness["j3_for_m_" + std::to_string(m)] = static_cast<real>(j);
            prev_j = j;
            certified = true;
            break;
          }
        }
        if (!certified) {
          c3 = false;
          break;
        }
      }
    } else {
      c3 = false;
    }

    v.outcome = (c1 && c2 && c3) ? Outcome::Holds
                                 : (c1 ? Outcome::Undetermined : Outcome::Fails);
    v.note = std::string("clauses: contraction=") + (c1 ? "yes" : "no") +
             " diagonal=" + (c2 ? "yes" : "no") + " vanishing=" + (c3 ? "yes" : "no");
    rep.gamma_tilde = v;
  }

  return rep;
}

ChaoticWeight build_chaotic_weight(const SpaceSpec& space, long horizon,
                                   const Verdict& exists_chaotic, const Params& p,
                                   bool force) {
  if (!exists_chaotic.holds() && !force)
    throw PreconditionError("existence of a chaotic shift",
                            "verdict: " + std::string(to_string(exists_chaotic.outcome)) +
                                " via " + exists_chaotic.route);
  ChaoticWeight out{WeightSeq::constant(2.0), {}, {}, {}};
  const real pe = space.p_eff();
  switch (space.kind()) {
    case SpaceKind::PowerSeriesFinite:
      out.w = WeightSeq::constant(2.0);
      out.route = "constant weight 2 on finite type";
      break;
    case SpaceKind::PowerSeriesInfinite: {
      const BMatrix b = build_B(space, BFamily::AlphaPartialSums, 0.5L);
      auto ln_w = [b, pe](long n) {
        real nu = kNegInf;  // max_{j <= n-1} b_{j+1,n}/b_{j,n-1}
        for_each_j_sample(n - 1, [&](long j) {
          nu = std::max(nu, b.ln_entry(j + 1, n) - b.ln_entry(j, n - 1));
        });
        return nu / pe;
      };
      out.w = WeightSeq::from_ln_w(ln_w, "column-increment weight (" + b.family + ")");
      out.route = "nu_n from auxiliary-matrix column increments, w = nu^(1/p)";
      break;
    }
    default: {
      // ladder search: nu_n = min_k C a_{k+1,n}/a_{k,n-1} over k <= K
      const long K = 8;
      bool found = false;
      for (long c : p.c_grid()) {
        const real ln_c = std::log(static_cast<real>(c));
        auto ln_w = [space, ln_c, pe, K](long n) {
          real nu = kPosInf;
          for (long k = 1; k <= K; ++k)
            nu = std::min(nu, ln_c + space.ln_entry(k + 1, n) - space.ln_entry(k, n - 1));
          return nu / pe;
        };
        WeightSeq cand =
            WeightSeq::from_ln_w(ln_w, "ladder weight C=" + std::to_string(c));
        const Verdict ch = check_chaotic(space, cand, horizon, p);
        if (ch.holds()) {
          out.w = cand;
          out.route = "ladder search, C = " + std::to_string(c);
          found = true;
          break;
        }
      }
      if (!found) out.route = "ladder search exhausted; returning last candidate";
    }
  }
  out.op = check_operator(space, out.w, horizon, p);
  out.chaotic = check_chaotic(space, out.w, horizon, p, &out.op);
  return out;
}

FhcConstruction build_fhc_nonchaotic_weight(const SpaceSpec& space, const BMatrix& b,
                                            const Blocks& blocks, long horizon,
                                            const Params& p) {
  validate_B(b, std::min(horizon, 512L));
  if (!blocks.verification().ok)
    throw PreconditionError("verified blocks", blocks.verification().detail);
  FhcConstruction out{WeightSeq::constant(1.0), {}, {}, check_condition_B(space, b, horizon, p)};
  if (!out.b_report.admissible())
    throw PreconditionError(out.b_report.failing_clause(),
                            "auxiliary-matrix certificate failed");
  const real pe = space.p_eff();
  // capture by value: cuts and matrix closures outlive the construction call
  auto blocks_copy = std::make_shared<Blocks>(blocks);
  auto ln_v = [blocks_copy, b, pe](long n) {
    if (n == 0) return 0.0L;
    const long k = blocks_copy->block_index(n);
    return -b.ln_entry(n - blocks_copy->cut(k), n) / pe;
  };
  out.w = WeightSeq::from_ln_v(ln_v, "block-profile weight (" + b.family + ")");
  out.op = check_operator(space, out.w, horizon, p);
  out.not_chaotic = verify_not_chaotic(space, out.w, blocks, horizon, p);
  return out;
}

Verdict verify_not_chaotic(const SpaceSpec& space, const WeightSeq& w,
                           const Blocks& blocks, long horizon, const Params& p) {
  Verdict v;
  v.horizon = horizon;
  v.route = "block-start floor: inf_k v_{N_k}^p a_{m,N_k}";
  const real pe = space.p_eff();
  std::vector<long> starts;
  for (long c : blocks.cuts())
    if (c <= horizon) starts.push_back(c);
  const real floor_ln = std::log(1e-9L);
  for (long m : p.probe_m) {
    real inf_all = kPosInf, inf_head = kPosInf, sup_all = kNegInf;
    for (size_t i = 0; i < starts.size(); ++i) {
      const real val = pe * w.ln_v(starts[i]) + space.ln_entry(m, starts[i]);
      inf_all = std::min(inf_all, val);
      sup_all = std::max(sup_all, val);
      if (i < starts.size() / 2) inf_head = std::min(inf_head, val);
    }
    if (inf_all >= floor_ln && inf_all >= inf_head - 1e-9L) {
      v.outcome = Outcome::Holds;
      v.witness["m"] = static_cast<real>(m);
      v.witness["inf_ln"] = inf_all;
      v.witness["sup_ln"] = sup_all;
      v.witness["block_starts"] = static_cast<real>(starts.size());
      const Verdict chaos = check_chaotic(space, w, horizon, p);
      if (chaos.holds()) {
        v.outcome = Outcome::Fails;
        v.note = "inconsistent: chaos series certified convergent despite the floor";
      } else {
        v.note = "chaos test: " + std::string(to_string(chaos.outcome));
      }
      return v;
    }
  }
  v.outcome = Outcome::Fails;
  v.note = "block-start coordinates decay for every probe m";
  return v;
}

}  // namespace kshift
