#pragma once

#include <string>
#include <vector>

#include "kshift/shifts.hpp"
#include "kshift/spaces.hpp"

namespace kshift {

struct LagEstimate {
  long lag = 1;
  real ln_lo = 0;  // ln of the liminf estimate of alpha_{n+lag}/alpha_n
  real ln_hi = 0;  // ln of the limsup estimate
};

struct RhoReport {
  std::vector<LagEstimate> lags;  // over the j-ladder
  double eta = 1e-3;
  long horizon = 0;
  const LagEstimate& lag1() const { return lags.front(); }
};

RhoReport rho_report(const AlphaSeq& alpha, long horizon, const Params& p = {});

// Space-level classification symbols:
//   "="  every frequently hypercyclic shift is chaotic (and such shifts exist)
//   "!=" some frequently hypercyclic shift is not chaotic
//   "x"  no hypercyclic shifts at all
//   "?"  undetermined at this horizon
struct Classification {
  Verdict exists_hc;
  Verdict exists_chaotic;
  Verdict fhc_implies_chaos;
  Verdict exists_fhc_not_chaotic;
  std::string pattern;
  RhoReport rho;
  std::vector<std::string> open_notes;  // cases the theory leaves open
};

// Existence of a hypercyclic weighted shift: ratio-sum route for infinite-type
// power series, lag-ratio rules for finite type, and a bounded product-grid
// search under the column regularity bound for generic matrices.
Verdict exists_hc_shift(const SpaceSpec& space, long horizon, const Params& p = {});

// Existence of a chaotic weighted shift (same routing, limit instead of
// limsup / membership of the product sequence in the space).
Verdict exists_chaotic_shift(const SpaceSpec& space, long horizon, const Params& p = {});

Classification classify_power_series(const SpaceSpec& space, long horizon,
                                     const Params& p = {});

struct TransferWitnessReport {
  Verdict premise;     // one-step transfer: v_{n-1} a_{m,n-1} <= C v_n a_{mu,n}
  Verdict conclusion;  // iterate transfer with the premise witness mu:
                       // v_{n-j} a_{m,n-j} <= C_j v_n a_{mu,n} for all ladder j
};

// Checks the uniform-transfer property on a concrete positive sequence v. The
// conclusion reuses each probe's premise witness mu; the note records whether
// escalating mu would restore the bound.
TransferWitnessReport check_transfer_witness(const SpaceSpec& space, const WeightSeq& v,
                                 long horizon, const Params& p = {});

// Space-level transfer property: bounded iterated lag ratios certify it on
// finite type; on infinite type it is incompatible with the existence of
// hypercyclic shifts; generic matrices stay undetermined by design.
Verdict check_transfer_property(const SpaceSpec& space, long horizon, const Params& p = {});

}  // namespace kshift
