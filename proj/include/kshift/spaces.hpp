#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kshift/logreal.hpp"
#include "kshift/params.hpp"
#include "kshift/verdict.hpp"

namespace kshift {

// Increasing, strictly positive exponent sequence tending to infinity,
// carried as ln(alpha_n): sequences like alpha_n = (n+1)! outgrow every
// native range long before working horizons. Values are cached; evaluation
// is thread-safe.
class AlphaSeq {
 public:
  // Generator returns alpha_n itself (small sequences: n+1, log(n+2), ...).
  static AlphaSeq from_values(std::function<real(long)> gen, std::string provenance);
  // Generator returns ln(alpha_n) (factorial-scale sequences).
  static AlphaSeq from_ln(std::function<real(long)> gen, std::string provenance);

  real ln_at(long n) const;
  // alpha_n as a value; throws DomainError if it exceeds the extended range.
  real value_at(long n) const;
  // alpha_0 + ... + alpha_{n-1} as a value (guarded like value_at).
  real prefix_value_sum(long n) const;
  const std::string& provenance() const { return state_->provenance; }

  // Positivity, monotonicity on [0, probe], growth of the prefix maximum;
  // throws ValidationError naming the first violating index.
  void validate(long probe = 10000) const;

 private:
  struct State {
    std::function<real(long)> ln_gen;
    std::string provenance;
    std::mutex mu;
    std::vector<real> lns;
    std::vector<real> psums;  // psums[n] = sum of alpha_0..alpha_{n-1}
  };
  std::shared_ptr<State> state_;
};

// Strictly positive matrix a_{m,n}, nondecreasing in m, carried as ln a_{m,n}.
struct KotheMatrix {
  std::function<real(long, long)> ln_entry;  // (m >= 1, n >= 0)
  std::string provenance;
};

// Positivity and column monotonicity on a probe rectangle.
void validate_matrix(const KotheMatrix& a, long m_probe, long n_probe);

enum class SpaceKind { GenericKothe, PowerSeriesInfinite, PowerSeriesFinite };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::GenericKothe: return "generic";
    case SpaceKind::PowerSeriesInfinite: return "power-series-infinite";
    default: return "power-series-finite";
  }
}

// Immutable description of a sequence space: matrix, order p in {0} u [1,inf)
// (0 encodes the sup-norm space c_0(A)), and provenance. Finite-type power
// series spaces store the type-0 reduction; the original type is metadata.
class SpaceSpec {
 public:
  static SpaceSpec generic(KotheMatrix matrix, real order, std::string name = {});

  real ln_entry(long m, long n) const { return matrix_.ln_entry(m, n); }
  const KotheMatrix& matrix() const { return matrix_; }
  real order() const { return order_; }
  // Exponent used in v-weighted conditions: the order, with p = 1 for order 0.
  real p_eff() const { return order_ == 0 ? 1.0L : order_; }
  bool sup_norm() const { return order_ == 0; }
  SpaceKind kind() const { return kind_; }
  const std::optional<AlphaSeq>& alpha() const { return alpha_; }
  real finite_type() const { return finite_type_r_; }
  const std::string& name() const { return name_; }
  std::string describe() const;

  friend SpaceSpec make_power_series(real order, bool infinite_type, real type_r,
                                     AlphaSeq alpha, long probe);

 private:
  SpaceSpec() = default;
  KotheMatrix matrix_;
  real order_ = 1;
  SpaceKind kind_ = SpaceKind::GenericKothe;
  std::optional<AlphaSeq> alpha_;
  real finite_type_r_ = 0;
  std::string name_;
};

// Power series space of the given order: infinite type has entries
// ln a_{m,n} = alpha_n * ln m; finite type stores the type-0 reduction
// ln a_{m,n} = -alpha_n * ln(1 + 1/m).
SpaceSpec make_power_series(real order, bool infinite_type, real type_r,
                            AlphaSeq alpha, long probe = 10000);

// Finitely supported vector with plain nonnegative coordinates.
struct FiniteVector {
  std::vector<long> idx;    // strictly increasing
  std::vector<double> val;  // nonzero at idx

  static FiniteVector unit(long n) { return {{n}, {1.0}}; }
  static FiniteVector from_pairs(std::vector<std::pair<long, double>> coords);
  long support_end() const { return idx.empty() ? -1 : idx.back(); }
  void validate() const;
};

// m-th seminorm: (sum |x_n|^p a_{m,n})^{1/p} for order p, sup |x_n| a_{m,n}
// for order 0.
LogReal seminorm(const SpaceSpec& space, const FiniteVector& x, long m);

// Same over log-domain coordinates (index, ln|coefficient|).
real seminorm_ln(const SpaceSpec& space,
                 std::span<const std::pair<long, real>> ln_coords, long m);

// For every probe m, searches the mu-ladder for sum_n a_{m,n}/a_{mu,n} < inf.
Verdict check_condition_N(const SpaceSpec& space, long horizon, const Params& p = {});

// Column-ratio vanishing over tail sets; meaningful for order 0 (orders >= 1
// hold automatically).
Verdict check_condition_BC(const SpaceSpec& space, long horizon, const Params& p = {});

// Regularity bound a_{m,n+1}/a_{1,n} <= C a_{J,n+1}/a_{j,n} for ladder J.
Verdict check_regularity_bound(const SpaceSpec& space, long horizon, const Params& p = {});

// Shared helper: running sup of fn over [lo, hi] plus a stabilization flag
// (the trailing half does not push the sup up by more than tol_ln).
struct SupEstimate {
  real sup_ln = kNegInf;
  real head_sup_ln = kNegInf;
  real tail_sup_ln = kNegInf;
  long argmax = -1;
  bool stabilized = false;
};
SupEstimate sup_stabilized(const std::function<real(long)>& fn, long lo, long hi,
                           real tol_ln);

}  // namespace kshift
