#pragma once

#include <map>
#include <utility>

#include "dmf/field.hpp"

namespace dmf {

/// Cached power sums over A = F_q[T]:
///   monic_inv_sum(d, K) = sum over monic deg-d polynomials of a^{-K}
///   monic_pow_sum(d, N)  = sum over monic deg-d polynomials of a^N  (exact)
///   sd(d, K)             = sum over ALL deg-d polynomials of a^{-K}
///   tc(L, N)             = sum over all a with deg a <= L of a^N (0^0 = 1)
///
/// The inverse sums are computed by the shell recursion over
/// monic(d) = T*monic(d-1) + F_q, truncated by the certified valuation floor
/// v(monic_inv_sum(d, K)) >= d*K; direct enumeration is kept as a test
/// oracle.  A cache carries one working precision; requesting more clears
/// and recomputes.  Not safe for concurrent mutation: use one cache per
/// worker.
class PowerSumCache {
 public:
  PowerSumCache(const FieldCtx& ctx, int prec) : ctx_(&ctx), prec_(prec) {}

  const FieldCtx& ctx() const { return *ctx_; }
  int prec() const { return prec_; }
  /// Raise the working precision (drops memoized inverse sums).
  void ensure(int prec);

  LaurentSeries monic_inv_sum(int d, long long K);
  LaurentSeries monic_pow_sum(int d, long long N);
  LaurentSeries sd(int d, long long K);
  LaurentSeries tc(int L, long long N);

 private:
  const FieldCtx* ctx_;
  int prec_;
  std::map<std::pair<int, long long>, LaurentSeries> inv_memo_;
  std::map<std::pair<int, long long>, LaurentSeries> pow_memo_;
  std::map<std::pair<int, long long>, LaurentSeries> tc_memo_;
};

enum class PowerSumKind { S_d, T_c };

/// The spec-level surface: S_d(n, k) or T_c(n, M) at the given precision
/// (T_c is exact and merely truncated).
LaurentSeries power_sums(PowerSumCache& cache, int n, long long exponent,
                         PowerSumKind kind, int prec);

}  // namespace dmf
