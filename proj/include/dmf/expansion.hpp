#pragma once

#include <map>
#include <vector>

#include "dmf/powersums.hpp"

namespace dmf {

/// Laurent polynomial in z over truncated Laurent series, representing the
/// window [lo, hi] of a rigid function's expansion on the annulus
/// {|pi^{n+1}| < |z| < |pi^n|}.
///
/// The truncation certificate is a pair of valuation floors valid for every
/// z-exponent s (stored or not):
///     v(a_s) >= out_floor - n s      and      v(a_s) >= in_floor - (n+1) s.
/// They are the sup-norm bounds on the two boundary circles; products add
/// them, Frobenius powers scale them by q.
struct AnnulusSeries {
  const FieldCtx* fctx = nullptr;
  int annulus = 0;
  int lo = 0, hi = -1;             // inclusive window; empty when hi < lo
  std::vector<LaurentSeries> c;    // coefficient of z^s at index s - lo
  long long out_floor = 0, in_floor = 0;

  AnnulusSeries() = default;
  AnnulusSeries(const FieldCtx& K, int n, int lo_, int hi_, long long out,
                long long in);

  const FieldCtx& ctx() const { return *fctx; }
  bool in_window(int s) const { return s >= lo && s <= hi; }
  /// Stored coefficient; WindowTooNarrow outside the window.
  const LaurentSeries& at(int s) const;
  LaurentSeries& slot(int s);
  /// Certified lower bound on v(a_s), any s.
  long long floor_at(long long s) const;

  /// Exact q-power Frobenius: coefficients^q at exponent q s.
  AnnulusSeries frobenius() const;
  /// Windowed product with certified tail bounds; the result's coefficient
  /// precisions combine stored-pair precision with the floor bound on every
  /// unstored pairing.
  AnnulusSeries mul(const AnnulusSeries& o, int tlo, int thi,
                    int target_prec) const;
  /// Sum on the window intersection.
  AnnulusSeries add(const AnnulusSeries& o) const;
  /// Multiplication by an exact scalar series.
  AnnulusSeries scaled(const LaurentSeries& s) const;

  json to_json() const;
};

/// Coefficient of z^N (N >= 0) of the half sum S_1 of E_k on annulus n:
/// the pairs with deg d >= deg c - n.
LaurentSeries eis_pos_coeff(PowerSumCache& cache, int k, int n, long long N,
                            int prec);
/// Coefficient of z^{-(k+N)} (N >= 0) of the half sum S_2 (deg c >= deg d +
/// n + 1).
LaurentSeries eis_neg_coeff(PowerSumCache& cache, int k, int n, long long N,
                            int prec);

/// Window of the Eisenstein series E_k on annulus n, every coefficient
/// certified to the requested precision.
AnnulusSeries expand_eisenstein(PowerSumCache& cache, int k, int n, int lo,
                                int hi, int prec);

/// Independent slow oracle: per-pair geometric expansion of 1/(cz+d)^k over
/// all pairs grouped in shells up to deg_bound, no power-sum factorization,
/// no vanishing lemmas.  Throws CapExceeded when the shell enumeration
/// exceeds pair_cap.
AnnulusSeries direct_pair_expand(const FieldCtx& K, int k, int n, int lo,
                                 int hi, int deg_bound, int prec_low,
                                 long long pair_cap = 8000000,
                                 int threads = 1);

/// Window of the discriminant Delta = (T^{q^2}-T) E_{q^2-1} +
/// (T^q-T)^q E_{q-1}^{q+1} on annulus n.
AnnulusSeries expand_delta(PowerSumCache& cache, int n, int lo, int hi,
                           int prec);

/// Res_e z^j s dz = coefficient of z^{-j-1}.
LaurentSeries residue(const AnnulusSeries& s, int j);

/// Upsilon_i: the z^{-(q-1)-i(q-1)q} coefficient of Delta on annulus 0.
/// i = 0 is evaluated by the closed outer-convolution formula (certified
/// cutoffs); other i read from expand_delta.
LaurentSeries upsilon_closed(PowerSumCache& cache, long long i, int prec);
/// Xi_i: the z^{-i(q-1)q} coefficient of Delta on annulus 0; i = 1 by the
/// closed formula, others from expand_delta.
LaurentSeries xi_closed(PowerSumCache& cache, long long i, int prec);

}  // namespace dmf
