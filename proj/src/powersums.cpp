#include "dmf/powersums.hpp"

namespace dmf {

void PowerSumCache::ensure(int prec) {
  if (prec <= prec_) return;
  prec_ = prec;
  inv_memo_.clear();
}

// monic(d) = { T e + c : e monic of degree d-1, c in F_q } gives
//   S_d(K) = sum_{j >= 1, (q-1)|j} (-1)^{j+1} binom(K+j-1, j) T^{-K-j}
//            S_{d-1}(K+j),
// using sum_{c in F_q} c^j = -1 for (q-1)|j, j >= 1 and = 0 otherwise
// (0^0 = 1 makes the j = 0 term q * S_{d-1}(K) = 0).  Terms have
// v >= d (K+j), which truncates j at the working precision.
LaurentSeries PowerSumCache::monic_inv_sum(int d, long long K) {
  if (K < 1) throw ConfigError("monic_inv_sum requires exponent >= 1");
  if (d == 0) return LaurentSeries::one(*ctx_);
  if ((long long)d * K >= prec_) return LaurentSeries(*ctx_, prec_);
  auto key = std::make_pair(d, K);
  auto it = inv_memo_.find(key);
  if (it != inv_memo_.end()) return it->second;

  const int q = int(ctx_->q());
  const int p = ctx_->p();
  LaurentSeries acc(*ctx_, prec_);  // dropped tail has v >= prec
  for (long long j = q - 1; (long long)d * (K + j) < prec_; j += q - 1) {
    int b = binom_mod_p(K + j - 1, j, p);
    if (b == 0) continue;
    fq scalar = ctx_->from_int(j % 2 == 0 ? -b : b);  // (-1)^{j+1} binom
    LaurentSeries term =
        monic_inv_sum(d - 1, K + j).shifted(int(K + j)).scaled(scalar);
    acc = acc + term;
  }
  inv_memo_.emplace(key, acc);
  return acc;
}

// Exact monic power sums by the same shell recursion:
//   U_d(N) = - sum_{j >= 1, (q-1)|j, j <= N} binom(N, j) T^{N-j} U_{d-1}(N-j).
LaurentSeries PowerSumCache::monic_pow_sum(int d, long long N) {
  if (N < 0) throw ConfigError("monic_pow_sum requires exponent >= 0");
  if (d == 0) return LaurentSeries::one(*ctx_);
  auto key = std::make_pair(d, N);
  auto it = pow_memo_.find(key);
  if (it != pow_memo_.end()) return it->second;

  const int q = int(ctx_->q());
  const int p = ctx_->p();
  LaurentSeries acc = LaurentSeries::zero(*ctx_);
  for (long long j = q - 1; j <= N; j += q - 1) {
    int b = binom_mod_p(N, j, p);
    if (b == 0) continue;
    LaurentSeries term = monic_pow_sum(d - 1, N - j)
                             .shifted(-int(N - j))
                             .scaled(ctx_->neg(ctx_->from_int(b)));
    acc = acc + term;
  }
  pow_memo_.emplace(key, acc);
  return acc;
}

LaurentSeries PowerSumCache::sd(int d, long long K) {
  // sum over all deg-d a of a^{-K} = (sum_{lambda in F_q^*} lambda^{-K})
  // times the monic sum; the unit sum is -1 when (q-1) | K, else 0.
  if (K < 1) throw ConfigError("sd requires exponent >= 1");
  if (K % (ctx_->q() - 1) != 0) return LaurentSeries::zero(*ctx_);
  return monic_inv_sum(d, K).scaled(ctx_->from_int(-1));
}

LaurentSeries PowerSumCache::tc(int L, long long N) {
  const FieldCtx& K = *ctx_;
  if (L < 0)  // only a = 0 qualifies; 0^0 = 1
    return N == 0 ? LaurentSeries::one(K) : LaurentSeries::zero(K);
  if (N == 0) return LaurentSeries::zero(K);  // q^{L+1} ones vanish in char p
  if (N % (K.q() - 1) != 0) return LaurentSeries::zero(K);
  auto key = std::make_pair(L, N);
  auto it = tc_memo_.find(key);
  if (it != tc_memo_.end()) return it->second;
  LaurentSeries acc = LaurentSeries::zero(K);
  for (int l = 0; l <= L; ++l) acc = acc + monic_pow_sum(l, N);
  acc = acc.scaled(K.from_int(-1));
  tc_memo_.emplace(key, acc);
  return acc;
}

LaurentSeries power_sums(PowerSumCache& cache, int n, long long exponent,
                         PowerSumKind kind, int prec) {
  if (kind == PowerSumKind::T_c) {
    if (exponent < 0) throw ConfigError("T_c requires exponent >= 0");
    return cache.tc(n, exponent).truncated(prec);
  }
  cache.ensure(prec + std::max(0, n) + 1);
  return cache.sd(n, exponent).truncated(prec);
}

}  // namespace dmf
