#include "dmf/expansion.hpp"

#include <algorithm>
#include <climits>

namespace dmf {

namespace {

constexpr long long kBig = LaurentSeries::kExact;

long long clampv(long long v) {
  return std::max(-kBig, std::min(kBig, v));
}

int digit_sum_q(long long n, int q) {
  int s = 0;
  for (; n; n /= q) s += int(n % q);
  return s;
}

int floor_div(long long a, long long b) {
  long long d = a / b, r = a % b;
  return int(d - (r != 0 && ((r < 0) != (b < 0)) ? 1 : 0));
}

// minimum of max(K1, K2, K3 + s, K4 - s) over integers s in [a, b]
// (convex piecewise-linear; evaluate at the clamped breakpoint).
long long convex_min(long long K1, long long K2, long long K3, long long K4,
                     long long a, long long b) {
  auto f = [&](long long s) {
    return std::max(std::max(K1, K2), std::max(K3 + s, K4 - s));
  };
  long long s0 = floor_div(K4 - K3, 2);
  long long best = kBig;
  for (long long cand : {std::min(std::max(s0, a), b),
                         std::min(std::max(s0 + 1, a), b), a, b})
    best = std::min(best, f(cand));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// AnnulusSeries

AnnulusSeries::AnnulusSeries(const FieldCtx& K, int n, int lo_, int hi_,
                             long long out, long long in)
    : fctx(&K),
      annulus(n),
      lo(lo_),
      hi(hi_),
      out_floor(out),
      in_floor(in) {
  if (hi >= lo) c.assign(std::size_t(hi - lo + 1), LaurentSeries::zero(K));
}

const LaurentSeries& AnnulusSeries::at(int s) const {
  if (!in_window(s))
    throw WindowTooNarrow("coefficient z^" + std::to_string(s) +
                          " outside stored window [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
  return c[std::size_t(s - lo)];
}

LaurentSeries& AnnulusSeries::slot(int s) {
  if (!in_window(s)) throw WindowTooNarrow("slot outside window");
  return c[std::size_t(s - lo)];
}

long long AnnulusSeries::floor_at(long long s) const {
  return clampv(std::max(out_floor - (long long)annulus * s,
                         in_floor - ((long long)annulus + 1) * s));
}

AnnulusSeries AnnulusSeries::frobenius() const {
  const int q = int(ctx().q());
  AnnulusSeries r(ctx(), annulus, lo * q, hi * q, clampv(out_floor * q),
                  clampv(in_floor * q));
  for (int s = lo; s <= hi; ++s)
    r.slot(s * q) = c[std::size_t(s - lo)].frobenius_pow(1);
  return r;
}

AnnulusSeries AnnulusSeries::mul(const AnnulusSeries& o, int tlo, int thi,
                                 int target_prec) const {
  (void)target_prec;
  const long long n = annulus;
  AnnulusSeries r(ctx(), annulus, tlo, thi,
                  clampv(out_floor + o.out_floor),
                  clampv(in_floor + o.in_floor));
  for (int s = tlo; s <= thi; ++s) {
    const long long K1 = out_floor + o.out_floor - n * s;
    const long long K2 = in_floor + o.in_floor - (n + 1) * s;
    const long long K3 = out_floor + o.in_floor - (n + 1) * s;
    const long long K4 = in_floor + o.out_floor - n * s;
    const long long LIM = 1LL << 28;
    long long Ilo = std::max(lo, s - o.hi), Ihi = std::min(hi, s - o.lo);
    long long tail;
    if (Ilo > Ihi) {
      tail = convex_min(K1, K2, K3, K4, -LIM, LIM);
    } else {
      tail = std::min(convex_min(K1, K2, K3, K4, -LIM, Ilo - 1),
                      convex_min(K1, K2, K3, K4, Ihi + 1, LIM));
    }
    LaurentSeries acc(ctx(), int(std::min(tail, kBig / 2)));
    for (long long s1 = Ilo; s1 <= Ihi; ++s1)
      acc = acc + at(int(s1)) * o.at(int(s - s1));
    r.slot(s) = acc;
  }
  return r;
}

AnnulusSeries AnnulusSeries::add(const AnnulusSeries& o) const {
  int nlo = std::max(lo, o.lo), nhi = std::min(hi, o.hi);
  AnnulusSeries r(ctx(), annulus, nlo, nhi,
                  std::min(out_floor, o.out_floor),
                  std::min(in_floor, o.in_floor));
  for (int s = nlo; s <= nhi; ++s) r.slot(s) = at(s) + o.at(s);
  return r;
}

AnnulusSeries AnnulusSeries::scaled(const LaurentSeries& s) const {
  long long v = s.valuation();
  AnnulusSeries r(ctx(), annulus, lo, hi, clampv(out_floor + v),
                  clampv(in_floor + v));
  for (int t = lo; t <= hi; ++t) r.slot(t) = at(t) * s;
  return r;
}

json AnnulusSeries::to_json() const {
  json j;
  j["annulus"] = annulus;
  j["window"] = json::array({lo, hi});
  json coeffs = json::object();
  for (int s = lo; s <= hi; ++s) coeffs[std::to_string(s)] = at(s).to_json();
  j["coeffs"] = coeffs;
  j["certificate"] = {{"out_floor", out_floor},
                      {"in_floor", in_floor},
                      {"slopes", json::array({annulus, annulus + 1})}};
  return j;
}

// ---------------------------------------------------------------------------
// Eisenstein coefficients through power sums

namespace {

// sum_{delta >= 0} sd(delta, KK) * tc(delta + offset, N) certified to prec.
// The cutoff is driven by the exact degrees of the finitely many distinct
// tc values (tc(L, N) stabilizes once the monic sums vanish, which the
// digit-sum bound locates at L > s_q(N)/(q-1)).
LaurentSeries shell_sum(PowerSumCache& cache, long long KK, int offset,
                        long long N, int prec) {
  const FieldCtx& F = cache.ctx();
  const int q = int(F.q());
  if (KK % (q - 1) != 0) return LaurentSeries::zero(F);  // unit sums vanish
  if (N > 0 && N % (q - 1) != 0) return LaurentSeries::zero(F);

  if (N == 0) {
    // tc(L, 0) = 1 exactly when L < 0; finite exact combination
    cache.ensure(prec);
    LaurentSeries acc = LaurentSeries::zero(F);
    for (int delta = 0; delta + offset < 0; ++delta)
      acc = acc + cache.sd(delta, KK);
    return acc;
  }

  const int lstable = digit_sum_q(N, q) / (q - 1);
  long long deg_max = 0;
  for (int L = 0; L <= lstable; ++L) {
    LaurentSeries t = cache.tc(L, N);
    if (!t.is_exact_zero()) deg_max = std::max(deg_max, -(long long)t.valuation());
  }
  cache.ensure(int(prec + deg_max + 1));
  LaurentSeries stable = cache.tc(lstable, N);
  const bool finite_sum = stable.is_exact_zero();

  LaurentSeries acc =
      finite_sum ? LaurentSeries::zero(F) : LaurentSeries(F, prec);
  for (int delta = 0;; ++delta) {
    int L = delta + offset;
    if (L >= lstable) {
      if (finite_sum) break;
      if ((long long)delta * KK + stable.valuation() >= prec) break;
    }
    if (L < 0 && N > 0) continue;  // tc is 0 there
    LaurentSeries t = cache.tc(L, N);
    if (t.is_exact_zero()) continue;
    acc = acc + cache.sd(delta, KK) * t;
  }
  return acc;
}

fq beta_coeff(const FieldCtx& F, long long k, long long N) {
  // (1+u)^{-k} = sum_N (-1)^N binom(k+N-1, N) u^N
  int b = binom_mod_p(k + N - 1, N, F.p());
  return F.from_int(N % 2 == 0 ? b : -b);
}

}  // namespace

LaurentSeries eis_pos_coeff(PowerSumCache& cache, int k, int n, long long N,
                            int prec) {
  const FieldCtx& F = cache.ctx();
  fq beta = beta_coeff(F, k, N);
  if (beta == 0) return LaurentSeries::zero(F);
  return shell_sum(cache, k + N, n, N, prec).scaled(beta);
}

LaurentSeries eis_neg_coeff(PowerSumCache& cache, int k, int n, long long N,
                            int prec) {
  const FieldCtx& F = cache.ctx();
  fq beta = beta_coeff(F, k, N);
  if (beta == 0) return LaurentSeries::zero(F);
  return shell_sum(cache, k + N, -n - 1, N, prec).scaled(beta);
}

AnnulusSeries expand_eisenstein(PowerSumCache& cache, int k, int n, int lo,
                                int hi, int prec) {
  const FieldCtx& F = cache.ctx();
  AnnulusSeries E(F, n, lo, hi, -(long long)n * k, -((long long)n + 1) * k);
  for (int s = lo; s <= hi; ++s) {
    if (s >= 0)
      E.slot(s) = eis_pos_coeff(cache, k, n, s, prec);
    else if (s <= -k)
      E.slot(s) = eis_neg_coeff(cache, k, n, -s - k, prec);
    else
      E.slot(s) = LaurentSeries::zero(F);  // no support in (-k, 0)
  }
  return E;
}

// ---------------------------------------------------------------------------
// direct pair-sum oracle

namespace {

using ZPoly = std::vector<LaurentSeries>;  // truncated polynomial in z

ZPoly zmul(const ZPoly& a, const ZPoly& b, std::size_t width,
           const FieldCtx& F) {
  ZPoly r(std::min(width, a.size() + b.size() - 1), LaurentSeries::zero(F));
  for (std::size_t i = 0; i < a.size() && i < r.size(); ++i) {
    if (a[i].is_zero_to_prec() && a[i].is_exact()) continue;
    for (std::size_t j = 0; j < b.size() && i + j < r.size(); ++j)
      r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

ZPoly zpow(ZPoly base, long long e, std::size_t width, const FieldCtx& F) {
  ZPoly r{LaurentSeries::one(F)};
  while (e) {
    if (e & 1) r = zmul(r, base, width, F);
    e >>= 1;
    if (e) base = zmul(base, base, width, F);
  }
  return r;
}

// enumerate all polynomials of degree <= d (monic flag restricts to monic of
// degree exactly d)
template <typename Fn>
void for_polys(const FieldCtx& F, int d, bool monic, Fn&& fn) {
  if (d < 0) {
    if (!monic) fn(PolyT::zero(F));
    return;
  }
  const std::uint64_t q = F.q();
  std::uint64_t count = 1;
  for (int i = 0; i < (monic ? d : d + 1); ++i) count *= q;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<fq> cs(d + 1, 0);
    std::uint64_t t = code;
    for (int i = 0; i < (monic ? d : d + 1); ++i) {
      cs[i] = fq(t % q);
      t /= q;
    }
    if (monic) cs[d] = 1;
    fn(PolyT(F, std::move(cs)));
  }
}

}  // namespace

AnnulusSeries direct_pair_expand(const FieldCtx& F, int k, int n, int lo,
                                 int hi, int deg_bound, int prec_low,
                                 long long pair_cap, int threads) {
  (void)threads;
  const int q = int(F.q());
  const int D = deg_bound;

  // pair count guard
  long long pairs = 0, qpow = 1;
  for (int d = 0; d <= D; ++d) {
    long long cs = 1;
    for (int i = 0; i <= d + n; ++i) cs *= q;
    pairs += (q - 1) * qpow * cs;  // type 1
    long long ds = d - n - 1 >= 0 ? 1 : 0;
    for (int i = 0; i <= d - n - 1; ++i) ds *= q;
    pairs += (q - 1) * qpow * std::max(1LL, ds);  // type 2 (d=0 always)
    qpow *= q;
  }
  if (pairs > pair_cap)
    throw CapExceeded("direct_pair_expand: " + std::to_string(pairs) +
                      " pairs exceed the cap");

  AnnulusSeries E(F, n, lo, hi, -(long long)n * k, -((long long)n + 1) * k);
  // initialize with the omitted-shell tail certificates
  for (int s = lo; s <= hi; ++s) {
    long long tail;
    if (s >= 0)
      tail = (long long)(D + 1) * k - (long long)n * s;
    else if (s <= -k)
      tail = (long long)(D + 1) * k + ((long long)n + 1) * (-s - k);
    else
      tail = kBig;  // exactly no support
    E.slot(s) = LaurentSeries(F, int(std::min(tail, kBig / 2)));
  }
  if (D < 0) return E;  // empty pair set: zero series

  const std::size_t Wpos = hi >= 0 ? std::size_t(hi) + 1 : 0;
  const std::size_t Wneg = lo <= -k ? std::size_t(-lo - k) + 1 : 0;
  const int Pa = prec_low + (n + 2) * std::max(std::abs(lo), std::abs(hi)) +
                 (D + 2) * k + 8;

  for (int d = 0; d <= D; ++d) {
    for_polys(F, d, true, [&](const PolyT& m) {
      LaurentSeries minv = embed(m).inverse(Pa);
      for (fq lam = 1; lam < F.q(); ++lam) {
        LaurentSeries dinv = minv.scaled(F.inv(lam));
        // type 1: this d against all c with deg c <= d + n, expand in z
        if (Wpos) {
          LaurentSeries dmk = dinv.pow(k);
          for_polys(F, d + n, false, [&](const PolyT& cpol) {
            LaurentSeries u = embed(cpol) * dinv;
            ZPoly g(Wpos, LaurentSeries::zero(F));
            g[0] = LaurentSeries::one(F);
            for (std::size_t t = 1; t < Wpos; ++t)
              g[t] = g[t - 1] * (-u);  // geometric series of 1/(1+uz)
            ZPoly h = k == 1 ? g : zpow(g, k, Wpos, F);
            for (std::size_t t = 0; t < h.size(); ++t) {
              int s = int(t);
              if (E.in_window(s)) E.slot(s) = E.at(s) + dmk * h[t];
            }
          });
        }
        // type 2: this polynomial as c, against all d with deg <= d - n - 1
        if (Wneg) {
          LaurentSeries cmk = dinv.pow(k);
          for_polys(F, d - n - 1, false, [&](const PolyT& dpol) {
            LaurentSeries w = embed(dpol) * dinv;
            ZPoly g(Wneg, LaurentSeries::zero(F));
            g[0] = LaurentSeries::one(F);
            for (std::size_t t = 1; t < Wneg; ++t) g[t] = g[t - 1] * (-w);
            ZPoly h = k == 1 ? g : zpow(g, k, Wneg, F);
            for (std::size_t t = 0; t < h.size(); ++t) {
              int s = -k - int(t);
              if (E.in_window(s)) E.slot(s) = E.at(s) + cmk * h[t];
            }
          });
        }
      }
    });
  }
  // clip reported precision to the certified tails (set at initialization)
  return E;
}

// ---------------------------------------------------------------------------
// discriminant

AnnulusSeries expand_delta(PowerSumCache& cache, int n, int lo, int hi,
                           int prec) {
  const FieldCtx& F = cache.ctx();
  const int q = int(F.q());
  const long long k1 = q - 1;
  const PolyT TqT = PolyT::monomial(F, 1, q) - PolyT::T(F);        // T^q - T
  const PolyT Tq2T = PolyT::monomial(F, 1, q * q) - PolyT::T(F);   // T^q2 - T
  const LaurentSeries sc1 = embed(TqT).pow(q);
  const LaurentSeries sc2 = embed(Tq2T);

  for (int attempt = 0; attempt < 5; ++attempt) {
    const int P1 = prec + q * q + 4 + attempt * (8 + prec / 2);
    AnnulusSeries t2 =
        expand_eisenstein(cache, q * q - 1, n, lo, hi, P1).scaled(sc2);

    // plan the E_{q-1} window for the product E^q * E
    const long long oA = -q * (long long)n * k1, iA = -q * ((long long)n + 1) * k1;
    const long long oB = -(long long)n * k1, iB = -((long long)n + 1) * k1;
    long long a_lo = LLONG_MAX / 4, a_hi = LLONG_MIN / 4;
    const long long vs = sc1.valuation();  // -q^2
    for (int s = lo; s <= hi; ++s) {
      const long long need = P1 - vs;  // product needed to P1 - v(scalar)
      long long K1v = oA + oB - (long long)n * s;
      long long K2v = iA + iB - ((long long)n + 1) * s;
      long long K3v = oA + iB - ((long long)n + 1) * s;
      long long K4v = iA + oB - (long long)n * s;
      if (std::max(K1v, K2v) >= need) continue;
      a_lo = std::min(a_lo, K4v - need + 1);
      a_hi = std::max(a_hi, need - K3v - 1);
    }
    AnnulusSeries delta = t2;
    if (a_lo <= a_hi) {
      int w_lo = std::min(floor_div(a_lo, q), lo - int(a_hi));
      int w_hi = std::max(int(a_hi / q) + 1, hi - int(a_lo));
      // coefficient precision targets from the floor minima over the ranges
      auto fmin = [&](long long o, long long i, long long a, long long b) {
        // min over [a, b] of max(o - n s, i - (n+1) s); both lines are
        // monotone in the same direction, so an endpoint attains the min
        auto f = [&](long long s) {
          return std::max(o - (long long)n * s, i - ((long long)n + 1) * s);
        };
        return std::min(f(a), f(b));
      };
      long long mA = fmin(oA, iA, a_lo, a_hi);
      long long mB = fmin(oB, iB, lo - a_hi, hi - a_lo);
      const long long need = P1 - vs;
      int PE = int(std::max(need - mA,
                            (need - mB + q - 1) / q) + 2);
      AnnulusSeries E1 = expand_eisenstein(cache, q - 1, n, w_lo, w_hi, PE);
      AnnulusSeries t1 = E1.frobenius()
                             .mul(E1, lo, hi, int(need))
                             .scaled(sc1);
      delta = t2.add(t1);
    }
    bool ok = true;
    for (int s = lo; s <= hi && ok; ++s)
      if (!delta.at(s).is_exact() && delta.at(s).prec() < prec) ok = false;
    if (ok) return delta;
  }
  throw WindowTooNarrow("expand_delta: target precision not reached");
}

LaurentSeries residue(const AnnulusSeries& s, int j) { return s.at(-j - 1); }

// ---------------------------------------------------------------------------
// Upsilon / Xi

namespace {

LaurentSeries delta_coefficient(PowerSumCache& cache, long long exponent,
                                int prec) {
  if (exponent < INT_MIN / 2 || exponent > INT_MAX / 2)
    throw CapExceeded("delta coefficient exponent out of range");
  AnnulusSeries d = expand_delta(cache, 0, int(exponent), int(exponent), prec);
  return d.at(int(exponent));
}

}  // namespace

LaurentSeries upsilon_closed(PowerSumCache& cache, long long i, int prec) {
  const FieldCtx& F = cache.ctx();
  const int q = int(F.q());
  const long long k1 = q - 1;
  if (i != 0)
    return delta_coefficient(cache, -k1 - i * k1 * q, prec);

  const int Pin = prec + q * q + 2;
  const int Pa = Pin / q + 2;
  LaurentSeries acc(F, Pin);
  // [z^{-(q-1)}] (S1^q S2): terms s1(N)^q s2(qN), tail v >= k1 + qN
  for (long long N = 1; k1 + q * N < Pin; ++N) {
    LaurentSeries a = eis_pos_coeff(cache, int(k1), 0, N, Pa);
    if (a.is_exact_zero()) continue;
    LaurentSeries b = eis_neg_coeff(cache, int(k1), 0, q * N, Pin);
    acc = acc + a.frobenius_pow(1) * b;
  }
  // [z^{-(q-1)}] (S2^q S1): terms s2(M)^q s1((q-1)^2 + qM), tail q(k1+M)
  for (long long M = 0; M == 0 || q * (k1 + M) < Pin; ++M) {
    LaurentSeries a = eis_neg_coeff(cache, int(k1), 0, M, Pa);
    if (!a.is_exact_zero()) {
      LaurentSeries b = eis_pos_coeff(cache, int(k1), 0, k1 * k1 + q * M, Pin);
      acc = acc + a.frobenius_pow(1) * b;
    }
    if (M > 0 && q * (k1 + M) >= Pin) break;
  }
  const PolyT TqT = PolyT::monomial(F, 1, q) - PolyT::T(F);
  return (acc * embed(TqT).pow(q)).truncated(prec);
}

LaurentSeries xi_closed(PowerSumCache& cache, long long i, int prec) {
  const FieldCtx& F = cache.ctx();
  const int q = int(F.q());
  const long long k1 = q - 1;
  if (i != 1) return delta_coefficient(cache, -i * k1 * q, prec);

  const int Pin = prec + q * q + 2;
  const int Pa = Pin / q + 2;
  LaurentSeries acc(F, Pin);
  // [z^{-(q-1)q}] (S1^q S2): s1(N)^q s2(qN + (q-1)^2)
  for (long long N = 1; k1 + k1 * k1 + q * N < Pin; ++N) {
    LaurentSeries a = eis_pos_coeff(cache, int(k1), 0, N, Pa);
    if (a.is_exact_zero()) continue;
    LaurentSeries b =
        eis_neg_coeff(cache, int(k1), 0, q * N + k1 * k1, Pin);
    acc = acc + a.frobenius_pow(1) * b;
  }
  // [z^{-(q-1)q}] (S2^q S1): s2(M)^q s1(qM)
  for (long long M = 1; q * (k1 + M) < Pin; ++M) {
    LaurentSeries a = eis_neg_coeff(cache, int(k1), 0, M, Pa);
    if (a.is_exact_zero()) continue;
    LaurentSeries b = eis_pos_coeff(cache, int(k1), 0, q * M, Pin);
    acc = acc + a.frobenius_pow(1) * b;
  }
  const PolyT TqT = PolyT::monomial(F, 1, q) - PolyT::T(F);
  return (acc * embed(TqT).pow(q)).truncated(prec);
}

}  // namespace dmf
