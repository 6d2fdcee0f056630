#include "dmf/carlitz.hpp"

#include <algorithm>

namespace dmf {

int floor_log_q(long long j, int q) {
  int s = 0;
  while (j >= q) {
    j /= q;
    ++s;
  }
  return s;
}

long long mu_weight(long long n, int l, int q) {
  long long sum = 0;
  long long pw = 1;
  for (int i = 1; pw <= n; ++i) {
    pw *= q;
    if (i >= l + 1) sum += n / pw;
  }
  return sum;
}

CarlitzCache::CarlitzCache(const FieldCtx& ctx, int bound)
    : ctx_(&ctx), bound_(bound) {
  const int q = int(ctx.q());
  LaurentSeries pi = LaurentSeries::pi(ctx);
  LaurentSeries one = LaurentSeries::one(ctx);
  L_[0] = one;
  D_[0] = one;
  e_[0] = {one};  // e_0(x) = x
  long long qi = 1;
  for (int i = 1; i <= bound; ++i) {
    qi *= q;
    bracket_[i] = LaurentSeries::monomial(ctx, 1, int(qi)) - pi;
    L_[i] = bracket_[i] * L_[i - 1];
    D_[i] = bracket_[i] * D_[i - 1].pow(q);
    // e_{i}(x) = e_{i-1}(x)^q - e_{i-1}(pi^{i-1})^{q-1} e_{i-1}(x)
    const auto& prev = e_[i - 1];
    LaurentSeries at_pi = eval_e(i - 1, LaurentSeries::monomial(ctx, 1, i - 1));
    LaurentSeries factor = at_pi.pow(q - 1);
    std::vector<LaurentSeries> cur(prev.size() + 1, LaurentSeries::zero(ctx));
    for (size_t j = 0; j < prev.size(); ++j) {
      cur[j + 1] = prev[j].frobenius_pow(1);
      cur[j] = cur[j] - factor * prev[j];
    }
    e_[i] = std::move(cur);
  }
}

LaurentSeries CarlitzCache::eval_e(int i, const LaurentSeries& x) const {
  const auto& cs = e_.at(i);
  LaurentSeries acc = LaurentSeries::zero(*ctx_);
  LaurentSeries xq = x;  // x^(q^j)
  for (size_t j = 0; j < cs.size(); ++j) {
    acc = acc + cs[j] * xq;
    if (j + 1 < cs.size()) xq = xq.frobenius_pow(1);
  }
  return acc;
}

LaurentSeries CarlitzCache::eval_E(int i, const LaurentSeries& x,
                                   int prec) const {
  LaurentSeries num = eval_e(i, x);
  if (num.is_exact_zero()) return num;
  if (num.is_zero_to_prec()) return num.truncated(prec);
  return (num * D_.at(i).inverse(prec - num.valuation() + 1)).truncated(prec);
}

LaurentSeries CarlitzCache::eval_G(long long n, const LaurentSeries& x,
                                   int prec) const {
  const int q = int(ctx_->q());
  LaurentSeries num = LaurentSeries::one(*ctx_);
  LaurentSeries den = LaurentSeries::one(*ctx_);
  int i = 0;
  for (long long t = n; t; t /= q, ++i) {
    int digit = int(t % q);
    if (digit == 0) continue;
    if (i > bound_) throw CapExceeded("Carlitz cache bound exceeded");
    num = num * eval_e(i, x).pow(digit);
    den = den * D_.at(i).pow(digit);
  }
  if (num.is_exact_zero()) return num;
  if (num.is_zero_to_prec()) return num.truncated(prec);
  return (num * den.inverse(prec - num.valuation() + 1)).truncated(prec);
}

std::vector<LaurentSeries> CarlitzCache::numerator_poly(long long n) const {
  const int q = int(ctx_->q());
  std::vector<LaurentSeries> poly{LaurentSeries::one(*ctx_)};
  int i = 0;
  for (long long t = n; t; t /= q, ++i) {
    int digit = int(t % q);
    if (digit == 0) continue;
    if (i > bound_) throw CapExceeded("Carlitz cache bound exceeded");
    // multiply by e_i(x)^digit; e_i is sparse with terms at x^{q^j} only
    long long deg_ei = 1;
    for (int r = 0; r < i; ++r) deg_ei *= q;
    const auto& cs = e_.at(i);
    for (int rep = 0; rep < digit; ++rep) {
      std::vector<LaurentSeries> out(poly.size() + std::size_t(deg_ei),
                                     LaurentSeries::zero(*ctx_));
      long long qpow = 1;
      for (size_t j = 0; j < cs.size(); ++j) {
        if (!cs[j].is_zero_to_prec()) {
          for (size_t d = 0; d < poly.size(); ++d)
            out[d + std::size_t(qpow)] =
                out[d + std::size_t(qpow)] + cs[j] * poly[d];
        }
        qpow *= q;
      }
      poly = std::move(out);
    }
  }
  return poly;
}

LaurentSeries CarlitzCache::denominator(long long n) const {
  const int q = int(ctx_->q());
  LaurentSeries den = LaurentSeries::one(*ctx_);
  int i = 0;
  for (long long t = n; t; t /= q, ++i) {
    int digit = int(t % q);
    if (digit == 0) continue;
    den = den * D_.at(i).pow(digit);
  }
  return den;
}

std::vector<LaurentSeries> CarlitzCache::G_poly(long long n, int prec) const {
  auto num = numerator_poly(n);
  LaurentSeries den = denominator(n);
  LaurentSeries dinv =
      den.is_exact() && den.size() == 1
          ? den.inverse()
          : den.inverse(prec + std::abs(den.valuation()) + 1);
  for (auto& c : num) c = (c * dinv).truncated(prec);
  return num;
}

LaurentSeries CarlitzCache::point(long long t) const {
  const int q = int(ctx_->q());
  std::vector<fq> digits;
  for (long long v = t; v; v /= q) digits.push_back(fq(v % q));
  if (digits.empty()) return LaurentSeries::zero(*ctx_);
  return LaurentSeries(*ctx_, 0, std::move(digits));
}

// ---------------------------------------------------------------------------

BanachExpansion carlitz_expand_poly(const std::vector<LaurentSeries>& monomial,
                                    const CarlitzCache& cache) {
  const FieldCtx& K = cache.ctx();
  std::vector<LaurentSeries> b = monomial;
  while (!b.empty() && b.back().is_zero_to_prec() && b.back().is_exact())
    b.pop_back();
  BanachExpansion out;
  out.space = BanachExpansion::Space::C0;
  out.a.assign(b.size(), LaurentSeries::zero(K));
  for (long long n = (long long)b.size() - 1; n >= 0; --n) {
    if (b[n].is_zero_to_prec() && b[n].is_exact()) continue;
    // leading coefficient of G_n is 1/d_n, so a_n = b_n * d_n -- exact
    LaurentSeries an = b[n] * cache.denominator(n);
    out.a[n] = an;
    // subtract a_n G_n = b_n * numerator_poly(n) exactly
    auto num = cache.numerator_poly(n);
    for (size_t d = 0; d < num.size(); ++d)
      b[d] = b[d] - b[n] * num[d];
  }
  return out;
}

BanachExpansion expand_continuous(const PointOracle& f, long long n_max,
                                  const CarlitzCache& cache, int prec) {
  const FieldCtx& K = cache.ctx();
  const long long N = n_max;
  // Newton interpolation on alpha_0..alpha_N
  std::vector<LaurentSeries> pts;
  for (long long t = 0; t <= N; ++t) pts.push_back(cache.point(t));
  std::vector<LaurentSeries> c;  // divided-difference coefficients
  for (long long t = 0; t <= N; ++t) {
    LaurentSeries val = f(pts[t], prec);
    LaurentSeries acc = LaurentSeries::zero(K, prec);
    LaurentSeries omega = LaurentSeries::one(K);  // prod_{r<s}(alpha_t - alpha_r)
    for (long long s = 0; s < t; ++s) {
      acc = acc + c[s] * omega;
      omega = omega * (pts[t] - pts[s]);
    }
    LaurentSeries resid = val - acc;
    LaurentSeries ct =
        resid.is_zero_to_prec()
            ? LaurentSeries(K, resid.prec() - omega.valuation())
            : resid * omega.inverse(resid.prec() - omega.valuation());
    c.push_back(ct.truncated(prec));
  }
  // expand the Newton form to monomials
  std::vector<LaurentSeries> mono(N + 1, LaurentSeries::zero(K));
  std::vector<LaurentSeries> omega_poly{LaurentSeries::one(K)};
  for (long long t = 0; t <= N; ++t) {
    for (size_t d = 0; d < omega_poly.size(); ++d)
      mono[d] = mono[d] + c[t] * omega_poly[d];
    if (t < N) {
      // omega *= (x - alpha_t)
      omega_poly.insert(omega_poly.begin(), LaurentSeries::zero(K));
      for (size_t d = 0; d + 1 < omega_poly.size(); ++d)
        omega_poly[d] = omega_poly[d] - pts[t] * omega_poly[d + 1];
    }
  }
  return carlitz_expand_poly(mono, cache);
}

NormBound ch_norm(const BanachExpansion& exp, int h, int q) {
  NormBound nb;
  long long best = 0;
  bool found = false;
  long long bound = 0;
  for (size_t j = 0; j < exp.a.size(); ++j) {
    long long weight = j >= 1 ? (long long)h * floor_log_q((long long)j, q) : 0;
    const auto& a = exp.a[j];
    if (a.is_zero_to_prec()) {
      long long ub = weight - a.valuation();
      bound = found ? bound : std::max(bound, ub);
      continue;
    }
    long long ex = weight - a.valuation();
    if (!found || ex > best) best = ex;
    found = true;
  }
  nb.attained = found;
  nb.exponent = found ? best : bound;
  return nb;
}

std::vector<LaurentSeries> hyperderivative(
    const std::vector<LaurentSeries>& coeffs, int j) {
  if (coeffs.empty()) return {};
  const FieldCtx& K = coeffs.front().ctx();
  std::vector<LaurentSeries> out;
  for (size_t i = j; i < coeffs.size(); ++i) {
    int b = binom_mod_p((long long)i, j, K.p());
    out.push_back(coeffs[i].scaled(K.from_int(b)));
  }
  return out;
}

LaurentSeries kernel_hyperderivative(const LaurentSeries& z,
                                     const LaurentSeries& a, int j, int prec) {
  LaurentSeries w = z - a;
  if (w.is_zero_to_prec())
    throw ZeroDenominator("kernel hyperderivative at z = a");
  int v = w.valuation();
  return w.inverse(prec + (j + 1) * std::abs(v) + 1)
      .pow(j + 1)
      .truncated(prec);
}

}  // namespace dmf
