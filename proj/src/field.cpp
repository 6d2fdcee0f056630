#include "dmf/field.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <sstream>

namespace dmf {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Construction-time polynomial helpers over a small field given by callbacks.
// Polynomials are coefficient vectors in ascending degree, trailing nonzero.
struct SmallFld {
  std::uint32_t n;
  std::function<fq(fq, fq)> add, mul;
  std::function<fq(fq)> neg;
};

using Poly = std::vector<fq>;

void ptrim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const SmallFld& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  ptrim(r);
  return r;
}

// Remainder of a modulo a monic polynomial.
Poly pmod(const SmallFld& F, Poly a, const Poly& mod) {
  ptrim(a);
  const size_t d = mod.size() - 1;
  while (a.size() > d) {
    fq lead = a.back();
    size_t shift = a.size() - 1 - d;
    for (size_t i = 0; i < d; ++i)
      a[shift + i] = F.add(a[shift + i], F.neg(F.mul(lead, mod[i])));
    a.pop_back();
    ptrim(a);
  }
  return a;
}

bool pdivides(const SmallFld& F, const Poly& div, const Poly& a) {
  // div monic
  Poly r = a;
  const size_t d = div.size() - 1;
  while (r.size() > d) {
    fq lead = r.back();
    size_t shift = r.size() - 1 - d;
    for (size_t i = 0; i <= d; ++i)
      r[shift + i] = F.add(r[shift + i], F.neg(F.mul(lead, div[i])));
    ptrim(r);
  }
  return r.empty();
}

bool is_irreducible(const SmallFld& F, const Poly& f) {
  const int deg = int(f.size()) - 1;
  if (deg <= 0) return false;
  if (deg == 1) return true;
  // trial division by every monic polynomial of degree 1..deg/2
  for (int d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= F.n;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = fq(c % F.n);
        c /= F.n;
      }
      g[d] = 1;
      if (pdivides(F, g, f)) return false;
    }
  }
  return true;
}

// Lexicographically least monic irreducible of the given degree: smallest
// packed code sum c_i n^i among the non-leading coefficients.
Poly least_irreducible(const SmallFld& F, int deg) {
  std::uint64_t count = 1;
  for (int i = 0; i < deg; ++i) count *= F.n;
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f(deg + 1, 0);
    std::uint64_t c = code;
    for (int i = 0; i < deg; ++i) {
      f[i] = fq(c % F.n);
      c /= F.n;
    }
    f[deg] = 1;
    if (is_irreducible(F, f)) return f;
  }
  throw ConfigError("no irreducible polynomial found");  // unreachable
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> fs;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      fs.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) fs.push_back(n);
  return fs;
}

}  // namespace

FieldCtx::FieldCtx(int p, int e, int m, FieldLimits limits)
    : p_(p), e_(e), m_(m) {
  if (!is_prime(p)) throw ConfigError("p must be prime");
  if (e < 1 || m < 1) throw ConfigError("e and m must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < e; ++i) q *= std::uint64_t(p);
  if (q < 2 || q > limits.q_cap)
    throw ConfigError("q = p^e exceeds configured cap");
  if (m > limits.m_cap) throw ConfigError("extension degree m exceeds cap");
  q_ = std::uint32_t(q);
  std::uint64_t Q = 1;
  for (int i = 0; i < m; ++i) Q *= q;
  Q_ = std::uint32_t(Q);

  pow_p_.resize(e_ * m_ + 1);
  pow_p_[0] = 1;
  for (int i = 1; i <= e_ * m_; ++i) pow_p_[i] = pow_p_[i - 1] * p_;

  // digitwise F_p^k addition on packed codes
  auto digit_add = [this](fq a, fq b) {
    if (p_ == 2) return a ^ b;
    fq r = 0;
    for (std::uint32_t pw = 1; a || b; pw *= p_) {
      r += pw * ((a % p_ + b % p_) % p_);
      a /= p_;
      b /= p_;
    }
    return r;
  };
  auto digit_neg = [this](fq a) {
    if (p_ == 2) return a;
    fq r = 0;
    for (std::uint32_t pw = 1; a; pw *= p_) {
      fq d = a % p_;
      r += pw * (d ? p_ - d : 0);
      a /= p_;
    }
    return r;
  };

  // F_q modulus over F_p
  SmallFld Fp{std::uint32_t(p_),
              [this](fq a, fq b) { return fq((a + b) % p_); },
              [this](fq a, fq b) { return fq((a * b) % p_); },
              [this](fq a) { return fq(a ? p_ - a : 0); }};
  fq_modulus_ = (e_ == 1) ? Poly{0, 1} : least_irreducible(Fp, e_);

  // F_q multiplication on codes < q via polynomial reduction, cached in a table
  std::vector<fq> fq_mul_tab(std::size_t(q_) * q_, 0);
  {
    auto unpack = [this](fq a) {
      Poly v;
      for (; a; a /= p_) v.push_back(a % p_);
      return v;
    };
    auto pack = [this](const Poly& v) {
      fq r = 0;
      for (size_t i = v.size(); i-- > 0;) r = r * p_ + v[i];
      return r;
    };
    for (fq a = 0; a < q_; ++a)
      for (fq b = 0; b < q_; ++b) {
        Poly prod = pmul(Fp, unpack(a), unpack(b));
        fq_mul_tab[std::size_t(a) * q_ + b] =
            pack(e_ == 1 ? prod : pmod(Fp, prod, fq_modulus_));
      }
  }
  SmallFld Fq{q_, digit_add,
              [&fq_mul_tab, this](fq a, fq b) {
                return fq_mul_tab[std::size_t(a) * q_ + b];
              },
              digit_neg};

  // F_{q^m} modulus over F_q
  fqm_modulus_ = (m_ == 1) ? Poly{0, 1} : least_irreducible(Fq, m_);

  // slow multiplication in F_{q^m} codes, used only to build the tables
  auto slow_mul = [&](fq a, fq b) -> fq {
    Poly va, vb;
    for (fq x = a; x; x /= q_) va.push_back(x % q_);
    for (fq x = b; x; x /= q_) vb.push_back(x % q_);
    Poly prod = pmul(Fq, va, vb);
    if (m_ > 1) prod = pmod(Fq, prod, fqm_modulus_);
    fq r = 0;
    for (size_t i = prod.size(); i-- > 0;) r = r * q_ + prod[i];
    return r;
  };
  auto slow_pow = [&](fq a, std::uint64_t n) {
    fq r = 1;
    while (n) {
      if (n & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      n >>= 1;
    }
    return r;
  };

  // multiplicative generator, then discrete-log tables
  auto factors = prime_factors(Q_ - 1);
  for (fq g = 1; g < Q_; ++g) {
    bool ok = g != 0;
    for (auto l : factors)
      if (slow_pow(g, (Q_ - 1) / l) == 1) {
        ok = false;
        break;
      }
    if (ok || Q_ == 2) {
      gen_ = g;
      break;
    }
  }
  exp_.resize(Q_ - 1);
  log_.assign(Q_, 0);
  fq cur = 1;
  for (std::uint32_t i = 0; i < Q_ - 1; ++i) {
    exp_[i] = cur;
    log_[cur] = i;
    cur = slow_mul(cur, gen_);
  }
  frob_.resize(Q_);
  frob_[0] = 0;
  for (fq a = 1; a < Q_; ++a)
    a == 1 ? frob_[a] = 1
           : frob_[a] = exp_[(std::uint64_t(log_[a]) * q_) % (Q_ - 1)];
}

fq FieldCtx::add(fq a, fq b) const {
  if (p_ == 2) return a ^ b;
  fq r = 0;
  for (int i = 0; (a || b) && i < e_ * m_; ++i) {
    r += pow_p_[i] * ((a % p_ + b % p_) % p_);
    a /= p_;
    b /= p_;
  }
  return r;
}

fq FieldCtx::neg(fq a) const {
  if (p_ == 2) return a;
  fq r = 0;
  for (int i = 0; a && i < e_ * m_; ++i) {
    fq d = a % p_;
    r += pow_p_[i] * (d ? p_ - d : 0);
    a /= p_;
  }
  return r;
}

fq FieldCtx::sub(fq a, fq b) const { return add(a, neg(b)); }

fq FieldCtx::pow(fq a, long long n) const {
  if (a == 0) {
    if (n == 0) return 1;  // global convention 0^0 = 1
    if (n > 0) return 0;
    throw InversionOfApparentZero("0 raised to a negative power");
  }
  long long ord = Q_ - 1;
  long long r = n % ord;
  if (r < 0) r += ord;
  return exp_[std::size_t((std::uint64_t(log_[a]) * std::uint64_t(r)) % ord)];
}

fq FieldCtx::from_int(long long n) const {
  long long r = n % p_;
  if (r < 0) r += p_;
  return fq(r);
}

std::string FieldCtx::elem_str(fq a) const { return std::to_string(a); }

json FieldCtx::elem_json(fq a) const {
  if (e_ * m_ == 1) return json(a);
  auto fq_json = [this](fq c) -> json {
    if (e_ == 1) return json(c);
    json arr = json::array();
    for (int i = 0; i < e_; ++i) {
      arr.push_back(c % p_);
      c /= p_;
    }
    return arr;
  };
  if (m_ == 1) return fq_json(a);
  json arr = json::array();
  for (int j = 0; j < m_; ++j) {
    arr.push_back(fq_json(a % q_));
    a /= q_;
  }
  return arr;
}

fq FieldCtx::elem_from_json(const json& j) const {
  std::function<fq(const json&, int, std::uint32_t)> rec =
      [&](const json& v, int len, std::uint32_t base) -> fq {
    if (v.is_number()) return v.get<fq>();
    fq r = 0;
    std::uint32_t pw = 1;
    for (int i = 0; i < len && i < int(v.size()); ++i) {
      const json& c = v[i];
      r += pw * (c.is_number() ? c.get<fq>() : rec(c, e_, p_));
      pw *= base;
    }
    return r;
  };
  if (j.is_number()) return j.get<fq>();
  if (m_ == 1) return rec(j, e_, p_);
  fq r = 0;
  std::uint32_t pw = 1;
  for (int i = 0; i < m_ && i < int(j.size()); ++i) {
    r += pw * rec(j[i], e_, p_);
    pw *= q_;
  }
  return r;
}

int binom_mod_p(long long n, long long k, int p) {
  if (k < 0 || n < 0 || k > n) return 0;
  int r = 1;
  while (n || k) {
    int nd = int(n % p), kd = int(k % p);
    if (kd > nd) return 0;
    // binom(nd, kd) mod p for digits < p
    long long b = 1;
    for (int i = 0; i < kd; ++i) b = b * (nd - i) / (i + 1);
    r = int((r * (b % p)) % p);
    n /= p;
    k /= p;
  }
  return r;
}

// ---------------------------------------------------------------------------
// PolyT

PolyT::PolyT(const FieldCtx& ctx, std::vector<fq> coeffs)
    : ctx_(&ctx), c_(std::move(coeffs)) {
  for (fq c : c_)
    if (c >= ctx.q()) throw ConfigError("PolyT coefficient outside F_q");
  normalize();
}

void PolyT::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyT PolyT::one(const FieldCtx& ctx) { return PolyT(ctx, {1}); }
PolyT PolyT::T(const FieldCtx& ctx) { return PolyT(ctx, {0, 1}); }

PolyT PolyT::monomial(const FieldCtx& ctx, fq c, int d) {
  std::vector<fq> v(d + 1, 0);
  v[d] = c;
  return PolyT(ctx, std::move(v));
}

PolyT PolyT::operator+(const PolyT& o) const {
  std::vector<fq> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = ctx_->add(i < c_.size() ? c_[i] : 0, i < o.c_.size() ? o.c_[i] : 0);
  return PolyT(*ctx_, std::move(r));
}

PolyT PolyT::operator-() const {
  std::vector<fq> r = c_;
  for (auto& c : r) c = ctx_->neg(c);
  PolyT out;
  out.ctx_ = ctx_;
  out.c_ = std::move(r);
  return out;
}

PolyT PolyT::operator-(const PolyT& o) const { return *this + (-o); }

PolyT PolyT::operator*(const PolyT& o) const {
  if (c_.empty() || o.c_.empty()) return PolyT(*ctx_);
  std::vector<fq> r(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = ctx_->add(r[i + j], ctx_->mul(c_[i], o.c_[j]));
  }
  return PolyT(*ctx_, std::move(r));
}

PolyT PolyT::scaled(fq c) const {
  std::vector<fq> r = c_;
  for (auto& x : r) x = ctx_->mul(x, c);
  return PolyT(*ctx_, std::move(r));
}

PolyT PolyT::pow(long long n) const {
  if (n < 0) throw ConfigError("PolyT::pow: negative exponent");
  PolyT r = one(*ctx_), b = *this;
  while (n) {
    if (n & 1) r = r * b;
    if (n >>= 1) b = b * b;
  }
  return r;
}

PolyT PolyT::divmod(const PolyT& den, PolyT* rem) const {
  if (den.is_zero()) throw ZeroDenominator("PolyT division by zero");
  PolyT q(*ctx_);
  q.c_.assign(std::max<size_t>(c_.size(), 1), 0);
  PolyT r = *this;
  fq dl_inv = ctx_->inv(den.leading());
  while (r.degree() >= den.degree()) {
    int shift = r.degree() - den.degree();
    fq f = ctx_->mul(r.leading(), dl_inv);
    q.c_[shift] = f;
    for (int i = 0; i <= den.degree(); ++i)
      r.c_[shift + i] =
          ctx_->sub(r.c_[shift + i], ctx_->mul(f, den.coeff(i)));
    r.normalize();
  }
  q.normalize();
  if (rem) *rem = r;
  return q;
}

std::string PolyT::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || c_[i] != 1) os << ctx_->elem_str(c_[i]);
    if (i > 0) {
      if (c_[i] != 1) os << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

json PolyT::to_json() const {
  json arr = json::array();
  for (fq c : c_) arr.push_back(ctx_->elem_json(c));
  return arr;
}

PolyT PolyT::from_json(const FieldCtx& ctx, const json& j) {
  std::vector<fq> v;
  for (const auto& c : j) v.push_back(ctx.elem_from_json(c));
  return PolyT(ctx, std::move(v));
}

// ---------------------------------------------------------------------------
// LaurentSeries

namespace {
// clamped precision addition: an exact operand (or exact-zero valuation)
// absorbs any finite shift
int padd(int a, int b) {
  if (a >= LaurentSeries::kExact || b >= LaurentSeries::kExact)
    return LaurentSeries::kExact;
  long long s = (long long)a + b;
  if (s >= LaurentSeries::kExact) return LaurentSeries::kExact;
  if (s <= -LaurentSeries::kExact) return -LaurentSeries::kExact;
  return int(s);
}
}  // namespace

LaurentSeries::LaurentSeries(const FieldCtx& ctx, int lead,
                             std::vector<fq> coeffs, int prec)
    : ctx_(&ctx), lead_(lead), c_(std::move(coeffs)), prec_(prec) {
  normalize();
}

void LaurentSeries::normalize() {
  size_t skip = 0;
  while (skip < c_.size() && c_[skip] == 0) ++skip;
  if (skip) {
    c_.erase(c_.begin(), c_.begin() + skip);
    lead_ += int(skip);
  }
  if (prec_ != kExact && lead_ + int(c_.size()) > prec_)
    c_.resize(std::max(0, prec_ - lead_));
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (c_.empty()) lead_ = 0;
}

LaurentSeries LaurentSeries::one(const FieldCtx& ctx, int prec) {
  return monomial(ctx, 1, 0, prec);
}

LaurentSeries LaurentSeries::monomial(const FieldCtx& ctx, fq c, int exp,
                                      int prec) {
  return LaurentSeries(ctx, exp, {c}, prec);
}

fq LaurentSeries::coeff(int exp) const {
  if (prec_ != kExact && exp >= prec_)
    throw InsufficientPrecision("coefficient at pi^" + std::to_string(exp) +
                                " is beyond precision O(pi^" +
                                std::to_string(prec_) + ")");
  if (exp < lead_ || exp >= lead_ + int(c_.size())) return 0;
  return c_[exp - lead_];
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
  const FieldCtx& K = ctx_ ? *ctx_ : *o.ctx_;
  int prec = std::min(prec_, o.prec_);
  if (c_.empty() && o.c_.empty()) return LaurentSeries(K, prec);
  int lo = c_.empty() ? o.lead_ : (o.c_.empty() ? lead_ : std::min(lead_, o.lead_));
  int hi = std::max(lead_ + int(c_.size()), o.lead_ + int(o.c_.size()));
  if (prec != kExact) hi = std::min(hi, prec);
  if (hi <= lo) return LaurentSeries(K, prec);
  std::vector<fq> r(hi - lo, 0);
  for (int i = 0; i < int(c_.size()); ++i) {
    int at = lead_ + i - lo;
    if (at >= 0 && at < int(r.size())) r[at] = c_[i];
  }
  for (int i = 0; i < int(o.c_.size()); ++i) {
    int at = o.lead_ + i - lo;
    if (at >= 0 && at < int(r.size())) r[at] = K.add(r[at], o.c_[i]);
  }
  return LaurentSeries(K, lo, std::move(r), prec);
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  if (ctx_)
    for (auto& c : r.c_) c = ctx_->neg(c);
  return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
  return *this + (-o);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
  const FieldCtx& K = ctx_ ? *ctx_ : *o.ctx_;
  // prec = min(prec_a + v(b), prec_b + v(a)); for zero-to-precision operands
  // valuation() is the certified lower bound prec.
  int prec = std::min(padd(prec_, o.valuation()), padd(o.prec_, valuation()));
  if (c_.empty() || o.c_.empty()) return LaurentSeries(K, prec);
  int lo = lead_ + o.lead_;
  int len = int(c_.size() + o.c_.size()) - 1;
  if (prec != kExact) len = std::min(len, prec - lo);
  if (len <= 0) return LaurentSeries(K, prec);
  std::vector<fq> r(len, 0);
  for (int i = 0; i < int(c_.size()); ++i) {
    if (c_[i] == 0) continue;
    int jmax = std::min(int(o.c_.size()), len - i);
    for (int j = 0; j < jmax; ++j)
      r[i + j] = K.add(r[i + j], K.mul(c_[i], o.c_[j]));
  }
  return LaurentSeries(K, lo, std::move(r), prec);
}

LaurentSeries LaurentSeries::scaled(fq c) const {
  if (!ctx_) return *this;
  LaurentSeries r = *this;
  for (auto& x : r.c_) x = ctx_->mul(x, c);
  r.normalize();
  return r;
}

LaurentSeries LaurentSeries::shifted(int k) const {
  LaurentSeries r = *this;
  r.lead_ += k;
  if (r.prec_ != kExact) r.prec_ = padd(r.prec_, k);
  return r;
}

LaurentSeries LaurentSeries::inverse(int target_prec) const {
  if (c_.empty())
    throw InversionOfApparentZero(
        "inverse: all known digits vanish (0 mod pi^" +
        (is_exact() ? std::string("inf") : std::to_string(prec_)) + ")");
  const int v = lead_;
  if (is_exact() && c_.size() == 1)
    return monomial(*ctx_, ctx_->inv(c_[0]), -v, kExact);
  int out_prec;
  if (is_exact()) {
    if (target_prec == kNoTarget)
      throw InsufficientPrecision(
          "inverse of an exact non-monomial series requires a target "
          "precision");
    out_prec = target_prec;
  } else {
    out_prec = padd(prec_, -2 * v);  // standard propagation
    if (target_prec != kNoTarget) out_prec = std::min(out_prec, target_prec);
  }
  int rel = out_prec + v;  // digits of the result, which starts at pi^{-v}
  if (rel <= 0) return LaurentSeries(*ctx_, out_prec);
  std::vector<fq> b(rel, 0);
  fq a0inv = ctx_->inv(c_[0]);
  b[0] = a0inv;
  for (int i = 1; i < rel; ++i) {
    fq s = 0;
    int tmax = std::min(i, int(c_.size()) - 1);
    for (int t = 1; t <= tmax; ++t) s = ctx_->add(s, ctx_->mul(c_[t], b[i - t]));
    b[i] = ctx_->neg(ctx_->mul(a0inv, s));
  }
  return LaurentSeries(*ctx_, -v, std::move(b), out_prec);
}

LaurentSeries LaurentSeries::pow(long long n, int target_prec) const {
  if (n == 0) return one(*ctx_);
  if (n < 0) return inverse(target_prec).pow(-n);
  // base-q powering: the q-power steps are exact Frobenius twists
  const std::uint32_t q = ctx_->q();
  std::vector<int> digits;
  for (long long t = n; t; t /= q) digits.push_back(int(t % q));
  LaurentSeries r = one(*ctx_);
  for (size_t i = digits.size(); i-- > 0;) {
    r = r.frobenius_pow(1);
    for (int rep = 0; rep < digits[i]; ++rep) r = r * *this;
  }
  return r;
}

LaurentSeries LaurentSeries::frobenius_pow(int j) const {
  if (j == 0 || !ctx_) return *this;
  LaurentSeries r = *this;
  long long scale = 1;
  for (int t = 0; t < j; ++t) scale *= ctx_->q();
  for (auto& c : r.c_) {
    for (int t = 0; t < j; ++t) c = ctx_->frobenius_q(c);
  }
  // exponents and precision scale by q^j
  std::vector<fq> spread;
  if (!r.c_.empty()) {
    spread.assign(std::size_t((r.c_.size() - 1) * scale + 1), 0);
    for (size_t i = 0; i < r.c_.size(); ++i) spread[i * scale] = r.c_[i];
  }
  int lead = int(std::max<long long>(std::min<long long>(
      (long long)r.lead_ * scale, kExact), -(long long)kExact));
  int prec = r.prec_;
  if (prec != kExact) {
    long long pp = (long long)prec * scale;
    prec = int(std::max<long long>(std::min<long long>(pp, kExact - 1),
                                   -(long long)kExact));
  }
  return LaurentSeries(*ctx_, lead, std::move(spread), prec);
}

LaurentSeries LaurentSeries::truncated(int prec) const {
  LaurentSeries r = *this;
  r.prec_ = std::min(r.prec_, prec);
  r.normalize();
  return r;
}

bool LaurentSeries::agrees_with(const LaurentSeries& o) const {
  int P = std::min(prec_, o.prec_);
  int lo = std::min(c_.empty() ? P : lead_, o.c_.empty() ? P : o.lead_);
  for (int x = lo; x < P; ++x) {
    fq a = (x < lead_ || x >= lead_ + int(c_.size())) ? 0 : c_[x - lead_];
    fq b = (x < o.lead_ || x >= o.lead_ + int(o.c_.size())) ? 0
                                                            : o.c_[x - o.lead_];
    if (a != b) return false;
    if (x > P) break;
  }
  return true;
}

std::string LaurentSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    int ex = lead_ + int(i);
    if (ex == 0 || c_[i] != 1) os << ctx_->elem_str(c_[i]);
    if (ex != 0) {
      if (c_[i] != 1) os << "*";
      os << "pi";
      if (ex != 1) os << "^" << ex;
    }
  }
  if (!is_exact()) {
    if (!first) os << " + ";
    os << "O(pi^" << prec_ << ")";
  } else if (first) {
    os << "0";
  }
  return os.str();
}

json LaurentSeries::to_json() const {
  json j;
  j["lead"] = lead_;
  json arr = json::array();
  for (fq c : c_) arr.push_back(ctx_->elem_json(c));
  j["coeffs"] = arr;
  if (is_exact())
    j["prec"] = nullptr;
  else
    j["prec"] = prec_;
  return j;
}

LaurentSeries LaurentSeries::from_json(const FieldCtx& ctx, const json& j) {
  std::vector<fq> v;
  for (const auto& c : j.at("coeffs")) v.push_back(ctx.elem_from_json(c));
  int prec = j.at("prec").is_null() ? kExact : j.at("prec").get<int>();
  return LaurentSeries(ctx, j.at("lead").get<int>(), std::move(v), prec);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Scanner {
  const std::string& s;
  size_t i = 0;
  explicit Scanner(const std::string& str) : s(str) {}
  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool eat_word(const char* w) {
    skip();
    size_t len = std::strlen(w);
    if (s.compare(i, len, w) == 0) {
      i += len;
      return true;
    }
    return false;
  }
  bool done() {
    skip();
    return i >= s.size();
  }
  long long integer() {
    skip();
    bool neg = eat('-');
    if (!neg) eat('+');
    skip();
    if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
      throw dmf::ParseError("expected integer in '" + s + "' at position " +
                            std::to_string(i));
    long long v = 0;
    while (i < s.size() && std::isdigit((unsigned char)s[i]))
      v = v * 10 + (s[i++] - '0');
    return neg ? -v : v;
  }
};

// term := [code] ['*'] [var ['^' int]]; expr := ['-'] term (('+'|'-') term)*
template <typename AddMono>
void parse_sum(const FieldCtx& ctx, const std::string& str, const char* var,
               AddMono&& add_mono, int* prec_out) {
  Scanner sc(str);
  bool neg = sc.eat('-');
  while (true) {
    sc.skip();
    if (prec_out && sc.eat_word("O(")) {
      if (!sc.eat_word(var)) throw ParseError("expected O(" + std::string(var) + "^N) in '" + str + "'");
      long long n = sc.eat('^') ? sc.integer() : 1;
      if (!sc.eat(')')) throw ParseError("expected ')' in '" + str + "'");
      *prec_out = int(n);
    } else {
      fq c = 1;
      bool have_coeff = false;
      sc.skip();
      if (sc.i < sc.s.size() && std::isdigit((unsigned char)sc.s[sc.i])) {
        c = fq(sc.integer());
        have_coeff = true;
      }
      sc.eat('*');
      long long ex = 0;
      if (sc.eat_word(var)) {
        ex = sc.eat('^') ? sc.integer() : 1;
      } else if (!have_coeff) {
        throw ParseError("expected term in '" + str + "'");
      }
      if (neg) c = ctx.neg(c);
      add_mono(c, int(ex));
    }
    if (sc.done()) break;
    if (sc.eat('+'))
      neg = false;
    else if (sc.eat('-'))
      neg = true;
    else
      throw ParseError("unexpected input in '" + str + "' at position " +
                       std::to_string(sc.i));
  }
}

}  // namespace

PolyT PolyT::from_string(const FieldCtx& ctx, const std::string& s) {
  std::vector<fq> coeffs;
  parse_sum(ctx, s, "T",
            [&](fq c, int ex) {
              if (ex < 0) throw ParseError("negative T-exponent in PolyT");
              if (int(coeffs.size()) <= ex) coeffs.resize(ex + 1, 0);
              coeffs[ex] = ctx.add(coeffs[ex], c);
            },
            nullptr);
  return PolyT(ctx, std::move(coeffs));
}

LaurentSeries LaurentSeries::from_string(const FieldCtx& ctx,
                                         const std::string& s) {
  std::vector<std::pair<int, fq>> monos;
  int prec = kExact;
  parse_sum(ctx, s, "pi",
            [&](fq c, int ex) { monos.emplace_back(ex, c); }, &prec);
  if (monos.empty()) return LaurentSeries(ctx, prec);
  int lo = monos[0].first, hi = monos[0].first;
  for (auto& [ex, c] : monos) lo = std::min(lo, ex), hi = std::max(hi, ex);
  std::vector<fq> v(hi - lo + 1, 0);
  for (auto& [ex, c] : monos) v[ex - lo] = ctx.add(v[ex - lo], c);
  return LaurentSeries(ctx, lo, std::move(v), prec);
}

// ---------------------------------------------------------------------------

LaurentSeries embed(const PolyT& a) {
  if (a.is_zero()) return LaurentSeries::zero(a.ctx());
  std::vector<fq> v(a.coeffs().rbegin(), a.coeffs().rend());
  return LaurentSeries(a.ctx(), -a.degree(), std::move(v));
}

LaurentSeries one_unit_part(const PolyT& a) {
  if (a.is_zero()) throw ZeroInput("one_unit_part of 0");
  std::vector<fq> v(a.coeffs().rbegin(), a.coeffs().rend());
  return LaurentSeries(a.ctx(), 0, std::move(v));
}

LaurentSeries embed_rational(const PolyT& num, const PolyT& den, int prec) {
  if (den.is_zero()) throw ZeroDenominator("embed_rational: denominator is 0");
  if (num.is_zero()) return LaurentSeries(num.ctx(), prec);
  LaurentSeries n = embed(num);
  LaurentSeries d_inv = embed(den).inverse(prec - n.valuation());
  return (n * d_inv).truncated(prec);
}

}  // namespace dmf
