#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dmf/errors.hpp"
#include "json.hpp"

namespace dmf {

using json = nlohmann::ordered_json;

/// Code of an element of the coefficient field F_{q^m}.
///
/// The code packs the coefficient vector of the element in the tower basis
/// {x^i y^j : 0 <= i < e, 0 <= j < m}: code = sum_j fq_code(c_j) * q^j where
/// fq_code(c) = sum_i c_i p^i.  Codes < q are exactly the subfield F_q,
/// codes < p the prime field.
using fq = std::uint32_t;

struct FieldLimits {
  std::uint32_t q_cap = 16;
  int m_cap = 4;
};

/// Exact arithmetic context for F_p, F_q = F_p[x]/(f), and F_{q^m} = F_q[y]/(g).
///
/// The moduli f, g are the lexicographically least irreducibles (smallest
/// packed code, constant term first).  All operations work on codes; the
/// context is immutable after construction and safe to share between threads.
class FieldCtx {
 public:
  FieldCtx(int p, int e, int m, FieldLimits limits = {});

  int p() const { return p_; }
  int e() const { return e_; }
  int m() const { return m_; }
  std::uint32_t q() const { return q_; }
  std::uint32_t order() const { return Q_; }  // q^m

  const std::vector<std::uint32_t>& fq_modulus() const { return fq_modulus_; }
  const std::vector<fq>& fqm_modulus() const { return fqm_modulus_; }

  fq add(fq a, fq b) const;
  fq sub(fq a, fq b) const;
  fq neg(fq a) const;
  fq mul(fq a, fq b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (Q_ - 1)];
  }
  fq inv(fq a) const {
    if (a == 0) throw InversionOfApparentZero("field inverse of 0");
    return exp_[(Q_ - 1 - log_[a]) % (Q_ - 1)];
  }
  fq div(fq a, fq b) const { return mul(a, inv(b)); }
  /// a^n, with 0^0 = 1 and negative exponents via the inverse.
  fq pow(fq a, long long n) const;
  /// The q-power Frobenius x -> x^q on F_{q^m}.
  fq frobenius_q(fq a) const { return frob_[a]; }
  /// Prime-field image of an integer (residue mod p).
  fq from_int(long long n) const;
  bool in_fq(fq a) const { return a < q_; }

  /// Multiplicative generator of F_{q^m}^* used for the discrete-log tables.
  fq generator() const { return gen_; }

  std::string elem_str(fq a) const;
  json elem_json(fq a) const;
  fq elem_from_json(const json& j) const;

 private:
  int p_, e_, m_;
  std::uint32_t q_, Q_;
  std::vector<std::uint32_t> fq_modulus_;
  std::vector<fq> fqm_modulus_;
  std::vector<fq> exp_, log_, frob_;
  std::vector<std::uint32_t> pow_p_;  // p^i for digit packing
  fq gen_ = 0;
};

/// Binomial coefficient mod p by the Lucas digit product (base p).
int binom_mod_p(long long n, long long k, int p);

inline constexpr int kNegInfDeg = std::numeric_limits<int>::min() / 2;

/// Polynomial in T over F_q (codes < q).  deg(0) = kNegInfDeg stands for -inf.
class PolyT {
 public:
  PolyT() : ctx_(nullptr) {}
  explicit PolyT(const FieldCtx& ctx) : ctx_(&ctx) {}
  PolyT(const FieldCtx& ctx, std::vector<fq> coeffs);
  static PolyT zero(const FieldCtx& ctx) { return PolyT(ctx); }
  static PolyT one(const FieldCtx& ctx);
  static PolyT T(const FieldCtx& ctx);                     // the variable
  static PolyT monomial(const FieldCtx& ctx, fq c, int d);
  static PolyT from_string(const FieldCtx& ctx, const std::string& s);

  const FieldCtx& ctx() const { return *ctx_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? kNegInfDeg : int(c_.size()) - 1; }
  fq coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[i] : 0; }
  fq leading() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<fq>& coeffs() const { return c_; }

  PolyT operator+(const PolyT& o) const;
  PolyT operator-(const PolyT& o) const;
  PolyT operator-() const;
  PolyT operator*(const PolyT& o) const;
  PolyT scaled(fq c) const;
  PolyT pow(long long n) const;
  /// Euclidean division: returns quotient, stores remainder via out-param.
  PolyT divmod(const PolyT& den, PolyT* rem) const;
  bool operator==(const PolyT& o) const { return c_ == o.c_; }
  bool operator!=(const PolyT& o) const { return c_ != o.c_; }

  std::string str() const;
  json to_json() const;
  static PolyT from_json(const FieldCtx& ctx, const json& j);

 private:
  void normalize();
  const FieldCtx* ctx_;
  std::vector<fq> c_;  // c_[i] = coefficient of T^i, trailing entry nonzero
};

/// Truncated Laurent series in the uniformizer pi = 1/T over F_{q^m}.
///
/// Absolute-precision model: a series with prec = N is known modulo pi^N.
/// prec == kExact marks an exact finite Laurent polynomial in pi (the only
/// values for which exact equality tests are meaningful).  Invariants:
/// coeffs.front() != 0 unless the series is 0 mod pi^prec, and
/// lead + coeffs.size() <= prec.
class LaurentSeries {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max() / 4;
  static constexpr int kNoTarget = std::numeric_limits<int>::min();

  LaurentSeries() : ctx_(nullptr), lead_(0), prec_(kExact) {}
  /// Zero known modulo pi^prec (exact zero when prec == kExact).
  LaurentSeries(const FieldCtx& ctx, int prec)
      : ctx_(&ctx), lead_(0), prec_(prec) {}
  LaurentSeries(const FieldCtx& ctx, int lead, std::vector<fq> coeffs,
                int prec = kExact);

  static LaurentSeries zero(const FieldCtx& ctx, int prec = kExact) {
    return LaurentSeries(ctx, prec);
  }
  static LaurentSeries one(const FieldCtx& ctx, int prec = kExact);
  static LaurentSeries monomial(const FieldCtx& ctx, fq c, int exp,
                                int prec = kExact);
  static LaurentSeries pi(const FieldCtx& ctx, int prec = kExact) {
    return monomial(ctx, 1, 1, prec);
  }
  static LaurentSeries from_string(const FieldCtx& ctx, const std::string& s);

  const FieldCtx& ctx() const { return *ctx_; }
  bool has_ctx() const { return ctx_ != nullptr; }
  int prec() const { return prec_; }
  bool is_exact() const { return prec_ == kExact; }
  bool is_zero_to_prec() const { return c_.empty(); }
  bool is_exact_zero() const { return c_.empty() && prec_ == kExact; }
  /// Valuation: lead exponent of the first nonzero digit; for a series that
  /// is 0 mod pi^N this returns N (a certified lower bound on v).
  int valuation() const { return c_.empty() ? prec_ : lead_; }
  int lead() const { return lead_; }
  const std::vector<fq>& coeffs() const { return c_; }
  fq coeff(int exp) const;
  /// Number of stored digits.
  int size() const { return int(c_.size()); }

  LaurentSeries operator+(const LaurentSeries& o) const;
  LaurentSeries operator-(const LaurentSeries& o) const;
  LaurentSeries operator-() const;
  LaurentSeries operator*(const LaurentSeries& o) const;
  LaurentSeries scaled(fq c) const;
  /// Multiplication by pi^k.
  LaurentSeries shifted(int k) const;
  /// Series inverse.  target_prec picks the absolute precision of the result
  /// when the input is exact (mandatory then, unless the input is a single
  /// monomial); for truncated input the default follows prec - 2 v(a).
  LaurentSeries inverse(int target_prec = kNoTarget) const;
  /// a^n with 0^0 = 1; n < 0 via inverse (target precision as in inverse()).
  LaurentSeries pow(long long n, int target_prec = kNoTarget) const;
  /// The exact q^j-power Frobenius: coefficients to the q^j, exponents * q^j.
  LaurentSeries frobenius_pow(int j = 1) const;
  LaurentSeries truncated(int prec) const;

  /// Equality as far as both precisions allow: all digits below
  /// min(prec, o.prec) agree.  Exact series compare exactly.
  bool agrees_with(const LaurentSeries& o) const;
  bool operator==(const LaurentSeries& o) const {
    return lead_ == o.lead_ && prec_ == o.prec_ && c_ == o.c_;
  }

  std::string str() const;
  json to_json() const;
  static LaurentSeries from_json(const FieldCtx& ctx, const json& j);

 private:
  void normalize();
  const FieldCtx* ctx_;
  int lead_;
  std::vector<fq> c_;  // c_[i] = coefficient of pi^(lead_ + i)
  int prec_;
};

/// Laurent expansion of num/den at the place infinity; v = deg den - deg num.
LaurentSeries embed_rational(const PolyT& num, const PolyT& den, int prec);
/// Exact embedding of a in A = F_q[T] as a finite pi-polynomial.
LaurentSeries embed(const PolyT& a);
/// The 1-unit part <a> = T^(-deg a) * a of a nonzero a in A (exact).
LaurentSeries one_unit_part(const PolyT& a);

}  // namespace dmf
