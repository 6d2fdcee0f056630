#pragma once

#include <functional>
#include <map>
#include <vector>

#include "dmf/field.hpp"

namespace dmf {

/// Carlitz polynomial machinery on A_infty = F_q[[pi]].  Here the Carlitz
/// data is built with pi as the variable ([i] = pi^{q^i} - pi, interpolation
/// points in F_q[pi]); note that much of the literature writes the same
/// objects with T in place of pi.
///
/// Immutable after construction; evaluation methods are pure.
class CarlitzCache {
 public:
  CarlitzCache(const FieldCtx& ctx, int bound);

  const FieldCtx& ctx() const { return *ctx_; }
  int bound() const { return bound_; }

  /// [i] = pi^{q^i} - pi (exact).
  const LaurentSeries& bracket(int i) const { return bracket_.at(i); }
  const LaurentSeries& L(int i) const { return L_.at(i); }
  const LaurentSeries& D(int i) const { return D_.at(i); }

  /// Coefficients of the F_q-linear polynomial e_i: entry j is the
  /// coefficient of x^{q^j} (exact).
  const std::vector<LaurentSeries>& e_coeffs(int i) const { return e_.at(i); }

  LaurentSeries eval_e(int i, const LaurentSeries& x) const;
  LaurentSeries eval_E(int i, const LaurentSeries& x, int prec) const;

  /// G_n(x) to the requested precision (exact inputs stay exact until the
  /// final division by the D-product).
  LaurentSeries eval_G(long long n, const LaurentSeries& x, int prec) const;

  /// Exact numerator prod_i e_i(x)^{n_i} of G_n as an x-polynomial
  /// (coefficient list, index = x-degree), and the exact denominator
  /// prod_i D_i^{n_i}.
  std::vector<LaurentSeries> numerator_poly(long long n) const;
  LaurentSeries denominator(long long n) const;

  /// G_n as an x-polynomial with coefficients truncated at prec.
  std::vector<LaurentSeries> G_poly(long long n, int prec) const;

  /// The t-th interpolation point: digits of t base q read as F_q codes,
  /// alpha_t = sum_j digit_j pi^j (degree-then-lexicographic enumeration
  /// of F_q[pi]).
  LaurentSeries point(long long t) const;

 private:
  const FieldCtx* ctx_;
  int bound_;
  std::map<int, LaurentSeries> bracket_, L_, D_;
  std::map<int, std::vector<LaurentSeries>> e_;
};

/// mu_{n,l} = sum_{i >= l+1} floor(n / q^i).
long long mu_weight(long long n, int l, int q);

struct BanachExpansion {
  enum class Space { C0, Ch, LA };
  Space space = Space::C0;
  int param = 0;  // h for Ch, l for LA
  std::vector<LaurentSeries> a;
};

/// Point-evaluation oracle: f(alpha) at the requested precision.
using PointOracle =
    std::function<LaurentSeries(const LaurentSeries& alpha, int prec)>;

/// Carlitz expansion of a continuous function from point evaluations:
/// Newton interpolation on the points alpha_0..alpha_{n_max} followed by the
/// monomial -> Carlitz change of basis.
BanachExpansion expand_continuous(const PointOracle& f, long long n_max,
                                  const CarlitzCache& cache, int prec);

/// Exact Carlitz expansion of a polynomial given by monomial coefficients.
BanachExpansion carlitz_expand_poly(const std::vector<LaurentSeries>& monomial,
                                    const CarlitzCache& cache);

/// Value of the C^h norm max |a_j| q^{h floor(log_q j)} as a power of q.
struct NormBound {
  bool attained = false;  // false: every coefficient vanished to precision
  long long exponent = 0; // norm = q^exponent (upper bound when !attained)
};
NormBound ch_norm(const BanachExpansion& exp, int h, int q);

/// Hyperderivative D_j on polynomial coefficient lists:
/// D_j(sum c_i x^i) = sum binom(i, j) c_i x^{i-j}.
std::vector<LaurentSeries> hyperderivative(
    const std::vector<LaurentSeries>& coeffs, int j);

/// D_j of x -> 1/(z - x) evaluated at a: equals (z - a)^{-(j+1)}.
LaurentSeries kernel_hyperderivative(const LaurentSeries& z,
                                     const LaurentSeries& a, int j, int prec);

/// floor(log_q j) computed by digit length (j >= 1).
int floor_log_q(long long j, int q);

}  // namespace dmf
