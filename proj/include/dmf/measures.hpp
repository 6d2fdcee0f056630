#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dmf/carlitz.hpp"
#include "dmf/expansion.hpp"
#include "dmf/tree.hpp"

namespace dmf {

/// Measure attached to a weight-n type-m cusp form through its residue
/// cocycle: a single fundamental moment on the edge e_0 = L(0)->L(1)
/// (moment_table(0, nonzero_j) = base), zero on every deeper ray edge, and
/// all other values derived by Gamma-equivariance and antisymmetry.
struct CocycleMeasure {
  const FieldCtx* fctx = nullptr;
  int weight = 0;      // n
  int type = 0;        // m mod (q-1)
  int h = 0;           // admissibility: smallest integer >= (n-2)/2
  int nonzero_j = 0;   // q-2 for mu_Delta, 0 for mu_P
  std::string base_tag;  // "Upsilon0" or "X0"
  LaurentSeries base;  // Upsilon_0 at prec, or X_0 (normalized to 1, exact)

  const FieldCtx& ctx() const { return *fctx; }
};

/// mu_Delta: weight q^2-1, type 0, fundamental moment Upsilon_0 at j = q-2.
CocycleMeasure build_mu_delta(PowerSumCache& cache, int prec);
/// mu_P: weight q+1, type 1, fundamental moment X_0 = 1 at j = 0 (the paper
/// only asserts X_0 != 0; the normalization is a scalar hook).
CocycleMeasure build_mu_poincare(const FieldCtx& K, int prec);

/// An edge moment as the exact A-multiple r(e, j) of the base scalar.
struct MomentValue {
  PolyT r;
  std::string base_tag;
  LaurentSeries base;
  LaurentSeries value() const { return embed(r) * base; }
  json to_json() const;
};

/// integral of x^j over U(e), 0 <= j <= n-2.
MomentValue moment(const CocycleMeasure& mu, const Edge& e, int j);

/// Centered moment: exact multiplier in F_q[T, 1/T] times the base.
struct CenteredMoment {
  LaurentSeries multiplier;  // exact
  std::string base_tag;
  LaurentSeries base;
  LaurentSeries value() const { return multiplier * base; }
};

/// integral of (x - center)^j over the ball (finite balls; for balls
/// containing infinity only j = 0 is a raw moment).
CenteredMoment moment_centered(const CocycleMeasure& mu, const Ball& B, int j);

/// All centered-moment multipliers of the base for j = 0..jmax over a
/// finite ball, sharing one tree reduction.
std::vector<LaurentSeries> centered_multipliers(const CocycleMeasure& mu,
                                                const Ball& B, int jmax);

/// Sum of moment(mu, e, j) over the q+1 edges with terminal v; the harmonic
/// contract makes the A-multiple exactly zero.
MomentValue harmonicity_defect(const CocycleMeasure& mu, const Vertex& v,
                               int j);

/// L(f; e; j) = integral of x^{j-1} over U(e) for j-1 in [0, n-2].
MomentValue l_value(const CocycleMeasure& mu, const Edge& e, int j);

/// L(Delta; e_0; j) for any integer j, by residues of the discriminant
/// expansion (Upsilon_i / Xi_i slots).
LaurentSeries l_value_e0(PowerSumCache& cache, int j, int prec);

/// L_Delta(j) on the 1-units edge for j >= 1, by the binomial formula over
/// the e_0 moments (indices beyond the weight range pull Upsilon_i / Xi_i
/// from the expansion).
LaurentSeries l_delta(PowerSumCache& cache, int j, int prec);

/// The 1-units edge U_1 = U(M_0 M_1) on the end x = 1.
Edge one_units_edge(const FieldCtx& K);

/// L_Delta(j) as an exact A-multiple of Upsilon_0, 1 <= j <= q^2-2.
MomentValue l_delta_multiple(const CocycleMeasure& mu_delta, int j);

// ---------------------------------------------------------------------------
// h-admissible integration

/// Measure oracle for Riemann sums over ball decompositions.  Moments are
/// reported as exact multipliers of a shared base scalar, so that the
/// char-p cancellations across a refinement happen exactly; the truncated
/// base enters once per integral.
class BallMeasureOracle {
 public:
  virtual ~BallMeasureOracle() = default;
  virtual const FieldCtx& ctx() const = 0;
  virtual int admissibility() const = 0;
  /// Declared exponent of the admissibility constant: the growth bound is
  /// |int_B (x-a)^j| <= q^{growth} * |pi|^{l (j - h)} on radius-|pi|^l balls.
  virtual int growth_exponent() const = 0;
  /// The shared base scalar (Upsilon_0, X_0, or an exact 1).
  virtual LaurentSeries base() const = 0;
  /// Exact multiplier of base() for the centered moment over a finite ball,
  /// 0 <= j <= admissibility().
  virtual LaurentSeries ball_multiplier(const Ball& B, int j) const = 0;
  /// Batched multipliers for j = 0..jmax (one reduction per ball).
  virtual std::vector<LaurentSeries> ball_multipliers(const Ball& B,
                                                      int jmax) const {
    std::vector<LaurentSeries> out;
    for (int j = 0; j <= jmax; ++j) out.push_back(ball_multiplier(B, j));
    return out;
  }
  /// Multiplier of base() for the mass of the level-l cell B_infty(|pi|^l).
  virtual LaurentSeries inf_cell_mass_multiplier(int level) const = 0;
  /// Multiplier for the raw moment of x^e over the level-l infinity cell
  /// (polynomial integrands); unsupported without an infinity region.
  virtual LaurentSeries inf_cell_power_multiplier(int level,
                                                  long long e) const {
    (void)level;
    (void)e;
    throw UnsupportedEdgeExponent("measure has no raw infinity-cell moments");
  }
  /// Convenience: the centered moment value itself.
  LaurentSeries ball_moment(const Ball& B, int j) const {
    return ball_multiplier(B, j) * base();
  }
};

class CocycleMeasureOracle : public BallMeasureOracle {
 public:
  explicit CocycleMeasureOracle(CocycleMeasure mu) : mu_(std::move(mu)) {}
  const FieldCtx& ctx() const override { return mu_.ctx(); }
  int admissibility() const override { return mu_.h; }
  int growth_exponent() const override;
  LaurentSeries base() const override { return mu_.base; }
  LaurentSeries ball_multiplier(const Ball& B, int j) const override;
  std::vector<LaurentSeries> ball_multipliers(const Ball& B,
                                              int jmax) const override {
    return centered_multipliers(mu_, B, jmax);
  }
  LaurentSeries inf_cell_mass_multiplier(int level) const override;
  LaurentSeries inf_cell_power_multiplier(int level,
                                          long long e) const override;
  const CocycleMeasure& measure() const { return mu_; }

 private:
  CocycleMeasure mu_;
};

/// The 0-admissible building block G*_{q^k-1} of the zeta measure at
/// infinity: on a ball of radius |pi|^l inside A_infty with polynomial
/// center alpha it weighs (-1)^k when l >= k and deg_pi(alpha) < k, else 0.
struct ZetaMeasure {
  const FieldCtx* fctx = nullptr;
  int k = 1;
  ZetaMeasure(const FieldCtx& K, int k_) : fctx(&K), k(k_) {}
  LaurentSeries value_on(const Ball& B) const;
};

class ZetaMeasureOracle : public BallMeasureOracle {
 public:
  explicit ZetaMeasureOracle(ZetaMeasure m) : m_(m) {}
  const FieldCtx& ctx() const override { return *m_.fctx; }
  int admissibility() const override { return 0; }
  int growth_exponent() const override { return 0; }
  LaurentSeries base() const override {
    return LaurentSeries::one(*m_.fctx);
  }
  LaurentSeries ball_multiplier(const Ball& B, int j) const override;
  LaurentSeries inf_cell_mass_multiplier(int) const override {
    return LaurentSeries::zero(*m_.fctx);
  }

 private:
  ZetaMeasure m_;
};

/// Integrand given by its hyperderivative oracles D_j f at finite centers
/// and the expansion of f(1/w) at w = 0 for the infinity cell.
class Integrand {
 public:
  virtual ~Integrand() = default;
  virtual LaurentSeries deriv(const LaurentSeries& center, int j,
                              int prec) const = 0;
  virtual LaurentSeries inf_deriv(int j, int prec) const = 0;
  /// Contribution of the level-l infinity cell to the Riemann sum.  The
  /// default keeps the kappa j = 0 term (the cell mass) and drops the
  /// j >= 1 terms, whose decay the level-stabilization certifies.
  virtual LaurentSeries inf_cell(const BallMeasureOracle& mu, int level,
                                 int prec) const;
};

/// f = x^e (e may be negative away from 0; the caller picks regions where
/// f is analytic).
class PowerIntegrand : public Integrand {
 public:
  PowerIntegrand(const FieldCtx& K, long long e) : K_(&K), e_(e) {}
  LaurentSeries deriv(const LaurentSeries& a, int j, int prec) const override;
  LaurentSeries inf_deriv(int j, int prec) const override;
  LaurentSeries inf_cell(const BallMeasureOracle& mu, int level,
                         int prec) const override;

 private:
  const FieldCtx* K_;
  long long e_;
};

/// f = 1/(z - x), the reconstruction kernel.
class KernelIntegrand : public Integrand {
 public:
  KernelIntegrand(LaurentSeries z) : z_(std::move(z)) {}
  LaurentSeries deriv(const LaurentSeries& a, int j, int prec) const override;
  LaurentSeries inf_deriv(int j, int prec) const override;

 private:
  LaurentSeries z_;
};

/// Region: finite balls, optionally together with B_infty(|pi|^m).
struct Region {
  std::vector<Ball> balls;  // finite balls
  std::optional<int> binf_exp;  // if set, also B_infty(|pi|^m)
  static Region a_infty(const FieldCtx& K) {
    return Region{{Ball::finite(LaurentSeries::zero(K), 0)}, std::nullopt};
  }
  static Region binf(int m) { return Region{{}, m}; }
  static Region p1(const FieldCtx& K) {
    return Region{{Ball::finite(LaurentSeries::zero(K), 0)}, 1};
  }
};

struct RiemannResult {
  LaurentSeries value;  // R_level
  int error_exp;        // v(R_level - R_{level-1})
};

/// Riemann sum R_l = sum_balls sum_{j<=h} D_j f(a) int_B (x-a)^j dmu over
/// the level-l refinement of the region, with the empirical stabilization
/// certificate v(R_l - R_{l-1}) (NonStabilizing when three successive
/// differences show no valuation gain).
RiemannResult riemann_integrate(const BallMeasureOracle& mu,
                                const Integrand& f, const Region& S,
                                int level, int prec);

/// int_{B_infty(|pi|^m)} x^{-i} dmu by shell decomposition and Riemann
/// refinement, stabilized over levels up to max_level.
LaurentSeries infinity_moment(const CocycleMeasure& mu, int m, int i,
                              int max_level, int prec);

/// iota(mu)(z) = int_{P^1} dmu(x)/(z - x) by level-l Riemann sums; the
/// desk-scale contract requires h <= h_max (default 1, i.e. q = 2).
LaurentSeries reconstruct_cusp_form(const CocycleMeasure& mu,
                                    const LaurentSeries& z, int level,
                                    int prec, int h_max = 1);

/// Delta(z) by direct pair summation over deg <= deg_bound.
LaurentSeries delta_at(const LaurentSeries& z, int deg_bound, int prec,
                       long long pair_cap = 50000000);
/// E_k(z) by direct pair summation (the k = 1 sanity E_1 = 0 for q >= 3).
LaurentSeries eisenstein_at(const LaurentSeries& z, int k, int deg_bound,
                            int prec, long long pair_cap = 50000000);

/// Goss zeta special value zeta(x, -j) computed two independent ways, as
/// exact coefficient lists in x^{-1} (entry i = coefficient of x^{-i}).
struct ZetaSpecial {
  std::vector<LaurentSeries> direct;   // sum over monic a of <a>^j per degree
  std::vector<LaurentSeries> measure;  // 1-unit sums against G*_{q^k-1}
};
ZetaSpecial zeta_special(const FieldCtx& K, long long j);

}  // namespace dmf
