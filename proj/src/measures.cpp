#include "dmf/measures.hpp"

#include <algorithm>

namespace dmf {

namespace {

// x-coefficients of (a x + b)^e1 (c x + d)^e2 over A
std::vector<PolyT> action_poly(const GL2A& g, int e1, int e2) {
  const FieldCtx& K = g.a.ctx();
  std::vector<PolyT> A1(e1 + 1, PolyT::zero(K));
  for (int t = 0; t <= e1; ++t) {
    int b = binom_mod_p(e1, t, K.p());
    if (b) A1[t] = (g.a.pow(t) * g.b.pow(e1 - t)).scaled(K.from_int(b));
  }
  std::vector<PolyT> A2(e2 + 1, PolyT::zero(K));
  for (int t = 0; t <= e2; ++t) {
    int b = binom_mod_p(e2, t, K.p());
    if (b) A2[t] = (g.c.pow(t) * g.d.pow(e2 - t)).scaled(K.from_int(b));
  }
  std::vector<PolyT> out(e1 + e2 + 1, PolyT::zero(K));
  for (int i = 0; i <= e1; ++i)
    for (int t = 0; t <= e2; ++t) out[i + t] = out[i + t] + A1[i] * A2[t];
  return out;
}

// binom(e, j) mod p for integer e (negative upper index by reflection)
int gen_binom_mod_p(long long e, int j, int p) {
  if (e >= 0) return binom_mod_p(e, j, p);
  int b = binom_mod_p(-e + j - 1, j, p);
  return j % 2 == 0 ? b : (p - b) % p;
}

}  // namespace

CocycleMeasure build_mu_delta(PowerSumCache& cache, int prec) {
  const FieldCtx& K = cache.ctx();
  const int q = int(K.q());
  CocycleMeasure mu;
  mu.fctx = &K;
  mu.weight = q * q - 1;
  mu.type = 0;
  mu.h = (mu.weight - 2 + 1) / 2;  // ceil((n-2)/2)
  mu.nonzero_j = q - 2;
  mu.base_tag = "Upsilon0";
  mu.base = upsilon_closed(cache, 0, prec);
  return mu;
}

CocycleMeasure build_mu_poincare(const FieldCtx& K, int prec) {
  (void)prec;
  CocycleMeasure mu;
  mu.fctx = &K;
  mu.weight = int(K.q()) + 1;
  mu.type = 1;
  mu.h = (mu.weight - 2 + 1) / 2;
  mu.nonzero_j = 0;
  mu.base_tag = "X0";
  mu.base = LaurentSeries::one(K);  // normalization hook: X_0 = 1
  return mu;
}

json MomentValue::to_json() const {
  json j;
  j["r"] = r.to_json();
  j["base"] = base_tag;
  j["value"] = value().to_json();
  return j;
}

namespace {

PolyT moment_from_reduction(const CocycleMeasure& mu, const Reduction& red,
                            int j) {
  const FieldCtx& K = mu.ctx();
  if (red.n != 0) return PolyT::zero(K);  // deeper ray edges carry zero
  auto poly = action_poly(red.gamma, j, mu.weight - 2 - j);
  PolyT r = poly[std::size_t(mu.nonzero_j)];
  // determinant twist det(gamma)^{1-m}
  r = r.scaled(K.pow(red.gamma.det, 1 - mu.type));
  if (red.flip) r = -r;
  return r;
}

}  // namespace

MomentValue moment(const CocycleMeasure& mu, const Edge& e, int j) {
  if (j < 0 || j > mu.weight - 2)
    throw UnsupportedEdgeExponent("moment exponent " + std::to_string(j) +
                                  " outside [0, " +
                                  std::to_string(mu.weight - 2) + "]");
  return {moment_from_reduction(mu, reduce_to_fundamental(e), j), mu.base_tag,
          mu.base};
}

std::vector<LaurentSeries> centered_multipliers(const CocycleMeasure& mu,
                                                const Ball& B, int jmax) {
  const FieldCtx& K = mu.ctx();
  Reduction red = reduce_to_fundamental(ball_to_edge(B));
  std::vector<LaurentSeries> out(jmax + 1, LaurentSeries::zero(K));
  if (red.n != 0) return out;
  std::vector<LaurentSeries> raw(jmax + 1);
  for (int t = 0; t <= jmax; ++t)
    raw[std::size_t(t)] = embed(moment_from_reduction(mu, red, t));
  LaurentSeries neg_center = -B.center;
  for (int j = 0; j <= jmax; ++j) {
    LaurentSeries acc = LaurentSeries::zero(K);
    for (int t = 0; t <= j; ++t) {
      int b = binom_mod_p(j, t, K.p());
      if (b == 0 || raw[std::size_t(t)].is_zero_to_prec()) continue;
      acc = acc + (raw[std::size_t(t)] * neg_center.pow(j - t))
                      .scaled(K.from_int(b));
    }
    out[std::size_t(j)] = acc;
  }
  return out;
}

CenteredMoment moment_centered(const CocycleMeasure& mu, const Ball& B,
                               int j) {
  if (B.contains_infinity && j > 0)
    throw UnsupportedEdgeExponent(
        "centered moments on balls containing infinity support only j = 0");
  return {centered_multipliers(mu, B, j)[std::size_t(j)], mu.base_tag,
          mu.base};
}

MomentValue harmonicity_defect(const CocycleMeasure& mu, const Vertex& v,
                               int j) {
  const FieldCtx& K = mu.ctx();
  PolyT acc = PolyT::zero(K);
  for (const auto& w : neighbors(v)) acc = acc + moment(mu, Edge(w, v), j).r;
  return {acc, mu.base_tag, mu.base};
}

MomentValue l_value(const CocycleMeasure& mu, const Edge& e, int j) {
  if (j - 1 < 0 || j - 1 > mu.weight - 2)
    throw UnsupportedEdgeExponent(
        "l_value: j - 1 outside the weight range; use l_value_e0 / "
        "infinity_moment for the supported extensions");
  return moment(mu, e, j - 1);
}

Edge one_units_edge(const FieldCtx& K) {
  return ball_to_edge(Ball::finite(LaurentSeries::one(K), 1));
}

MomentValue l_delta_multiple(const CocycleMeasure& mu_delta, int j) {
  return moment(mu_delta, one_units_edge(mu_delta.ctx()), j - 1);
}

LaurentSeries l_value_e0(PowerSumCache& cache, int j, int prec) {
  return expand_delta(cache, 0, -j, -j, prec).at(-j);
}

LaurentSeries l_delta(PowerSumCache& cache, int j, int prec) {
  const FieldCtx& K = cache.ctx();
  if (j < 1)
    throw UnsupportedEdgeExponent("l_delta is defined for integers j >= 1");
  const int q = int(K.q());
  const long long m = j - 1;
  const long long step = (long long)(q - 1) * q;
  LaurentSeries acc = LaurentSeries::zero(K, LaurentSeries::kExact);
  // Upsilon terms at t = q-2 + i(q-1)q
  for (long long i = 0;; ++i) {
    long long t = q - 2 + i * step;
    if (t > m) break;
    int b = binom_mod_p(m, t, K.p());
    if (b == 0) continue;
    fq c = K.from_int((m - t) % 2 == 0 ? b : -b);
    acc = acc + upsilon_closed(cache, i, prec).scaled(c);
  }
  // Xi terms at t = -1 + i(q-1)q
  for (long long i = 1;; ++i) {
    long long t = -1 + i * step;
    if (t > m) break;
    if (t < 0) continue;
    int b = binom_mod_p(m, t, K.p());
    if (b == 0) continue;
    fq c = K.from_int((m - t) % 2 == 0 ? b : -b);
    acc = acc + xi_closed(cache, i, prec).scaled(c);
  }
  return acc.truncated(prec);
}

// ---------------------------------------------------------------------------
// zeta measures

LaurentSeries ZetaMeasure::value_on(const Ball& B) const {
  const FieldCtx& K = *fctx;
  if (B.contains_infinity) {
    // total mass over A_infty vanishes, so the complement negates
    return -value_on(B.complement());
  }
  if (B.radius_exp < k) return LaurentSeries::zero(K);
  if (!B.center.is_zero_to_prec()) {
    if (B.center.valuation() < 0) return LaurentSeries::zero(K);
    if (B.center.lead() + B.center.size() > k) return LaurentSeries::zero(K);
  }
  return LaurentSeries::monomial(K, K.from_int(k % 2 ? -1 : 1), 0);
}

LaurentSeries ZetaMeasureOracle::ball_multiplier(const Ball& B,
                                                 int j) const {
  if (j != 0)
    throw UnsupportedAdmissibility("G* measures are 0-admissible");
  return m_.value_on(B);
}

// ---------------------------------------------------------------------------
// cocycle oracle

int CocycleMeasureOracle::growth_exponent() const {
  return -std::min(0, mu_.base.valuation()) + mu_.h + 1;
}

LaurentSeries CocycleMeasureOracle::ball_multiplier(const Ball& B,
                                                    int j) const {
  return moment_centered(mu_, B, j).multiplier;
}

LaurentSeries CocycleMeasureOracle::inf_cell_mass_multiplier(
    int level) const {
  return embed(moment(mu_, Edge::ray(mu_.ctx(), level - 1), 0).r);
}

LaurentSeries CocycleMeasureOracle::inf_cell_power_multiplier(
    int level, long long e) const {
  return embed(moment(mu_, Edge::ray(mu_.ctx(), level - 1), int(e)).r);
}

// ---------------------------------------------------------------------------
// integrands

LaurentSeries PowerIntegrand::deriv(const LaurentSeries& a, int j,
                                    int prec) const {
  const FieldCtx& K = *K_;
  int b = gen_binom_mod_p(e_, j, K.p());
  if (b == 0) return LaurentSeries::zero(K);
  long long ee = e_ - j;
  LaurentSeries power;
  if (ee >= 0) {
    power = a.pow(ee).truncated(prec);
  } else {
    if (a.is_zero_to_prec())
      throw OracleFailure("x^e integrand evaluated at an apparent zero");
    int target = prec + int(-ee + 1) * (std::abs(a.valuation()) + 1);
    power = a.inverse(target).pow(-ee).truncated(prec);
  }
  return power.scaled(K.from_int(b));
}

LaurentSeries PowerIntegrand::inf_deriv(int j, int prec) const {
  (void)prec;
  // f(1/w) = w^{-e}: only meaningful at w = 0 for e <= 0
  return (e_ <= 0 && j == -e_) ? LaurentSeries::one(*K_)
                               : LaurentSeries::zero(*K_);
}

LaurentSeries PowerIntegrand::inf_cell(const BallMeasureOracle& mu, int level,
                                       int prec) const {
  if (e_ >= 0) return mu.inf_cell_power_multiplier(level, e_);
  return Integrand::inf_cell(mu, level, prec);
}

LaurentSeries KernelIntegrand::deriv(const LaurentSeries& a, int j,
                                     int prec) const {
  return kernel_hyperderivative(z_, a, j, prec);
}

LaurentSeries KernelIntegrand::inf_deriv(int j, int prec) const {
  // f(1/w) = w / (z w - 1) = -sum_{t>=0} z^t w^{t+1}
  const FieldCtx& K = z_.ctx();
  if (j == 0) return LaurentSeries::zero(K);
  return (-z_.pow(j - 1)).truncated(prec);
}

// ---------------------------------------------------------------------------
// Riemann sums

namespace {

// enumerate the level-`lev` refinement centers of a finite ball
template <typename Fn>
void for_subcenters(const FieldCtx& K, const LaurentSeries& center, int from,
                    int lev, Fn&& fn) {
  long long count = 1;
  for (int t = from; t < lev; ++t) count *= K.q();
  for (long long code = 0; code < count; ++code) {
    LaurentSeries c = center;
    long long t = code;
    for (int i = from; i < lev; ++i) {
      fq d = fq(t % K.q());
      t /= K.q();
      if (d) c = c + LaurentSeries::monomial(K, d, i);
    }
    fn(c);
  }
}

// Riemann sum at one level in the exact-multiplier domain: every term is
// D_j f(a) times the exact multiplier of the measure's base scalar, with the
// hyperderivative evaluated at just enough precision for the target.
LaurentSeries riemann_level_multiplier(const BallMeasureOracle& mu,
                                       const Integrand& f, const Region& S,
                                       int lev, int mult_prec) {
  const FieldCtx& K = mu.ctx();
  const int h = mu.admissibility();
  LaurentSeries acc = LaurentSeries::zero(K);
  auto add_cell = [&](const LaurentSeries& center) {
    Ball B = Ball::finite(center, lev);
    auto ms = mu.ball_multipliers(B, h);
    for (int j = 0; j <= h; ++j) {
      const LaurentSeries& mj = ms[std::size_t(j)];
      if (mj.is_zero_to_prec()) continue;  // exact multipliers: truly zero
      int pd = mult_prec - mj.valuation() + 1;
      acc = acc + f.deriv(center, j, pd) * mj;
    }
  };
  for (const Ball& B : S.balls) {
    if (B.contains_infinity)
      throw ConfigError("riemann region: use binf_exp for the infinity ball");
    if (B.radius_exp > lev)
      throw ConfigError("riemann level coarser than a region ball");
    for_subcenters(K, B.center, B.radius_exp, lev, add_cell);
  }
  if (S.binf_exp) {
    const int m = *S.binf_exp;
    if (m >= lev) throw ConfigError("riemann level coarser than B_infty cell");
    for (int s = m; s < lev; ++s)  // the shell |x| = |pi|^{-s}
      for (fq g = 1; g < K.q(); ++g)
        for_subcenters(K, LaurentSeries::monomial(K, g, -s), -s + 1, lev,
                       add_cell);
    acc = acc + f.inf_cell(mu, lev, mult_prec);
  }
  return acc;
}

}  // namespace

LaurentSeries Integrand::inf_cell(const BallMeasureOracle& mu, int level,
                                  int prec) const {
  // kappa(infty, level; 0; x) carries the cell mass; the j >= 1 terms decay
  // with the level and are certified by stabilization.
  LaurentSeries d0 = inf_deriv(0, prec);
  if (d0.is_zero_to_prec()) return LaurentSeries::zero(mu.ctx());
  return d0 * mu.inf_cell_mass_multiplier(level);
}

RiemannResult riemann_integrate(const BallMeasureOracle& mu,
                                const Integrand& f, const Region& S,
                                int level, int prec) {
  int minlev = 1;
  for (const Ball& B : S.balls) minlev = std::max(minlev, B.radius_exp);
  if (S.binf_exp) minlev = std::max(minlev, *S.binf_exp + 1);
  if (level < minlev + 1)
    throw ConfigError("riemann level must exceed the region's base level");
  const LaurentSeries base = mu.base();
  const int mult_prec = prec - std::min(0, base.valuation()) + 1;
  int start = std::max(minlev, level - 3);
  std::vector<LaurentSeries> R;
  for (int l = start; l <= level; ++l)
    R.push_back(riemann_level_multiplier(mu, f, S, l, mult_prec));
  std::vector<int> diffs;
  for (size_t i = 1; i < R.size(); ++i) {
    LaurentSeries d = (R[i] - R[i - 1]) * base;
    diffs.push_back(d.is_zero_to_prec() ? d.prec() : d.valuation());
  }
  if (diffs.size() >= 3) {
    int n = int(diffs.size());
    if (diffs[n - 1] <= diffs[n - 3] && diffs[n - 1] < prec)
      throw NonStabilizing("riemann sums show no valuation gain over 3 "
                           "levels: v(diffs) = " +
                           std::to_string(diffs[n - 3]) + "," +
                           std::to_string(diffs[n - 2]) + "," +
                           std::to_string(diffs[n - 1]));
  }
  return {R.back() * base, diffs.back()};
}

LaurentSeries infinity_moment(const CocycleMeasure& mu, int m, int i,
                              int max_level, int prec) {
  CocycleMeasureOracle oracle(mu);
  PowerIntegrand f(mu.ctx(), -(long long)i);
  RiemannResult r =
      riemann_integrate(oracle, f, Region::binf(m), max_level, prec);
  return r.value.truncated(std::min(prec, r.error_exp));
}

LaurentSeries reconstruct_cusp_form(const CocycleMeasure& mu,
                                    const LaurentSeries& z, int level,
                                    int prec, int h_max) {
  const FieldCtx& K = mu.ctx();
  if (mu.h > h_max)
    throw UnsupportedAdmissibility(
        "reconstruction is desk-scale for h <= " + std::to_string(h_max) +
        " (got h = " + std::to_string(mu.h) + ")");
  if (z.is_zero_to_prec() || z.valuation() != 0 || K.in_fq(z.coeff(0)))
    throw ConfigError(
        "reconstruction point must have its residue coordinate outside F_q");
  CocycleMeasureOracle oracle(mu);
  KernelIntegrand f(z);
  RiemannResult r =
      riemann_integrate(oracle, f, Region::p1(K), level, prec);
  return r.value.truncated(std::min(prec, r.error_exp));
}

// ---------------------------------------------------------------------------
// direct evaluation of the forms at a point

namespace {

void check_point(const FieldCtx& K, const LaurentSeries& z) {
  if (z.is_zero_to_prec() || z.valuation() != 0 || K.in_fq(z.coeff(0)))
    throw ConfigError(
        "evaluation point must have its residue coordinate outside F_q");
}

// sum of (cz+d)^{-k} over all pairs with deg <= D; certified tail
// (D+1) k from the per-shell valuation k * max(deg c, deg d).
LaurentSeries pair_sum(const LaurentSeries& z, int k, int D, int prec,
                       long long pair_cap) {
  const FieldCtx& K = z.ctx();
  const int q = int(K.q());
  long long total = 1;
  for (int i = 0; i <= 2 * (D + 1); ++i) {
    total *= q;
    if (total > pair_cap)
      throw CapExceeded("pair enumeration exceeds the configured cap");
  }
  const int tail = (D + 1) * k;
  const int Pa = std::min(prec, tail) + 2;
  // precompute embeddings and c*z products
  std::vector<PolyT> polys;
  {
    std::uint64_t count = 1;
    for (int i = 0; i <= D; ++i) count *= q;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<fq> cs(D + 1, 0);
      std::uint64_t t = code;
      for (int i = 0; i <= D; ++i) {
        cs[i] = fq(t % q);
        t /= q;
      }
      polys.emplace_back(K, std::move(cs));
    }
  }
  std::vector<LaurentSeries> embeds, czs;
  embeds.reserve(polys.size());
  czs.reserve(polys.size());
  for (const auto& p : polys) {
    embeds.push_back(embed(p));
    czs.push_back((embed(p) * z).truncated(Pa + 2 * D * k + 4));
  }
  LaurentSeries acc(K, tail);
  for (std::size_t ci = 0; ci < polys.size(); ++ci) {
    for (std::size_t di = 0; di < polys.size(); ++di) {
      if (ci == 0 && di == 0) continue;
      LaurentSeries u = czs[ci] + embeds[di];
      acc = acc + u.inverse(Pa).pow(k).truncated(tail);
    }
  }
  return acc;
}

}  // namespace

LaurentSeries eisenstein_at(const LaurentSeries& z, int k, int deg_bound,
                            int prec, long long pair_cap) {
  check_point(z.ctx(), z);
  return pair_sum(z, k, deg_bound, prec, pair_cap).truncated(prec);
}

LaurentSeries delta_at(const LaurentSeries& z, int deg_bound, int prec,
                       long long pair_cap) {
  const FieldCtx& K = z.ctx();
  check_point(K, z);
  const int q = int(K.q());
  const int P2 = prec + q * q + 2;
  const int D2 = std::min(deg_bound, P2 / (q * q - 1) + 1);
  LaurentSeries e1 = pair_sum(z, q - 1, deg_bound, P2, pair_cap);
  LaurentSeries e2 = pair_sum(z, q * q - 1, D2, P2, pair_cap);
  const PolyT TqT = PolyT::monomial(K, 1, q) - PolyT::T(K);
  const PolyT Tq2T = PolyT::monomial(K, 1, q * q) - PolyT::T(K);
  LaurentSeries d =
      embed(Tq2T) * e2 + embed(TqT).pow(q) * e1.pow(q + 1);
  return d.truncated(prec);
}

// ---------------------------------------------------------------------------
// Goss zeta special values

ZetaSpecial zeta_special(const FieldCtx& K, long long j) {
  const int q = int(K.q());
  int sq = 0;
  for (long long t = j; t; t /= q) sq += int(t % q);
  const int bound = sq / (q - 1);

  ZetaSpecial out;
  auto trim = [](std::vector<LaurentSeries>& v) {
    while (!v.empty() && v.back().is_exact_zero()) v.pop_back();
  };

  // direct side: coefficient of x^{-i} is sum over monic deg-i a of <a>^j
  int zero_run = 0;
  for (int i = 0; zero_run < q || i <= bound; ++i) {
    LaurentSeries ci = LaurentSeries::zero(K);
    std::uint64_t count = 1;
    for (int t = 0; t < i; ++t) count *= q;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<fq> cs(i + 1, 0);
      std::uint64_t t = code;
      for (int b = 0; b < i; ++b) {
        cs[b] = fq(t % q);
        t /= q;
      }
      cs[i] = 1;
      ci = ci + one_unit_part(PolyT(K, std::move(cs))).pow(j);
    }
    out.direct.push_back(ci);
    zero_run = ci.is_exact_zero() ? zero_run + 1 : 0;
    if (i > bound + 2 * q + 2) break;  // safety; the digit bound has won
  }

  // measure side: coefficient of x^{-(k-1)} is the 1-unit sum against
  // G*_{q^k-1}: (-1)^k sum over alpha in 1 + pi F_q[pi], deg < k, of
  // (-1)^k alpha^j = sum alpha^j.
  zero_run = 0;
  for (int k = 1; zero_run < q || k <= bound + 1; ++k) {
    LaurentSeries mk = LaurentSeries::zero(K);
    std::uint64_t count = 1;
    for (int t = 0; t < k - 1; ++t) count *= q;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<fq> cs(k, 0);
      cs[0] = 1;
      std::uint64_t t = code;
      for (int b = 1; b < k; ++b) {
        cs[b] = fq(t % q);
        t /= q;
      }
      mk = mk + LaurentSeries(K, 0, std::move(cs)).pow(j);
    }
    out.measure.push_back(mk);
    zero_run = mk.is_exact_zero() ? zero_run + 1 : 0;
    if (k > bound + 2 * q + 3) break;
  }
  trim(out.direct);
  trim(out.measure);
  return out;
}

}  // namespace dmf
