#include "dmf/tree.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dmf {

namespace {

// Exact value of s modulo pi^k (digits at exponents < k).  Throws when the
// truncation would need digits beyond s's precision.
LaurentSeries exact_mod(const LaurentSeries& s, int k) {
  if (!s.is_exact() && s.prec() < k)
    throw InsufficientPrecision("digits below pi^" + std::to_string(k) +
                                " not determined at precision O(pi^" +
                                std::to_string(s.prec()) + ")");
  if (s.is_zero_to_prec()) return LaurentSeries::zero(s.ctx());
  std::vector<fq> v;
  for (int i = 0; i < s.size() && s.lead() + i < k; ++i)
    v.push_back(s.coeffs()[i]);
  return LaurentSeries(s.ctx(), s.lead(), std::move(v));
}

// A-part of an exact finite pi-expansion: the terms with exponent <= 0,
// as a polynomial in T = 1/pi.
PolyT polynomial_part(const LaurentSeries& u) {
  const FieldCtx& K = u.ctx();
  std::vector<fq> c;
  for (int i = 0; i < u.size(); ++i) {
    int ex = u.lead() + i;
    if (ex > 0) break;
    if (int(c.size()) <= -ex) c.resize(-ex + 1, 0);
    c[-ex] = u.coeffs()[i];
  }
  return PolyT(K, std::move(c));
}

}  // namespace

// ---------------------------------------------------------------------------
// Vertex / Edge / Ball

Vertex::Vertex(int k_, LaurentSeries u_) : k(k_), u(exact_mod(u_, k_)) {
  for (fq c : u.coeffs())
    if (c != 0 && !u.ctx().in_fq(c))
      throw ConfigError("vertex expansion has coefficients outside F_q");
}

Vertex Vertex::lambda(const FieldCtx& ctx, int n) {
  return Vertex(-n, LaurentSeries::zero(ctx));
}

bool Vertex::operator<(const Vertex& o) const {
  if (k != o.k) return k < o.k;
  if (u.lead() != o.u.lead()) return u.lead() < o.u.lead();
  return u.coeffs() < o.u.coeffs();
}

std::string Vertex::str() const {
  if (is_lambda()) return "L(" + std::to_string(-k) + ")";
  return "[pi^" + std::to_string(k) + "; " + u.str() + "]";
}

json Vertex::to_json() const {
  json j;
  j["k"] = k;
  j["u"] = u.to_json();
  return j;
}

Vertex Vertex::from_string(const FieldCtx& ctx, const std::string& s) {
  auto trim = [](std::string t) {
    size_t a = t.find_first_not_of(" \t");
    size_t b = t.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
  };
  std::string t = trim(s);
  if (t.size() > 2 && (t[0] == 'L' || t[0] == 'l') && t[1] == '(') {
    size_t close = t.find(')');
    if (close == std::string::npos) throw ParseError("expected ')' in " + s);
    int n = std::stoi(t.substr(2, close - 2));
    return lambda(ctx, n);
  }
  if (t.front() == '[' && t.back() == ']') {
    std::string body = t.substr(1, t.size() - 2);
    size_t semi = body.find(';');
    if (semi == std::string::npos)
      throw ParseError("expected '[pi^k; u]' form in " + s);
    std::string head = trim(body.substr(0, semi));
    if (head.rfind("pi^", 0) != 0)
      throw ParseError("expected 'pi^k' in " + s);
    int k = std::stoi(head.substr(3));
    LaurentSeries u = LaurentSeries::from_string(ctx, trim(body.substr(semi + 1)));
    return Vertex(k, u);
  }
  throw ParseError("cannot parse vertex '" + s + "'");
}

Edge::Edge(Vertex o, Vertex t) : origin(std::move(o)), terminal(std::move(t)) {
  if (distance(origin, terminal) != 1)
    throw ConfigError("edge endpoints are not adjacent: " + origin.str() +
                      " , " + terminal.str());
}

Edge Edge::ray(const FieldCtx& ctx, int n) {
  return Edge(Vertex::lambda(ctx, n), Vertex::lambda(ctx, n + 1));
}

std::string Edge::str() const { return origin.str() + "->" + terminal.str(); }

json Edge::to_json() const {
  json j;
  j["origin"] = origin.to_json();
  j["terminal"] = terminal.to_json();
  return j;
}

Edge Edge::from_string(const FieldCtx& ctx, const std::string& s) {
  size_t arrow = s.find("->");
  if (arrow == std::string::npos)
    throw ParseError("expected 'A->B' edge form in '" + s + "'");
  return Edge(Vertex::from_string(ctx, s.substr(0, arrow)),
              Vertex::from_string(ctx, s.substr(arrow + 2)));
}

Ball Ball::finite(const LaurentSeries& c, int j) {
  Ball B;
  B.contains_infinity = false;
  B.center = exact_mod(c, j);
  B.radius_exp = j;
  return B;
}

Ball Ball::complement_of(const LaurentSeries& c, int j) {
  Ball B = finite(c, j);
  B.contains_infinity = true;
  return B;
}

Ball Ball::around_infinity(const FieldCtx& ctx, int m) {
  return complement_of(LaurentSeries::zero(ctx), 1 - m);
}

Ball Ball::complement() const {
  Ball B = *this;
  B.contains_infinity = !B.contains_infinity;
  return B;
}

bool Ball::contains(const LaurentSeries& x) const {
  LaurentSeries diff = x - center;
  if (diff.is_zero_to_prec()) {
    // certified v >= prec
    if (diff.valuation() >= radius_exp) return !contains_infinity;
    throw InsufficientPrecision("ball membership undecidable at precision");
  }
  return contains_infinity ? diff.valuation() < radius_exp
                           : diff.valuation() >= radius_exp;
}

std::string Ball::str() const {
  if (is_binf()) return "Binf(pi^" + std::to_string(binf_exponent()) + ")";
  std::string core = "B(" + center.str() + "; pi^" +
                     std::to_string(radius_exp) + ")";
  return contains_infinity ? "P1\\" + core : core;
}

json Ball::to_json() const {
  json j;
  if (is_binf()) {
    j["center"] = "inf";
    j["radius_exp"] = binf_exponent();
    return j;
  }
  j["center"] = center.to_json();
  j["radius_exp"] = radius_exp;
  j["contains_infinity"] = contains_infinity;
  return j;
}

// ---------------------------------------------------------------------------
// GL2

GL2A::GL2A(PolyT a_, PolyT b_, PolyT c_, PolyT d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  PolyT dt = a * d - b * c;
  if (dt.degree() != 0)
    throw ConfigError("GL2A determinant is not a unit of F_q: " + dt.str());
  det = dt.coeff(0);
}

GL2A GL2A::identity(const FieldCtx& ctx) {
  return GL2A(PolyT::one(ctx), PolyT::zero(ctx), PolyT::zero(ctx),
              PolyT::one(ctx));
}

GL2A GL2A::delta(const FieldCtx& ctx) {
  return GL2A(PolyT::zero(ctx), PolyT::one(ctx), PolyT::one(ctx),
              PolyT::zero(ctx));
}

GL2A GL2A::translation(const PolyT& b) {
  const FieldCtx& K = b.ctx();
  return GL2A(PolyT::one(K), b, PolyT::zero(K), PolyT::one(K));
}

GL2A GL2A::operator*(const GL2A& o) const {
  return GL2A(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
              c * o.b + d * o.d);
}

std::string GL2A::str() const {
  return "(" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() +
         ")";
}

json GL2A::to_json() const {
  return json::array({json::array({a.str(), b.str()}),
                      json::array({c.str(), d.str()})});
}

GL2K GL2K::from(const GL2A& g) {
  return GL2K(embed(g.a), embed(g.b), embed(g.c), embed(g.d));
}

GL2K GL2K::operator*(const GL2K& o) const {
  return GL2K(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
              c * o.b + d * o.d);
}

// ---------------------------------------------------------------------------
// normalize / act

Vertex normalize_vertex(const GL2K& M) {
  const FieldCtx& K = M.a.has_ctx() ? M.a.ctx()
                     : M.b.has_ctx() ? M.b.ctx()
                     : M.c.has_ctx() ? M.c.ctx()
                                     : M.d.ctx();
  LaurentSeries det = M.det();
  if (det.is_zero_to_prec())
    throw InsufficientPrecision(
        "normalize_vertex: determinant valuation undetectable");
  const int vdet = det.valuation();

  LaurentSeries a = M.a, b = M.b, c = M.c, d = M.d;
  // pivot: the bottom-row entry of certified minimal valuation goes to d
  bool c_known = !c.is_zero_to_prec(), d_known = !d.is_zero_to_prec();
  if (d_known && d.valuation() <= c.valuation()) {
    // keep columns
  } else if (c_known && c.valuation() <= d.valuation()) {
    std::swap(a, b);
    std::swap(c, d);
  } else {
    throw InsufficientPrecision(
        "normalize_vertex: bottom-row pivot undecidable");
  }
  const int vd = d.valuation();
  const int k = vdet - 2 * vd;

  LaurentSeries u;
  if (b.valuation() - vd >= k) {
    u = LaurentSeries::zero(K);  // u = 0 mod pi^k, certified
  } else if (b.is_zero_to_prec()) {
    throw InsufficientPrecision("normalize_vertex: u digits undetectable");
  } else {
    LaurentSeries dinv = d.inverse(k - b.valuation());
    LaurentSeries ufull = b * dinv;
    if (ufull.prec() < k)
      throw InsufficientPrecision("normalize_vertex: u known only mod pi^" +
                                  std::to_string(ufull.prec()));
    u = exact_mod(ufull, k);
  }
  return Vertex(k, u);
}

Vertex act(const GL2K& g, const Vertex& v, Action mode) {
  const GL2K m = (mode == Action::star) ? g.star_matrix() : g;
  LaurentSeries pik = LaurentSeries::monomial(v.ctx(), 1, v.k);
  return normalize_vertex(
      GL2K(m.a * pik, m.a * v.u + m.b, m.c * pik, m.c * v.u + m.d));
}

Vertex act(const GL2A& g, const Vertex& v, Action mode) {
  return act(GL2K::from(g), v, mode);
}

Edge act(const GL2K& g, const Edge& e, Action mode) {
  return Edge(act(g, e.origin, mode), act(g, e.terminal, mode));
}

Edge act(const GL2A& g, const Edge& e, Action mode) {
  return act(GL2K::from(g), e, mode);
}

// ---------------------------------------------------------------------------
// combinatorics

std::vector<Vertex> neighbors(const Vertex& v) {
  const FieldCtx& K = v.ctx();
  std::vector<Vertex> out;
  out.reserve(K.q() + 1);
  out.push_back(Vertex(v.k - 1, v.u));  // ctor reduces mod pi^(k-1)
  for (fq c = 0; c < K.q(); ++c)
    out.push_back(Vertex(v.k + 1, v.u + LaurentSeries::monomial(K, c, v.k)));
  return out;
}

namespace {
int meet_level(const Vertex& v1, const Vertex& v2) {
  LaurentSeries diff = v1.u - v2.u;
  int vdiff = diff.is_zero_to_prec() ? LaurentSeries::kExact : diff.valuation();
  return std::min(std::min(v1.k, v2.k), vdiff);
}
}  // namespace

int distance(const Vertex& v1, const Vertex& v2) {
  int j = meet_level(v1, v2);
  return (v1.k - j) + (v2.k - j);
}

std::vector<Edge> path(const Vertex& v1, const Vertex& v2, int depth_limit) {
  int j = meet_level(v1, v2);
  if ((v1.k - j) + (v2.k - j) > 2 * depth_limit + 2)
    throw CapExceeded("path longer than the configured tree depth");
  std::vector<Vertex> chain;
  for (int k = v1.k; k >= j; --k) chain.push_back(Vertex(k, v1.u));
  for (int k = j + 1; k <= v2.k; ++k) chain.push_back(Vertex(k, v2.u));
  std::vector<Edge> edges;
  for (size_t i = 0; i + 1 < chain.size(); ++i)
    edges.emplace_back(chain[i], chain[i + 1]);
  return edges;
}

Ball boundary_ball(const Edge& e) {
  if (e.terminal.k == e.origin.k + 1)
    return Ball::finite(e.terminal.u, e.terminal.k);
  return Ball::complement_of(e.origin.u, e.origin.k);
}

Edge ball_to_edge(const Ball& B, int depth_limit) {
  if (std::abs(B.radius_exp) > depth_limit ||
      (!B.center.is_zero_to_prec() &&
       std::abs(B.center.valuation()) > depth_limit))
    throw CapExceeded("ball radius exceeds the configured tree depth");
  Vertex shallow(B.radius_exp - 1, B.center);
  Vertex deep(B.radius_exp, B.center);
  return B.contains_infinity ? Edge(deep, shallow) : Edge(shallow, deep);
}

// ---------------------------------------------------------------------------
// reduction into the fundamental ray

namespace {

struct VertexReduction {
  int n;
  GL2A g;  // g . v = Lambda_n under the ordinary action
};

// Exact inverse of a finite pi-expansion u (u != 0) modulo pi^k.
LaurentSeries exact_inverse_mod(const LaurentSeries& u, int k) {
  LaurentSeries inv = u.inverse(k);
  return exact_mod(inv, k);
}

VertexReduction vertex_reduce(const Vertex& v) {
  const FieldCtx& K = v.ctx();
  GL2A g = GL2A::identity(K);
  int k = v.k;
  LaurentSeries u = v.u;
  for (int guard = 0; guard < 4096; ++guard) {
    // strip the A-part of u by a translation
    PolyT apart = polynomial_part(u);
    if (!apart.is_zero()) {
      g = GL2A::translation(-apart) * g;
      u = exact_mod(u - embed(apart), k);
    }
    if (u.is_zero_to_prec()) {
      if (k <= 0) return {-k, g};
      // (pi^k, 0) ~ Lambda_{-k} with k > 0: delta swaps to Lambda_k
      g = GL2A::delta(K) * g;
      k = -k;
      return {-k, g};
    }
    // inversion step: delta then column reduction, k -> k - 2 v(u)
    int s = u.valuation();  // 1 <= s < k
    g = GL2A::delta(K) * g;
    int knew = k - 2 * s;
    u = (knew > -s) ? exact_inverse_mod(u, knew) : LaurentSeries::zero(K);
    k = knew;
  }
  throw CapExceeded("vertex reduction did not terminate");
}

}  // namespace

Reduction reduce_to_fundamental(const Edge& e) {
  const FieldCtx& K = e.origin.ctx();
  VertexReduction vr = vertex_reduce(e.origin);
  Vertex w = act(vr.g, e.terminal, Action::ordinary);
  const int n1 = vr.n;

  Reduction out;
  if (w == Vertex::lambda(K, n1 + 1)) {
    out = {n1, vr.g.transposed(), false};
  } else if (n1 == 0) {
    // w = (1, c) with c in F_q; translate then flip around Lambda_0
    fq c = w.u.is_zero_to_prec() ? 0 : w.u.coeffs()[0];
    GL2A g = GL2A::delta(K) *
             GL2A::translation(-PolyT(K, {c})) * vr.g;
    out = {0, g.transposed(), false};
  } else {
    // w lies in the Lambda_{n1-1} orbit: translate by c T^{n1}
    GL2A g = vr.g;
    if (!w.u.is_zero_to_prec()) {
      fq c = w.u.coeffs()[0];
      g = GL2A::translation(-PolyT::monomial(K, c, n1)) * g;
    }
    out = {n1 - 1, g.transposed(), true};
  }
#ifndef NDEBUG
  Edge base = Edge::ray(K, out.n);
  Edge check = act(out.gamma, out.flip ? base.reversed() : base, Action::star);
  assert(check == e && "reduce_to_fundamental round-trip");
#endif
  return out;
}

}  // namespace dmf
