#include "dmf/tree.hpp"

#include <map>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

using namespace dmf;

namespace {

GL2A random_gl2a(const FieldCtx& K, oracles::Rng& rng, int max_deg = 3) {
  // products of elementary matrices, re-rolled until entries fit the degree
  for (;;) {
    GL2A g = GL2A::identity(K);
    for (int i = 0; i < 4; ++i) {
      switch (rng.uniform(0, 3)) {
        case 0:
          g = g * GL2A::translation(rng.poly(K, rng.uniform(0, 2)));
          break;
        case 1:
          g = g * GL2A::translation(rng.poly(K, rng.uniform(0, 2)))
                      .transposed();
          break;
        case 2:
          g = g * GL2A::delta(K);
          break;
        default: {
          fq u = fq(rng.uniform(1, int(K.q()) - 1));
          if (u == 0) u = 1;
          g = g * GL2A(PolyT(K, {u}), PolyT::zero(K), PolyT::zero(K),
                       PolyT::one(K));
        }
      }
    }
    int d = std::max(std::max(g.a.degree(), g.b.degree()),
                     std::max(g.c.degree(), g.d.degree()));
    if (d <= max_deg) return g;
  }
}

Vertex random_vertex(const FieldCtx& K, oracles::Rng& rng) {
  int k = rng.uniform(-4, 4);
  int lo = k - rng.uniform(0, 4);
  std::vector<fq> c;
  for (int i = lo; i < k; ++i) c.push_back(rng.elem_fq(K));
  if (c.empty()) return Vertex(k, LaurentSeries::zero(K));
  return Vertex(k, LaurentSeries(K, lo, std::move(c)));
}

// a random point of P^1(k_infty): finite pi-expansion or infinity
struct SamplePoint {
  bool infinite = false;
  LaurentSeries x;
};

SamplePoint random_point(const FieldCtx& K, oracles::Rng& rng) {
  if (rng.uniform(0, 19) == 0) return {true, {}};
  int lo = rng.uniform(-6, 4);
  std::vector<fq> c;
  for (int i = 0; i < 10; ++i) c.push_back(rng.elem_fq(K));
  if (c[0] == 0) c[0] = 1;
  return {false, LaurentSeries(K, lo, std::move(c))};
}

bool ball_contains(const Ball& B, const SamplePoint& P) {
  if (P.infinite) return B.contains_infinity;
  return B.contains(P.x);
}

}  // namespace

TEST_CASE("normalize_vertex worked examples") {
  FieldCtx K(2, 1, 1);
  auto one = LaurentSeries::one(K);
  auto pi = LaurentSeries::pi(K);
  auto zero = LaurentSeries::zero(K);

  CHECK(normalize_vertex(GL2K(one, zero, zero, one)) == Vertex::lambda(K, 0));

  // (pi, 1 + pi; 0, 1): terms of exponent >= k drop from u
  auto v = normalize_vertex(GL2K(pi, one + pi, zero, one));
  CHECK(v == Vertex(1, one));

  // (0, 1; pi^-1, 1) ~ Lambda_{-1}
  auto w = normalize_vertex(
      GL2K(zero, one, LaurentSeries::monomial(K, 1, -1), one));
  CHECK(w == Vertex::lambda(K, -1));
}

TEST_CASE("worked star actions around Lambda_0") {
  for (int q : {2, 3}) {
    FieldCtx K(q == 2 ? 2 : 3, 1, 1);
    auto L1 = Vertex::lambda(K, 1);

    // delta * Lambda_1 = Lambda_{-1}
    CHECK(act(GL2A::delta(K), L1, Action::star) == Vertex::lambda(K, -1));

    // gamma_b * Lambda_1 = (k=1, u=-1/b) for b in F_q^*
    for (fq b = 1; b < K.q(); ++b) {
      auto got = act(GL2A::translation(PolyT(K, {b})), L1, Action::star);
      fq expect = K.neg(K.inv(b));
      CHECK(got == Vertex(1, LaurentSeries::monomial(K, expect, 0)));
    }

    // identity acts trivially (ordinary)
    oracles::Rng rng(17);
    for (int i = 0; i < 20; ++i) {
      auto v = random_vertex(K, rng);
      CHECK(act(GL2A::identity(K), v, Action::ordinary) == v);
    }
  }
}

TEST_CASE("star action is a left action; ordinary too") {
  for (int q : {2, 3}) {
    FieldCtx K(q, 1, 1);
    oracles::Rng rng(23);
    for (int rep = 0; rep < 1000; ++rep) {
      auto g1 = random_gl2a(K, rng), g2 = random_gl2a(K, rng);
      auto v = random_vertex(K, rng);
      for (Action mode : {Action::ordinary, Action::star}) {
        CHECK(act(g1 * g2, v, mode) == act(g1, act(g2, v, mode), mode));
      }
    }
  }
}

TEST_CASE("neighbors") {
  FieldCtx K(2, 1, 1);
  auto nb = neighbors(Vertex::lambda(K, 0));
  CHECK(nb.size() == 3);
  std::set<std::string> names;
  for (auto& v : nb) names.insert(v.str());
  CHECK(names == std::set<std::string>{"L(1)", "L(-1)", "[pi^1; 1]"});

  FieldCtx K3(3, 1, 1);
  oracles::Rng rng(29);
  for (int rep = 0; rep < 100; ++rep) {
    auto v = random_vertex(K3, rng);
    auto ns = neighbors(v);
    CHECK(ns.size() == K3.q() + 1);
    std::set<std::string> uniq;
    for (auto& w : ns) {
      CHECK(distance(v, w) == 1);
      uniq.insert(w.str());
    }
    CHECK(uniq.size() == ns.size());
  }
  // neighbors(Lambda_n) contains Lambda_{n-1} and Lambda_{n+1}
  for (int n : {-2, 0, 3}) {
    auto ns = neighbors(Vertex::lambda(K3, n));
    int hits = 0;
    for (auto& w : ns)
      if (w == Vertex::lambda(K3, n - 1) || w == Vertex::lambda(K3, n + 1))
        ++hits;
    CHECK(hits == 2);
  }
}

TEST_CASE("paths and distances") {
  FieldCtx K(2, 1, 1);
  auto p = path(Vertex::lambda(K, 0), Vertex::lambda(K, 3));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == Edge::ray(K, 0));
  CHECK(p[1] == Edge::ray(K, 1));
  CHECK(p[2] == Edge::ray(K, 2));

  CHECK(path(Vertex::lambda(K, 2), Vertex::lambda(K, 2)).empty());
  CHECK(distance(Vertex::lambda(K, 2), Vertex::lambda(K, 2)) == 0);

  oracles::Rng rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    auto v1 = random_vertex(K, rng), v2 = random_vertex(K, rng);
    auto g = random_gl2a(K, rng);
    CHECK(distance(act(g, v1, Action::star), act(g, v2, Action::star)) ==
          distance(v1, v2));
    auto pp = path(v1, v2);
    CHECK(int(pp.size()) == distance(v1, v2));
  }
}

TEST_CASE("boundary balls of ray edges") {
  FieldCtx K(2, 1, 1);
  // U(Lambda_1 Lambda_0) = B_0(|pi|^0) = A_infty
  auto B1 = boundary_ball(Edge::ray(K, 0).reversed());
  CHECK(!B1.contains_infinity);
  CHECK(B1.center.is_zero_to_prec());
  CHECK(B1.radius_exp == 0);

  // U(Lambda_0 Lambda_1) = B_infty(|pi|^1)
  auto B2 = boundary_ball(Edge::ray(K, 0));
  CHECK(B2.is_binf());
  CHECK(B2.binf_exponent() == 1);

  // B_x(|pi|^{j+1}) with x = 1 + pi maps to the edge M_j -> M_{j+1}
  auto x = LaurentSeries::one(K) + LaurentSeries::pi(K);
  for (int j : {1, 2, 3}) {
    auto e = ball_to_edge(Ball::finite(x, j + 1));
    CHECK(e.origin == Vertex::on_end(j, x));
    CHECK(e.terminal == Vertex::on_end(j + 1, x));
    CHECK(!e.positive());
  }
  // positivity: infinity lies in U(e) iff e is positively oriented
  CHECK(Edge::ray(K, 0).positive());
  CHECK(!Edge::ray(K, 0).reversed().positive());
}

TEST_CASE("edge <-> ball bijection, exhaustive to depth 5") {
  for (int q : {2, 3}) {
    FieldCtx K(q, 1, 1);
    // all vertices with k in [-2, 5] hanging over centers of exponent >= -2
    std::vector<Vertex> verts;
    for (int k = -2; k <= 5; ++k) {
      std::uint64_t count = 1;
      for (int i = -2; i < k; ++i) count *= K.q();
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<fq> c;
        std::uint64_t t = code;
        for (int i = -2; i < k; ++i) {
          c.push_back(fq(t % K.q()));
          t /= K.q();
        }
        verts.push_back(Vertex(k, c.empty()
                                      ? LaurentSeries::zero(K)
                                      : LaurentSeries(K, -2, std::move(c))));
      }
    }
    int checked = 0;
    for (auto& v : verts) {
      if (v.k >= 5) continue;
      for (auto& w : neighbors(v)) {
        if (w.k < -2 || w.k > 5) continue;
        Edge e(v, w);
        CHECK(ball_to_edge(boundary_ball(e)) == e);
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("U(e) and U(reversed e) partition P^1") {
  for (int q : {2, 3}) {
    FieldCtx K(q, 1, 1);
    oracles::Rng rng(37);
    std::vector<Edge> edges;
    for (int i = 0; i < 100; ++i) {
      auto v = random_vertex(K, rng);
      auto ns = neighbors(v);
      edges.emplace_back(v, ns[rng.uniform(0, int(ns.size()) - 1)]);
    }
    for (int i = 0; i < 1000; ++i) {
      auto P = random_point(K, rng);
      auto& e = edges[i % edges.size()];
      Ball U = boundary_ball(e), Ubar = boundary_ball(e.reversed());
      int inside = (ball_contains(U, P) ? 1 : 0) +
                   (ball_contains(Ubar, P) ? 1 : 0);
      CHECK(inside == 1);
    }
  }
}

TEST_CASE("reduce_to_fundamental worked examples") {
  FieldCtx K(2, 1, 1);

  auto r1 = reduce_to_fundamental(Edge::ray(K, 2));
  CHECK(r1.n == 2);
  CHECK(!r1.flip);
  CHECK(r1.gamma == GL2A::identity(K));

  // reversed e_{-1}: Lambda_{-1} -> Lambda_0 reduces through delta with flip
  Edge em1(Vertex::lambda(K, -1), Vertex::lambda(K, 0));
  auto r2 = reduce_to_fundamental(em1);
  CHECK(r2.n == 0);
  CHECK(r2.flip);
  CHECK(r2.gamma == GL2A::delta(K));
  CHECK(act(r2.gamma, Edge::ray(K, 0).reversed(), Action::star) == em1);
}

TEST_CASE("reduce_to_fundamental round-trips on random edges") {
  for (int q : {2, 3}) {
    FieldCtx K(q, 1, 1);
    oracles::Rng rng(41);
    for (int rep = 0; rep < 500; ++rep) {
      Edge e = [&] {
        if (rep % 3 == 0) {
          auto v = random_vertex(K, rng);
          auto ns = neighbors(v);
          return Edge(v, ns[rng.uniform(0, int(ns.size()) - 1)]);
        }
        auto g = random_gl2a(K, rng);
        int n = rng.uniform(0, 2);
        Edge base = Edge::ray(K, n);
        return act(g, rep % 2 ? base : base.reversed(), Action::star);
      }();
      auto r = reduce_to_fundamental(e);
      CHECK(r.n >= 0);
      Edge base = Edge::ray(K, r.n);
      CHECK(act(r.gamma, r.flip ? base.reversed() : base, Action::star) == e);
    }
  }
}

TEST_CASE("determinism of reduction") {
  FieldCtx K(3, 1, 1);
  oracles::Rng rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = random_gl2a(K, rng);
    Edge e = act(g, Edge::ray(K, 1), Action::star);
    auto r1 = reduce_to_fundamental(e);
    auto r2 = reduce_to_fundamental(e);
    CHECK(r1.n == r2.n);
    CHECK(r1.flip == r2.flip);
    CHECK(r1.gamma == r2.gamma);
  }
}

TEST_CASE("stabilizer facts from the fundamental domain") {
  // Under the ordinary action the upper-triangular group with deg b <= n
  // fixes the edge Lambda_n -> Lambda_{n+1}; under the star action its
  // transpose does.
  for (int q : {2, 3}) {
    FieldCtx K(q, 1, 1);
    for (int n = 1; n <= 3; ++n) {
      Edge en = Edge::ray(K, n);
      std::uint64_t count = 1;
      for (int i = 0; i <= std::min(n, 3); ++i) count *= K.q();
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<fq> bc;
        std::uint64_t t = code;
        for (int i = 0; i <= std::min(n, 3); ++i) {
          bc.push_back(fq(t % K.q()));
          t /= K.q();
        }
        PolyT b(K, std::move(bc));
        for (fq a = 1; a < K.q(); ++a)
          for (fq d = 1; d < K.q(); ++d) {
            GL2A g(PolyT(K, {a}), b, PolyT::zero(K), PolyT(K, {d}));
            CHECK(act(g, en, Action::ordinary) == en);
            CHECK(act(g.transposed(), en, Action::star) == en);
          }
      }
    }
    // Gamma_0 = GL2(F_q) acts transitively on the edges with origin Lambda_0
    std::set<std::string> orbit;
    Edge e0 = Edge::ray(K, 0);
    for (fq a = 0; a < K.q(); ++a)
      for (fq b = 0; b < K.q(); ++b)
        for (fq c = 0; c < K.q(); ++c)
          for (fq d = 0; d < K.q(); ++d) {
            if (K.sub(K.mul(a, d), K.mul(b, c)) == 0) continue;
            GL2A g(PolyT(K, {a}), PolyT(K, {b}), PolyT(K, {c}), PolyT(K, {d}));
            orbit.insert(act(g, e0, Action::ordinary).str());
          }
    CHECK(orbit.size() == K.q() + 1);
  }
}

TEST_CASE("vertex and edge parsing round-trips") {
  FieldCtx K(3, 1, 1);
  for (const char* s : {"L(0)", "L(-2)", "L(5)"}) {
    auto v = Vertex::from_string(K, s);
    CHECK(v.str() == s);
  }
  auto v = Vertex::from_string(K, "[pi^2; 1 + 2*pi]");
  CHECK(v.k == 2);
  CHECK(v.u == LaurentSeries(K, 0, {1, 2}));
  auto e = Edge::from_string(K, "L(-1)->L(0)");
  CHECK(e.origin == Vertex::lambda(K, -1));
  CHECK(e.terminal == Vertex::lambda(K, 0));
  CHECK_THROWS_AS(Edge::from_string(K, "L(0)->L(2)"), ConfigError);
  CHECK_THROWS_AS(Vertex::from_string(K, "garbage"), ParseError);
}
