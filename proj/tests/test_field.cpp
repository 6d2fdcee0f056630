#include "dmf/field.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace dmf;

TEST_CASE("field contexts construct with deterministic moduli") {
  FieldCtx F2(2, 1, 1);
  CHECK(F2.q() == 2);
  CHECK(F2.order() == 2);

  FieldCtx F4(2, 2, 1);
  // lexicographically least irreducible over F_2: x^2 + x + 1
  CHECK(F4.fq_modulus() == std::vector<std::uint32_t>{1, 1, 1});

  FieldCtx F9(3, 2, 1);
  // x^2 + 1 is irreducible over F_3 and has the least code
  CHECK(F9.fq_modulus() == std::vector<std::uint32_t>{1, 0, 1});

  FieldCtx F2_ext(2, 1, 2);  // F_4 as extension of F_2
  CHECK(F2_ext.order() == 4);

  CHECK_THROWS_AS(FieldCtx(4, 1, 1), ConfigError);   // p not prime
  CHECK_THROWS_AS(FieldCtx(2, 5, 1), ConfigError);   // q over cap
  CHECK_THROWS_AS(FieldCtx(2, 1, 5), ConfigError);   // m over cap
}

TEST_CASE("field arithmetic axioms against exhaustive/sampled checks") {
  for (auto [p, e, m] : {std::tuple{2, 1, 2}, {3, 1, 1}, {2, 2, 2}, {3, 2, 1}}) {
    FieldCtx K(p, e, m);
    const std::uint32_t Q = K.order();
    // exhaustive on small fields
    for (fq a = 0; a < Q; ++a) {
      CHECK(K.add(a, K.neg(a)) == 0);
      if (a != 0) CHECK(K.mul(a, K.inv(a)) == 1);
      CHECK(K.frobenius_q(a) == K.pow(a, K.q()));
    }
    for (fq a = 0; a < Q; ++a)
      for (fq b = 0; b < Q; ++b) {
        CHECK(K.add(a, b) == K.add(b, a));
        CHECK(K.mul(a, b) == K.mul(b, a));
        for (fq c = 0; c < std::min<std::uint32_t>(Q, 8); ++c) {
          CHECK(K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c)));
          CHECK(K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c)));
        }
      }
    // F_q is closed under multiplication
    for (fq a = 0; a < K.q(); ++a)
      for (fq b = 0; b < K.q(); ++b) CHECK(K.in_fq(K.mul(a, b)));
  }
}

TEST_CASE("Lucas binomials agree with Pascal mod p up to n = 300") {
  for (int p : {2, 3, 5}) {
    auto tri = oracles::pascal_mod_p(300, p);
    for (int n = 0; n <= 300; ++n)
      for (int k = 0; k <= n; ++k)
        CHECK(binom_mod_p(n, k, p) == tri[n][k]);
  }
  CHECK(binom_mod_p(6, 1, 3) == 0);
  CHECK(binom_mod_p(12345, 0, 2) == 1);
  // binom(q^2-q-1, q-2) against Pascal for q in {2,3,4}
  for (int q : {2, 3, 4}) {
    int p = (q == 3) ? 3 : 2;
    auto tri = oracles::pascal_mod_p(q * q, p);
    CHECK(binom_mod_p(q * q - q - 1, q - 2, p) == tri[q * q - q - 1][q - 2]);
  }
}

TEST_CASE("laurent arithmetic worked examples") {
  FieldCtx K(2, 1, 1);
  auto pi = LaurentSeries::pi(K);

  SUBCASE("inv(1 + pi) is the geometric series") {
    auto one_plus_pi = (LaurentSeries::one(K) + pi).truncated(5);
    auto inv = one_plus_pi.inverse();
    CHECK(inv.prec() == 5);
    CHECK(inv == LaurentSeries(K, 0, {1, 1, 1, 1, 1}, 5));
  }

  SUBCASE("frobenius_pow squares coefficients and doubles exponents") {
    auto s = pi + pi * pi;  // pi + pi^2, exact
    auto f = s.frobenius_pow(1);
    CHECK(f == LaurentSeries(K, 2, {1, 0, 1}));
    CHECK(f.is_exact());
  }

  SUBCASE("mul(x, inv(x)) = 1 at the propagated precision") {
    oracles::Rng rng;
    for (int rep = 0; rep < 1000; ++rep) {
      auto x = rng.series(K, 3, 12);
      auto prod = x * x.inverse();
      CHECK(prod.prec() == 12 - 3);  // prec - 2v + v
      CHECK(prod.agrees_with(LaurentSeries::one(K)));
    }
  }
}

TEST_CASE("laurent ring axioms at propagated precision, sampled") {
  for (auto [p, e, m] : {std::tuple{2, 1, 1}, {3, 1, 2}}) {
    FieldCtx K(p, e, m);
    oracles::Rng rng(7);
    for (int rep = 0; rep < 1000; ++rep) {
      auto a = rng.series(K, rng.uniform(-3, 3), rng.uniform(4, 10));
      auto b = rng.series(K, rng.uniform(-3, 3), rng.uniform(4, 10));
      auto c = rng.series(K, rng.uniform(-3, 3), rng.uniform(4, 10));
      CHECK(((a * b) * c).agrees_with(a * (b * c)));
      CHECK((a * (b + c)).agrees_with(a * b + a * c));
      CHECK(a.valuation() + b.valuation() == (a * b).valuation());
    }
  }
}

TEST_CASE("embed_rational examples") {
  FieldCtx K(2, 1, 1);
  auto T = PolyT::T(K);
  auto one = PolyT::one(K);

  auto r1 = embed_rational(one, T, 8);
  CHECK(r1 == LaurentSeries(K, 1, {1}, 8));
  CHECK(r1.valuation() == 1);

  auto r2 = embed_rational(one, T + one, 5);
  CHECK(r2 == LaurentSeries(K, 1, {1, 1, 1, 1}, 5));

  auto r3 = embed_rational(T * T + one, T * T, 6);
  CHECK(r3 == LaurentSeries(K, 0, {1, 0, 1}, 6));
  CHECK(r3.valuation() == 0);

  CHECK_THROWS_AS(embed_rational(one, PolyT::zero(K), 4), ZeroDenominator);
}

TEST_CASE("one_unit_part") {
  FieldCtx K(2, 1, 1);
  auto T = PolyT::T(K);
  auto one = PolyT::one(K);

  CHECK(one_unit_part(T * T + one) == LaurentSeries(K, 0, {1, 0, 1}));
  CHECK(one_unit_part(one) == LaurentSeries::one(K));
  // <T^3 + T> = 1 + pi^2: multiply back by T^3 and compare
  auto a = T * T * T + T;
  auto u = one_unit_part(a);
  CHECK(u == LaurentSeries(K, 0, {1, 0, 1}));
  auto t3 = embed(T).pow(3);
  CHECK((u * t3).agrees_with(embed(a)));
  CHECK_THROWS_AS(one_unit_part(PolyT::zero(K)), ZeroInput);

  SUBCASE("multiplicativity is exact on finite pi-polynomials") {
    for (auto [p, e] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
      FieldCtx F(p, e, 1);
      oracles::Rng rng(3);
      for (int rep = 0; rep < 200; ++rep) {
        auto x = rng.poly(F, 4), y = rng.poly(F, 4);
        if (x.is_zero() || y.is_zero()) continue;
        CHECK(one_unit_part(x * y) == one_unit_part(x) * one_unit_part(y));
      }
    }
  }
}

TEST_CASE("precision propagation rules") {
  FieldCtx K(3, 1, 1);
  oracles::Rng rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    auto a = rng.series(K, rng.uniform(-2, 4), rng.uniform(5, 12));
    auto b = rng.series(K, rng.uniform(-2, 4), rng.uniform(5, 12));
    CHECK((a + b).prec() == std::min(a.prec(), b.prec()));
    CHECK((a * b).prec() == std::min(a.prec() + b.valuation(),
                                     b.prec() + a.valuation()));
    CHECK(a.inverse().prec() == a.prec() - 2 * a.valuation());
  }
  // inverting an apparent zero fails loudly
  CHECK_THROWS_AS(LaurentSeries(K, 6).inverse(), InversionOfApparentZero);
  // exact zero stays exact through ring ops
  auto z = LaurentSeries::zero(K);
  CHECK((z * LaurentSeries::one(K)).is_exact_zero());
}

TEST_CASE("pow via base-q digits matches repeated multiplication") {
  FieldCtx K(3, 1, 2);
  oracles::Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto a = rng.series(K, rng.uniform(-1, 2), rng.uniform(6, 10));
    long long n = rng.uniform(1, 40);
    auto by_mul = LaurentSeries::one(K);
    for (int i = 0; i < n; ++i) by_mul = by_mul * a;
    CHECK(a.pow(n).agrees_with(by_mul));
    CHECK(a.pow(n).valuation() == n * a.valuation());
  }
  // 0^0 = 1 by global convention
  CHECK(LaurentSeries::zero(K).pow(0) == LaurentSeries::one(K));
}

TEST_CASE("serialization round-trips bit-exactly") {
  for (auto [p, e, m] : {std::tuple{2, 1, 1}, {2, 2, 2}, {3, 1, 2}}) {
    FieldCtx K(p, e, m);
    oracles::Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
      auto s = rng.series(K, rng.uniform(-4, 4), rng.uniform(1, 9));
      auto back = LaurentSeries::from_json(K, json::parse(s.to_json().dump()));
      CHECK(back == s);
      auto pl = rng.poly(K, 5);
      CHECK(PolyT::from_json(K, json::parse(pl.to_json().dump())) == pl);
    }
    // exact series carry prec = null
    auto ex = LaurentSeries(K, -2, {1}, LaurentSeries::kExact);
    CHECK(ex.to_json()["prec"].is_null());
    CHECK(LaurentSeries::from_json(K, ex.to_json()) == ex);
  }
}

TEST_CASE("string parsing for CLI inputs") {
  FieldCtx K(3, 1, 1);
  CHECK(PolyT::from_string(K, "T^3 + 2*T + 1") ==
        PolyT(K, {1, 2, 0, 1}));
  CHECK(PolyT::from_string(K, "0") == PolyT::zero(K));
  CHECK(LaurentSeries::from_string(K, "1 + 2*pi^2") ==
        LaurentSeries(K, 0, {1, 0, 2}));
  CHECK(LaurentSeries::from_string(K, "pi^-1 + 1") ==
        LaurentSeries(K, -1, {1, 1}));
  CHECK(LaurentSeries::from_string(K, "1 - pi") ==
        LaurentSeries(K, 0, {1, 2}));
  CHECK(LaurentSeries::from_string(K, "1 + O(pi^5)").prec() == 5);
  CHECK_THROWS_AS(PolyT::from_string(K, "T^^2"), ParseError);
}
