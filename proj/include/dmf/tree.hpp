#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmf/field.hpp"

namespace dmf {

/// Vertex of the Bruhat-Tits tree of GL2(k_infty) in the normal form
/// (pi^k, u; 0, 1) modulo k_infty^* GL2(A_infty).  u is an exact finite
/// pi-expansion over F_q with all exponents < k; two vertices are equal iff
/// (k, u) agree.  The ray vertex Lambda_n is stored as (k = -n, u = 0).
struct Vertex {
  int k = 0;
  LaurentSeries u;  // exact, coefficients in F_q, exponents < k

  Vertex() = default;
  Vertex(int k_, LaurentSeries u_);

  static Vertex lambda(const FieldCtx& ctx, int n);
  /// M_j on the end x: the class [pi^j v1, x v1 + v2].
  static Vertex on_end(int j, const LaurentSeries& x) { return Vertex(j, x); }

  const FieldCtx& ctx() const { return u.ctx(); }
  bool is_lambda() const { return u.is_zero_to_prec(); }
  int lambda_index() const { return -k; }

  bool operator==(const Vertex& o) const { return k == o.k && u == o.u; }
  bool operator!=(const Vertex& o) const { return !(*this == o); }
  bool operator<(const Vertex& o) const;

  std::string str() const;
  json to_json() const;
  static Vertex from_string(const FieldCtx& ctx, const std::string& s);
};

/// Oriented edge: adjacent vertex pair.  positive() <=> infinity lies in
/// U(e), which happens exactly when k decreases along the edge.
struct Edge {
  Vertex origin, terminal;

  Edge() = default;
  Edge(Vertex o, Vertex t);

  bool positive() const { return terminal.k == origin.k - 1; }
  Edge reversed() const { return Edge(terminal, origin); }
  /// The fundamental-ray edge e_n = Lambda_n -> Lambda_{n+1}.
  static Edge ray(const FieldCtx& ctx, int n);

  bool operator==(const Edge& o) const {
    return origin == o.origin && terminal == o.terminal;
  }
  bool operator<(const Edge& o) const {
    return origin < o.origin || (origin == o.origin && terminal < o.terminal);
  }
  std::string str() const;
  json to_json() const;
  static Edge from_string(const FieldCtx& ctx, const std::string& s);
};

/// Closed ball of P^1(k_infty).  A finite ball is {|x - c| <= |pi|^j}; with
/// contains_infinity set the ball is the complement {|x - c| >= |pi|^(j-1)}
/// together with infinity.  B_infty(|pi|^m) is the complement ball with
/// center 0 and j = 1 - m.  Centers are canonical: reduced modulo pi^j.
struct Ball {
  bool contains_infinity = false;
  LaurentSeries center;
  int radius_exp = 0;

  static Ball finite(const LaurentSeries& c, int j);
  static Ball complement_of(const LaurentSeries& c, int j);
  static Ball around_infinity(const FieldCtx& ctx, int m);

  Ball complement() const;
  bool contains(const LaurentSeries& x) const;
  bool is_binf() const { return contains_infinity && center.is_zero_to_prec(); }
  /// For center-0 complement balls, the m with this == B_infty(|pi|^m).
  int binf_exponent() const { return 1 - radius_exp; }

  bool operator==(const Ball& o) const {
    return contains_infinity == o.contains_infinity && center == o.center &&
           radius_exp == o.radius_exp;
  }
  std::string str() const;
  json to_json() const;
};

/// Element of GL2(A); the determinant is a unit of F_q (checked).
struct GL2A {
  PolyT a, b, c, d;
  fq det = 0;

  GL2A() = default;
  GL2A(PolyT a_, PolyT b_, PolyT c_, PolyT d_);
  static GL2A identity(const FieldCtx& ctx);
  /// delta = (0,1;1,0)
  static GL2A delta(const FieldCtx& ctx);
  /// upper unipotent (1, b; 0, 1)
  static GL2A translation(const PolyT& b);

  GL2A operator*(const GL2A& o) const;
  GL2A transposed() const { return GL2A(a, c, b, d); }
  /// The matrix (d, -c; -b, a) implementing the star action gamma * L =
  /// ((gamma^T)^{-1}) L up to the central scalar det(gamma).
  GL2A star_matrix() const { return GL2A(d, -c, -b, a); }
  bool operator==(const GL2A& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  std::string str() const;
  json to_json() const;
};

/// Element of GL2(k_infty) with truncated-series entries.
struct GL2K {
  LaurentSeries a, b, c, d;
  GL2K() = default;
  GL2K(LaurentSeries a_, LaurentSeries b_, LaurentSeries c_, LaurentSeries d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
  static GL2K from(const GL2A& g);
  LaurentSeries det() const { return a * d - b * c; }
  GL2K operator*(const GL2K& o) const;
  GL2K star_matrix() const { return GL2K(d, -c, -b, a); }
};

enum class Action { ordinary, star };

/// Normal-form representative of the lattice class of M.  Throws
/// InsufficientPrecision when the truncated entries cannot decide the
/// reduction; exact inputs are retried internally at higher working
/// precision.
Vertex normalize_vertex(const GL2K& M);

Vertex act(const GL2K& g, const Vertex& v, Action mode);
Vertex act(const GL2A& g, const Vertex& v, Action mode);
Edge act(const GL2K& g, const Edge& e, Action mode);
Edge act(const GL2A& g, const Edge& e, Action mode);

/// The q+1 vertices at distance 1.
std::vector<Vertex> neighbors(const Vertex& v);

int distance(const Vertex& v1, const Vertex& v2);
/// The unique geodesic as a list of edges (empty when v1 == v2).
std::vector<Edge> path(const Vertex& v1, const Vertex& v2,
                       int depth_limit = 64);

/// U(e) as a closed ball of P^1(k_infty), and its inverse.
Ball boundary_ball(const Edge& e);
Edge ball_to_edge(const Ball& B, int depth_limit = 64);

struct Reduction {
  int n = 0;
  GL2A gamma;
  bool flip = false;
};

/// Writes e as act(gamma, e_n, star), or act(gamma, reversed e_n, star) when
/// flip is set, with gamma in GL2(A) and n >= 0.  Deterministic.
Reduction reduce_to_fundamental(const Edge& e);

}  // namespace dmf
