#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "corrkit/bigint.hpp"
#include "corrkit/gf2k.hpp"

namespace corrkit::rotgraph {

struct RotPoint {
  BigInt vertex;
  BigInt label;
};

enum class Kind {
  cycle,
  complete_loops,
  complete_no_loops,
  hypercube,
  base_rvw,
  square,
  tensor,
  zigzag,
};

// Immutable regular graph given by its rotation map. Vertices are integers in
// [0, D), edge labels in [0, Delta). Composite encodings are mixed-radix with
// the left component in the high digits; when component sizes are powers of
// two (all constructions used at scale) this is plain bit concatenation.
class Graph {
 public:
  virtual ~Graph() = default;

  const BigInt& vertex_count() const { return vertex_count_; }
  const BigInt& degree() const { return degree_; }
  int vertex_bits() const { return vertex_bits_; }
  int label_bits() const { return label_bits_; }
  Kind kind() const { return kind_; }

  // Rot(u,i) = (v,j): edge labeled i at u leads to v where it is labeled j.
  // An involution by construction.
  virtual RotPoint rot(const BigInt& vertex, const BigInt& label) const = 0;

  // Construction tree, e.g. "zigzag(square(base(b=2,d=2)), cycle(4))".
  virtual std::string describe() const = 0;

  // Fast path for graphs whose vertex count and degree fit in 63 bits; the
  // dense spectral oracle and materialized squaring live on this. Callers
  // must check fits64() first.
  bool fits64() const { return fits64_; }
  virtual void rot64(std::uint64_t vertex, std::uint64_t label, std::uint64_t& out_vertex,
                     std::uint64_t& out_label) const;

  std::uint64_t rot_vertex64(std::uint64_t vertex, std::uint64_t label) const {
    std::uint64_t v, l;
    rot64(vertex, label, v, l);
    return v;
  }

 protected:
  Graph(Kind kind, BigInt vertices, BigInt degree);

  Kind kind_;
  BigInt vertex_count_, degree_;
  int vertex_bits_ = 0, label_bits_ = 0;
  bool fits64_ = false;
};

using GraphPtr = std::shared_ptr<const Graph>;

// Toy leaf graphs with known spectra, for oracles and desk-scale schedules.
GraphPtr cycle(std::uint64_t n);                 // cos(pi/n) odd, 1 even (bipartite)
GraphPtr complete_with_loops(std::uint64_t n);   // lambda_hat = 0
GraphPtr complete_no_loops(std::uint64_t n);     // lambda_hat = 1/(n-1)
GraphPtr hypercube(int m);                       // lambda_hat = 1 (bipartite)

// Affine polynomial-evaluation graph over GF(q), q = 2^b: vertices are coefficient
// tuples in GF(q)^(d_poly+1), labels are pairs (x,y) in GF(q)^2,
// rot(a,(x,y)) = (a + y*(1, x, ..., x^d_poly), (x, y)) (-y = y in char 2).
// D = q^(d_poly+1), Delta = q^2, normalized second eigenvalue <= d_poly/q.
GraphPtr base_graph(const gf2k::FieldSpec& f, std::uint64_t d_poly);

GraphPtr square(GraphPtr g);                 // (D, Delta^2), lambda^2
GraphPtr tensor(GraphPtr g1, GraphPtr g2);   // (D1*D2, Delta1*Delta2), max
GraphPtr zigzag(GraphPtr g, GraphPtr h);     // (D1*Delta1, Delta2^2), f(l1,l2)

// Zigzag eigenvalue bound f(l1,l2) <= l1 + l2.
double zigzag_lambda_bound(double l1, double l2);

// The recursive family G_1 = H^2, G_2 = H (x) H,
// G_t = (G_ceil((t-1)/2) (x) G_floor((t-1)/2))^2 z H, with memoized
// subgraphs. Standard base: b >= 10, H = base_graph(GF(2^b), 15), giving a
// [2^(16bt), 2^(4b)]-graph with normalized second eigenvalue <= 16*2^-b.
GraphPtr rvw_family(int b, std::int64_t t);

// Same recursion over an arbitrary base for desk-scale tests; the base must
// satisfy D(H) = Delta(H)^8 or the squared tensor cannot be zigzagged with H.
GraphPtr rvw_family_toy(GraphPtr base, std::int64_t t);

// Bound sequence lambda_1 = l^2, lambda_2 = l, lambda_(2t-1) = l + l_(t-1)^2,
// lambda_(2t) = max(l + l_t^2, l + l_(t-1)^2); satisfies l_t <= l + 4 l^2
// whenever l <= 1/4.
double lambda_t_recurrence(double lambda, std::int64_t t);

}  // namespace corrkit::rotgraph
