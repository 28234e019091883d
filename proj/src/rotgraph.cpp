#include "corrkit/rotgraph.hpp"

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "corrkit/errors.hpp"

namespace corrkit::rotgraph {

namespace {

void check_range(const Graph& g, const BigInt& v, const BigInt& lab) {
  if (v < 0 || v >= g.vertex_count())
    throw ParameterError("rot: vertex out of range in " + g.describe());
  if (lab < 0 || lab >= g.degree())
    throw ParameterError("rot: label out of range in " + g.describe());
}

}  // namespace

Graph::Graph(Kind kind, BigInt vertices, BigInt degree)
    : kind_(kind), vertex_count_(std::move(vertices)), degree_(std::move(degree)) {
  vertex_bits_ = bits_for_count(vertex_count_);
  label_bits_ = bits_for_count(degree_);
  fits64_ = vertex_bits_ <= 63 && label_bits_ <= 63;
}

void Graph::rot64(std::uint64_t vertex, std::uint64_t label, std::uint64_t& out_vertex,
                  std::uint64_t& out_label) const {
  RotPoint r = rot(BigInt(vertex), BigInt(label));
  out_vertex = static_cast<std::uint64_t>(r.vertex);
  out_label = static_cast<std::uint64_t>(r.label);
}

namespace {

class CycleGraph final : public Graph {
 public:
  explicit CycleGraph(std::uint64_t n) : Graph(Kind::cycle, n, 2), n_(n) {}

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    std::uint64_t ov, ol;
    rot64(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(lab), ov, ol);
    return {BigInt(ov), BigInt(ol)};
  }

  // label 0 = forward edge, 1 = backward; the edge keeps its direction
  // sense, so the far end sees the opposite label.
  void rot64(std::uint64_t u, std::uint64_t i, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    if (i == 0) {
      ov = (u + 1) % n_;
      ol = 1;
    } else {
      ov = (u + n_ - 1) % n_;
      ol = 0;
    }
  }

  std::string describe() const override { return "cycle(" + std::to_string(n_) + ")"; }

 private:
  std::uint64_t n_;
};

class CompleteLoopsGraph final : public Graph {
 public:
  explicit CompleteLoopsGraph(std::uint64_t n)
      : Graph(Kind::complete_loops, n, n), n_(n) {}

  // Edge labeled i at u leads to i; at the far end it is labeled u.
  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    return {lab, v};
  }

  void rot64(std::uint64_t u, std::uint64_t i, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    ov = i;
    ol = u;
  }

  std::string describe() const override {
    return "complete_loops(" + std::to_string(n_) + ")";
  }

 private:
  std::uint64_t n_;
};

class CompleteNoLoopsGraph final : public Graph {
 public:
  explicit CompleteNoLoopsGraph(std::uint64_t n)
      : Graph(Kind::complete_no_loops, n, n - 1), n_(n) {
    if (n < 2) throw ParameterError("complete_no_loops: need at least 2 vertices");
  }

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    std::uint64_t ov, ol;
    rot64(static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(lab), ov, ol);
    return {BigInt(ov), BigInt(ol)};
  }

  void rot64(std::uint64_t u, std::uint64_t i, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    ov = (u + 1 + i) % n_;
    ol = (u + n_ - 1 - ov) % n_;  // (u - w - 1) mod n
  }

  std::string describe() const override {
    return "complete(" + std::to_string(n_) + ")";
  }

 private:
  std::uint64_t n_;
};

class HypercubeGraph final : public Graph {
 public:
  explicit HypercubeGraph(int m)
      : Graph(Kind::hypercube, pow2(m), m), m_(m) {}

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    BigInt w = v ^ pow2(static_cast<std::int64_t>(lab));
    return {w, lab};
  }

  void rot64(std::uint64_t u, std::uint64_t i, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    ov = u ^ (1ull << i);
    ol = i;
  }

  std::string describe() const override { return "hypercube(" + std::to_string(m_) + ")"; }

 private:
  int m_;
};

class BaseRvwGraph final : public Graph {
 public:
  BaseRvwGraph(gf2k::FieldSpec field, std::uint64_t d_poly)
      : Graph(Kind::base_rvw, pow2(field.b * (static_cast<std::int64_t>(d_poly) + 1)),
              pow2(2 * field.b)),
        field_(std::move(field)),
        d_poly_(d_poly) {
    if (d_poly < 1) throw ParameterError("base_graph: d_poly must be >= 1");
    if (BigInt(d_poly) >= pow2(field_.b))
      throw ParameterError("base_graph: d_poly must be < q = 2^b for a useful bound");
  }

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    const int b = field_.b;
    const std::uint64_t chunk_mask = field_.elem_mask;
    // label (x,y), x in the high b bits
    const std::uint64_t y = static_cast<std::uint64_t>(lab & chunk_mask);
    const std::uint64_t x = static_cast<std::uint64_t>((lab >> b) & chunk_mask);
    // vertex (a_0, ..., a_d), a_0 in the highest b bits; a_i += y * x^i
    BigInt out = 0;
    std::uint64_t xpow = 1;  // x^i
    for (std::uint64_t i = 0; i <= d_poly_; ++i) {
      const int shift = b * static_cast<int>(d_poly_ - i);
      std::uint64_t coeff = static_cast<std::uint64_t>((v >> shift) & chunk_mask);
      coeff ^= gf2k::gf_mul(y, xpow, field_);
      out |= BigInt(coeff) << shift;
      if (i < d_poly_) xpow = gf2k::gf_mul(xpow, x, field_);
    }
    // returned label is (x, -y) = (x, y) in characteristic 2
    return {out, lab};
  }

  void rot64(std::uint64_t u, std::uint64_t lab, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    if (!fits64()) {
      Graph::rot64(u, lab, ov, ol);
      return;
    }
    const int b = field_.b;
    const std::uint64_t chunk_mask = field_.elem_mask;
    const std::uint64_t y = lab & chunk_mask;
    const std::uint64_t x = (lab >> b) & chunk_mask;
    std::uint64_t out = 0;
    std::uint64_t xpow = 1;
    for (std::uint64_t i = 0; i <= d_poly_; ++i) {
      const int shift = b * static_cast<int>(d_poly_ - i);
      std::uint64_t coeff = (u >> shift) & chunk_mask;
      coeff ^= gf2k::gf_mul(y, xpow, field_);
      out |= coeff << shift;
      if (i < d_poly_) xpow = gf2k::gf_mul(xpow, x, field_);
    }
    ov = out;
    ol = lab;
  }

  std::string describe() const override {
    return "base(b=" + std::to_string(field_.b) + ",d=" + std::to_string(d_poly_) + ")";
  }

 private:
  gf2k::FieldSpec field_;
  std::uint64_t d_poly_;
};

class SquareGraph final : public Graph {
 public:
  explicit SquareGraph(GraphPtr g)
      : Graph(Kind::square, g->vertex_count(), g->degree() * g->degree()),
        g_(std::move(g)) {
    if (fits64()) child_delta_ = static_cast<std::uint64_t>(g_->degree());
  }

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    const BigInt delta = g_->degree();
    const BigInt i1 = lab / delta, i2 = lab % delta;
    RotPoint first = g_->rot(v, i1);
    RotPoint second = g_->rot(first.vertex, i2);
    // walk i1 then i2; the reverse walk starts with the last reverse label
    return {second.vertex, second.label * delta + first.label};
  }

  void rot64(std::uint64_t v, std::uint64_t lab, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    std::uint64_t v1, j1, v2, j2;
    g_->rot64(v, lab / child_delta_, v1, j1);
    g_->rot64(v1, lab % child_delta_, v2, j2);
    ov = v2;
    ol = j2 * child_delta_ + j1;
  }

  std::string describe() const override { return "square(" + g_->describe() + ")"; }

 private:
  GraphPtr g_;
  std::uint64_t child_delta_ = 0;
};

class TensorGraph final : public Graph {
 public:
  TensorGraph(GraphPtr g1, GraphPtr g2)
      : Graph(Kind::tensor, g1->vertex_count() * g2->vertex_count(),
              g1->degree() * g2->degree()),
        g1_(std::move(g1)),
        g2_(std::move(g2)) {
    if (fits64()) {
      d2_ = static_cast<std::uint64_t>(g2_->vertex_count());
      l2_ = static_cast<std::uint64_t>(g2_->degree());
    }
  }

  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    const BigInt d2 = g2_->vertex_count(), l2 = g2_->degree();
    RotPoint r1 = g1_->rot(v / d2, lab / l2);
    RotPoint r2 = g2_->rot(v % d2, lab % l2);
    return {r1.vertex * d2 + r2.vertex, r1.label * l2 + r2.label};
  }

  void rot64(std::uint64_t v, std::uint64_t lab, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    std::uint64_t v1, j1, v2, j2;
    g1_->rot64(v / d2_, lab / l2_, v1, j1);
    g2_->rot64(v % d2_, lab % l2_, v2, j2);
    ov = v1 * d2_ + v2;
    ol = j1 * l2_ + j2;
  }

  std::string describe() const override {
    return "tensor(" + g1_->describe() + "," + g2_->describe() + ")";
  }

 private:
  GraphPtr g1_, g2_;
  std::uint64_t d2_ = 0, l2_ = 0;
};

class ZigzagGraph final : public Graph {
 public:
  ZigzagGraph(GraphPtr g, GraphPtr h)
      : Graph(Kind::zigzag, g->vertex_count() * h->vertex_count(),
              h->degree() * h->degree()),
        g_(std::move(g)),
        h_(std::move(h)) {
    if (g_->degree() != h_->vertex_count())
      throw ParameterError("zigzag: degree of G must equal vertex count of H (" +
                           g_->describe() + " z " + h_->describe() + ")");
    if (fits64()) {
      dh_ = static_cast<std::uint64_t>(h_->vertex_count());
      lh_ = static_cast<std::uint64_t>(h_->degree());
    }
  }

  // short step in H, long step in G, short step in H; the returned label
  // is the reversed pair (j', i') so the map stays an involution.
  RotPoint rot(const BigInt& v, const BigInt& lab) const override {
    check_range(*this, v, lab);
    const BigInt dh = h_->vertex_count(), lh = h_->degree();
    const BigInt gv = v / dh, a = v % dh;
    const BigInt i = lab / lh, j = lab % lh;
    RotPoint s1 = h_->rot(a, i);                  // (a', i')
    RotPoint s2 = g_->rot(gv, s1.vertex);         // (w, b)
    RotPoint s3 = h_->rot(s2.label, j);           // (b', j')
    return {s2.vertex * dh + s3.vertex, s3.label * lh + s1.label};
  }

  void rot64(std::uint64_t v, std::uint64_t lab, std::uint64_t& ov,
             std::uint64_t& ol) const override {
    std::uint64_t a1, i1, w, b, b1, j1;
    h_->rot64(v % dh_, lab / lh_, a1, i1);
    g_->rot64(v / dh_, a1, w, b);
    h_->rot64(b, lab % lh_, b1, j1);
    ov = w * dh_ + b1;
    ol = j1 * lh_ + i1;
  }

  std::string describe() const override {
    return "zigzag(" + g_->describe() + "," + h_->describe() + ")";
  }

 private:
  GraphPtr g_, h_;
  std::uint64_t dh_ = 0, lh_ = 0;
};

}  // namespace

GraphPtr cycle(std::uint64_t n) {
  if (n < 3) throw ParameterError("cycle: need n >= 3");
  return std::make_shared<CycleGraph>(n);
}

GraphPtr complete_with_loops(std::uint64_t n) {
  if (n < 1) throw ParameterError("complete_with_loops: need n >= 1");
  return std::make_shared<CompleteLoopsGraph>(n);
}

GraphPtr complete_no_loops(std::uint64_t n) {
  return std::make_shared<CompleteNoLoopsGraph>(n);
}

GraphPtr hypercube(int m) {
  if (m < 1 || m > 32) throw ParameterError("hypercube: need 1 <= m <= 32");
  return std::make_shared<HypercubeGraph>(m);
}

GraphPtr base_graph(const gf2k::FieldSpec& f, std::uint64_t d_poly) {
  return std::make_shared<BaseRvwGraph>(f, d_poly);
}

GraphPtr square(GraphPtr g) { return std::make_shared<SquareGraph>(std::move(g)); }

GraphPtr tensor(GraphPtr g1, GraphPtr g2) {
  return std::make_shared<TensorGraph>(std::move(g1), std::move(g2));
}

GraphPtr zigzag(GraphPtr g, GraphPtr h) {
  return std::make_shared<ZigzagGraph>(std::move(g), std::move(h));
}

double zigzag_lambda_bound(double l1, double l2) {
  const double a = (1.0 - l2 * l2) * l1;
  return 0.5 * a + 0.5 * std::sqrt(a * a + 4.0 * l2 * l2);
}

namespace {

GraphPtr build_family(const GraphPtr& h, std::int64_t t,
                      std::map<std::int64_t, GraphPtr>& memo) {
  auto it = memo.find(t);
  if (it != memo.end()) return it->second;
  GraphPtr g;
  if (t == 1) {
    g = square(h);
  } else if (t == 2) {
    g = tensor(h, h);
  } else {
    GraphPtr hi = build_family(h, (t - 1 + 1) / 2, memo);
    GraphPtr lo = build_family(h, (t - 1) / 2, memo);
    g = zigzag(square(tensor(hi, lo)), h);
  }
  memo.emplace(t, g);
  return g;
}

}  // namespace

GraphPtr rvw_family(int b, std::int64_t t) {
  if (t < 1) throw ParameterError("rvw_family: t must be >= 1");
  if (b < 10)
    throw ParameterError(
        "rvw_family: b must be >= 10 (lambda <= 1/4 precondition); use "
        "rvw_family_toy for smaller bases");
  GraphPtr h = base_graph(gf2k::find_irreducible(b), 15);
  std::map<std::int64_t, GraphPtr> memo;
  return build_family(h, t, memo);
}

GraphPtr rvw_family_toy(GraphPtr base, std::int64_t t) {
  if (t < 1) throw ParameterError("rvw_family_toy: t must be >= 1");
  BigInt d8 = 1;
  for (int i = 0; i < 8; ++i) d8 *= base->degree();
  if (t >= 3 && base->vertex_count() != d8)
    throw ParameterError(
        "rvw_family_toy: base must satisfy D = Delta^8 for the recursion (" +
        base->describe() + ")");
  std::map<std::int64_t, GraphPtr> memo;
  return build_family(std::move(base), t, memo);
}

double lambda_t_recurrence(double lambda, std::int64_t t) {
  if (t < 1) throw ParameterError("lambda_t_recurrence: t must be >= 1");
  std::vector<double> seq(static_cast<std::size_t>(t) + 1, 0.0);
  for (std::int64_t i = 1; i <= t; ++i) {
    if (i == 1)
      seq[1] = lambda * lambda;
    else if (i == 2)
      seq[2] = lambda;
    else if (i % 2 == 1)
      seq[i] = lambda + seq[(i - 1) / 2] * seq[(i - 1) / 2];
    else {
      const double a = seq[i / 2], b = seq[i / 2 - 1];
      const double m = a > b ? a : b;
      seq[i] = lambda + m * m;
    }
  }
  return seq[t];
}

}  // namespace corrkit::rotgraph
