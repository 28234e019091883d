#pragma once

#include <numeric>
#include <vector>

#include "corrkit/prng.hpp"
#include "corrkit/rotgraph.hpp"
#include "corrkit/signvec.hpp"

namespace testutil {

using corrkit::SignVector;
using corrkit::SplitMix64;

// copy of x with exactly `flips` distinct coordinates flipped
inline SignVector flipped_copy(const SignVector& x, std::int64_t flips, SplitMix64& rng) {
  SignVector y = x;
  const std::int64_t d = x.dim();
  std::vector<std::int64_t> pos(d);
  std::iota(pos.begin(), pos.end(), 0);
  for (std::int64_t i = 0; i < flips; ++i) {
    const std::int64_t j = i + static_cast<std::int64_t>(rng.below(d - i));
    std::swap(pos[i], pos[j]);
    y.flip(pos[i]);
  }
  return y;
}

// rot(rot(u,i)) == (u,i), exhaustively when D*Delta <= 2^16, else on `probes`
// seeded random points
inline bool involution_holds(const corrkit::rotgraph::GraphPtr& g, std::int64_t probes = 10000) {
  using corrkit::BigInt;
  const BigInt slots = g->vertex_count() * g->degree();
  if (slots <= (std::int64_t(1) << 16)) {
    const std::uint64_t D = static_cast<std::uint64_t>(g->vertex_count());
    const std::uint64_t L = static_cast<std::uint64_t>(g->degree());
    for (std::uint64_t u = 0; u < D; ++u)
      for (std::uint64_t i = 0; i < L; ++i) {
        auto r = g->rot(BigInt(u), BigInt(i));
        auto rr = g->rot(r.vertex, r.label);
        if (rr.vertex != u || rr.label != i) return false;
      }
    return true;
  }
  SplitMix64 rng(0xD1CEull);
  const int vb = g->vertex_bits(), lb = g->label_bits();
  for (std::int64_t n = 0; n < probes; ++n) {
    BigInt u = 0, i = 0;
    for (int w = 0; w <= vb / 64; ++w) u |= BigInt(rng.next()) << (64 * w);
    for (int w = 0; w <= lb / 64; ++w) i |= BigInt(rng.next()) << (64 * w);
    u %= g->vertex_count();
    i %= g->degree();
    auto r = g->rot(u, i);
    if (r.vertex < 0 || r.vertex >= g->vertex_count()) return false;
    if (r.label < 0 || r.label >= g->degree()) return false;
    auto rr = g->rot(r.vertex, r.label);
    if (rr.vertex != u || rr.label != i) return false;
  }
  return true;
}

}  // namespace testutil
