#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "corrkit/bigint.hpp"

namespace corrkit::bounds {

// Query for the output-dimension calculators. tau and gamma are exact
// rationals; all returned dimension values are exact (floating point is used
// only for logarithmic applicability diagnostics).
struct DimQuery {
  BigInt d;
  std::int64_t p = 2;          // strength; the amplifier contract needs p even
  BigRat tau;                  // in (0,1)
  BigRat gamma;                // > 1
  std::optional<int> ell;      // log2 p, for the explicit bound
};

// Nonconstructive existence bound: ceil(3d (gamma^p - 1)^-2 (gamma/tau)^(2p)).
BigInt existence_dim(const DimQuery& q);

struct ExplicitDim {
  std::int64_t K = 0;        // minimal with 2^K >= the main explicit bound
  std::int64_t K_sharp = 0;  // same for the sharper post-composition bound
};

// Minimal power of two satisfying
//   2^K >= d (2^10 (1-gamma^-1/2)^-1)^(20 ell + 1) (gamma/tau)^(60 * 2^ell),
// decided exactly by interval refinement around sqrt(gamma); also reports the
// sharper bound 2^-8 d (...)^(20 ell + 1) (gamma/tau) (gamma^60/tau^40)^(2^ell)
// tau^20/gamma^30.
ExplicitDim explicit_dim(const DimQuery& q);

struct LowerDim {
  bool applicable = false;
  BigInt bound;                 // ceil((1/5) (1/(gamma tau))^p) when applicable
  std::string violated;         // the failed precondition, when not applicable
};

// Alon-style lower bound, valid when (gamma tau)^p <= 1/100 and
// p <= (log e) tau^2 d / (8 log(1/(gamma tau))).
LowerDim lower_dim(const DimQuery& q);

// exp(-2 c^2 / (D width^2)): the Hoeffding tail with D uniform ranges.
double hoeffding_tail(double count, double deviation, double range_width);

}  // namespace corrkit::bounds
