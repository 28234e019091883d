#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrkit/bigint.hpp"
#include "corrkit/rotgraph.hpp"
#include "corrkit/signvec.hpp"

namespace corrkit::amplifier {

enum class Mode { theoretical, toy };

enum class ToyGraphKind { complete_loops, complete_no_loops, base_rvw };

// One level of a toy schedule. complete kinds use D_i = copies * d_i vertices;
// base_rvw uses the affine base graph over GF(2^b) with the given polynomial
// degree (D_i = 2^(b*(d_poly+1)) must be a multiple of d_i).
struct ToyLevelSpec {
  ToyGraphKind kind = ToyGraphKind::complete_loops;
  std::int64_t copies = 1;
  int b = 2;
  std::uint64_t d_poly = 1;
};

struct AmplifierParams {
  std::int64_t d = 0;   // input dimension
  std::int64_t K = 0;   // log2 of output dimension
  int ell = 1;          // log2 of strength p = 2^ell
  double tau = 0.0;     // outlier-side threshold, in (0,1)
  double gamma = 1.0;   // error, > 1
  Mode mode = Mode::theoretical;
  std::vector<ToyLevelSpec> toy_levels;  // toy mode, one per level
  std::optional<std::int64_t> toy_k;     // toy override of the padded exponent
};

struct Level {
  double tau_i = 0.0;
  std::int64_t b_i = 0, t_i = 0;  // family parameters (theoretical mode)
  BigInt d_in;                    // level input dimension d_i (divides D_i)
  BigInt D_i, Delta_i;            // graph vertex count and degree
  BigInt d_out;                   // Delta_i * D_i
  rotgraph::GraphPtr graph;
  double lambda_hat = 0.0;        // measured (toy) or the 16*2^-b family bound
  bool lambda_measured = false;
  bool degree_bound_ok = false;   // 2*lambda_hat <= (1 - 1/gamma0) * tau_i^2
};

struct AmplifierSchedule {
  AmplifierParams params;
  double gamma0 = 0.0;  // gamma^(1/2)
  double tau0 = 0.0;    // tau / gamma
  std::int64_t k = 0;   // log2 of padded input dimension
  std::vector<Level> levels;
  BigInt d_ell;         // output dimension before final padding
  std::int64_t K = 0;   // log2 of final output dimension

  bool toy_verified() const;  // all levels measured and degree bounds hold
};

// Composed parameterization: gamma0 = sqrt(gamma), tau0 = tau/gamma, minimal
// k with 2^k >= 2d(1-gamma^-1/2)^-1 gamma/tau, b_i minimal >= 10 meeting the
// degree bound, t_i unique with d_i <= 2^(16 b_i t_i) < 2^(16 b_i) d_i.
// Theoretical mode enforces the explicit output-dimension bound on 2^K
// exactly; toy mode builds the requested small-graph levels instead and
// measures their eigenvalues.
AmplifierSchedule derive_schedule(const AmplifierParams& p);

// Concatenate ceil(2^k/d) copies of x, truncated to 2^k coordinates.
SignVector copy_truncate(const SignVector& x, std::int64_t k);

// x^G: coordinate (u,i) = x(u) x(v) with Rot_G(u,i) = (v,j); dim Delta*D.
SignVector approx_square(const SignVector& x, const rotgraph::GraphPtr& g);

// Full materialization: copy-truncate, ell approximate squarings (replicating
// to D_i by index mod d_i), then pad to 2^K by index mod d_ell.
SignVector amplify(const SignVector& x, const AmplifierSchedule& s,
                   std::int64_t memory_cap_log2 = 26);

struct CoordStats {
  std::int64_t input_touches = 0;
  std::vector<std::int64_t> rot_evals;  // per level
};

// amplify(x,s)(j) without materialization; touches at most 2^ell input
// coordinates and evaluates at most 2^(ell-1-i) rotation maps of G_i.
int amplify_coord(const SignVector& x, const AmplifierSchedule& s, const BigInt& j,
                  CoordStats* stats = nullptr);

// Exact <f(x),f(y)> / 2^K, computed on the Hadamard product level by level
// without materializing the final output (complete-graph levels collapse to a
// closed-form quadratic form).
BigRat amplified_inner_product(const SignVector& x, const SignVector& y,
                               const AmplifierSchedule& s,
                               std::int64_t memory_cap_log2 = 26);

}  // namespace corrkit::amplifier
