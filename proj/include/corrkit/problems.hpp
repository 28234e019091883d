#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "corrkit/detector.hpp"
#include "corrkit/signvec.hpp"

namespace corrkit::problems {

struct LightBulbInstance {
  std::vector<SignVector> vectors;
  double rho = 0.0;
  std::int64_t planted_a = -1, planted_b = -1;  // hidden from the solver
  std::uint64_t seed = 0;
};

// n-2 uniform vectors plus a planted pair: vector b is a copy of vector a
// with exactly floor(d(1-rho)/2) coordinates flipped, so their inner product
// is d - 2*floor(d(1-rho)/2) >= rho d. Deterministic per seed.
LightBulbInstance gen_lightbulb(std::int64_t n, std::int64_t d, double rho,
                                std::uint64_t seed);

struct SplitRound {
  std::vector<std::int64_t> x_idx, y_idx;
};

// ceil(log2 n) rounds; round i puts indices with bit i set on the X side.
// Every unordered pair lands on opposite sides in at least one round.
std::vector<SplitRound> split_single_set(std::int64_t n);

struct LightBulbOptions {
  double kappa = 2.0;                 // tau = rho^kappa
  std::optional<double> tau_override; // toy-mode override (rho^kappa degenerates at rho = 1)
  detector::RunOptions run;
};

struct LightBulbResult {
  bool found = false;
  std::int64_t a = -1, b = -1;      // a < b
  std::int64_t inner = 0;
  std::int64_t rounds = 0;
  std::int64_t flagged_tiles = 0;
};

// Single-set reduction over the split rounds; vectors are amplified once and
// reused. Returns the maximum-|inner| verified pair.
LightBulbResult solve_lightbulb(const LightBulbInstance& inst,
                                const LightBulbOptions& opt);

struct ParityInstance {
  std::int64_t v = 0, k = 0;
  std::vector<int> support;   // hidden from the solver
  double eta = 0.0;
  std::int64_t d = 0;         // number of examples
  std::uint64_t seed = 0;
  std::vector<SignVector> columns;  // columns[l](i) = x_i(l), dim d each
  SignVector labels;                // labels(i) = y_i
};

// d examples of the parity-with-noise law y = z * prod_{l in S} x(l),
// Pr(z = -1) = eta. Deterministic per seed.
ParityInstance gen_parity(std::int64_t v, std::int64_t k, const std::vector<int>& support,
                          double eta, std::int64_t d, std::uint64_t seed);

std::uint64_t binomial(std::int64_t n, std::int64_t k);

// Colexicographic rank/unrank of j-subsets of {0,...,v-1}.
std::uint64_t subset_rank_colex(const std::vector<int>& subset);
std::vector<int> subset_unrank_colex(std::uint64_t rank, std::int64_t v, std::int64_t j);

struct ParityCollections {
  std::int64_t j1 = 0, j2 = 0;  // floor(k/2), ceil(k/2)
  std::vector<SignVector> X;    // a^J1 with a_i = x_i^J1, colex order
  std::vector<SignVector> Y;    // b^J2 with b_i = x_i^J2 y_i, colex order
};

ParityCollections build_parity_collections(const ParityInstance& inst);

struct ParityOptions {
  double xi = 2.0;                       // rho = |1-2 eta|^xi, tau = rho^xi
  std::optional<double> rho_override, tau_override;
  detector::RunOptions run;
};

struct ParityResult {
  bool found = false;
  std::vector<int> support;
  std::int64_t score = 0;   // |sum_i x_i^S y_i| for the returned candidate
  double rho = 0.0, tau = 0.0;
};

// Builds the subset collections, detects outlier pairs, maps each reported
// (J1,J2) to the candidate J1 (+) J2 of size k, and returns the candidate with
// the best verification score (colex order breaks ties).
ParityResult solve_parity(const ParityInstance& inst, const ParityOptions& opt);

}  // namespace corrkit::problems
