#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrkit/amplifier.hpp"
#include "corrkit/bigint.hpp"
#include "corrkit/signvec.hpp"

namespace corrkit::detector {

// Constants of the subquadratic detection parameterization. alpha is the rectangular
// matrix-multiplication exponent used for parameter derivation only; the
// actual backend is exact cubic (naive and cache-blocked).
struct DetectorConstants {
  double epsilon = 0.5;
  double tau_max = 0.5;
  double delta = 0.1;
  double C = 61.0;
  double alpha = 1.0;
};

struct DetectorParams {
  double sigma = 0.0;
  std::int64_t s = 0;             // floor(n^sigma)
  double gamma = 1.0;             // log2 gamma = -eps log2(tau_max) / 100000
  double log2_gamma = 0.0;
  std::int64_t p = 0;             // unique power of two in the derivation window
  double p_window_lo = 0.0, p_window_hi = 0.0;
  double log2_D = 0.0;            // power of two with (1/2) d (g/t)^(Cp) < D <= d (g/t)^(Cp)
  double c1 = 0.0, c2 = 0.0;
  double log2_threshold = 0.0;    // log2 of n^(2 sigma) (tau gamma)^p D
  double zeta = 0.0;              // sigma / 4, surfaced for the parity reduction
  std::vector<std::string> violations;  // named assumptions that do not hold
};

// Derives sigma, s, gamma, p, D and the detection threshold for an instance
// shape. With enforce=true any violated assumption raises a ParameterError
// naming it; with enforce=false the ledger is returned with violations listed
// (nothing is clamped).
DetectorParams derive_params(std::int64_t n, std::int64_t d, double rho, double tau,
                             const DetectorConstants& c, bool enforce = true);

// Contiguous partition into ceil(n/s) buckets of at most s vectors, summed
// coordinatewise. Row-major, one row per bucket.
struct Aggregates {
  std::int64_t bucket_size = 0;
  std::int64_t dim = 0;
  std::int64_t count = 0;
  std::vector<std::int32_t> data;                        // count x dim
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;  // member index ranges
};
Aggregates bucket_aggregate(const std::vector<SignVector>& vectors, std::int64_t s);

// C (m1 x m2) = A (m1 x dim) * B (dim x m2), exact in int64. Both backends
// raise a capacity error when max|A| * max|B| * dim reaches 2^62.
void gemm_naive(const std::int32_t* a, const std::int32_t* b, std::int64_t m1,
                std::int64_t m2, std::int64_t dim, std::int64_t* c);
void gemm_blocked(const std::int32_t* a, const std::int32_t* b, std::int64_t m1,
                  std::int64_t m2, std::int64_t dim, std::int64_t* c, int threads = 1);

enum class AmpMode { identity, toy, explicit_amp, tensor_sample };

struct RunOptions {
  AmpMode mode = AmpMode::identity;
  std::optional<amplifier::AmplifierSchedule> schedule;  // toy / explicit_amp
  std::int64_t ts_dim = 0;       // tensor_sample output dimension
  std::int64_t ts_p = 2;         // tensor_sample strength
  std::uint64_t ts_seed = 1;
  std::int64_t s = 1;            // bucket size
  double tau = 0.0;              // background threshold of the run
  double gamma = 1.0;            // amplifier error used in the threshold
  std::int64_t p = 1;            // amplifier strength used in the threshold
  std::optional<double> n2sigma; // defaults to s^2 (desk-scale bound on s^2 <= n^(2 sigma))
  int threads = 1;
  std::int64_t memory_cap_log2 = 26;
};

struct OutlierPair {
  std::int64_t x_index = 0, y_index = 0;
  std::int64_t inner = 0;  // exact inner product in the original dimension
};

struct DetectionReport {
  std::vector<OutlierPair> outliers;
  std::int64_t tiles_total = 0;
  std::int64_t flagged_tiles = 0;  // the q-estimate: tiles passing the inequality
  std::int64_t pairs_scanned = 0;
  std::int64_t s = 1;
  BigInt amplified_dim;
  double threshold = 0.0;          // upward-rounded right-hand side
  std::int64_t rho_threshold_abs = 0;
  std::string mode;
  std::uint64_t ts_seed = 0;
};

// The four-step algorithm: amplify, bucket-aggregate, multiply, scan flagged
// tiles and verify exactly in the original dimension. Every reported pair
// satisfies |<x,y>| >= rho d; with an amplifier honouring the correlation
// amplifier contract for (tau, gamma, p), no such pair is missed.
DetectionReport detect_outliers(const std::vector<SignVector>& X,
                                const std::vector<SignVector>& Y, double rho,
                                const RunOptions& opt);

// Same pipeline with amplification already done (solvers amplify once and
// reuse across split rounds).
DetectionReport detect_amplified(const std::vector<SignVector>& amp_x,
                                 const std::vector<SignVector>& amp_y,
                                 const std::vector<SignVector>& X,
                                 const std::vector<SignVector>& Y, double rho,
                                 const RunOptions& opt, const std::string& mode_name);

// Exact quadratic-scan baseline via bit-packed popcounts.
std::vector<OutlierPair> brute_force_pairs(const std::vector<SignVector>& X,
                                           const std::vector<SignVector>& Y,
                                           std::int64_t threshold_abs);

// Smallest integer t with t >= rho * d.
std::int64_t outlier_threshold_abs(double rho, std::int64_t d);

// Right-hand side of the detection inequality, n2sigma * (tau gamma)^p * dim,
// rounded upward so tiles sitting exactly at the bound are never flagged.
double detection_threshold(double n2sigma, double tau, double gamma, std::int64_t p,
                           std::int64_t dim);

// Materialized tensor-sample baseline: coordinate j of f(x) is the product of
// p seeded-random coordinates of x (the same sample for every vector).
std::vector<SignVector> tensor_sample_map(const std::vector<SignVector>& v,
                                          std::int64_t out_dim, std::int64_t p,
                                          std::uint64_t seed);

}  // namespace corrkit::detector
