#pragma once

#include <cstdint>

#include "corrkit/bigint.hpp"

namespace corrkit::gf2k {

// GF(2^b) for 1 <= b <= 64. Elements are b-bit integers with the coefficient
// of x^i at bit i; addition is XOR. The modulus is a monic irreducible of
// degree b, encoded as a (b+1)-bit integer (bit b always set).
struct FieldSpec {
  int b = 0;
  BigInt modulus;                 // full (b+1)-bit encoding
  std::uint64_t modulus_low = 0;  // modulus with the x^b term dropped
  std::uint64_t elem_mask = 0;    // (1<<b)-1, all-ones for b=64
};

// Lexicographically smallest monic irreducible of degree b (Rabin test over a
// deterministic scan). Stable across runs and platforms.
FieldSpec find_irreducible(int b);

// Rabin irreducibility test for a monic degree-b polynomial given by its full
// (b+1)-bit encoding: x^(2^b) == x mod f, and gcd(x^(2^(b/r)) - x, f) = 1 for
// every prime r dividing b.
bool is_irreducible(int b, const BigInt& poly);

// Carry-less product reduced modulo f.modulus (shift-and-XOR with per-step
// reduction; no 128-bit products needed).
std::uint64_t gf_mul(std::uint64_t a, std::uint64_t c, const FieldSpec& f);

std::uint64_t gf_pow(std::uint64_t a, std::uint64_t e, const FieldSpec& f);

inline std::uint64_t gf_add(std::uint64_t a, std::uint64_t c) { return a ^ c; }

// a^(2^b - 2); the multiplicative inverse for a != 0.
std::uint64_t gf_inv(std::uint64_t a, const FieldSpec& f);

}  // namespace corrkit::gf2k
