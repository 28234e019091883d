#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace corrkit {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt pow2(std::int64_t e) {
  BigInt v = 1;
  return v <<= e;
}

// Number of bits needed to store values 0..n-1 (0 for n <= 1).
inline int bits_for_count(const BigInt& n) {
  if (n <= 1) return 0;
  BigInt m = n - 1;
  return static_cast<int>(boost::multiprecision::msb(m)) + 1;
}

// Smallest K >= 0 with 2^K >= r; requires r > 0.
std::int64_t ceil_log2(const BigRat& r);

// floor(sqrt(n)) for n >= 0.
BigInt isqrt(const BigInt& n);

// Parses a decimal string ("0.05", "3", "-1.25e2") into an exact rational.
BigRat parse_decimal(const std::string& s);

}  // namespace corrkit
