#include "corrkit/bigint.hpp"

#include <cctype>
#include <cstdlib>

#include "corrkit/errors.hpp"

namespace corrkit {

std::int64_t ceil_log2(const BigRat& r) {
  if (r <= 0) throw ParameterError("ceil_log2: argument must be positive");
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  // start near log2(num) - log2(den) and fix up exactly
  std::int64_t k = static_cast<std::int64_t>(boost::multiprecision::msb(num)) -
                   static_cast<std::int64_t>(boost::multiprecision::msb(den));
  auto holds = [&](std::int64_t e) {
    // 2^e >= num/den
    if (e >= 0) return pow2(e) * den >= num;
    return den >= num * pow2(-e);
  };
  while (!holds(k)) ++k;
  while (k > 0 && holds(k - 1)) --k;
  if (k < 0) k = 0;
  return k;
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw ParameterError("isqrt: negative argument");
  if (n == 0) return 0;
  BigInt x = pow2((bits_for_count(n + 1) + 1) / 2);  // x >= sqrt(n)
  for (;;) {
    BigInt y = (x + n / x) >> 1;
    if (y >= x) break;
    x = y;
  }
  return x;
}

BigRat parse_decimal(const std::string& s) {
  std::string t = s;
  bool neg = false;
  std::size_t pos = 0;
  if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
    neg = t[pos] == '-';
    ++pos;
  }
  std::string digits;
  std::int64_t frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  std::int64_t exp10 = 0;
  for (; pos < t.size(); ++pos) {
    char c = t[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if ((c == 'e' || c == 'E') && seen_digit) {
      exp10 = std::strtoll(t.c_str() + pos + 1, nullptr, 10);
      break;
    } else {
      throw ParseError("parse_decimal: bad character in '" + s + "'");
    }
  }
  if (!seen_digit) throw ParseError("parse_decimal: no digits in '" + s + "'");
  BigInt num(digits.empty() ? "0" : digits);
  BigInt den = 1;
  std::int64_t e = exp10 - frac_digits;
  BigInt ten = 10;
  for (std::int64_t i = 0; i < (e > 0 ? e : -e); ++i) {
    if (e > 0)
      num *= ten;
    else
      den *= ten;
  }
  if (neg) num = -num;
  return BigRat(num, den);
}

}  // namespace corrkit
