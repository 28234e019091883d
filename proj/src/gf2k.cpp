#include "corrkit/gf2k.hpp"

#include <vector>

#include "corrkit/errors.hpp"

namespace corrkit::gf2k {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

int degree128(u128 p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

// gcd of polynomials over GF(2); operands up to 65 bits.
u128 poly_gcd(u128 a, u128 b) {
  while (b) {
    int db = degree128(b);
    int da;
    while ((da = degree128(a)) >= db && a) a ^= b << (da - db);
    u128 t = a;
    a = b;
    b = t;
  }
  return a;
}

// a*c mod a monic degree-b polynomial whose low bits (x^b term dropped) are
// mod_low. Valid for any monic modulus, reducible or not.
u64 mulmod(u64 a, u64 c, int b, u64 mod_low, u64 mask) {
  u64 r = 0;
  const u64 top = 1ull << (b - 1);
  while (c) {
    if (c & 1) r ^= a;
    c >>= 1;
    const bool carry = (a & top) != 0;
    a = (a << 1) & mask;
    if (carry) a ^= mod_low;
  }
  return r;
}

std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 mask_for(int b) { return b == 64 ? ~0ull : (1ull << b) - 1; }

}  // namespace

bool is_irreducible(int b, const BigInt& poly) {
  if (b < 1 || b > 64) throw ParameterError("gf2k: b must be in [1,64]");
  if (!boost::multiprecision::bit_test(poly, static_cast<unsigned>(b)))
    throw ParameterError("gf2k: polynomial is not monic of degree b");
  const u64 mask = mask_for(b);
  const u64 mod_low = static_cast<u64>(poly & mask);
  if (b == 1) return true;  // x and x+1 both pass (every monic linear is irreducible)

  // x^(2^b) == x mod f via b squarings of x
  const u64 x = 0b10;
  u64 s = x;
  for (int i = 0; i < b; ++i) s = mulmod(s, s, b, mod_low, mask);
  if (s != x) return false;

  const u128 full = (u128(1) << b) | mod_low;
  for (int r : prime_factors(b)) {
    u64 t = x;
    for (int i = 0; i < b / r; ++i) t = mulmod(t, t, b, mod_low, mask);
    if (poly_gcd(u128(t ^ x), full) != 1) return false;
  }
  return true;
}

FieldSpec find_irreducible(int b) {
  if (b < 1 || b > 64) throw ParameterError("gf2k: b must be in [1,64]");
  for (u64 low = 0;; ++low) {
    BigInt poly = pow2(b) | BigInt(low);
    if (is_irreducible(b, poly)) {
      FieldSpec f;
      f.b = b;
      f.modulus = poly;
      f.modulus_low = low;
      f.elem_mask = mask_for(b);
      return f;
    }
  }
}

std::uint64_t gf_mul(std::uint64_t a, std::uint64_t c, const FieldSpec& f) {
  return mulmod(a, c, f.b, f.modulus_low, f.elem_mask);
}

std::uint64_t gf_pow(std::uint64_t a, std::uint64_t e, const FieldSpec& f) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = gf_mul(r, a, f);
    a = gf_mul(a, a, f);
    e >>= 1;
  }
  return r;
}

std::uint64_t gf_inv(std::uint64_t a, const FieldSpec& f) {
  if (a == 0) throw ParameterError("gf2k: zero has no inverse");
  return gf_pow(a, f.elem_mask - 1, f);  // 2^b - 2 for every b <= 64
}

}  // namespace corrkit::gf2k
