#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrkit/signvec.hpp"

namespace corrkit::vecio {

// Text form:   first line "pm1 <d> <n>", then n lines of d characters '+'/'-'.
// Binary form: magic "PM1\0", d and n as 64-bit little-endian unsigned
// integers, then n rows of ceil(d/8) bytes, bit j LSB-first = 1 <=> +1,
// trailing pad bits zero. The two forms round-trip bit-exactly.
struct VectorFile {
  std::int64_t d = 0;
  std::vector<SignVector> vectors;
};

void write_text(std::ostream& os, const VectorFile& f);
VectorFile read_text(std::istream& is);

void write_binary(std::ostream& os, const VectorFile& f);
VectorFile read_binary(std::istream& is);

// Sniffs the magic bytes and dispatches.
VectorFile read_path(const std::string& path);
void write_path(const std::string& path, const VectorFile& f, bool binary);

}  // namespace corrkit::vecio
