#include "corrkit/vecio.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corrkit/errors.hpp"

namespace corrkit::vecio {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'M', '1', '\0'};

void put_u64(std::ostream& os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = is.get();
    if (c == EOF) throw ParseError("vector file: truncated header");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void write_text(std::ostream& os, const VectorFile& f) {
  os << "pm1 " << f.d << " " << f.vectors.size() << "\n";
  std::string row(static_cast<std::size_t>(f.d), '+');
  for (const auto& v : f.vectors) {
    for (std::int64_t j = 0; j < f.d; ++j) row[static_cast<std::size_t>(j)] = v.get(j) > 0 ? '+' : '-';
    os << row << "\n";
  }
}

VectorFile read_text(std::istream& is) {
  VectorFile f;
  std::string line;
  if (!std::getline(is, line)) throw ParseError("vector file: missing header line");
  std::istringstream head(line);
  std::string tag;
  std::int64_t n = 0;
  if (!(head >> tag >> f.d >> n) || tag != "pm1")
    throw ParseError("vector file: line 1: expected 'pm1 <d> <n>'");
  if (f.d < 1 || n < 0) throw ParseError("vector file: line 1: bad dimensions");
  f.vectors.reserve(static_cast<std::size_t>(n));
  for (std::int64_t r = 0; r < n; ++r) {
    if (!std::getline(is, line))
      throw ParseError("vector file: line " + std::to_string(r + 2) + ": missing row");
    if (static_cast<std::int64_t>(line.size()) != f.d)
      throw ParseError("vector file: line " + std::to_string(r + 2) + ": expected " +
                       std::to_string(f.d) + " characters, got " +
                       std::to_string(line.size()));
    SignVector v(f.d);
    for (std::int64_t j = 0; j < f.d; ++j) {
      const char c = line[static_cast<std::size_t>(j)];
      if (c == '+')
        v.set(j, +1);
      else if (c == '-')
        v.set(j, -1);
      else
        throw ParseError("vector file: line " + std::to_string(r + 2) + ", offset " +
                         std::to_string(j) + ": expected '+' or '-'");
    }
    f.vectors.push_back(std::move(v));
  }
  return f;
}

void write_binary(std::ostream& os, const VectorFile& f) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, static_cast<std::uint64_t>(f.d));
  put_u64(os, f.vectors.size());
  const std::int64_t row_bytes = (f.d + 7) / 8;
  for (const auto& v : f.vectors) {
    for (std::int64_t byte = 0; byte < row_bytes; ++byte) {
      const std::uint64_t word = v.words()[static_cast<std::size_t>(byte / 8)];
      os.put(static_cast<char>((word >> (8 * (byte % 8))) & 0xFF));
    }
  }
}

VectorFile read_binary(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (is.gcount() != 4 || magic != kMagic)
    throw ParseError("vector file: offset 0: bad magic, expected PM1\\0");
  VectorFile f;
  f.d = static_cast<std::int64_t>(get_u64(is));
  const std::uint64_t n = get_u64(is);
  if (f.d < 1) throw ParseError("vector file: offset 4: bad dimension");
  const std::int64_t row_bytes = (f.d + 7) / 8;
  f.vectors.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    SignVector v(f.d);
    auto& words = v.words();
    for (std::int64_t byte = 0; byte < row_bytes; ++byte) {
      const int c = is.get();
      if (c == EOF)
        throw ParseError("vector file: offset " +
                         std::to_string(20 + r * row_bytes + byte) + ": truncated row");
      words[static_cast<std::size_t>(byte / 8)] |=
          static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (byte % 8));
    }
    // trailing pad bits must be zero so round trips are bit-exact
    SignVector check = v;
    check.clear_pad();
    if (!(check == v))
      throw ParseError("vector file: row " + std::to_string(r) + ": nonzero pad bits");
    f.vectors.push_back(std::move(v));
  }
  return f;
}

VectorFile read_path(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("vector file: cannot open " + path);
  const int first = is.peek();
  if (first == 'P') return read_binary(is);
  return read_text(is);
}

void write_path(const std::string& path, const VectorFile& f, bool binary) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("vector file: cannot open " + path + " for writing");
  if (binary)
    write_binary(os, f);
  else
    write_text(os, f);
}

}  // namespace corrkit::vecio
