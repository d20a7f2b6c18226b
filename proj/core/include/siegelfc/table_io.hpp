#pragma once

// Binary cache files for coefficient tables.
//
//   "SFCT" | version | kind ('J' or 'S') | form id | weight | index | bound
//   | record count | records
//
// Jacobi records are (D, r, numerator, denominator) sorted by (D, r); Siegel
// records are (a, b, c, numerator, denominator) in key order, and their index
// field holds the degree 2. Every integer is a zigzag LEB128 varint of
// arbitrary length, and strings are length-prefixed.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "siegelfc/arith.hpp"
#include "siegelfc/jacobi.hpp"
#include "siegelfc/siegel.hpp"

namespace siegelfc {

inline constexpr std::uint64_t kCacheVersion = 1;

class CacheFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CacheVersionError : public CacheFormatError {
 public:
  explicit CacheVersionError(std::uint64_t found);
  std::uint64_t found() const noexcept { return found_; }

 private:
  std::uint64_t found_;
};

void write_varint(std::string& out, const Integer& value);
/// Reads one varint at `pos` and advances it; throws CacheFormatError on
/// truncated input.
Integer read_varint(std::string_view in, std::size_t& pos);

std::string encode(const JacobiTable& table);
std::string encode(const SiegelTable& table);
JacobiTable decode_jacobi(std::string_view bytes);
SiegelTable decode_siegel(std::string_view bytes);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace siegelfc
