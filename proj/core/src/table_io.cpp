#include "siegelfc/table_io.hpp"

#include <fstream>
#include <iterator>
#include <vector>

namespace siegelfc {

namespace {

constexpr std::string_view kMagic = "SFCT";

void write_string(std::string& out, std::string_view s) {
  write_varint(out, Integer(static_cast<unsigned long>(s.size())));
  out.append(s);
}

std::string read_string(std::string_view in, std::size_t& pos) {
  const std::int64_t n = to_int64(read_varint(in, pos));
  if (n < 0 || pos + static_cast<std::size_t>(n) > in.size()) {
    throw CacheFormatError("cache: truncated string");
  }
  std::string s(in.substr(pos, static_cast<std::size_t>(n)));
  pos += static_cast<std::size_t>(n);
  return s;
}

std::int64_t read_int(std::string_view in, std::size_t& pos) {
  const Integer v = read_varint(in, pos);
  if (!v.fits_slong_p()) {
    throw CacheFormatError("cache: integer field out of range");
  }
  return v.get_si();
}

Rational read_rational(std::string_view in, std::size_t& pos) {
  Integer num = read_varint(in, pos);
  Integer den = read_varint(in, pos);
  if (den <= 0) {
    throw CacheFormatError("cache: non-positive denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

void write_header(std::string& out, char kind, std::string_view id, std::int64_t weight,
                  std::int64_t index, std::int64_t bound) {
  out.append(kMagic);
  write_varint(out, Integer(static_cast<unsigned long>(kCacheVersion)));
  out.push_back(kind);
  write_string(out, id);
  write_varint(out, Integer(static_cast<long>(weight)));
  write_varint(out, Integer(static_cast<long>(index)));
  write_varint(out, Integer(static_cast<long>(bound)));
}

struct Header {
  std::string id;
  std::int64_t weight;
  std::int64_t index;
  std::int64_t bound;
};

Header read_header(std::string_view in, std::size_t& pos, char kind) {
  if (in.substr(0, kMagic.size()) != kMagic) {
    throw CacheFormatError("cache: bad magic");
  }
  pos = kMagic.size();
  const Integer version = read_varint(in, pos);
  if (version != static_cast<unsigned long>(kCacheVersion)) {
    throw CacheVersionError(version.fits_ulong_p() ? version.get_ui() : 0);
  }
  if (pos >= in.size() || in[pos] != kind) {
    throw CacheFormatError(std::string("cache: expected table kind ") + kind);
  }
  ++pos;
  Header h;
  h.id = read_string(in, pos);
  h.weight = read_int(in, pos);
  h.index = read_int(in, pos);
  h.bound = read_int(in, pos);
  return h;
}

void write_rational(std::string& out, const Rational& q) {
  write_varint(out, q.get_num());
  write_varint(out, q.get_den());
}

}  // namespace

CacheVersionError::CacheVersionError(std::uint64_t found)
    : CacheFormatError("cache: format version " + std::to_string(found) + ", expected " +
                       std::to_string(kCacheVersion)),
      found_(found) {}

void write_varint(std::string& out, const Integer& value) {
  // zigzag: 2v for v >= 0, -2v - 1 for v < 0
  Integer z = value >= 0 ? Integer(2 * value) : Integer(-2 * value - 1);
  do {
    unsigned char byte = static_cast<unsigned char>(mpz_fdiv_ui(z.get_mpz_t(), 128));
    mpz_fdiv_q_2exp(z.get_mpz_t(), z.get_mpz_t(), 7);
    if (z != 0) {
      byte |= 0x80;
    }
    out.push_back(static_cast<char>(byte));
  } while (z != 0);
}

Integer read_varint(std::string_view in, std::size_t& pos) {
  std::vector<unsigned char> groups;
  for (;;) {
    if (pos >= in.size()) {
      throw CacheFormatError("cache: truncated varint");
    }
    const auto byte = static_cast<unsigned char>(in[pos++]);
    groups.push_back(byte & 0x7f);
    if ((byte & 0x80) == 0) {
      break;
    }
  }
  Integer z = 0;
  for (std::size_t i = groups.size(); i-- > 0;) {
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), 7);
    z += groups[i];
  }
  // inverse zigzag
  if (mpz_odd_p(z.get_mpz_t())) {
    return -(z + 1) / 2;
  }
  return z / 2;
}

std::string encode(const JacobiTable& table) {
  std::string out;
  write_header(out, 'J', table.label(), table.weight(), table.index(), table.disc_bound());
  write_varint(out, Integer(static_cast<unsigned long>(table.key_count())));
  table.for_each([&](std::int64_t d, std::int64_t r, const Rational& v) {
    write_varint(out, Integer(static_cast<long>(d)));
    write_varint(out, Integer(static_cast<long>(r)));
    write_rational(out, v);
  });
  return out;
}

std::string encode(const SiegelTable& table) {
  std::string out;
  write_header(out, 'S', table.source(), table.weight(), 2, table.det4_bound());
  write_varint(out, Integer(static_cast<unsigned long>(table.entries().size())));
  for (const auto& [key, v] : table.entries()) {
    write_varint(out, Integer(static_cast<long>(key.a)));
    write_varint(out, Integer(static_cast<long>(key.b)));
    write_varint(out, Integer(static_cast<long>(key.c)));
    write_rational(out, v);
  }
  return out;
}

JacobiTable decode_jacobi(std::string_view bytes) {
  std::size_t pos = 0;
  const Header h = read_header(bytes, pos, 'J');
  if (h.index < 1 || h.bound < 0) {
    throw CacheFormatError("cache: bad Jacobi header");
  }
  JacobiTable table(static_cast<int>(h.weight), static_cast<int>(h.index), h.bound, h.id);
  const std::int64_t count = read_int(bytes, pos);
  if (count != static_cast<std::int64_t>(table.key_count())) {
    throw CacheFormatError("cache: record count does not match the header bound");
  }
  std::int64_t prev_d = -1, prev_r = -1;
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t d = read_int(bytes, pos);
    const std::int64_t r = read_int(bytes, pos);
    if (d < prev_d || (d == prev_d && r <= prev_r) || !table.admissible(d, r) || d > h.bound) {
      throw CacheFormatError("cache: unsorted or inadmissible Jacobi record");
    }
    prev_d = d;
    prev_r = r;
    table.set(d, r, read_rational(bytes, pos));
  }
  if (pos != bytes.size()) {
    throw CacheFormatError("cache: trailing bytes");
  }
  return table;
}

SiegelTable decode_siegel(std::string_view bytes) {
  std::size_t pos = 0;
  const Header h = read_header(bytes, pos, 'S');
  if (h.index != 2 || h.bound < 0) {
    throw CacheFormatError("cache: bad Siegel header");
  }
  const std::int64_t count = read_int(bytes, pos);
  if (count < 0) {
    throw CacheFormatError("cache: negative record count");
  }
  std::vector<SiegelTable::Entry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    BinaryKey key;
    key.a = read_int(bytes, pos);
    key.b = read_int(bytes, pos);
    key.c = read_int(bytes, pos);
    entries.emplace_back(key, read_rational(bytes, pos));
  }
  if (pos != bytes.size()) {
    throw CacheFormatError("cache: trailing bytes");
  }
  try {
    return SiegelTable(static_cast<int>(h.weight), h.bound, h.id, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw CacheFormatError(std::string("cache: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot read " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace siegelfc
