#include "survkit/femb.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace survkit {

namespace {

constexpr char kMagic[4] = {'F', 'E', 'M', 'B'};
constexpr std::uint16_t kVersion = 1;

// Integers are stored little-endian; serialization goes through explicit
// byte shifts so the format does not depend on host endianness.
void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void EmbeddingMatrix::validate() const {
  require(dim >= 1, ErrKind::invalid, "embedding matrix: dim must be >= 1");
  require(n_patients >= 0, ErrKind::invalid, "embedding matrix: negative row count");
  require(values.size() == static_cast<std::size_t>(n_patients * dim), ErrKind::invalid,
          "embedding matrix: value count does not match n_patients*dim");
  for (float v : values) {
    require(std::isfinite(v), ErrKind::invalid, "embedding matrix: non-finite value");
  }
}

void write_embeddings(const EmbeddingMatrix& m, const std::string& path) {
  m.validate();
  std::string header;
  header.append(kMagic, 4);
  put_u16(header, kVersion);
  put_u32(header, static_cast<std::uint32_t>(m.n_patients));
  put_u32(header, static_cast<std::uint32_t>(m.dim));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrKind::io, "cannot open for writing: " + path);
  f.write(header.data(), static_cast<std::streamsize>(header.size()));
  static_assert(sizeof(float) == 4);
  // float32 payload written verbatim (little-endian hosts only, which is
  // every target this builds on; the header check would catch a mismatch).
  f.write(reinterpret_cast<const char*>(m.values.data()),
          static_cast<std::streamsize>(m.values.size() * sizeof(float)));
  require(f.good(), ErrKind::io, "write failed: " + path);
}

EmbeddingMatrix read_embeddings(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrKind::io, "missing file: " + path);

  unsigned char header[14];
  f.read(reinterpret_cast<char*>(header), sizeof(header));
  require(f.gcount() == sizeof(header), ErrKind::io, "truncated .femb header: " + path);
  require(std::memcmp(header, kMagic, 4) == 0, ErrKind::io, "bad magic bytes (not .femb): " + path);
  require(get_u16(header + 4) == kVersion, ErrKind::io, "unsupported .femb version: " + path);

  EmbeddingMatrix m;
  m.n_patients = get_u32(header + 6);
  m.dim = get_u32(header + 10);
  require(m.dim >= 1, ErrKind::io, ".femb with dim < 1: " + path);

  const std::size_t count = static_cast<std::size_t>(m.n_patients) * static_cast<std::size_t>(m.dim);
  m.values.resize(count);
  f.read(reinterpret_cast<char*>(m.values.data()),
         static_cast<std::streamsize>(count * sizeof(float)));
  require(static_cast<std::size_t>(f.gcount()) == count * sizeof(float), ErrKind::io,
          "truncated .femb payload: " + path);
  char extra;
  require(!f.read(&extra, 1), ErrKind::io, "trailing bytes after .femb payload: " + path);

  for (float v : m.values) {
    require(std::isfinite(v), ErrKind::invalid, "non-finite value in " + path);
  }
  return m;
}

}  // namespace survkit
