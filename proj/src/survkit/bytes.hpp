#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <string>

#include "survkit/error.hpp"

namespace survkit {

// Little-endian scalar encoding for the binary file formats.
inline void put_u16(std::string& out, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
public:
  ByteReader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  void read_raw(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    require(static_cast<std::size_t>(in_.gcount()) == n, ErrKind::io, "truncated file: " + path_);
  }

  std::uint16_t u16() { return static_cast<std::uint16_t>(u(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(u(4)); }
  std::uint64_t u64() { return u(8); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    read_raw(s.data(), n);
    return s;
  }

  void expect_end() {
    char extra;
    require(!in_.read(&extra, 1), ErrKind::io, "trailing bytes in " + path_);
  }

  const std::string& path() const { return path_; }

private:
  std::uint64_t u(int n_bytes) {
    unsigned char buf[8];
    read_raw(buf, static_cast<std::size_t>(n_bytes));
    std::uint64_t v = 0;
    for (int i = n_bytes - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }

  std::istream& in_;
  std::string path_;
};

}  // namespace survkit
