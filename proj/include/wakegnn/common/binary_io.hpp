#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

#include "wakegnn/common/error.hpp"

namespace wakegnn::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

/// Append-only little-endian byte buffer.
class ByteWriter {
 public:
  template <typename V>
    requires std::is_arithmetic_v<V>
  void put(V value) {
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(V));
  }

  template <typename V>
    requires std::is_arithmetic_v<V>
  void put_array(const V* values, std::size_t count) {
    const auto* p = reinterpret_cast<const unsigned char*>(values);
    bytes_.insert(bytes_.end(), p, p + count * sizeof(V));
  }

  void put_bytes(const void* data, std::size_t count) {
    const auto* p = static_cast<const unsigned char*>(data);
    bytes_.insert(bytes_.end(), p, p + count);
  }

  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

/// Bounds-checked reader. Running past the end throws a truncation error naming `block`.
class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  template <typename V>
    requires std::is_arithmetic_v<V>
  V get(const std::string& block) {
    V value;
    std::memcpy(&value, take(sizeof(V), block), sizeof(V));
    return value;
  }

  template <typename V>
    requires std::is_arithmetic_v<V>
  void get_array(V* out, std::size_t count, const std::string& block) {
    if (count > remaining() / sizeof(V)) truncated(block);
    std::memcpy(out, take(count * sizeof(V), block), count * sizeof(V));
  }

  const unsigned char* take(std::size_t n, const std::string& block) {
    if (n > remaining()) truncated(block);
    const unsigned char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  [[noreturn]] void truncated(const std::string& block) const {
    throw FormatError(FormatErrorKind::Truncated, block, "truncated file: block '" + block + "' is incomplete");
  }

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

}  // namespace wakegnn::io
