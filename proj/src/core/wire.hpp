#pragma once
// Little-endian binary encoding helpers. Used by the slice file format, the
// partition map file and message payloads. All multi-byte integers are
// little-endian regardless of host order.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace tsg {

class ByteWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { append_le(v); }
  void u32(std::uint32_t v) { append_le(v); }
  void u64(std::uint64_t v) { append_le(v); }
  void i64(std::int64_t v) { append_le(static_cast<std::uint64_t>(v)); }
  void f64(double v) { append_le(std::bit_cast<std::uint64_t>(v)); }

  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  void raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }

  void value(const Value& v) {
    u8(static_cast<std::uint8_t>(value_type_of(v)));
    switch (value_type_of(v)) {
      case ValueType::Boolean: u8(std::get<bool>(v) ? 1 : 0); break;
      case ValueType::Integer: i64(std::get<std::int64_t>(v)); break;
      case ValueType::Float: f64(std::get<double>(v)); break;
      case ValueType::String: str(std::get<std::string>(v)); break;
    }
  }

  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

private:
  template <typename T>
  void append_le(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      buf_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }

  std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() { return read_le<std::uint16_t>(); }
  std::uint32_t u32() { return read_le<std::uint32_t>(); }
  std::uint64_t u64() { return read_le<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(read_le<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(read_le<std::uint64_t>()); }

  std::string str() {
    auto n = u32();
    auto s = take(n);
    return std::string(reinterpret_cast<const char*>(s.data()), s.size());
  }

  Value value() {
    auto type = static_cast<ValueType>(u8());
    switch (type) {
      case ValueType::Boolean: return Value(u8() != 0);
      case ValueType::Integer: return Value(i64());
      case ValueType::Float: return Value(f64());
      case ValueType::String: return Value(str());
    }
    throw TsgError("corrupt value tag");
  }

  std::span<const std::uint8_t> raw(std::size_t n) { return take(n); }

  bool at_end() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

private:
  template <typename T>
  T read_le() {
    auto s = take(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(s[i]) << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (pos_ + n > data_.size()) throw TsgError("truncated payload");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace tsg
