#include "core/slice.hpp"

#include <zlib.h>

#include <cstring>

#include "core/fsio.hpp"
#include "core/wire.hpp"

namespace tsg {
namespace {
constexpr char kMagic[8] = {'T', 'S', 'G', 'S', 'L', 'C', '1', '\0'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::vector<std::uint8_t> encode_slice(const Slice& s) {
  ByteWriter w;
  w.raw(kMagic, sizeof kMagic);
  w.u8(static_cast<std::uint8_t>(s.kind));
  w.u8(static_cast<std::uint8_t>(s.elem));
  w.u16(kVersion);
  w.u32(s.partition);
  w.u32(s.bin);
  w.i64(s.t_start);
  w.i64(s.t_end);
  w.str(s.attr);
  w.u64(s.payload.size());
  w.raw(s.payload.data(), s.payload.size());
  w.u32(crc32_of(w.bytes()));
  return w.take();
}

Slice decode_slice(std::span<const std::uint8_t> bytes, const std::string& origin) {
  if (bytes.size() < sizeof kMagic + 4) throw TsgError("truncated slice: " + origin);
  auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.subspan(bytes.size() - 4));
  if (tail.u32() != crc32_of(body)) throw TsgError("checksum mismatch: " + origin);

  ByteReader r(body);
  auto magic = r.raw(sizeof kMagic);
  if (std::memcmp(magic.data(), kMagic, sizeof kMagic) != 0)
    throw TsgError("not a slice file: " + origin);
  Slice s;
  s.kind = static_cast<SliceKind>(r.u8());
  if (s.kind != SliceKind::Template && s.kind != SliceKind::Metadata &&
      s.kind != SliceKind::Attribute)
    throw TsgError("unknown slice kind: " + origin);
  s.elem = static_cast<ElemClass>(r.u8());
  if (r.u16() != kVersion) throw TsgError("unsupported slice version: " + origin);
  s.partition = r.u32();
  s.bin = r.u32();
  s.t_start = r.i64();
  s.t_end = r.i64();
  s.attr = r.str();
  auto len = r.u64();
  if (len != r.remaining()) throw TsgError("payload length mismatch: " + origin);
  auto p = r.raw(len);
  s.payload.assign(p.begin(), p.end());
  return s;
}

void write_slice(const Slice& s, const std::filesystem::path& path) {
  write_file(path, encode_slice(s));
}

Slice read_slice(const std::filesystem::path& path) {
  return decode_slice(read_file(path), path.string());
}

std::vector<std::uint8_t> encode_attr_payload(const AttrSliceData& d) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(d.ranges.size()));
  for (std::size_t i = 0; i < d.ranges.size(); ++i) {
    w.i64(d.ranges[i].first);
    w.i64(d.ranges[i].second);
    // Sorted element order keeps the encoding deterministic.
    std::vector<std::uint64_t> ids;
    ids.reserve(d.values[i].size());
    for (const auto& [elem, vals] : d.values[i]) ids.push_back(elem);
    std::sort(ids.begin(), ids.end());
    w.u32(static_cast<std::uint32_t>(ids.size()));
    for (auto elem : ids) {
      const auto& vals = d.values[i].at(elem);
      w.u64(elem);
      w.u32(static_cast<std::uint32_t>(vals.size()));
      for (const auto& v : vals) w.value(v);
    }
  }
  return w.take();
}

AttrSliceData decode_attr_payload(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  AttrSliceData d;
  auto n = r.u32();
  d.ranges.reserve(n);
  d.values.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    auto start = r.i64();
    auto end = r.i64();
    d.ranges.emplace_back(start, end);
    auto entries = r.u32();
    d.values[i].reserve(entries);
    for (std::uint32_t k = 0; k < entries; ++k) {
      auto elem = r.u64();
      auto count = r.u32();
      ValueList vals;
      vals.reserve(count);
      for (std::uint32_t j = 0; j < count; ++j) vals.push_back(r.value());
      d.values[i].emplace(elem, std::move(vals));
    }
  }
  if (!r.at_end()) throw TsgError("trailing bytes in attribute payload");
  return d;
}

}  // namespace tsg
