#pragma once
// Slices are the unit of on-disk storage. A slice file carries a fixed header
// (magic, version, kind, partition, bin, attribute, time range), a
// length-prefixed payload and a trailing crc32 over everything before it.
// All integers little-endian. Full layout in docs/FORMATS.md.

#include <filesystem>
#include <span>

#include "core/model.hpp"

namespace tsg {

enum class SliceKind : std::uint8_t { Template = 1, Metadata = 2, Attribute = 3 };

struct Slice {
  SliceKind kind = SliceKind::Attribute;
  ElemClass elem = ElemClass::Vertex;  // attribute slices only
  PartitionId partition = 0;
  std::uint32_t bin = 0;               // attribute slices only
  Time t_start = 0;
  Time t_end = 0;                      // attribute slices: covered window
  std::string attr;                    // attribute slices only
  std::vector<std::uint8_t> payload;
};

std::vector<std::uint8_t> encode_slice(const Slice& s);
Slice decode_slice(std::span<const std::uint8_t> bytes, const std::string& origin);

void write_slice(const Slice& s, const std::filesystem::path& path);
Slice read_slice(const std::filesystem::path& path);

// Payload codecs. An attribute slice packs one attribute for all subgraphs of
// one bin over one window of consecutive instances; entries are sparse (only
// elements with raw values).
struct AttrSliceData {
  // Parallel arrays, one entry per instance in the window.
  std::vector<std::pair<Time, Time>> ranges;
  std::vector<std::unordered_map<std::uint64_t, ValueList>> values;
};

std::vector<std::uint8_t> encode_attr_payload(const AttrSliceData& d);
AttrSliceData decode_attr_payload(std::span<const std::uint8_t> payload);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);

}  // namespace tsg
