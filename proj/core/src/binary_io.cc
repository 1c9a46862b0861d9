#include "binary_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "graphmatch/error.h"

namespace graphmatch::internal {
namespace {

std::uint32_t ToLittleEndian(std::uint32_t value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    return ((value & 0xffu) << 24) | ((value & 0xff00u) << 8) |
           ((value >> 8) & 0xff00u) | (value >> 24);
  }
}

}  // namespace

void ByteWriter::Magic(std::string_view magic) {
  bytes_.insert(bytes_.end(), magic.begin(), magic.end());
}

void ByteWriter::U32(std::uint32_t value) {
  const std::uint32_t le = ToLittleEndian(value);
  char buffer[4];
  std::memcpy(buffer, &le, 4);
  bytes_.insert(bytes_.end(), buffer, buffer + 4);
}

void ByteWriter::F32(float value) { U32(std::bit_cast<std::uint32_t>(value)); }

void ByteWriter::F32s(std::span<const float> values) {
  bytes_.reserve(bytes_.size() + 4 * values.size());
  for (float v : values) F32(v);
}

void ByteWriter::Flush(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

ByteReader::ByteReader(std::vector<char> bytes, std::string source)
    : bytes_(std::move(bytes)), source_(std::move(source)) {}

ByteReader ByteReader::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return ByteReader(std::move(bytes), path.string());
}

void ByteReader::Fail(std::string_view message) const { FailAt(offset_, message); }

void ByteReader::FailAt(std::size_t offset, std::string_view message) const {
  throw DataError(fmt::format("{}: byte offset {}: {}", source_, offset, message));
}

void ByteReader::Require(std::size_t count, std::string_view what) const {
  if (remaining() < count) {
    Fail(fmt::format("truncated payload reading {} (need {} bytes, {} left)",
                     what, count, remaining()));
  }
}

void ByteReader::ExpectMagic(std::string_view magic) {
  if (remaining() < magic.size() ||
      std::string_view(bytes_.data() + offset_, magic.size()) != magic) {
    Fail(fmt::format("malformed header: expected magic \"{}\"", magic));
  }
  offset_ += magic.size();
}

std::uint32_t ByteReader::U32(std::string_view what) {
  Require(4, what);
  std::uint32_t raw;
  std::memcpy(&raw, bytes_.data() + offset_, 4);
  offset_ += 4;
  return ToLittleEndian(raw);
}

float ByteReader::F32(std::string_view what) {
  return std::bit_cast<float>(U32(what));
}

}  // namespace graphmatch::internal
