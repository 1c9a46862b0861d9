#ifndef GRAPHMATCH_SRC_BINARY_IO_H_
#define GRAPHMATCH_SRC_BINARY_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphmatch::internal {

// Little-endian byte sink backed by a std::vector.
class ByteWriter {
 public:
  void Magic(std::string_view magic);
  void U32(std::uint32_t value);
  void F32(float value);
  void F32s(std::span<const float> values);
  void Flush(const std::filesystem::path& path) const;

  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

// Little-endian reader over an in-memory file. Every failure raises DataError
// with the byte offset at which it occurred.
class ByteReader {
 public:
  ByteReader(std::vector<char> bytes, std::string source);
  static ByteReader FromFile(const std::filesystem::path& path);

  void ExpectMagic(std::string_view magic);
  std::uint32_t U32(std::string_view what);
  float F32(std::string_view what);
  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }
  [[noreturn]] void Fail(std::string_view message) const;
  [[noreturn]] void FailAt(std::size_t offset, std::string_view message) const;

 private:
  void Require(std::size_t count, std::string_view what) const;

  std::vector<char> bytes_;
  std::string source_;
  std::size_t offset_ = 0;
};

}  // namespace graphmatch::internal

#endif  // GRAPHMATCH_SRC_BINARY_IO_H_
