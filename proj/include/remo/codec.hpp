#pragma once

#include "remo/value.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace remo {

inline constexpr std::string_view kCodecRv1 = "rv1";

/// Encoded value plus the codec that produced it.
struct ValuePayload {
  std::string codec_id{kCodecRv1};
  Blob bytes;

  friend bool operator==(const ValuePayload &, const ValuePayload &) = default;
};

/// rv1 type tags.
namespace rv1 {
inline constexpr std::uint8_t kInt = 0x01;
inline constexpr std::uint8_t kFloat = 0x02;
inline constexpr std::uint8_t kBool = 0x03;
inline constexpr std::uint8_t kText = 0x04;
inline constexpr std::uint8_t kBytes = 0x05;
inline constexpr std::uint8_t kList = 0x06;
} // namespace rv1

/// Big-endian append-only buffer.
class ByteWriter {
public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void raw(std::span<const std::uint8_t> bytes);
  void raw(std::string_view bytes);

  std::size_t size() const { return buf_.size(); }
  const Blob &bytes() const & { return buf_; }
  Blob take() && { return std::move(buf_); }

private:
  Blob buf_;
};

/// Big-endian cursor. Every read past the end throws a PROTOCOL_ERROR that
/// names the offset.
class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> bytes, std::size_t base = 0)
      : data_(bytes), base_(base) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::span<const std::uint8_t> raw(std::size_t n);
  std::string text(std::size_t n);

  /// Offset of the next byte, counted from the start of the enclosing frame.
  std::size_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  [[noreturn]] void malformed(const std::string &what) const;

private:
  void need(std::size_t n, const char *what) const;

  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

/// Appends the rv1 encoding of `v`. NOT_SERIALIZABLE for opaque values and
/// for lists whose elements differ in kind.
void write_value(ByteWriter &w, const Value &v);
/// Reads one rv1 value. PROTOCOL_ERROR on malformed input.
Value read_value(ByteReader &r);

ValuePayload encode_value(const Value &v);
/// The whole payload must be consumed; unknown codec ids are rejected.
Value decode_value(const ValuePayload &p);

} // namespace remo
