#include "remo/codec.hpp"
#include "remo/error.hpp"

#include <bit>
#include <limits>

namespace remo {

void ByteWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  buf_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void ByteWriter::raw(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::raw(std::string_view bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteReader::malformed(const std::string &what) const {
  fail(ErrorCode::ProtocolError,
       what + " at byte offset " + std::to_string(offset()));
}

void ByteReader::need(std::size_t n, const char *what) const {
  if (remaining() < n)
    malformed(std::string("truncated ") + what);
}

std::uint8_t ByteReader::u8() {
  need(1, "u8");
  return data_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2, "u16");
  std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4, "u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v = v << 8 | data_[pos_ + i];
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8, "u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v = v << 8 | data_[pos_ + i];
  pos_ += 8;
  return v;
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  need(n, "byte run");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::text(std::size_t n) {
  auto bytes = raw(n);
  return std::string(bytes.begin(), bytes.end());
}

namespace {

constexpr int kMaxListDepth = 64;

std::uint32_t checked_len(std::size_t n, const char *what) {
  if (n > std::numeric_limits<std::uint32_t>::max())
    fail(ErrorCode::ProtocolError, std::string(what) + " exceeds 2^32-1");
  return static_cast<std::uint32_t>(n);
}

void write_value_at(ByteWriter &w, const Value &v, int depth) {
  switch (v.kind()) {
  case Value::Kind::Int:
    w.u8(rv1::kInt);
    w.u64(static_cast<std::uint64_t>(v.as_int()));
    return;
  case Value::Kind::Float:
    w.u8(rv1::kFloat);
    w.u64(std::bit_cast<std::uint64_t>(v.as_float()));
    return;
  case Value::Kind::Bool:
    w.u8(rv1::kBool);
    w.u8(v.as_bool() ? 1 : 0);
    return;
  case Value::Kind::Text:
    w.u8(rv1::kText);
    w.u32(checked_len(v.as_text().size(), "text length"));
    w.raw(v.as_text());
    return;
  case Value::Kind::Bytes:
    w.u8(rv1::kBytes);
    w.u32(checked_len(v.as_bytes().size(), "blob length"));
    w.raw(v.as_bytes());
    return;
  case Value::Kind::List: {
    const auto &items = v.as_list();
    if (depth >= kMaxListDepth)
      fail(ErrorCode::NotSerializable, "list nesting deeper than 64");
    for (const auto &item : items)
      if (item.kind() != items.front().kind())
        fail(ErrorCode::NotSerializable,
             "heterogeneous list (" +
                 std::string(kind_name(items.front().kind())) + " and " +
                 std::string(kind_name(item.kind())) + ")");
    w.u8(rv1::kList);
    w.u32(checked_len(items.size(), "list count"));
    for (const auto &item : items)
      write_value_at(w, item, depth + 1);
    return;
  }
  case Value::Kind::Opaque:
    fail(ErrorCode::NotSerializable,
         "value '" + to_text(v) + "' has no codec binding");
  }
}

Value read_value_at(ByteReader &r, int depth) {
  std::size_t tag_offset = r.offset();
  std::uint8_t tag = r.u8();
  switch (tag) {
  case rv1::kInt:
    return Value::integer(static_cast<std::int64_t>(r.u64()));
  case rv1::kFloat:
    return Value::floating(std::bit_cast<double>(r.u64()));
  case rv1::kBool: {
    std::uint8_t b = r.u8();
    if (b > 1)
      r.malformed("boolean byte " + std::to_string(b));
    return Value::boolean(b == 1);
  }
  case rv1::kText: {
    std::uint32_t n = r.u32();
    return Value::text(r.text(n));
  }
  case rv1::kBytes: {
    std::uint32_t n = r.u32();
    auto bytes = r.raw(n);
    return Value::bytes(Blob(bytes.begin(), bytes.end()));
  }
  case rv1::kList: {
    if (depth >= kMaxListDepth)
      r.malformed("list nesting deeper than 64");
    std::uint32_t n = r.u32();
    List items;
    for (std::uint32_t i = 0; i < n; ++i) {
      std::size_t at = r.offset();
      items.push_back(read_value_at(r, depth + 1));
      if (items.back().kind() != items.front().kind()) {
        fail(ErrorCode::ProtocolError,
             "heterogeneous list element at byte offset " + std::to_string(at));
      }
    }
    return Value::list(std::move(items));
  }
  default:
    fail(ErrorCode::ProtocolError, "unknown value tag " + std::to_string(tag) +
                                       " at byte offset " +
                                       std::to_string(tag_offset));
  }
}

} // namespace

void write_value(ByteWriter &w, const Value &v) { write_value_at(w, v, 0); }

Value read_value(ByteReader &r) { return read_value_at(r, 0); }

ValuePayload encode_value(const Value &v) {
  ByteWriter w;
  write_value(w, v);
  return ValuePayload{std::string(kCodecRv1), std::move(w).take()};
}

Value decode_value(const ValuePayload &p) {
  if (p.codec_id != kCodecRv1)
    fail(ErrorCode::ProtocolError, "unknown codec '" + p.codec_id + "'");
  ByteReader r(p.bytes);
  Value v = read_value(r);
  if (!r.at_end())
    r.malformed("trailing bytes after value");
  return v;
}

} // namespace remo
