#pragma once

#include "remo/codec.hpp"
#include "remo/core.hpp"
#include "remo/error.hpp"
#include "remo/stage.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace remo {

inline constexpr std::uint16_t kDefaultPort = 7099;

/// Receivers refuse frames whose declared body is larger than this.
inline constexpr std::uint32_t kMaxFrameBody = 64u << 20;

namespace msg {

// Requests.
struct Rebind {
  std::string name;
  RemoteRefDescriptor ref;
  friend bool operator==(const Rebind &, const Rebind &) = default;
};
struct Lookup {
  std::string name;
  friend bool operator==(const Lookup &, const Lookup &) = default;
};
struct Map {
  ObjectId target;
  ShippedFn fn;
  friend bool operator==(const Map &, const Map &) = default;
};
struct FlatMap {
  ObjectId target;
  ShippedFn fn;
  friend bool operator==(const FlatMap &, const FlatMap &) = default;
};
struct Get {
  ObjectId target;
  friend bool operator==(const Get &, const Get &) = default;
};
struct Export {
  ValuePayload payload;
  friend bool operator==(const Export &, const Export &) = default;
};
struct Stats {
  ObjectId target;
  friend bool operator==(const Stats &, const Stats &) = default;
};

// Responses.
struct RespDescriptor {
  RemoteRefDescriptor ref;
  friend bool operator==(const RespDescriptor &, const RespDescriptor &) = default;
};
struct RespValue {
  ValuePayload payload;
  friend bool operator==(const RespValue &, const RespValue &) = default;
};
struct RespStats {
  std::uint64_t serialization_count = 0;
  std::uint64_t get_count = 0;
  friend bool operator==(const RespStats &, const RespStats &) = default;
};
struct RespAck {
  friend bool operator==(const RespAck &, const RespAck &) = default;
};
struct RespError {
  ErrorCode code = ErrorCode::ProtocolError;
  std::string text;
  friend bool operator==(const RespError &, const RespError &) = default;
};

/// Variant tag bytes. Requests occupy 0x01-0x07, responses 0x81-0x85.
enum class Tag : std::uint8_t {
  Rebind = 0x01,
  Lookup = 0x02,
  Map = 0x03,
  FlatMap = 0x04,
  Get = 0x05,
  Export = 0x06,
  Stats = 0x07,
  RespDescriptor = 0x81,
  RespValue = 0x82,
  RespStats = 0x83,
  RespAck = 0x84,
  RespError = 0x85,
};

} // namespace msg

using Message =
    std::variant<msg::Rebind, msg::Lookup, msg::Map, msg::FlatMap, msg::Get,
                 msg::Export, msg::Stats, msg::RespDescriptor, msg::RespValue,
                 msg::RespStats, msg::RespAck, msg::RespError>;

msg::Tag message_tag(const Message &m);
bool is_request(const Message &m);
std::string_view message_name(const Message &m);

// Field encodings shared by message bodies.
void write_name(ByteWriter &w, std::string_view name);
void write_object_id(ByteWriter &w, const ObjectId &id);
void write_descriptor(ByteWriter &w, const RemoteRefDescriptor &d);
void write_payload(ByteWriter &w, const ValuePayload &p);
void write_stage(ByteWriter &w, const Stage &s);
void write_shipped_fn(ByteWriter &w, const ShippedFn &f);

std::string read_name(ByteReader &r);
ObjectId read_object_id(ByteReader &r);
RemoteRefDescriptor read_descriptor(ByteReader &r);
ValuePayload read_payload(ByteReader &r);
Stage read_stage(ByteReader &r);
ShippedFn read_shipped_fn(ByteReader &r);

/// Standalone stage/pipeline encodings, for passing them around as blob
/// values (e.g. as captures of combinator functions).
Blob encode_stage(const Stage &s);
Stage decode_stage(std::span<const std::uint8_t> bytes);
Blob encode_shipped_fn(const ShippedFn &f);
ShippedFn decode_shipped_fn(std::span<const std::uint8_t> bytes);

/// Tag byte followed by the variant's fields, no length prefix. Throws
/// NOT_SERIALIZABLE if an inline capture has no codec binding.
Blob encode_body(const Message &m);
/// Decodes exactly one body; trailing bytes are a PROTOCOL_ERROR. Offsets in
/// errors are reported relative to `base`.
Message decode_body(std::span<const std::uint8_t> body, std::size_t base = 0);

/// 4-byte big-endian body length, then the body.
Blob encode_message(const Message &m);

struct DecodedFrame {
  Message message;
  std::size_t consumed = 0;
};

/// Decodes the first frame in `bytes`. Returns nothing if the frame is not
/// complete yet; bytes after the frame are left for the next call.
std::optional<DecodedFrame> decode_message(std::span<const std::uint8_t> bytes);

/// Accumulates bytes from a stream and yields whole frames.
class FrameDecoder {
public:
  void feed(std::span<const std::uint8_t> bytes);
  std::optional<Message> next();
  std::size_t buffered() const { return buf_.size(); }

private:
  Blob buf_;
};

} // namespace remo
