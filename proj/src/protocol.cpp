#include "remo/protocol.hpp"

#include <limits>

namespace remo {

msg::Tag message_tag(const Message &m) {
  static constexpr msg::Tag tags[] = {
      msg::Tag::Rebind,         msg::Tag::Lookup,    msg::Tag::Map,
      msg::Tag::FlatMap,        msg::Tag::Get,       msg::Tag::Export,
      msg::Tag::Stats,          msg::Tag::RespDescriptor,
      msg::Tag::RespValue,      msg::Tag::RespStats, msg::Tag::RespAck,
      msg::Tag::RespError};
  return tags[m.index()];
}

bool is_request(const Message &m) {
  return static_cast<std::uint8_t>(message_tag(m)) < 0x80;
}

std::string_view message_name(const Message &m) {
  static constexpr std::string_view names[] = {
      "Rebind",    "Lookup",    "Map",     "FlatMap",  "Get",
      "Export",    "Stats",     "RespDescriptor",      "RespValue",
      "RespStats", "RespAck",   "RespError"};
  return names[m.index()];
}

namespace {

constexpr std::uint8_t kCaptureInline = 0x01;
constexpr std::uint8_t kCaptureRef = 0x02;

template <typename N> N checked_count(std::size_t n, const char *what) {
  if (n > std::numeric_limits<N>::max())
    fail(ErrorCode::ProtocolError,
         std::string(what) + " " + std::to_string(n) + " does not fit its field");
  return static_cast<N>(n);
}

void write_text(ByteWriter &w, std::string_view s) {
  write_value(w, Value::text(std::string(s)));
}

std::string read_text(ByteReader &r, const char *what) {
  std::size_t at = r.offset();
  if (r.u8() != rv1::kText)
    fail(ErrorCode::ProtocolError, std::string(what) +
                                       " is not tagged as text at byte offset " +
                                       std::to_string(at));
  std::uint32_t n = r.u32();
  return r.text(n);
}

} // namespace

void write_name(ByteWriter &w, std::string_view name) {
  w.u16(checked_count<std::uint16_t>(name.size(), "name length"));
  w.raw(name);
}

std::string read_name(ByteReader &r) {
  std::uint16_t n = r.u16();
  return r.text(n);
}

void write_object_id(ByteWriter &w, const ObjectId &id) {
  w.u64(id.incarnation);
  w.u64(id.serial);
}

ObjectId read_object_id(ByteReader &r) {
  ObjectId id;
  id.incarnation = r.u64();
  id.serial = r.u64();
  return id;
}

void write_descriptor(ByteWriter &w, const RemoteRefDescriptor &d) {
  write_text(w, d.endpoint.str());
  write_object_id(w, d.id);
}

RemoteRefDescriptor read_descriptor(ByteReader &r) {
  std::size_t at = r.offset();
  auto text = read_text(r, "endpoint");
  auto endpoint = EndpointAddr::try_parse(text);
  if (!endpoint)
    fail(ErrorCode::ProtocolError, "malformed endpoint '" + text +
                                       "' at byte offset " + std::to_string(at));
  return RemoteRefDescriptor{*endpoint, read_object_id(r)};
}

void write_payload(ByteWriter &w, const ValuePayload &p) {
  write_name(w, p.codec_id);
  w.u32(checked_count<std::uint32_t>(p.bytes.size(), "payload length"));
  w.raw(p.bytes);
}

ValuePayload read_payload(ByteReader &r) {
  ValuePayload p;
  p.codec_id = read_name(r);
  std::uint32_t n = r.u32();
  auto bytes = r.raw(n);
  p.bytes.assign(bytes.begin(), bytes.end());
  return p;
}

void write_stage(ByteWriter &w, const Stage &s) {
  if (s.fn_id.empty())
    fail(ErrorCode::ProtocolError, "stage with empty fn_id");
  write_text(w, s.fn_id);
  w.u16(checked_count<std::uint16_t>(s.captures.size(), "capture count"));
  for (const auto &c : s.captures) {
    if (c.is_inline()) {
      w.u8(kCaptureInline);
      write_payload(w, encode_value(c.as_inline().value));
    } else {
      w.u8(kCaptureRef);
      write_descriptor(w, c.as_ref().descriptor);
    }
  }
}

Stage read_stage(ByteReader &r) {
  std::size_t at = r.offset();
  Stage s;
  s.fn_id = read_text(r, "fn_id");
  if (s.fn_id.empty())
    fail(ErrorCode::ProtocolError,
         "empty fn_id at byte offset " + std::to_string(at));
  std::uint16_t n = r.u16();
  for (std::uint16_t i = 0; i < n; ++i) {
    std::size_t cap_at = r.offset();
    std::uint8_t kind = r.u8();
    if (kind == kCaptureInline) {
      auto payload = read_payload(r);
      try {
        s.captures.push_back(Capture::inline_value(decode_value(payload)));
      } catch (const RemoteError &e) {
        fail(ErrorCode::ProtocolError,
             "capture " + std::to_string(i) + " of stage '" + s.fn_id +
                 "' (byte offset " + std::to_string(cap_at) +
                 "): " + e.detail());
      }
    } else if (kind == kCaptureRef) {
      s.captures.push_back(Capture::remote_ref(read_descriptor(r)));
    } else {
      fail(ErrorCode::ProtocolError, "unknown capture variant " +
                                         std::to_string(kind) +
                                         " at byte offset " +
                                         std::to_string(cap_at));
    }
  }
  return s;
}

void write_shipped_fn(ByteWriter &w, const ShippedFn &f) {
  if (f.empty())
    fail(ErrorCode::ProtocolError, "shipped function without stages");
  w.u16(checked_count<std::uint16_t>(f.size(), "stage count"));
  for (const auto &s : f.stages)
    write_stage(w, s);
}

ShippedFn read_shipped_fn(ByteReader &r) {
  std::size_t at = r.offset();
  std::uint16_t n = r.u16();
  if (n == 0)
    fail(ErrorCode::ProtocolError,
         "shipped function without stages at byte offset " +
             std::to_string(at));
  ShippedFn f;
  for (std::uint16_t i = 0; i < n; ++i)
    f.stages.push_back(read_stage(r));
  return f;
}

Blob encode_stage(const Stage &s) {
  ByteWriter w;
  write_stage(w, s);
  return std::move(w).take();
}

Stage decode_stage(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Stage s = read_stage(r);
  if (!r.at_end())
    r.malformed("trailing bytes after stage");
  return s;
}

Blob encode_shipped_fn(const ShippedFn &f) {
  ByteWriter w;
  write_shipped_fn(w, f);
  return std::move(w).take();
}

ShippedFn decode_shipped_fn(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  ShippedFn f = read_shipped_fn(r);
  if (!r.at_end())
    r.malformed("trailing bytes after shipped function");
  return f;
}

namespace {

struct BodyWriter {
  ByteWriter &w;

  void operator()(const msg::Rebind &m) {
    write_name(w, m.name);
    write_descriptor(w, m.ref);
  }
  void operator()(const msg::Lookup &m) { write_name(w, m.name); }
  void operator()(const msg::Map &m) {
    write_object_id(w, m.target);
    write_shipped_fn(w, m.fn);
  }
  void operator()(const msg::FlatMap &m) {
    write_object_id(w, m.target);
    write_shipped_fn(w, m.fn);
  }
  void operator()(const msg::Get &m) { write_object_id(w, m.target); }
  void operator()(const msg::Export &m) { write_payload(w, m.payload); }
  void operator()(const msg::Stats &m) { write_object_id(w, m.target); }
  void operator()(const msg::RespDescriptor &m) { write_descriptor(w, m.ref); }
  void operator()(const msg::RespValue &m) { write_payload(w, m.payload); }
  void operator()(const msg::RespStats &m) {
    w.u64(m.serialization_count);
    w.u64(m.get_count);
  }
  void operator()(const msg::RespAck &) {}
  void operator()(const msg::RespError &m) {
    w.u8(static_cast<std::uint8_t>(m.code));
    write_text(w, m.text);
  }
};

} // namespace

Blob encode_body(const Message &m) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(message_tag(m)));
  std::visit(BodyWriter{w}, m);
  return std::move(w).take();
}

Message decode_body(std::span<const std::uint8_t> body, std::size_t base) {
  ByteReader r(body, base);
  std::size_t tag_at = r.offset();
  auto tag = static_cast<msg::Tag>(r.u8());
  Message m;
  switch (tag) {
  case msg::Tag::Rebind: {
    msg::Rebind v;
    v.name = read_name(r);
    v.ref = read_descriptor(r);
    m = std::move(v);
    break;
  }
  case msg::Tag::Lookup:
    m = msg::Lookup{read_name(r)};
    break;
  case msg::Tag::Map: {
    msg::Map v;
    v.target = read_object_id(r);
    v.fn = read_shipped_fn(r);
    m = std::move(v);
    break;
  }
  case msg::Tag::FlatMap: {
    msg::FlatMap v;
    v.target = read_object_id(r);
    v.fn = read_shipped_fn(r);
    m = std::move(v);
    break;
  }
  case msg::Tag::Get:
    m = msg::Get{read_object_id(r)};
    break;
  case msg::Tag::Export:
    m = msg::Export{read_payload(r)};
    break;
  case msg::Tag::Stats:
    m = msg::Stats{read_object_id(r)};
    break;
  case msg::Tag::RespDescriptor:
    m = msg::RespDescriptor{read_descriptor(r)};
    break;
  case msg::Tag::RespValue:
    m = msg::RespValue{read_payload(r)};
    break;
  case msg::Tag::RespStats: {
    msg::RespStats v;
    v.serialization_count = r.u64();
    v.get_count = r.u64();
    m = v;
    break;
  }
  case msg::Tag::RespAck:
    m = msg::RespAck{};
    break;
  case msg::Tag::RespError: {
    std::size_t code_at = r.offset();
    msg::RespError v;
    if (!error_code_from_byte(r.u8(), v.code))
      fail(ErrorCode::ProtocolError,
           "unknown error code at byte offset " + std::to_string(code_at));
    v.text = read_text(r, "error text");
    m = std::move(v);
    break;
  }
  default:
    fail(ErrorCode::ProtocolError,
         "unknown message tag " +
             std::to_string(static_cast<unsigned>(tag)) + " at byte offset " +
             std::to_string(tag_at));
  }
  if (!r.at_end())
    r.malformed("trailing bytes in message body");
  return m;
}

Blob encode_message(const Message &m) {
  Blob body = encode_body(m);
  if (body.size() > std::numeric_limits<std::uint32_t>::max())
    fail(ErrorCode::ProtocolError, "message body exceeds 2^32-1 bytes");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(body.size()));
  w.raw(body);
  return std::move(w).take();
}

std::optional<DecodedFrame>
decode_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4)
    return std::nullopt;
  ByteReader header(bytes.first(4));
  std::uint32_t len = header.u32();
  if (len == 0)
    fail(ErrorCode::ProtocolError, "empty frame body at byte offset 0");
  if (len > kMaxFrameBody)
    fail(ErrorCode::ProtocolError, "frame body of " + std::to_string(len) +
                                       " bytes exceeds the receive limit");
  if (bytes.size() - 4 < len)
    return std::nullopt;
  return DecodedFrame{decode_body(bytes.subspan(4, len), 4), 4 + std::size_t{len}};
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next() {
  auto frame = decode_message(buf_);
  if (!frame)
    return std::nullopt;
  buf_.erase(buf_.begin(),
             buf_.begin() + static_cast<std::ptrdiff_t>(frame->consumed));
  return std::move(frame->message);
}

} // namespace remo
