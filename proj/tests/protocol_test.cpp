#include "remo/protocol.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>

using namespace remo;

namespace {

std::string random_name(std::mt19937_64 &rng) {
  std::string s(rng() % 20, 'a');
  for (auto &c : s)
    c = static_cast<char>('a' + rng() % 26);
  return s;
}

ObjectId random_id(std::mt19937_64 &rng) { return ObjectId{rng(), rng()}; }

RemoteRefDescriptor random_descriptor(std::mt19937_64 &rng) {
  return RemoteRefDescriptor{
      EndpointAddr("h" + random_name(rng),
                   static_cast<std::uint16_t>(1 + rng() % 65535)),
      random_id(rng)};
}

ShippedFn random_fn(std::mt19937_64 &rng) {
  ShippedFn f;
  std::size_t n = 1 + rng() % 4;
  for (std::size_t i = 0; i < n; ++i) {
    Stage s("f" + random_name(rng));
    std::size_t caps = rng() % 4;
    for (std::size_t c = 0; c < caps; ++c) {
      if (rng() & 1)
        s.captures.push_back(Capture::inline_value(testing::random_value(rng)));
      else
        s.captures.push_back(Capture::remote_ref(random_descriptor(rng)));
    }
    f.stages.push_back(std::move(s));
  }
  return f;
}

Message random_message(std::mt19937_64 &rng, std::size_t variant) {
  switch (variant) {
  case 0:
    return msg::Rebind{random_name(rng), random_descriptor(rng)};
  case 1:
    return msg::Lookup{random_name(rng)};
  case 2:
    return msg::Map{random_id(rng), random_fn(rng)};
  case 3:
    return msg::FlatMap{random_id(rng), random_fn(rng)};
  case 4:
    return msg::Get{random_id(rng)};
  case 5:
    return msg::Export{encode_value(testing::random_value(rng))};
  case 6:
    return msg::Stats{random_id(rng)};
  case 7:
    return msg::RespDescriptor{random_descriptor(rng)};
  case 8:
    return msg::RespValue{encode_value(testing::random_value(rng))};
  case 9:
    return msg::RespStats{rng(), rng()};
  case 10:
    return msg::RespAck{};
  default:
    return msg::RespError{static_cast<ErrorCode>(1 + rng() % 7),
                          random_name(rng)};
  }
}

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const RemoteError &e) {
    return e.code();
  }
  FAIL("expected a RemoteError");
  return ErrorCode::ProtocolError;
}

} // namespace

TEST_CASE("RespAck is a one-byte body") {
  CHECK(encode_message(msg::RespAck{}) == Blob{0, 0, 0, 1, 0x84});
}

TEST_CASE("Lookup body layout") {
  auto frame = encode_message(msg::Lookup{"obj"});
  CHECK(frame == Blob{0, 0, 0, 6, 0x02, 0x00, 0x03, 'o', 'b', 'j'});
}

TEST_CASE("Get and RespError layouts") {
  auto get = encode_message(msg::Get{ObjectId{1, 2}});
  CHECK(get == Blob{0, 0, 0, 17, 0x05, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0,
                    0, 0, 2});
  auto err = encode_message(msg::RespError{ErrorCode::NotFound, "x"});
  CHECK(err == Blob{0, 0, 0, 8, 0x85, 0x01, 0x04, 0, 0, 0, 1, 'x'});
}

TEST_CASE("descriptor and stage encodings") {
  RemoteRefDescriptor d{EndpointAddr("a", 1), ObjectId{3, 4}};
  ByteWriter w;
  write_descriptor(w, d);
  Blob want{0x04, 0, 0, 0, 3, 'a', ':', '1', 0, 0, 0, 0, 0, 0, 0, 3,
            0,    0, 0, 0, 0, 0,   0,   4};
  CHECK(w.bytes() == want);

  ByteWriter ws;
  write_stage(ws, Stage("f", {Capture::inline_value(Value::boolean(true)),
                              Capture::remote_ref(d)}));
  Blob stage_want{0x04, 0, 0, 0, 1, 'f', 0, 2,
                  0x01, 0, 3, 'r', 'v', '1', 0, 0, 0, 2, 0x03, 0x01, 0x02};
  stage_want.insert(stage_want.end(), want.begin(), want.end());
  CHECK(ws.bytes() == stage_want);
}

TEST_CASE("per-variant round trip") {
  std::mt19937_64 rng(7);
  for (std::size_t v = 0; v < std::variant_size_v<Message>; ++v) {
    CAPTURE(v);
    Message m = random_message(rng, v);
    auto frame = encode_message(m);
    auto decoded = decode_message(frame);
    REQUIRE(decoded);
    CHECK(decoded->consumed == frame.size());
    CHECK(decoded->message == m);
    CHECK(message_tag(decoded->message) == message_tag(m));
  }
}

TEST_CASE("property: random messages round trip and re-encode canonically") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1500; ++i) {
    Message m = random_message(rng, rng() % std::variant_size_v<Message>);
    auto frame = encode_message(m);
    auto decoded = decode_message(frame);
    REQUIRE(decoded);
    REQUIRE(decoded->message == m);
    REQUIRE(encode_message(decoded->message) == frame);
  }
}

TEST_CASE("incomplete frames wait for more bytes") {
  Blob partial{0, 0, 0, 5, 0x02, 0x00, 0x01};
  CHECK_FALSE(decode_message(partial));
  CHECK_FALSE(decode_message(Blob{0, 0}));
}

TEST_CASE("trailing bytes after a frame are left for the next one") {
  Blob two = encode_message(msg::RespAck{});
  Blob second = encode_message(msg::Lookup{"n"});
  two.insert(two.end(), second.begin(), second.end());
  auto first = decode_message(two);
  REQUIRE(first);
  CHECK(first->consumed == 5);
  CHECK(std::holds_alternative<msg::RespAck>(first->message));

  FrameDecoder dec;
  for (auto b : two) {
    dec.feed(std::span<const std::uint8_t>(&b, 1));
  }
  auto a = dec.next();
  auto b = dec.next();
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*b == Message{msg::Lookup{"n"}});
  CHECK_FALSE(dec.next());
  CHECK(dec.buffered() == 0);
}

TEST_CASE("bad frames are protocol errors with offsets") {
  try {
    decode_message(Blob{0, 0, 0, 1, 0xFF});
    FAIL("expected error");
  } catch (const RemoteError &e) {
    CHECK(e.code() == ErrorCode::ProtocolError);
    CHECK(e.detail().find("offset 4") != std::string::npos);
  }
  // Short body: Get without its id.
  CHECK(code_of([] { decode_message(Blob{0, 0, 0, 2, 0x05, 0x00}); }) ==
        ErrorCode::ProtocolError);
  // Extra bytes inside the declared body.
  CHECK(code_of([] { decode_message(Blob{0, 0, 0, 2, 0x84, 0x00}); }) ==
        ErrorCode::ProtocolError);
  // Error code outside 1..7.
  CHECK(code_of([] {
          decode_message(Blob{0, 0, 0, 7, 0x85, 0x09, 0x04, 0, 0, 0, 0});
        }) == ErrorCode::ProtocolError);
  // Zero-length body and oversized declared length.
  CHECK(code_of([] { decode_message(Blob{0, 0, 0, 0}); }) ==
        ErrorCode::ProtocolError);
  CHECK(code_of([] { decode_message(Blob{0x7f, 0xff, 0xff, 0xff}); }) ==
        ErrorCode::ProtocolError);
  // Map with zero stages.
  Blob empty_fn{0, 0, 0, 19, 0x03};
  for (int i = 0; i < 16; ++i)
    empty_fn.push_back(0);
  empty_fn.push_back(0);
  empty_fn.push_back(0);
  CHECK(code_of([&] { decode_message(empty_fn); }) == ErrorCode::ProtocolError);
}

TEST_CASE("an undecodable capture is reported with its index") {
  Message m = msg::Map{ObjectId{1, 1},
                       ShippedFn(Stage("f", {Capture::inline_value(Value::integer(1)),
                                             Capture::inline_value(Value::integer(2))}))};
  Blob frame = encode_message(m);
  // Corrupt the codec id of the second capture ("rv1" -> "rvX").
  auto pos = std::find(frame.rbegin(), frame.rend(), '1');
  REQUIRE(pos != frame.rend());
  *pos = 'X';
  try {
    decode_message(frame);
    FAIL("expected error");
  } catch (const RemoteError &e) {
    CHECK(e.code() == ErrorCode::ProtocolError);
    CHECK(e.detail().find("capture 1") != std::string::npos);
  }
}

TEST_CASE("encoding a non-serializable inline capture fails") {
  Message m = msg::Map{ObjectId{1, 1},
                       ShippedFn(Stage("equals", {Capture::inline_value(Value::opaque(
                                                     std::make_shared<Token>(1)))}))};
  CHECK(code_of([&] { encode_message(m); }) == ErrorCode::NotSerializable);
}

TEST_CASE("stage and pipeline blobs round trip") {
  ShippedFn p{stages::inc(), stages::mul(3)};
  CHECK(decode_shipped_fn(encode_shipped_fn(p)) == p);
  CHECK(decode_stage(encode_stage(stages::add(-4))) == stages::add(-4));
}
