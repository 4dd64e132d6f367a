#include "remo/error.hpp"
#include "remo/runtime.hpp"
#include "remo/stdfns.hpp"

#include "doctest.h"
#include "support.hpp"

#include <regex>
#include <sstream>

using namespace remo;

namespace {

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

TEST_CASE("apply and get on a local handle send nothing") {
  testing::LoopbackPair pair;
  auto h = pair.client->apply(Value::integer(5));
  CHECK(h.is_local());
  CHECK(h.descriptor().endpoint == pair.client->endpoint());
  auto h6 = h.map(ShippedFn(stages::inc()));
  CHECK(h6.is_local());
  CHECK(h6.get() == Value::integer(6));
  CHECK(h.stats() == ObjectStats{0, 0});
  CHECK(h6.stats() == ObjectStats{0, 0});
  CHECK(pair.client->transport().request_frames() == 0);

  auto tok = pair.client->apply(pair.client->new_token());
  CHECK(to_text(tok.get()) == "token#1");
  CHECK(to_text(pair.client->new_token()) == "token#2");
}

TEST_CASE("lookup, map and get against another host") {
  testing::LoopbackPair pair;
  auto obj = pair.server->apply(Value::integer(41));
  pair.server->rebind("obj", obj);

  auto h = pair.client->lookup(pair.server->endpoint(), "obj");
  CHECK_FALSE(h.is_local());
  CHECK(h.descriptor() == obj.descriptor());

  auto r = h.map(ShippedFn(stages::inc()));
  CHECK(r.descriptor().endpoint == pair.server->endpoint());
  CHECK(r.get() == Value::integer(42));
  CHECK(r.stats() == ObjectStats{1, 1});
  CHECK(h.stats() == ObjectStats{0, 0});

  auto t = h.map(ShippedFn(stages::to_text()));
  CHECK(t.get() == Value::text("41"));

  CHECK(code_of([&] { pair.client->lookup(pair.server->endpoint(), "nope"); }) ==
        ErrorCode::NotFound);
  CHECK(code_of([&] { h.map(ShippedFn(Stage("unknown_fn"))); }) ==
        ErrorCode::UnknownFunction);
  CHECK(code_of([&] { h.map(ShippedFn(stages::fail())); }) ==
        ErrorCode::ExecutionError);
  CHECK_THROWS_AS(pair.client->lookup(EndpointAddr("loopback", 999), "obj"),
                  TransportError);
}

TEST_CASE("rebind through a remote host binds at the value's host") {
  testing::LoopbackPair pair;
  auto at_server = pair.client->export_to(pair.server->endpoint(), Value::text("v"));
  pair.client->rebind("shared", at_server);
  CHECK(pair.server->lookup(pair.server->endpoint(), "shared").descriptor() ==
        at_server.descriptor());
  CHECK(code_of([&] { pair.client->lookup(pair.client->endpoint(), "shared"); }) ==
        ErrorCode::NotFound);
}

TEST_CASE("flat_map returns the reference the function produced") {
  testing::LoopbackPair pair;
  auto h = pair.client->export_to(pair.server->endpoint(), Value::integer(3));
  auto e = h.flat_map(ShippedFn(stages::export_capture(Value::text("fresh"))));
  CHECK(e.descriptor().endpoint == pair.server->endpoint());
  CHECK(e.get() == Value::text("fresh"));
  CHECK(code_of([&] { h.flat_map(ShippedFn(stages::inc())); }) ==
        ErrorCode::ContractViolation);
}

TEST_CASE("getting an opaque value from another host is not serializable") {
  testing::LoopbackPair pair;
  auto h = pair.client->export_to(pair.server->endpoint(), Value::integer(0));
  auto tok = h.map(ShippedFn(stages::new_token()));
  CHECK(code_of([&] { tok.get(); }) == ErrorCode::NotSerializable);
  // Maps over the opaque value still work where it lives.
  auto s = tok.map(ShippedFn(stages::to_text()));
  CHECK(s.get() == Value::text("token#1"));
}

TEST_CASE("handles print their descriptor only") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto rt = Runtime::loopback(net, standard_registry(), RuntimeOptions{true, 0x7025f768155b777dULL});
  auto h = rt->apply(Value::text("secret"));
  std::ostringstream os;
  os << h;
  CHECK(os.str() == "remote[endpoint=" + rt->endpoint().str() +
                        " id=7025f768155b777d:1]");
  CHECK(os.str().find("secret") == std::string::npos);
  CHECK(std::regex_match(to_string(h),
                         std::regex(R"(remote\[endpoint=[^ ]+:\d+ id=[0-9a-f]{16}:\d+\])")));
}

TEST_CASE("home references resolve in-process unless disabled") {
  testing::LoopbackPair pair;
  auto mine = pair.client->apply(Value::integer(10));
  auto back = pair.client->handle(mine.descriptor());
  CHECK(back.is_local());
  CHECK(back.map(ShippedFn(stages::inc())).get() == Value::integer(11));
  CHECK(pair.client->transport().request_frames() == 0);

  testing::LoopbackPair off({}, RuntimeOptions{false, {}});
  auto m2 = off.client->apply(Value::integer(10));
  auto r2 = off.client->handle(m2.descriptor());
  CHECK_FALSE(r2.is_local());
  CHECK(r2.map(ShippedFn(stages::inc())).get() == Value::integer(11));
  CHECK(off.client->transport().request_frames() == 2);
  CHECK(r2.stats() == ObjectStats{0, 0});
}
