#include "remo/shipping.hpp"
#include "remo/error.hpp"
#include "remo/runtime.hpp"
#include "remo/stdfns.hpp"

#include "doctest.h"
#include "support.hpp"

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

std::shared_ptr<FnRegistry> small_registry() {
  auto reg = std::make_shared<FnRegistry>();
  reg->register_unary("inc", [](const Value &v) {
    return Value::integer(v.as_int() + 1);
  });
  reg->register_fn("mul", 1, [](const Subject &s, std::span<const Arg> a, Runtime &) {
    return FnResult::plain(Value::integer(s.value.as_int() * a[0].value().as_int()));
  });
  reg->register_unary("identity", [](const Value &v) { return v; });
  reg->register_unary("to_text", [](const Value &v) { return Value::text(to_text(v)); });
  return reg;
}

Value eval_plain(Runtime &rt, const ShippedFn &f, const Value &x) {
  FnResult r = evaluate(rt.registry(), f, Subject{x, nullptr}, rt);
  REQUIRE(r.is_plain());
  return r.plain_value();
}

} // namespace

TEST_CASE("register_fn and evaluate basics") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto reg = small_registry();
  auto rt = Runtime::loopback(net, reg);

  CHECK(eval_plain(*rt, ShippedFn(Stage("inc")), Value::integer(5)) ==
        Value::integer(6));
  CHECK(eval_plain(*rt,
                   ShippedFn(Stage("mul", {Capture::inline_value(Value::integer(3))})),
                   Value::integer(5)) == Value::integer(15));
  CHECK_THROWS_AS(reg->register_unary("inc", [](const Value &v) { return v; }),
                  std::logic_error);
  CHECK_THROWS_AS(reg->register_unary("", [](const Value &v) { return v; }),
                  std::logic_error);
}

TEST_CASE("compose appends without touching its input") {
  ShippedFn p{Stage("inc")};
  auto q = compose(p, Stage("mul", {Capture::inline_value(Value::integer(3))}));
  CHECK(p.size() == 1);
  REQUIRE(q.size() == 2);
  CHECK(q.stages[0].fn_id == "inc");
  CHECK(q.stages[1].fn_id == "mul");

  auto net = std::make_shared<LoopbackNetwork>();
  auto rt = Runtime::loopback(net, small_registry());
  CHECK(eval_plain(*rt, q, Value::integer(5)) == Value::integer(18));

  SUBCASE("identity stage first is neutral") {
    ShippedFn with_id = concat(ShippedFn(Stage("identity")), q);
    CHECK(eval_plain(*rt, with_id, Value::integer(5)) ==
          eval_plain(*rt, q, Value::integer(5)));
  }
  SUBCASE("appending one by one equals appending a batch") {
    Stage s1("inc"), s2("identity");
    CHECK(compose(compose(p, s1), s2) == concat(p, ShippedFn{s1, s2}));
  }
}

TEST_CASE("evaluate examples and errors") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto rt = Runtime::loopback(net, standard_registry());

  CHECK(eval_plain(*rt, ShippedFn{stages::inc(), stages::inc()}, Value::integer(5)) ==
        Value::integer(7));
  CHECK(eval_plain(*rt, ShippedFn(stages::to_text()), Value::integer(42)) ==
        Value::text("42"));

  try {
    eval_plain(*rt, ShippedFn(Stage("unknown_fn")), Value::integer(5));
    FAIL("expected error");
  } catch (const RemoteError &e) {
    CHECK(e.code() == ErrorCode::UnknownFunction);
    CHECK(e.detail() == "unknown_fn");
  }

  CHECK(code_of([&] { eval_plain(*rt, ShippedFn(Stage("mul")), Value::integer(1)); }) ==
        ErrorCode::ContractViolation);
  CHECK(code_of([&] {
          eval_plain(*rt, ShippedFn{stages::export_self(), stages::inc()},
                     Value::integer(1));
        }) == ErrorCode::ContractViolation);

  try {
    eval_plain(*rt, ShippedFn(stages::fail()), Value::integer(1));
    FAIL("expected error");
  } catch (const RemoteError &e) {
    CHECK(e.code() == ErrorCode::ExecutionError);
    CHECK(e.detail().find("requested failure") != std::string::npos);
  }
  // A kind mismatch inside a body is an execution error too.
  CHECK(code_of([&] { eval_plain(*rt, ShippedFn(stages::inc()), Value::text("x")); }) ==
        ErrorCode::ExecutionError);
}

TEST_CASE("registry stage builder validates locally") {
  auto reg = standard_registry();
  CHECK(reg->stage("mul", {Capture::inline_value(Value::integer(2))}) == stages::mul(2));
  CHECK(code_of([&] { reg->stage("nope"); }) == ErrorCode::UnknownFunction);
  CHECK(code_of([&] { reg->stage("mul"); }) == ErrorCode::ContractViolation);
}

TEST_CASE("resolve_captures") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto reg = standard_registry();
  auto home = Runtime::loopback(net, reg);
  auto other = Runtime::loopback(net, reg);

  auto local = home->apply(Value::integer(9));
  auto far = other->apply(Value::integer(10));

  std::vector<Capture> caps{
      Capture::inline_value(Value::integer(7)),
      Capture::remote_ref(local.descriptor()),
      Capture::remote_ref(far.descriptor()),
  };
  auto args = resolve_captures(caps, *home);
  REQUIRE(args.size() == 3);
  CHECK(args[0].value() == Value::integer(7));
  REQUIRE(args[1].is_handle());
  CHECK(args[1].handle().is_local());
  CHECK(args[1].handle().local().get() == local.local().get());
  CHECK(local.stats() == ObjectStats{0, 0});
  REQUIRE(args[2].is_handle());
  CHECK_FALSE(args[2].handle().is_local());
  CHECK(args[2].handle().descriptor().endpoint == other->endpoint());
  CHECK(home->transport().request_frames() == 0);

  SUBCASE("without locality replacement home references stay remote") {
    auto plain = Runtime::loopback(net, reg, RuntimeOptions{false, {}});
    auto mine = plain->apply(Value::integer(1));
    auto resolved = resolve_captures(
        std::vector<Capture>{Capture::remote_ref(mine.descriptor())}, *plain);
    CHECK_FALSE(resolved[0].handle().is_local());
  }
}

TEST_CASE("two-object composition evaluates to false for distinct tokens") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto rt = Runtime::loopback(net, standard_registry());
  auto ra = rt->apply(rt->new_token());
  auto rb = rt->apply(rt->new_token());
  FnResult r = evaluate(rt->registry(), ShippedFn(stages::mk_pair_equals(rb.descriptor())),
                        Subject{ra.local()->value(), ra.local()}, *rt);
  REQUIRE(r.is_remote());
  CHECK(rt->handle(r.remote_ref()).get() == Value::boolean(false));
  CHECK(ra.stats() == ObjectStats{0, 0});
  CHECK(rb.stats() == ObjectStats{0, 0});
}

TEST_CASE("property: pipeline evaluation matches the eager oracle and splits") {
  auto net = std::make_shared<LoopbackNetwork>();
  auto rt = Runtime::loopback(net, standard_registry());
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 300; ++i) {
    auto ops1 = testing::random_ops(rng, 1, 6);
    auto ops2 = testing::random_ops(rng, 1, 6);
    auto x = testing::random_int(rng);
    auto whole = concat(testing::to_pipeline(ops1), testing::to_pipeline(ops2));

    std::vector<testing::Op> all = ops1;
    all.insert(all.end(), ops2.begin(), ops2.end());
    Value expect = Value::integer(testing::oracle_run(all, x));

    Value once = eval_plain(*rt, whole, Value::integer(x));
    Value mid = eval_plain(*rt, testing::to_pipeline(ops1), Value::integer(x));
    Value twice = eval_plain(*rt, testing::to_pipeline(ops2), mid);
    REQUIRE(once == expect);
    REQUIRE(twice == expect);
    // Deterministic for fixed captures.
    REQUIRE(eval_plain(*rt, whole, Value::integer(x)) == once);
  }
}
