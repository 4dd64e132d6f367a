#include "remo/stdfns.hpp"
#include "remo/protocol.hpp"
#include "remo/runtime.hpp"

#include <stdexcept>

namespace remo {

namespace {

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

FnResult exported(Runtime &rt, Value v) {
  return FnResult::remote(rt.apply(std::move(v)).descriptor());
}

const FnResult &require_remote(const FnResult &r, const char *who) {
  if (!r.is_remote())
    throw RemoteError(ErrorCode::ContractViolation,
                      std::string(who) + ": inner stage returned a plain value");
  return r;
}

} // namespace

void register_standard_functions(FnRegistry &reg) {
  reg.register_unary("identity", [](const Value &v) { return v; });
  reg.register_unary("to_text",
                     [](const Value &v) { return Value::text(remo::to_text(v)); });
  reg.register_unary("inc", [](const Value &v) {
    return Value::integer(wrap_add(v.as_int(), 1));
  });
  reg.register_fn("mul", 1,
                  [](const Subject &s, std::span<const Arg> a, Runtime &) {
                    return FnResult::plain(Value::integer(
                        wrap_mul(s.value.as_int(), a[0].value().as_int())));
                  });
  reg.register_fn("add", 1,
                  [](const Subject &s, std::span<const Arg> a, Runtime &) {
                    return FnResult::plain(Value::integer(
                        wrap_add(s.value.as_int(), a[0].value().as_int())));
                  });
  reg.register_fn("new_token", 0,
                  [](const Subject &, std::span<const Arg>, Runtime &rt) {
                    return FnResult::plain(rt.new_token());
                  });
  reg.register_fn("equals", 1,
                  [](const Subject &s, std::span<const Arg> a, Runtime &) {
                    return FnResult::plain(
                        Value::boolean(a[0].value() == s.value));
                  });
  reg.register_unary("fail", [](const Value &) -> Value {
    throw std::runtime_error("requested failure");
  });

  reg.register_fn("export", 0,
                  [](const Subject &s, std::span<const Arg>, Runtime &rt) {
                    return exported(rt, s.value);
                  });
  reg.register_fn("export_capture", 1,
                  [](const Subject &, std::span<const Arg> a, Runtime &rt) {
                    return exported(rt, a[0].value());
                  });
  reg.register_fn("pass_through", 1,
                  [](const Subject &, std::span<const Arg> a, Runtime &) {
                    return FnResult::remote(a[0].handle().descriptor());
                  });
  // The captured reference is resolved by the executing host: with locality
  // replacement it is the table entry and the inner map stays in-process;
  // otherwise the inner map is a request that carries the subject inline.
  reg.register_fn("mk_pair_equals", 1,
                  [](const Subject &s, std::span<const Arg> a, Runtime &) {
                    RemoteHandle rb = a[0].handle();
                    Stage inner("equals", {s.capture()});
                    return FnResult::remote(rb.map(inner).descriptor());
                  });
  reg.register_fn("lift", 1,
                  [](const Subject &s, std::span<const Arg> a, Runtime &rt) {
                    ShippedFn p = decode_shipped_fn(a[0].value().as_bytes());
                    FnResult r = evaluate(rt.registry(), p, s, rt);
                    if (!r.is_plain())
                      throw RemoteError(ErrorCode::ContractViolation,
                                        "lift: pipeline returned a reference");
                    return exported(rt, r.plain_value());
                  });
  reg.register_fn("kleisli", 2,
                  [](const Subject &s, std::span<const Arg> a, Runtime &rt) {
                    Stage f = decode_stage(a[0].value().as_bytes());
                    Stage g = decode_stage(a[1].value().as_bytes());
                    const FnResult first = evaluate(rt.registry(), f, s, rt);
                    RemoteHandle mid =
                        rt.handle(require_remote(first, "kleisli").remote_ref());
                    return FnResult::remote(mid.flat_map(g).descriptor());
                  });
}

std::shared_ptr<const FnRegistry> standard_registry() {
  auto reg = std::make_shared<FnRegistry>();
  register_standard_functions(*reg);
  return reg;
}

namespace stages {

Stage identity() { return Stage("identity"); }
Stage to_text() { return Stage("to_text"); }
Stage inc() { return Stage("inc"); }
Stage mul(std::int64_t k) {
  return Stage("mul", {Capture::inline_value(Value::integer(k))});
}
Stage add(std::int64_t k) {
  return Stage("add", {Capture::inline_value(Value::integer(k))});
}
Stage new_token() { return Stage("new_token"); }
Stage equals(Value a) {
  return Stage("equals", {Capture::inline_value(std::move(a))});
}
Stage fail() { return Stage("fail"); }
Stage export_self() { return Stage("export"); }
Stage export_capture(Value v) {
  return Stage("export_capture", {Capture::inline_value(std::move(v))});
}
Stage pass_through(const RemoteRefDescriptor &ref) {
  return Stage("pass_through", {Capture::remote_ref(ref)});
}
Stage mk_pair_equals(const RemoteRefDescriptor &rb) {
  return Stage("mk_pair_equals", {Capture::remote_ref(rb)});
}
Stage lift(const ShippedFn &p) {
  return Stage("lift", {Capture::inline_value(Value::bytes(encode_shipped_fn(p)))});
}
Stage kleisli(const Stage &f, const Stage &g) {
  return Stage("kleisli", {Capture::inline_value(Value::bytes(encode_stage(f))),
                           Capture::inline_value(Value::bytes(encode_stage(g)))});
}

} // namespace stages

} // namespace remo
