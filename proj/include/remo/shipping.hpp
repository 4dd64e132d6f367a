#pragma once

#include "remo/core.hpp"
#include "remo/handle.hpp"
#include "remo/stage.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace remo {

class Runtime;

/// The value a stage is applied to. `origin` is set when the value is a
/// table entry (first stage of a Map/FlatMap), null for intermediates.
struct Subject {
  const Value &value;
  LocalRef origin;

  /// Captures the subject by value, remembering where it came from.
  Capture capture() const { return Capture::inline_value(value, origin); }
};

/// A capture after resolution at the executing host.
class Arg {
public:
  static Arg of_value(Value v, LocalRef origin = nullptr) {
    return Arg(Held{std::move(v), std::move(origin)});
  }
  static Arg of_handle(RemoteHandle h) { return Arg(std::move(h)); }

  bool is_value() const { return std::holds_alternative<Held>(v_); }
  bool is_handle() const { return std::holds_alternative<RemoteHandle>(v_); }

  /// Throws std::invalid_argument when the capture was a remote reference.
  const Value &value() const;
  /// Throws std::invalid_argument when the capture was inline.
  const RemoteHandle &handle() const;

  Subject as_subject() const;
  Capture capture() const;

private:
  struct Held {
    Value value;
    LocalRef origin;
  };
  explicit Arg(Held h) : v_(std::move(h)) {}
  explicit Arg(RemoteHandle h) : v_(std::move(h)) {}

  std::variant<Held, RemoteHandle> v_;
};

/// What a stage body produces: a plain value (map position) or a remote
/// reference (flatMap position).
class FnResult {
public:
  static FnResult plain(Value v) { return FnResult(std::move(v)); }
  static FnResult remote(RemoteRefDescriptor d) { return FnResult(std::move(d)); }

  bool is_plain() const { return std::holds_alternative<Value>(v_); }
  bool is_remote() const { return !is_plain(); }
  const Value &plain_value() const { return std::get<Value>(v_); }
  const RemoteRefDescriptor &remote_ref() const {
    return std::get<RemoteRefDescriptor>(v_);
  }

private:
  explicit FnResult(Value v) : v_(std::move(v)) {}
  explicit FnResult(RemoteRefDescriptor d) : v_(std::move(d)) {}
  std::variant<Value, RemoteRefDescriptor> v_;
};

/// Stage body. The runtime is the executing host; bodies may use it to
/// export values or to call map/flat_map on captured handles. Bodies must be
/// safe to invoke concurrently.
using FnBody =
    std::function<FnResult(const Subject &, std::span<const Arg>, Runtime &)>;

struct FnEntry {
  std::size_t arity = 0;
  FnBody body;
};

/// Named stage bodies. Populated at startup, read-only afterwards; processes
/// that talk to each other must register the same ids.
class FnRegistry {
public:
  /// Throws std::logic_error if `fn_id` is empty or already registered.
  void register_fn(std::string fn_id, std::size_t arity, FnBody body);

  /// Convenience for arity-0 map-position functions.
  void register_unary(std::string fn_id,
                      std::function<Value(const Value &)> body);

  const FnEntry *find(std::string_view fn_id) const;
  bool contains(std::string_view fn_id) const { return find(fn_id) != nullptr; }
  std::size_t size() const { return entries_.size(); }

  /// Builds a stage after checking the id and capture arity locally.
  /// UNKNOWN_FUNCTION or CONTRACT_VIOLATION on mismatch.
  Stage stage(std::string fn_id, std::vector<Capture> captures = {}) const;

private:
  std::map<std::string, FnEntry, std::less<>> entries_;
};

/// Inline captures become values; remote references become handles, local
/// when they are home and the runtime does locality replacement.
std::vector<Arg> resolve_captures(std::span<const Capture> captures,
                                  Runtime &rt);

/// Applies the stages left to right. Every stage but the last must produce
/// a plain value.
///
/// Errors: UNKNOWN_FUNCTION for an unregistered id, CONTRACT_VIOLATION for
/// an arity mismatch or an intermediate remote result, EXECUTION_ERROR when
/// a body throws anything other than a RemoteError (which passes through).
FnResult evaluate(const FnRegistry &reg, const ShippedFn &f,
                  const Subject &subject, Runtime &rt);

} // namespace remo
