#pragma once

#include "remo/core.hpp"
#include "remo/value.hpp"

#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace remo {

/// An argument captured by a shipped stage.
///
/// Inline captures hold the value itself until the stage crosses the wire,
/// at which point it is encoded (and must be serializable). `origin` names
/// the hosted entry the value was taken from, if any, so that shipping it
/// can be charged to that entry's serialization counter. It is not part of
/// the wire form or of equality.
class Capture {
public:
  struct Inline {
    Value value;
    LocalRef origin;
  };
  struct Ref {
    RemoteRefDescriptor descriptor;
  };

  static Capture inline_value(Value v, LocalRef origin = nullptr) {
    return Capture(Inline{std::move(v), std::move(origin)});
  }
  static Capture remote_ref(RemoteRefDescriptor d) {
    return Capture(Ref{std::move(d)});
  }

  bool is_inline() const { return std::holds_alternative<Inline>(v_); }
  bool is_ref() const { return std::holds_alternative<Ref>(v_); }
  const Inline &as_inline() const { return std::get<Inline>(v_); }
  const Ref &as_ref() const { return std::get<Ref>(v_); }

  friend bool operator==(const Capture &a, const Capture &b);

private:
  explicit Capture(Inline alt) : v_(std::move(alt)) {}
  explicit Capture(Ref alt) : v_(std::move(alt)) {}
  std::variant<Inline, Ref> v_;
};

/// One shipped function: a registry key plus its captured arguments.
struct Stage {
  std::string fn_id;
  std::vector<Capture> captures;

  Stage() = default;
  explicit Stage(std::string id, std::vector<Capture> caps = {})
      : fn_id(std::move(id)), captures(std::move(caps)) {}

  friend bool operator==(const Stage &, const Stage &) = default;
};

/// Stages applied left to right.
struct ShippedFn {
  std::vector<Stage> stages;

  ShippedFn() = default;
  ShippedFn(Stage s) { stages.push_back(std::move(s)); }
  ShippedFn(std::initializer_list<Stage> ss) : stages(ss) {}
  explicit ShippedFn(std::vector<Stage> ss) : stages(std::move(ss)) {}

  std::size_t size() const { return stages.size(); }
  bool empty() const { return stages.empty(); }

  friend bool operator==(const ShippedFn &, const ShippedFn &) = default;
};

/// Appends `s`; `p` is untouched.
ShippedFn compose(const ShippedFn &p, Stage s);
/// `first` then `second`.
ShippedFn concat(const ShippedFn &first, const ShippedFn &second);

} // namespace remo
