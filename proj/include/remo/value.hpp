#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace remo {

using Blob = std::vector<std::uint8_t>;

/// In-process object with no wire representation. Equality is identity.
class Opaque {
public:
  virtual ~Opaque() = default;
  virtual std::string describe() const = 0;
};

/// The stand-in for a plain `new Object`: distinct per construction,
/// renders as "token#<serial>".
class Token final : public Opaque {
public:
  explicit Token(std::uint64_t serial) : serial_(serial) {}
  std::uint64_t serial() const { return serial_; }
  std::string describe() const override;

private:
  std::uint64_t serial_;
};

class Value;
using List = std::vector<Value>;

/// Dynamic value hosted in a table or passed to shipped functions.
///
/// Integers, floats, booleans, text, blobs and lists have a codec binding;
/// opaque values do not and only fail when something tries to put them on
/// the wire. Floats compare bitwise so that equality agrees with the
/// canonical encoding.
class Value {
public:
  enum class Kind : std::uint8_t { Int, Float, Bool, Text, Bytes, List, Opaque };

  Value() : data_(std::int64_t{0}) {}
  static Value integer(std::int64_t v) { return Value(std::in_place, v); }
  static Value floating(double v) { return Value(std::in_place, v); }
  static Value boolean(bool v) { return Value(std::in_place, v); }
  static Value text(std::string v) { return Value(std::in_place, std::move(v)); }
  static Value bytes(Blob v) { return Value(std::in_place, std::move(v)); }
  static Value list(List v) { return Value(std::in_place, std::move(v)); }
  static Value opaque(std::shared_ptr<const Opaque> v) {
    return Value(std::in_place, std::move(v));
  }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_int() const { return kind() == Kind::Int; }
  bool is_opaque() const { return kind() == Kind::Opaque; }

  // Accessors throw std::invalid_argument on a kind mismatch.
  std::int64_t as_int() const;
  double as_float() const;
  bool as_bool() const;
  const std::string &as_text() const;
  const Blob &as_bytes() const;
  const List &as_list() const;
  const std::shared_ptr<const Opaque> &as_opaque() const;

  friend bool operator==(const Value &a, const Value &b);

private:
  using Storage = std::variant<std::int64_t, double, bool, std::string, Blob,
                               List, std::shared_ptr<const Opaque>>;
  template <typename T>
  Value(std::in_place_t, T &&v)
      : data_(std::in_place_type<std::decay_t<T>>, std::forward<T>(v)) {}

  Storage data_;
};

std::string_view kind_name(Value::Kind k);

/// Canonical text rendering: decimal integers, shortest round-trip floats,
/// "true"/"false", text as-is, lowercase hex for blobs, "[a, b]" for lists,
/// Opaque::describe() for opaque values.
std::string to_text(const Value &v);

} // namespace remo
