#include "remo/value.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace remo {

std::string Token::describe() const {
  return "token#" + std::to_string(serial_);
}

std::string_view kind_name(Value::Kind k) {
  switch (k) {
  case Value::Kind::Int:
    return "int";
  case Value::Kind::Float:
    return "float";
  case Value::Kind::Bool:
    return "bool";
  case Value::Kind::Text:
    return "text";
  case Value::Kind::Bytes:
    return "bytes";
  case Value::Kind::List:
    return "list";
  case Value::Kind::Opaque:
    return "opaque";
  }
  return "?";
}

namespace {

template <typename T> const T &access(const auto &data, Value::Kind want) {
  if (const T *p = std::get_if<T>(&data))
    return *p;
  throw std::invalid_argument("expected " + std::string(kind_name(want)) +
                              " value, got " +
                              std::string(kind_name(
                                  static_cast<Value::Kind>(data.index()))));
}

} // namespace

std::int64_t Value::as_int() const {
  return access<std::int64_t>(data_, Kind::Int);
}
double Value::as_float() const { return access<double>(data_, Kind::Float); }
bool Value::as_bool() const { return access<bool>(data_, Kind::Bool); }
const std::string &Value::as_text() const {
  return access<std::string>(data_, Kind::Text);
}
const Blob &Value::as_bytes() const { return access<Blob>(data_, Kind::Bytes); }
const List &Value::as_list() const { return access<List>(data_, Kind::List); }
const std::shared_ptr<const Opaque> &Value::as_opaque() const {
  return access<std::shared_ptr<const Opaque>>(data_, Kind::Opaque);
}

bool operator==(const Value &a, const Value &b) {
  if (a.data_.index() != b.data_.index())
    return false;
  switch (a.kind()) {
  case Value::Kind::Float:
    return std::bit_cast<std::uint64_t>(a.as_float()) ==
           std::bit_cast<std::uint64_t>(b.as_float());
  case Value::Kind::Opaque:
    return a.as_opaque().get() == b.as_opaque().get();
  default:
    return a.data_ == b.data_;
  }
}

std::string to_text(const Value &v) {
  switch (v.kind()) {
  case Value::Kind::Int:
    return std::to_string(v.as_int());
  case Value::Kind::Float: {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                   v.as_float());
    return std::string(buf.data(), end);
  }
  case Value::Kind::Bool:
    return v.as_bool() ? "true" : "false";
  case Value::Kind::Text:
    return v.as_text();
  case Value::Kind::Bytes: {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (auto b : v.as_bytes()) {
      out.push_back(digits[b >> 4]);
      out.push_back(digits[b & 0xF]);
    }
    return out;
  }
  case Value::Kind::List: {
    std::string out = "[";
    bool first = true;
    for (const auto &e : v.as_list()) {
      if (!first)
        out += ", ";
      first = false;
      out += to_text(e);
    }
    return out + "]";
  }
  case Value::Kind::Opaque:
    return v.as_opaque() ? v.as_opaque()->describe() : "opaque#null";
  }
  return {};
}

} // namespace remo
