#include "remo/core.hpp"
#include "remo/error.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace remo {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotFound:
    return "NOT_FOUND";
  case ErrorCode::UnknownObject:
    return "UNKNOWN_OBJECT";
  case ErrorCode::UnknownFunction:
    return "UNKNOWN_FUNCTION";
  case ErrorCode::NotSerializable:
    return "NOT_SERIALIZABLE";
  case ErrorCode::ContractViolation:
    return "CONTRACT_VIOLATION";
  case ErrorCode::ExecutionError:
    return "EXECUTION_ERROR";
  case ErrorCode::ProtocolError:
    return "PROTOCOL_ERROR";
  }
  return "UNKNOWN_ERROR_CODE";
}

bool error_code_from_byte(std::uint8_t b, ErrorCode &out) {
  if (b < 1 || b > 7)
    return false;
  out = static_cast<ErrorCode>(b);
  return true;
}

EndpointAddr::EndpointAddr(std::string host, std::uint16_t port)
    : host_(std::move(host)), port_(port) {
  if (host_.empty())
    throw std::invalid_argument("endpoint host is empty");
  for (unsigned char c : host_)
    if (std::isspace(c))
      throw std::invalid_argument("endpoint host contains whitespace");
  if (port_ == 0)
    throw std::invalid_argument("endpoint port must be in 1..65535");
}

std::optional<EndpointAddr> EndpointAddr::try_parse(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 ||
      colon + 1 == text.size())
    return std::nullopt;
  auto port_text = text.substr(colon + 1);
  unsigned port = 0;
  auto [end, ec] = std::from_chars(port_text.data(),
                                   port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() ||
      port < 1 || port > 65535)
    return std::nullopt;
  auto host = text.substr(0, colon);
  for (unsigned char c : host)
    if (std::isspace(c))
      return std::nullopt;
  return EndpointAddr(std::string(host), static_cast<std::uint16_t>(port));
}

EndpointAddr EndpointAddr::parse(std::string_view text) {
  if (auto e = try_parse(text))
    return *e;
  throw std::invalid_argument("malformed endpoint '" + std::string(text) +
                              "', expected host:port");
}

std::string EndpointAddr::str() const {
  return host_ + ":" + std::to_string(port_);
}

std::ostream &operator<<(std::ostream &os, const EndpointAddr &e) {
  return os << e.str();
}

std::string to_string(const ObjectId &id) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(id.incarnation));
  return std::string(buf) + ":" + std::to_string(id.serial);
}

std::string to_string(const RemoteRefDescriptor &d) {
  return "remote[endpoint=" + d.endpoint.str() + " id=" + to_string(d.id) +
         "]";
}

std::ostream &operator<<(std::ostream &os, const RemoteRefDescriptor &d) {
  return os << to_string(d);
}

std::optional<RemoteRefDescriptor> parse_descriptor(std::string_view text) {
  constexpr std::string_view prefix = "remote[endpoint=";
  constexpr std::string_view mid = " id=";
  if (!text.starts_with(prefix) || !text.ends_with("]"))
    return std::nullopt;
  text.remove_prefix(prefix.size());
  text.remove_suffix(1);
  auto sep = text.find(mid);
  if (sep == std::string_view::npos)
    return std::nullopt;
  auto endpoint = EndpointAddr::try_parse(text.substr(0, sep));
  auto id_text = text.substr(sep + mid.size());
  auto colon = id_text.find(':');
  if (!endpoint || colon == std::string_view::npos)
    return std::nullopt;
  ObjectId id;
  auto inc = id_text.substr(0, colon);
  auto ser = id_text.substr(colon + 1);
  auto r1 = std::from_chars(inc.data(), inc.data() + inc.size(),
                            id.incarnation, 16);
  auto r2 = std::from_chars(ser.data(), ser.data() + ser.size(), id.serial);
  if (r1.ec != std::errc{} || r1.ptr != inc.data() + inc.size() ||
      r2.ec != std::errc{} || r2.ptr != ser.data() + ser.size())
    return std::nullopt;
  return RemoteRefDescriptor{*endpoint, id};
}

HostTable::HostTable(EndpointAddr self, std::uint64_t incarnation)
    : self_(std::move(self)), incarnation_(incarnation) {}

ObjectId HostTable::new_object_id() {
  std::uint64_t serial = next_serial_.fetch_add(1);
  if (serial == 0)
    throw std::overflow_error("object id serial space exhausted");
  return ObjectId{incarnation_, serial};
}

RemoteRefDescriptor HostTable::export_value(Value v) {
  ObjectId id = new_object_id();
  auto entry = std::make_shared<HostedValue>(id, std::move(v));
  {
    std::lock_guard lock(mu_);
    entries_.emplace(id, std::move(entry));
  }
  return RemoteRefDescriptor{self_, id};
}

LocalRef HostTable::resolve_local(const RemoteRefDescriptor &d) const {
  if (d.endpoint != self_)
    return nullptr;
  return find(d.id);
}

LocalRef HostTable::find(const ObjectId &id) const {
  if (id.incarnation != incarnation_)
    return nullptr;
  std::lock_guard lock(mu_);
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : it->second;
}

std::uint64_t HostTable::record_serialization(const ObjectId &id) {
  auto entry = find(id);
  if (!entry)
    throw std::logic_error("record_serialization on unknown object " +
                           to_string(id));
  return entry->record_serialization();
}

std::size_t HostTable::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::uint64_t random_incarnation() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

} // namespace remo
