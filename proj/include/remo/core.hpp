#pragma once

#include "remo/value.hpp"

#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace remo {

/// "host:port". Equality is on the canonical rendering, so "localhost" and
/// "127.0.0.1" are different endpoints.
class EndpointAddr {
public:
  EndpointAddr() = default;
  /// Throws std::invalid_argument on an empty host, whitespace, or a port
  /// outside 1..65535.
  EndpointAddr(std::string host, std::uint16_t port);

  /// Parses "host:port" (the last ':' separates the port).
  static EndpointAddr parse(std::string_view text);
  static std::optional<EndpointAddr> try_parse(std::string_view text);

  const std::string &host() const { return host_; }
  std::uint16_t port() const { return port_; }
  std::string str() const;

  friend bool operator==(const EndpointAddr &, const EndpointAddr &) = default;

private:
  std::string host_;
  std::uint16_t port_ = 0;
};

std::ostream &operator<<(std::ostream &os, const EndpointAddr &e);

struct ObjectId {
  std::uint64_t incarnation = 0;
  std::uint64_t serial = 0;

  friend auto operator<=>(const ObjectId &, const ObjectId &) = default;
};

/// "<incarnation as 16 hex digits>:<serial in decimal>"
std::string to_string(const ObjectId &id);

struct ObjectIdHash {
  std::size_t operator()(const ObjectId &id) const noexcept {
    return std::hash<std::uint64_t>{}(id.incarnation * 0x9e3779b97f4a7c15ULL ^
                                      id.serial);
  }
};

/// Portable identity of a hosted value.
struct RemoteRefDescriptor {
  EndpointAddr endpoint;
  ObjectId id;

  friend bool operator==(const RemoteRefDescriptor &,
                         const RemoteRefDescriptor &) = default;
};

/// "remote[endpoint=host:port id=incarnation:serial]"
std::string to_string(const RemoteRefDescriptor &d);
std::optional<RemoteRefDescriptor> parse_descriptor(std::string_view text);
std::ostream &operator<<(std::ostream &os, const RemoteRefDescriptor &d);

/// A table entry. The value is fixed at export; the counters are the only
/// mutable state.
class HostedValue {
public:
  HostedValue(ObjectId id, Value v) : id_(id), value_(std::move(v)) {}

  ObjectId id() const { return id_; }
  const Value &value() const { return value_; }

  std::uint64_t serialization_count() const { return serializations_.load(); }
  std::uint64_t get_count() const { return gets_.load(); }

  std::uint64_t record_serialization() { return ++serializations_; }
  void record_get() { ++gets_; }

private:
  ObjectId id_;
  Value value_;
  std::atomic<std::uint64_t> serializations_{0};
  std::atomic<std::uint64_t> gets_{0};
};

using LocalRef = std::shared_ptr<HostedValue>;

/// Per-process object table. Every operation is linearizable; entries live
/// until the table is destroyed.
class HostTable {
public:
  HostTable(EndpointAddr self, std::uint64_t incarnation);

  const EndpointAddr &self_endpoint() const { return self_; }
  std::uint64_t incarnation() const { return incarnation_; }

  ObjectId new_object_id();
  RemoteRefDescriptor export_value(Value v);

  /// Home and present, or nothing. Never serializes.
  LocalRef resolve_local(const RemoteRefDescriptor &d) const;
  /// Lookup by id alone; null on a miss.
  LocalRef find(const ObjectId &id) const;

  /// Throws std::logic_error for an id not in the table.
  std::uint64_t record_serialization(const ObjectId &id);

  std::size_t size() const;

private:
  EndpointAddr self_;
  std::uint64_t incarnation_;
  std::atomic<std::uint64_t> next_serial_{1};
  mutable std::mutex mu_;
  std::unordered_map<ObjectId, LocalRef, ObjectIdHash> entries_;
};

/// Random 64-bit draw for a fresh process incarnation.
std::uint64_t random_incarnation();

} // namespace remo
