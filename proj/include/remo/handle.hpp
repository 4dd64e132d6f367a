#pragma once

#include "remo/codec.hpp"
#include "remo/core.hpp"
#include "remo/stage.hpp"

#include <iosfwd>
#include <memory>
#include <string>

namespace remo {

class Runtime;

struct ObjectStats {
  std::uint64_t serialization_count = 0;
  std::uint64_t get_count = 0;
  friend bool operator==(const ObjectStats &, const ObjectStats &) = default;
};

/// A reference to a hosted value, bound to the runtime that uses it.
///
/// When the value lives in the owning runtime's own table (and locality
/// replacement is on), `local()` is the table entry and every operation runs
/// in-process: no frames, no serialization. Otherwise operations become
/// requests to the descriptor's endpoint and block until the response.
class RemoteHandle {
public:
  RemoteHandle(std::shared_ptr<Runtime> rt, RemoteRefDescriptor d,
               LocalRef local = nullptr);

  const RemoteRefDescriptor &descriptor() const { return desc_; }
  const LocalRef &local() const { return local_; }
  bool is_local() const { return local_ != nullptr; }
  Runtime &runtime() const { return *rt_; }

  /// Ships `f` to the value; the result stays hosted where the value is.
  RemoteHandle map(const ShippedFn &f) const;
  /// Ships `f`, which must yield a remote reference; that reference is
  /// returned as-is, wherever it lives.
  RemoteHandle flat_map(const ShippedFn &f) const;

  /// Forces the value. A local handle returns the hosted value itself and
  /// touches no counters; a remote one needs a codec binding.
  Value get() const;
  /// Raw Get response. Local handles encode in-process without counting.
  ValuePayload get_payload() const;

  ObjectStats stats() const;

private:
  std::shared_ptr<Runtime> rt_;
  RemoteRefDescriptor desc_;
  LocalRef local_;
};

/// Renders the descriptor, never the value.
std::string to_string(const RemoteHandle &h);
std::ostream &operator<<(std::ostream &os, const RemoteHandle &h);

} // namespace remo
