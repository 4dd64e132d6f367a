#pragma once

#include "remo/codec.hpp"
#include "remo/core.hpp"
#include "remo/handle.hpp"
#include "remo/protocol.hpp"
#include "remo/shipping.hpp"
#include "remo/transport.hpp"

#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace remo {

class Runtime;

/// Executes requests against one host table. Names bound with rebind are
/// scoped to this host.
class Host {
public:
  Host(Runtime &owner, HostTable &table, const FnRegistry &registry);

  Host(const Host &) = delete;
  Host &operator=(const Host &) = delete;

  /// Result exported here, next to the target.
  RemoteRefDescriptor handle_map(const ObjectId &target, const ShippedFn &f);
  /// Result is whatever reference `f` returned.
  RemoteRefDescriptor handle_flatmap(const ObjectId &target, const ShippedFn &f);
  ValuePayload handle_get(const ObjectId &target);
  void handle_rebind(const std::string &name, const ObjectId &id);
  RemoteRefDescriptor handle_lookup(std::string_view name) const;
  RemoteRefDescriptor handle_export(const ValuePayload &payload);
  ObjectStats handle_stats(const ObjectId &target) const;

  /// Runs one request and produces its response; errors become RespError.
  Message dispatch(const Message &request);

  /// Decodes a request frame, dispatches it and encodes the response.
  /// Undecodable input yields RespError(PROTOCOL_ERROR) and asks the caller
  /// to close the connection.
  FrameReply handle_frame(const Blob &request_frame);

private:
  LocalRef require(const ObjectId &id) const;

  Runtime &owner_;
  HostTable &table_;
  const FnRegistry &registry_;
  mutable std::mutex names_mu_;
  std::map<std::string, ObjectId, std::less<>> names_;
};

} // namespace remo
