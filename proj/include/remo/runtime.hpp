#pragma once

#include "remo/core.hpp"
#include "remo/handle.hpp"
#include "remo/host.hpp"
#include "remo/protocol.hpp"
#include "remo/shipping.hpp"
#include "remo/transport.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace remo {

struct RuntimeOptions {
  /// Substitute home references by their table entries.
  bool locality_replacement = true;
  /// Fixed incarnation (for reproducible runs); random when unset.
  std::optional<std::uint64_t> incarnation;
};

/// One process's participation in the system: a host (table, registry,
/// listener) plus the client side that talks to other hosts. Every client is
/// a host, so values created with apply() can be handed to anybody.
///
/// Handles keep their runtime alive.
class Runtime : public std::enable_shared_from_this<Runtime> {
public:
  /// A runtime attached to an in-process network.
  static std::shared_ptr<Runtime>
  loopback(std::shared_ptr<LoopbackNetwork> net,
           std::shared_ptr<const FnRegistry> registry,
           RuntimeOptions opts = {});

  /// A runtime listening on TCP. Port 0 picks an ephemeral port; the bound
  /// port becomes part of endpoint(). Throws TransportError on bind failure.
  static std::shared_ptr<Runtime> tcp(const std::string &listen_host,
                                      std::uint16_t listen_port,
                                      std::shared_ptr<const FnRegistry> registry,
                                      RuntimeOptions opts = {});

  ~Runtime();
  Runtime(const Runtime &) = delete;
  Runtime &operator=(const Runtime &) = delete;

  const EndpointAddr &endpoint() const { return table_.self_endpoint(); }
  bool locality_replacement() const { return opts_.locality_replacement; }
  HostTable &table() { return table_; }
  Host &host() { return *host_; }
  const FnRegistry &registry() const { return *registry_; }
  Transport &transport() { return *transport_; }

  /// Stops accepting connections. Idempotent; the destructor calls it.
  void shutdown();

  /// The monadic unit: exports `v` here. The handle is always local.
  RemoteHandle apply(Value v);
  /// Wraps a descriptor, substituting the table entry when it is home.
  RemoteHandle handle(const RemoteRefDescriptor &d);

  RemoteHandle lookup(const EndpointAddr &at, std::string_view name);
  /// Binds `name` at the host that holds `h`'s value.
  void rebind(std::string_view name, const RemoteHandle &h);
  /// Pushes a serializable value to another host.
  RemoteHandle export_to(const EndpointAddr &at, const Value &v);
  ObjectStats stats(const RemoteRefDescriptor &d);

  /// A fresh opaque token; serials count up from 1 per runtime.
  Value new_token();

  /// Sends one request and returns the response. RespError is rethrown as
  /// RemoteError; a response of the wrong shape is a PROTOCOL_ERROR. Inline
  /// captures taken from table entries are charged to those entries once
  /// the request has been encoded.
  Message request(const EndpointAddr &to, const Message &m);

private:
  struct Private {};

public:
  Runtime(Private, std::shared_ptr<const FnRegistry> registry,
          EndpointAddr self, std::uint64_t incarnation,
          std::unique_ptr<Transport> transport, RuntimeOptions opts);

private:
  std::shared_ptr<const FnRegistry> registry_;
  RuntimeOptions opts_;
  HostTable table_;
  std::unique_ptr<Host> host_;
  std::unique_ptr<Transport> transport_;
  std::unique_ptr<TcpServer> server_;
  std::shared_ptr<LoopbackNetwork> net_;
  std::atomic<std::uint64_t> next_token_{1};
};

} // namespace remo
