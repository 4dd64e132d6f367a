#pragma once

#include "remo/codec.hpp"
#include "remo/core.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace remo {

/// Moves one framed request to an endpoint and returns the framed response.
/// Counts every request frame it carries.
class Transport {
public:
  virtual ~Transport() = default;

  Blob roundtrip(const EndpointAddr &to, const Blob &request_frame) {
    ++request_frames_;
    return exchange(to, request_frame);
  }

  std::uint64_t request_frames() const { return request_frames_.load(); }

protected:
  /// Throws TransportError on connection failure.
  virtual Blob exchange(const EndpointAddr &to, const Blob &request_frame) = 0;

private:
  std::atomic<std::uint64_t> request_frames_{0};
};

/// Server side of a connection: takes one frame body-and-header buffer,
/// returns the response frame and whether the connection should stay open.
struct FrameReply {
  Blob frame;
  bool keep_open = true;
};
using FrameHandler = std::function<FrameReply(const Blob &request_frame)>;

/// In-process network: endpoints "loopback:<n>" mapped to frame handlers.
/// Frames are real encoded bytes; only the socket is missing.
class LoopbackNetwork {
public:
  EndpointAddr allocate_endpoint();
  void attach(const EndpointAddr &at, FrameHandler handler);
  void detach(const EndpointAddr &at);
  Blob deliver(const EndpointAddr &to, const Blob &request_frame);

private:
  std::mutex mu_;
  std::uint16_t next_port_ = 1;
  std::unordered_map<std::string, std::shared_ptr<FrameHandler>> hosts_;
};

class LoopbackTransport final : public Transport {
public:
  explicit LoopbackTransport(std::shared_ptr<LoopbackNetwork> net)
      : net_(std::move(net)) {}

  /// Artificial latency added before every delivery.
  void set_delay(std::chrono::milliseconds d) { delay_ms_ = d.count(); }

protected:
  Blob exchange(const EndpointAddr &to, const Blob &request_frame) override;

private:
  std::shared_ptr<LoopbackNetwork> net_;
  std::atomic<std::int64_t> delay_ms_{0};
};

/// Blocking TCP client with a small per-endpoint connection pool. Calls to
/// one endpoint may run concurrently on separate connections.
class TcpTransport final : public Transport {
public:
  TcpTransport();
  ~TcpTransport() override;

protected:
  Blob exchange(const EndpointAddr &to, const Blob &request_frame) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Thread-per-connection TCP listener.
class TcpServer {
public:
  /// Binds immediately; port 0 picks an ephemeral port. Throws
  /// TransportError if the address cannot be bound.
  TcpServer(const std::string &host, std::uint16_t port);
  ~TcpServer();

  TcpServer(const TcpServer &) = delete;
  TcpServer &operator=(const TcpServer &) = delete;

  std::uint16_t bound_port() const;
  void start(FrameHandler handler);
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace remo
