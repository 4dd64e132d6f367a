#include "remo/transport.hpp"
#include "remo/error.hpp"
#include "remo/protocol.hpp"

#include <boost/asio.hpp>

#include <array>
#include <list>
#include <thread>

namespace remo {

namespace asio = boost::asio;
using asio::ip::tcp;

EndpointAddr LoopbackNetwork::allocate_endpoint() {
  std::lock_guard lock(mu_);
  if (next_port_ == 0)
    throw std::length_error("loopback network out of endpoints");
  return EndpointAddr("loopback", next_port_++);
}

void LoopbackNetwork::attach(const EndpointAddr &at, FrameHandler handler) {
  std::lock_guard lock(mu_);
  hosts_[at.str()] = std::make_shared<FrameHandler>(std::move(handler));
}

void LoopbackNetwork::detach(const EndpointAddr &at) {
  std::lock_guard lock(mu_);
  hosts_.erase(at.str());
}

Blob LoopbackNetwork::deliver(const EndpointAddr &to, const Blob &request_frame) {
  std::shared_ptr<FrameHandler> handler;
  {
    std::lock_guard lock(mu_);
    auto it = hosts_.find(to.str());
    if (it == hosts_.end())
      throw TransportError("no loopback host at " + to.str());
    handler = it->second;
  }
  return (*handler)(request_frame).frame;
}

Blob LoopbackTransport::exchange(const EndpointAddr &to,
                                 const Blob &request_frame) {
  if (auto ms = delay_ms_.load(); ms > 0)
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  return net_->deliver(to, request_frame);
}

namespace {

/// Reads one whole frame (header and body) from a blocking socket. Returns
/// an empty blob on orderly EOF before any header byte.
Blob read_frame(tcp::socket &sock) {
  std::array<std::uint8_t, 4> header{};
  boost::system::error_code ec;
  std::size_t got = asio::read(sock, asio::buffer(header), ec);
  if (ec == asio::error::eof && got == 0)
    return {};
  if (ec)
    throw TransportError("read failed: " + ec.message());
  std::uint32_t len = std::uint32_t{header[0]} << 24 |
                      std::uint32_t{header[1]} << 16 |
                      std::uint32_t{header[2]} << 8 | header[3];
  Blob frame(header.begin(), header.end());
  if (len > kMaxFrameBody || len == 0)
    return frame; // let the decoder produce the protocol error
  frame.resize(4 + std::size_t{len});
  asio::read(sock, asio::buffer(frame.data() + 4, len), ec);
  if (ec)
    throw TransportError("read failed: " + ec.message());
  return frame;
}

} // namespace

struct TcpTransport::Impl {
  asio::io_context io;
  std::mutex mu;
  std::unordered_map<std::string, std::vector<std::unique_ptr<tcp::socket>>>
      idle;

  std::unique_ptr<tcp::socket> acquire(const EndpointAddr &to) {
    {
      std::lock_guard lock(mu);
      auto &pool = idle[to.str()];
      if (!pool.empty()) {
        auto s = std::move(pool.back());
        pool.pop_back();
        return s;
      }
    }
    auto sock = std::make_unique<tcp::socket>(io);
    boost::system::error_code ec;
    tcp::resolver resolver(io);
    auto results = resolver.resolve(to.host(), std::to_string(to.port()), ec);
    if (ec)
      throw TransportError("cannot resolve " + to.str() + ": " + ec.message());
    asio::connect(*sock, results, ec);
    if (ec)
      throw TransportError("cannot connect to " + to.str() + ": " + ec.message());
    sock->set_option(tcp::no_delay(true), ec);
    return sock;
  }

  void release(const EndpointAddr &to, std::unique_ptr<tcp::socket> s) {
    std::lock_guard lock(mu);
    auto &pool = idle[to.str()];
    if (pool.size() < 8)
      pool.push_back(std::move(s));
  }
};

TcpTransport::TcpTransport() : impl_(std::make_unique<Impl>()) {}
TcpTransport::~TcpTransport() = default;

Blob TcpTransport::exchange(const EndpointAddr &to, const Blob &request_frame) {
  auto sock = impl_->acquire(to);
  boost::system::error_code ec;
  asio::write(*sock, asio::buffer(request_frame), ec);
  if (ec)
    throw TransportError("write to " + to.str() + " failed: " + ec.message());
  Blob reply = read_frame(*sock);
  if (reply.empty())
    throw TransportError("connection to " + to.str() + " closed");
  impl_->release(to, std::move(sock));
  return reply;
}

struct TcpServer::Impl {
  struct Connection {
    tcp::socket socket;
    std::thread worker;
    std::atomic<bool> done{false};
    explicit Connection(tcp::socket s) : socket(std::move(s)) {}
  };

  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::thread accept_thread;
  FrameHandler handler;
  std::mutex mu;
  std::list<std::unique_ptr<Connection>> connections;
  bool stopped = false;

  void accept_next() {
    acceptor.async_accept([this](boost::system::error_code ec, tcp::socket s) {
      if (ec)
        return;
      std::lock_guard lock(mu);
      if (stopped)
        return;
      reap();
      s.set_option(tcp::no_delay(true), ec);
      auto conn = std::make_unique<Connection>(std::move(s));
      Connection *c = conn.get();
      c->worker = std::thread([this, c] { serve(*c); });
      connections.push_back(std::move(conn));
      accept_next();
    });
  }

  void serve(Connection &c) {
    try {
      for (;;) {
        Blob frame = read_frame(c.socket);
        if (frame.empty())
          break;
        FrameReply reply = handler(frame);
        asio::write(c.socket, asio::buffer(reply.frame));
        if (!reply.keep_open)
          break;
      }
    } catch (const std::exception &) {
      // Connection-level failures only end this connection.
    }
    boost::system::error_code ignored;
    c.socket.shutdown(tcp::socket::shutdown_both, ignored);
    c.done = true;
  }

  // Joins finished workers. Caller holds mu.
  void reap() {
    for (auto it = connections.begin(); it != connections.end();) {
      if ((*it)->done) {
        (*it)->worker.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }
};

TcpServer::TcpServer(const std::string &host, std::uint16_t port)
    : impl_(std::make_unique<Impl>()) {
  boost::system::error_code ec;
  auto address = asio::ip::make_address(host == "localhost" ? "127.0.0.1" : host, ec);
  if (ec)
    throw TransportError("cannot listen on '" + host + "': " + ec.message());
  tcp::endpoint ep(address, port);
  impl_->acceptor.open(ep.protocol(), ec);
  if (!ec)
    impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec)
    impl_->acceptor.bind(ep, ec);
  if (!ec)
    impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec)
    throw TransportError("cannot listen on " + host + ":" +
                         std::to_string(port) + ": " + ec.message());
}

TcpServer::~TcpServer() { stop(); }

std::uint16_t TcpServer::bound_port() const {
  return impl_->acceptor.local_endpoint().port();
}

void TcpServer::start(FrameHandler handler) {
  impl_->handler = std::move(handler);
  impl_->accept_next();
  impl_->accept_thread = std::thread([this] { impl_->io.run(); });
}

void TcpServer::stop() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopped)
      return;
    impl_->stopped = true;
  }
  impl_->io.stop();
  if (impl_->accept_thread.joinable())
    impl_->accept_thread.join();
  boost::system::error_code ignored;
  impl_->acceptor.close(ignored);
  std::list<std::unique_ptr<Impl::Connection>> conns;
  {
    std::lock_guard lock(impl_->mu);
    conns.swap(impl_->connections);
  }
  for (auto &c : conns)
    c->socket.shutdown(tcp::socket::shutdown_both, ignored);
  for (auto &c : conns)
    if (c->worker.joinable())
      c->worker.join();
}

} // namespace remo
