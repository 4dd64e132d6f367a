#include "remo/runtime.hpp"
#include "remo/error.hpp"

namespace remo {

Runtime::Runtime(Private, std::shared_ptr<const FnRegistry> registry,
                 EndpointAddr self, std::uint64_t incarnation,
                 std::unique_ptr<Transport> transport, RuntimeOptions opts)
    : registry_(std::move(registry)), opts_(opts),
      table_(std::move(self), incarnation),
      host_(std::make_unique<Host>(*this, table_, *registry_)),
      transport_(std::move(transport)) {}

Runtime::~Runtime() { shutdown(); }

std::shared_ptr<Runtime>
Runtime::loopback(std::shared_ptr<LoopbackNetwork> net,
                  std::shared_ptr<const FnRegistry> registry,
                  RuntimeOptions opts) {
  EndpointAddr self = net->allocate_endpoint();
  auto rt = std::make_shared<Runtime>(
      Private{}, std::move(registry), self,
      opts.incarnation.value_or(random_incarnation()),
      std::make_unique<LoopbackTransport>(net), opts);
  rt->net_ = net;
  Host *host = rt->host_.get();
  net->attach(self, [host](const Blob &frame) { return host->handle_frame(frame); });
  return rt;
}

std::shared_ptr<Runtime> Runtime::tcp(const std::string &listen_host,
                                      std::uint16_t listen_port,
                                      std::shared_ptr<const FnRegistry> registry,
                                      RuntimeOptions opts) {
  auto server = std::make_unique<TcpServer>(listen_host, listen_port);
  EndpointAddr self(listen_host, server->bound_port());
  auto rt = std::make_shared<Runtime>(
      Private{}, std::move(registry), self,
      opts.incarnation.value_or(random_incarnation()),
      std::make_unique<TcpTransport>(), opts);
  Host *host = rt->host_.get();
  server->start([host](const Blob &frame) { return host->handle_frame(frame); });
  rt->server_ = std::move(server);
  return rt;
}

void Runtime::shutdown() {
  if (server_)
    server_->stop();
  if (net_) {
    net_->detach(endpoint());
    net_.reset();
  }
}

RemoteHandle Runtime::apply(Value v) {
  auto d = table_.export_value(std::move(v));
  return RemoteHandle(shared_from_this(), d, table_.find(d.id));
}

RemoteHandle Runtime::handle(const RemoteRefDescriptor &d) {
  LocalRef local = opts_.locality_replacement ? table_.resolve_local(d) : nullptr;
  return RemoteHandle(shared_from_this(), d, std::move(local));
}

namespace {

template <typename Resp>
const Resp &expect(const Message &m, std::string_view request) {
  if (const Resp *r = std::get_if<Resp>(&m))
    return *r;
  fail(ErrorCode::ProtocolError, "unexpected " + std::string(message_name(m)) +
                                     " in reply to " + std::string(request));
}

void charge_inline_captures(const ShippedFn &f) {
  for (const auto &stage : f.stages)
    for (const auto &c : stage.captures)
      if (c.is_inline() && c.as_inline().origin)
        c.as_inline().origin->record_serialization();
}

} // namespace

RemoteHandle Runtime::lookup(const EndpointAddr &at, std::string_view name) {
  if (at == endpoint() && opts_.locality_replacement)
    return handle(host_->handle_lookup(name));
  auto resp = request(at, msg::Lookup{std::string(name)});
  return handle(expect<msg::RespDescriptor>(resp, "Lookup").ref);
}

void Runtime::rebind(std::string_view name, const RemoteHandle &h) {
  if (h.descriptor().endpoint == endpoint()) {
    host_->handle_rebind(std::string(name), h.descriptor().id);
    return;
  }
  auto resp = request(h.descriptor().endpoint,
                      msg::Rebind{std::string(name), h.descriptor()});
  expect<msg::RespAck>(resp, "Rebind");
}

RemoteHandle Runtime::export_to(const EndpointAddr &at, const Value &v) {
  if (at == endpoint())
    return apply(v);
  auto resp = request(at, msg::Export{encode_value(v)});
  return handle(expect<msg::RespDescriptor>(resp, "Export").ref);
}

ObjectStats Runtime::stats(const RemoteRefDescriptor &d) {
  auto resp = request(d.endpoint, msg::Stats{d.id});
  const auto &s = expect<msg::RespStats>(resp, "Stats");
  return ObjectStats{s.serialization_count, s.get_count};
}

Value Runtime::new_token() {
  return Value::opaque(std::make_shared<remo::Token>(next_token_++));
}

Message Runtime::request(const EndpointAddr &to, const Message &m) {
  Blob frame = encode_message(m);
  if (const auto *map = std::get_if<msg::Map>(&m))
    charge_inline_captures(map->fn);
  else if (const auto *flat = std::get_if<msg::FlatMap>(&m))
    charge_inline_captures(flat->fn);

  Blob reply = transport_->roundtrip(to, frame);
  auto decoded = decode_message(reply);
  if (!decoded)
    throw TransportError("truncated response from " + to.str());
  if (auto *err = std::get_if<msg::RespError>(&decoded->message))
    throw RemoteError(err->code, err->text);
  if (is_request(decoded->message))
    fail(ErrorCode::ProtocolError, "host " + to.str() + " answered with a " +
                                       std::string(message_name(decoded->message)));
  return std::move(decoded->message);
}

} // namespace remo
