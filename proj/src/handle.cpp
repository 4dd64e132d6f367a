#include "remo/handle.hpp"
#include "remo/error.hpp"
#include "remo/protocol.hpp"
#include "remo/runtime.hpp"

#include <ostream>

namespace remo {

namespace {

template <typename Resp>
const Resp &expect(const Message &m, std::string_view request) {
  if (const Resp *r = std::get_if<Resp>(&m))
    return *r;
  fail(ErrorCode::ProtocolError, "unexpected " + std::string(message_name(m)) +
                                     " in reply to " + std::string(request));
}

} // namespace

RemoteHandle::RemoteHandle(std::shared_ptr<Runtime> rt, RemoteRefDescriptor d,
                           LocalRef local)
    : rt_(std::move(rt)), desc_(std::move(d)), local_(std::move(local)) {}

RemoteHandle RemoteHandle::map(const ShippedFn &f) const {
  if (local_)
    return rt_->handle(rt_->host().handle_map(desc_.id, f));
  auto resp = rt_->request(desc_.endpoint, msg::Map{desc_.id, f});
  return rt_->handle(expect<msg::RespDescriptor>(resp, "Map").ref);
}

RemoteHandle RemoteHandle::flat_map(const ShippedFn &f) const {
  if (local_)
    return rt_->handle(rt_->host().handle_flatmap(desc_.id, f));
  auto resp = rt_->request(desc_.endpoint, msg::FlatMap{desc_.id, f});
  return rt_->handle(expect<msg::RespDescriptor>(resp, "FlatMap").ref);
}

Value RemoteHandle::get() const {
  if (local_)
    return local_->value();
  return decode_value(get_payload());
}

ValuePayload RemoteHandle::get_payload() const {
  if (local_)
    return encode_value(local_->value());
  auto resp = rt_->request(desc_.endpoint, msg::Get{desc_.id});
  return expect<msg::RespValue>(resp, "Get").payload;
}

ObjectStats RemoteHandle::stats() const {
  if (local_)
    return ObjectStats{local_->serialization_count(), local_->get_count()};
  return rt_->stats(desc_);
}

std::string to_string(const RemoteHandle &h) { return to_string(h.descriptor()); }

std::ostream &operator<<(std::ostream &os, const RemoteHandle &h) {
  return os << h.descriptor();
}

} // namespace remo
