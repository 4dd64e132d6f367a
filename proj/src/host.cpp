#include "remo/host.hpp"
#include "remo/error.hpp"
#include "remo/runtime.hpp"

namespace remo {

Host::Host(Runtime &owner, HostTable &table, const FnRegistry &registry)
    : owner_(owner), table_(table), registry_(registry) {}

LocalRef Host::require(const ObjectId &id) const {
  LocalRef entry = table_.find(id);
  if (!entry)
    fail(ErrorCode::UnknownObject, to_string(id));
  return entry;
}

RemoteRefDescriptor Host::handle_map(const ObjectId &target,
                                     const ShippedFn &f) {
  LocalRef subject = require(target);
  FnResult r = evaluate(registry_, f, Subject{subject->value(), subject}, owner_);
  if (!r.is_plain())
    fail(ErrorCode::ContractViolation,
         "map function '" + f.stages.back().fn_id +
             "' returned a remote reference");
  return table_.export_value(r.plain_value());
}

RemoteRefDescriptor Host::handle_flatmap(const ObjectId &target,
                                         const ShippedFn &f) {
  LocalRef subject = require(target);
  FnResult r = evaluate(registry_, f, Subject{subject->value(), subject}, owner_);
  if (!r.is_remote())
    fail(ErrorCode::ContractViolation,
         "flatMap function '" + f.stages.back().fn_id +
             "' returned a plain value");
  return r.remote_ref();
}

ValuePayload Host::handle_get(const ObjectId &target) {
  LocalRef entry = require(target);
  ValuePayload p = encode_value(entry->value());
  entry->record_serialization();
  entry->record_get();
  return p;
}

void Host::handle_rebind(const std::string &name, const ObjectId &id) {
  require(id);
  std::lock_guard lock(names_mu_);
  names_.insert_or_assign(name, id);
}

RemoteRefDescriptor Host::handle_lookup(std::string_view name) const {
  std::lock_guard lock(names_mu_);
  auto it = names_.find(name);
  if (it == names_.end())
    fail(ErrorCode::NotFound, std::string(name));
  return RemoteRefDescriptor{table_.self_endpoint(), it->second};
}

RemoteRefDescriptor Host::handle_export(const ValuePayload &payload) {
  return table_.export_value(decode_value(payload));
}

ObjectStats Host::handle_stats(const ObjectId &target) const {
  LocalRef entry = require(target);
  return ObjectStats{entry->serialization_count(), entry->get_count()};
}

namespace {

struct Dispatcher {
  Host &host;

  Message operator()(const msg::Rebind &m) {
    host.handle_rebind(m.name, m.ref.id);
    return msg::RespAck{};
  }
  Message operator()(const msg::Lookup &m) {
    return msg::RespDescriptor{host.handle_lookup(m.name)};
  }
  Message operator()(const msg::Map &m) {
    return msg::RespDescriptor{host.handle_map(m.target, m.fn)};
  }
  Message operator()(const msg::FlatMap &m) {
    return msg::RespDescriptor{host.handle_flatmap(m.target, m.fn)};
  }
  Message operator()(const msg::Get &m) {
    return msg::RespValue{host.handle_get(m.target)};
  }
  Message operator()(const msg::Export &m) {
    return msg::RespDescriptor{host.handle_export(m.payload)};
  }
  Message operator()(const msg::Stats &m) {
    auto s = host.handle_stats(m.target);
    return msg::RespStats{s.serialization_count, s.get_count};
  }
  template <typename Resp> Message operator()(const Resp &m) {
    return msg::RespError{ErrorCode::ProtocolError,
                          "response variant " +
                              std::string(message_name(Message{m})) +
                              " sent as a request"};
  }
};

} // namespace

Message Host::dispatch(const Message &request) {
  try {
    return std::visit(Dispatcher{*this}, request);
  } catch (const RemoteError &e) {
    return msg::RespError{e.code(), e.detail()};
  } catch (const TransportError &e) {
    return msg::RespError{ErrorCode::ExecutionError,
                          std::string("nested call failed: ") + e.what()};
  } catch (const std::exception &e) {
    return msg::RespError{ErrorCode::ExecutionError, e.what()};
  }
}

FrameReply Host::handle_frame(const Blob &request_frame) {
  Message request;
  try {
    auto frame = decode_message(request_frame);
    if (!frame || frame->consumed != request_frame.size())
      fail(ErrorCode::ProtocolError, "request is not exactly one frame");
    request = std::move(frame->message);
  } catch (const RemoteError &e) {
    return FrameReply{
        encode_message(msg::RespError{ErrorCode::ProtocolError, e.detail()}),
        false};
  }
  Message response = dispatch(request);
  try {
    return FrameReply{encode_message(response), true};
  } catch (const RemoteError &e) {
    return FrameReply{encode_message(msg::RespError{e.code(), e.detail()}),
                      true};
  }
}

} // namespace remo
