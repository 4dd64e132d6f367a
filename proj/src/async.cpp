#include "remo/async.hpp"

namespace remo {

std::shared_ptr<Executor> Executor::shared() {
  static auto exec = std::make_shared<Executor>(4);
  return exec;
}

Async Async::wrap(RemoteHandle h, std::shared_ptr<Executor> exec) {
  return Async(Completion<RemoteHandle>::ready(std::move(h)), std::move(exec));
}

Async Async::wrap(Completion<RemoteHandle> pending,
                  std::shared_ptr<Executor> exec) {
  return Async(std::move(pending), std::move(exec));
}

template <typename R, typename F> Completion<R> Async::then(F op) const {
  Completion<R> out;
  value_.on_complete([src = value_, out, op = std::move(op), exec = exec_]() mutable {
    exec->post([src, out, op]() mutable {
      try {
        out.set_value(op(src.wait()));
      } catch (...) {
        out.set_error(std::current_exception());
      }
    });
  });
  return out;
}

Async Async::map(const Stage &s) const {
  return Async(then<RemoteHandle>([s](const RemoteHandle &h) { return h.map(s); }),
               exec_);
}

Async Async::flat_map(const Stage &s) const {
  return Async(
      then<RemoteHandle>([s](const RemoteHandle &h) { return h.flat_map(s); }),
      exec_);
}

Completion<Value> Async::get() const {
  return then<Value>([](const RemoteHandle &h) { return h.get(); });
}

RemoteHandle Async::force(std::optional<std::chrono::milliseconds> timeout) const {
  return value_.wait(timeout);
}

} // namespace remo
