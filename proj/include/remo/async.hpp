#pragma once

#include "remo/handle.hpp"
#include "remo/stage.hpp"

#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>

#include <chrono>
#include <condition_variable>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace remo {

/// Raised by a bounded force that ran out of time.
class ForceTimeout : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Single-assignment result shared by every copy. Continuations registered
/// with on_complete run exactly once, on the completing thread (or inline
/// if already complete).
template <typename T> class Completion {
public:
  Completion() : s_(std::make_shared<State>()) {}

  static Completion ready(T v) {
    Completion c;
    c.set_value(std::move(v));
    return c;
  }

  void set_value(T v) {
    finish([&](State &s) { s.value.emplace(std::move(v)); });
  }
  void set_error(std::exception_ptr e) {
    finish([&](State &s) { s.error = std::move(e); });
  }

  bool is_ready() const {
    std::lock_guard lock(s_->mu);
    return s_->done;
  }

  void on_complete(std::function<void()> k) const {
    {
      std::lock_guard lock(s_->mu);
      if (!s_->done) {
        s_->continuations.push_back(std::move(k));
        return;
      }
    }
    k();
  }

  /// Blocks until complete; rethrows a stored error. Unbounded when
  /// `timeout` is empty.
  const T &wait(std::optional<std::chrono::milliseconds> timeout = {}) const {
    std::unique_lock lock(s_->mu);
    if (timeout) {
      if (!s_->cv.wait_for(lock, *timeout, [&] { return s_->done; }))
        throw ForceTimeout("force timed out after " +
                           std::to_string(timeout->count()) + " ms");
    } else {
      s_->cv.wait(lock, [&] { return s_->done; });
    }
    if (s_->error)
      std::rethrow_exception(s_->error);
    return *s_->value;
  }

private:
  struct State {
    mutable std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    std::optional<T> value;
    std::exception_ptr error;
    std::vector<std::function<void()>> continuations;
  };

  template <typename F> void finish(F &&store) {
    std::vector<std::function<void()>> ks;
    {
      std::lock_guard lock(s_->mu);
      if (s_->done)
        throw std::logic_error("completion already set");
      store(*s_);
      s_->done = true;
      ks.swap(s_->continuations);
    }
    s_->cv.notify_all();
    for (auto &k : ks)
      k();
  }

  std::shared_ptr<State> s_;
};

/// Bounded worker pool for background composition.
class Executor {
public:
  explicit Executor(std::size_t threads = 4) : pool_(threads) {}
  ~Executor() { pool_.join(); }

  void post(std::function<void()> task) {
    boost::asio::post(pool_, std::move(task));
  }

  /// Process-wide pool used when none is given.
  static std::shared_ptr<Executor> shared();

private:
  boost::asio::thread_pool pool_;
};

/// Non-blocking wrapper over a RemoteHandle that may not exist yet.
///
/// map/flat_map/get return at once; the underlying blocking call runs on the
/// executor once its input is available. Remote errors surface only when
/// the result is forced.
class Async {
public:
  static Async wrap(RemoteHandle h, std::shared_ptr<Executor> exec = Executor::shared());
  static Async wrap(Completion<RemoteHandle> pending,
                    std::shared_ptr<Executor> exec = Executor::shared());

  Async map(const Stage &s) const;
  Async flat_map(const Stage &s) const;
  /// Completion of the forced value.
  Completion<Value> get() const;

  /// Waits for the handle; rethrows any error from the chain.
  RemoteHandle force(std::optional<std::chrono::milliseconds> timeout = {}) const;
  const Completion<RemoteHandle> &pending() const { return value_; }

private:
  Async(Completion<RemoteHandle> v, std::shared_ptr<Executor> exec)
      : value_(std::move(v)), exec_(std::move(exec)) {}

  template <typename R, typename F> Completion<R> then(F op) const;

  Completion<RemoteHandle> value_;
  std::shared_ptr<Executor> exec_;
};

} // namespace remo
