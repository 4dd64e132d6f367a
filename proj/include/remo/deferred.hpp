#pragma once

#include "remo/handle.hpp"
#include "remo/stage.hpp"

#include <concepts>
#include <utility>

namespace remo {

/// Accumulates map stages client-side and ships them in a single Map at
/// get(). The pipeline starts as [identity], so the host must register
/// "identity".
class Deferred {
public:
  static Deferred wrap(RemoteHandle remote);

  /// No remote call; the stage is validated when get() ships it.
  Deferred map(Stage s) const;

  /// One Map with the whole pipeline, then one Get.
  Value get() const;

  /// Forces now, then applies `f` locally to the forced value.
  template <typename F>
    requires std::invocable<F, Value>
  auto flat_map(F &&f) const {
    return std::forward<F>(f)(get());
  }

  const RemoteHandle &remote() const { return remote_; }
  const ShippedFn &pipeline() const { return pipeline_; }

private:
  Deferred(RemoteHandle remote, ShippedFn pipeline)
      : remote_(std::move(remote)), pipeline_(std::move(pipeline)) {}

  RemoteHandle remote_;
  ShippedFn pipeline_;
};

} // namespace remo
