#include "remo/deferred.hpp"

namespace remo {

Deferred Deferred::wrap(RemoteHandle remote) {
  return Deferred(std::move(remote), ShippedFn(Stage("identity")));
}

Deferred Deferred::map(Stage s) const {
  return Deferred(remote_, compose(pipeline_, std::move(s)));
}

Value Deferred::get() const { return remote_.map(pipeline_).get(); }

} // namespace remo
