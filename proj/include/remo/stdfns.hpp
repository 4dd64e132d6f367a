#pragma once

#include "remo/shipping.hpp"
#include "remo/stage.hpp"

#include <cstdint>
#include <memory>

namespace remo {

/// Registers the standard stage set:
///
///   map position      identity, to_text, inc, mul<k>, add<k>, new_token,
///                     equals<a>, fail
///   flatMap position  export, export_capture<v>, pass_through<ref>,
///                     mk_pair_equals<ref>, lift<pipeline blob>,
///                     kleisli<stage blob, stage blob>
///
/// Integer arithmetic wraps modulo 2^64.
void register_standard_functions(FnRegistry &reg);

/// A registry holding exactly the standard set.
std::shared_ptr<const FnRegistry> standard_registry();

/// Unvalidated stage builders for the standard set.
namespace stages {
Stage identity();
Stage to_text();
Stage inc();
Stage mul(std::int64_t k);
Stage add(std::int64_t k);
Stage new_token();
/// Compares the subject with `a`.
Stage equals(Value a);
Stage fail();
/// x -> apply(x) at the executing host.
Stage export_self();
/// _ -> apply(v) at the executing host.
Stage export_capture(Value v);
/// _ -> ref, unchanged.
Stage pass_through(const RemoteRefDescriptor &ref);
/// a -> rb.map(b -> a == b): the two-object composition.
Stage mk_pair_equals(const RemoteRefDescriptor &rb);
/// x -> apply(p(x)) for a map-position pipeline p.
Stage lift(const ShippedFn &p);
/// x -> flat_map(f(x), g) for flatMap-position stages f and g.
Stage kleisli(const Stage &f, const Stage &g);
} // namespace stages

} // namespace remo
