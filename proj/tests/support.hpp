#pragma once

// Test-only helpers: an eager integer oracle that never touches the library's
// evaluation path, random generators, and small fixtures.

#include "remo/runtime.hpp"
#include "remo/stdfns.hpp"

#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <memory>
#include <random>
#include <vector>

namespace remo::testing {

/// Integer operation as the oracle sees it.
struct Op {
  enum Kind { Inc, Mul, Add } kind;
  std::int64_t k = 0;
};

inline std::int64_t oracle_apply(const Op &op, std::int64_t x) {
  auto ux = static_cast<std::uint64_t>(x);
  auto uk = static_cast<std::uint64_t>(op.k);
  switch (op.kind) {
  case Op::Inc:
    return static_cast<std::int64_t>(ux + 1u);
  case Op::Mul:
    return static_cast<std::int64_t>(ux * uk);
  case Op::Add:
    return static_cast<std::int64_t>(ux + uk);
  }
  return x;
}

inline std::int64_t oracle_run(const std::vector<Op> &ops, std::int64_t x) {
  for (const auto &op : ops)
    x = oracle_apply(op, x);
  return x;
}

inline Stage to_stage(const Op &op) {
  switch (op.kind) {
  case Op::Inc:
    return stages::inc();
  case Op::Mul:
    return stages::mul(op.k);
  case Op::Add:
    return stages::add(op.k);
  }
  return stages::identity();
}

inline ShippedFn to_pipeline(const std::vector<Op> &ops) {
  ShippedFn f;
  for (const auto &op : ops)
    f.stages.push_back(to_stage(op));
  return f;
}

inline Op random_op(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::int64_t> k(-9, 9);
  switch (kind(rng)) {
  case 0:
    return Op{Op::Inc, 0};
  case 1:
    return Op{Op::Mul, k(rng)};
  default:
    return Op{Op::Add, k(rng)};
  }
}

inline std::vector<Op> random_ops(std::mt19937_64 &rng, std::size_t min_len,
                                  std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<Op> ops(len(rng));
  for (auto &op : ops)
    op = random_op(rng);
  return ops;
}

inline std::int64_t random_int(std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
  return d(rng);
}

/// Random codec-supported value (lists homogeneous, nesting bounded).
inline Value random_value(std::mt19937_64 &rng, int depth = 0) {
  std::uniform_int_distribution<int> kind(0, depth < 3 ? 5 : 4);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  switch (kind(rng)) {
  case 0:
    return Value::integer(static_cast<std::int64_t>(rng()));
  case 1: {
    std::uniform_int_distribution<int> special(0, 9);
    switch (special(rng)) {
    case 0:
      return Value::floating(std::numeric_limits<double>::quiet_NaN());
    case 1:
      return Value::floating(-0.0);
    case 2:
      return Value::floating(std::numeric_limits<double>::infinity());
    default:
      return Value::floating(std::bit_cast<double>(rng()));
    }
  }
  case 2:
    return Value::boolean(rng() & 1);
  case 3: {
    std::string s(len(rng), '\0');
    for (auto &c : s)
      c = static_cast<char>(0x20 + rng() % 95);
    return Value::text(std::move(s));
  }
  case 4: {
    Blob b(len(rng));
    for (auto &x : b)
      x = static_cast<std::uint8_t>(rng());
    return Value::bytes(std::move(b));
  }
  default: {
    std::size_t n = len(rng) % 5;
    List items;
    if (n > 0) {
      items.push_back(random_value(rng, depth + 1));
      while (items.size() < n) {
        Value v = random_value(rng, depth + 1);
        if (v.kind() == items.front().kind())
          items.push_back(std::move(v));
      }
    }
    return Value::list(std::move(items));
  }
  }
}

/// A loopback network with a client runtime and a separate server runtime.
struct LoopbackPair {
  std::shared_ptr<LoopbackNetwork> net = std::make_shared<LoopbackNetwork>();
  std::shared_ptr<Runtime> server;
  std::shared_ptr<Runtime> client;

  explicit LoopbackPair(RuntimeOptions server_opts = {},
                        RuntimeOptions client_opts = {}) {
    auto reg = standard_registry();
    server = Runtime::loopback(net, reg, server_opts);
    client = Runtime::loopback(net, reg, client_opts);
  }
};

/// Client and server runtimes talking over real TCP sockets on 127.0.0.1.
struct TcpPair {
  std::shared_ptr<Runtime> server;
  std::shared_ptr<Runtime> client;

  explicit TcpPair(RuntimeOptions server_opts = {},
                   RuntimeOptions client_opts = {}) {
    auto reg = standard_registry();
    server = Runtime::tcp("127.0.0.1", 0, reg, server_opts);
    client = Runtime::tcp("127.0.0.1", 0, reg, client_opts);
  }
};

} // namespace remo::testing
