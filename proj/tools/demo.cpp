#include "demo.hpp"

#include "remo/deferred.hpp"
#include "remo/error.hpp"
#include "remo/runtime.hpp"
#include "remo/stdfns.hpp"

#include <functional>
#include <ostream>
#include <random>

namespace remo::demo {

namespace {

struct Cluster {
  std::shared_ptr<Runtime> server;
  std::shared_ptr<Runtime> client;
};

class Setup {
public:
  explicit Setup(const Options &opts) : opts_(opts), rng_(opts.seed) {}

  Cluster make(bool locality) {
    RuntimeOptions server_opts{locality, rng_()};
    RuntimeOptions client_opts{locality, rng_()};
    auto reg = standard_registry();
    if (opts_.distributed)
      return {Runtime::tcp("127.0.0.1", 0, reg, server_opts),
              Runtime::tcp("127.0.0.1", 0, reg, client_opts)};
    auto net = std::make_shared<LoopbackNetwork>();
    return {Runtime::loopback(net, reg, server_opts),
            Runtime::loopback(net, reg, client_opts)};
  }

private:
  Options opts_;
  std::mt19937_64 rng_;
};

void check(Record &r, bool cond, const std::string &what) {
  if (!cond && r.ok) {
    r.ok = false;
    r.failure = what;
  }
}

Record session(Setup &setup, std::ostream &out) {
  Record r{"session", "str.get", "", true, {}};
  auto c = setup.make(true);
  c.server->rebind("obj", c.server->apply(c.server->new_token()));
  out << "obj bound in registry\n";

  auto ra = c.client->lookup(c.server->endpoint(), "obj");
  auto str = ra.map(ShippedFn(stages::to_text()));
  std::string shown = to_string(str);
  out << "str = " << shown << "\n";
  Value v = str.get();
  r.value = to_text(v);
  out << "str.get = " << r.value << "\n";

  check(r, shown.rfind("remote[endpoint=" + c.server->endpoint().str() + " id=", 0) == 0,
        "handle rendering lacks endpoint and id");
  check(r, shown.find("token#") == std::string::npos, "handle rendering shows the value");
  check(r, v == Value::text("token#1"), "expected token#1, got " + r.value);
  return r;
}

Record pair(Setup &setup, std::ostream &out) {
  Record r{"pair", "rc.get", "", true, {}};
  auto c = setup.make(true);
  c.server->rebind("a", c.server->apply(c.server->new_token()));
  c.server->rebind("b", c.server->apply(c.server->new_token()));
  auto ra = c.client->lookup(c.server->endpoint(), "a");
  auto rb = c.client->lookup(c.server->endpoint(), "b");
  auto rc = ra.flat_map(ShippedFn(stages::mk_pair_equals(rb.descriptor())));
  Value v = rc.get();
  r.value = to_text(v);
  out << "rc.get = " << r.value << "\n";
  check(r, v == Value::boolean(false), "expected false, got " + r.value);
  return r;
}

std::uint64_t locality_run(Setup &setup, bool locality) {
  auto c = setup.make(locality);
  auto a = c.server->apply(Value::integer(5));
  auto b = c.server->apply(Value::integer(7));
  auto ra = c.client->handle(a.descriptor());
  auto rb = c.client->handle(b.descriptor());
  auto rc = ra.flat_map(ShippedFn(stages::mk_pair_equals(rb.descriptor())));
  if (rc.get() != Value::boolean(false))
    throw std::runtime_error("composition did not force to false");
  return c.client->stats(ra.descriptor()).serialization_count;
}

Record locality(Setup &setup, std::ostream &out) {
  Record r{"locality", "ra.serialization_count", "", true, {}};
  std::uint64_t on = locality_run(setup, true);
  std::uint64_t off = locality_run(setup, false);
  r.value = "on=" + std::to_string(on) + ",off=" + std::to_string(off);
  out << "ra serialization count, locality replacement on:  " << on << "\n"
      << "ra serialization count, locality replacement off: " << off << "\n";
  check(r, on == 0, "locality on should not serialize ra");
  check(r, off >= 1, "locality off should serialize ra");
  return r;
}

Record deferred(Setup &setup, std::ostream &out) {
  constexpr int n = 5;
  Record r{"deferred", "frames", "", true, {}};
  auto c = setup.make(true);
  auto h = c.client->export_to(c.server->endpoint(), Value::integer(1));
  auto &t = c.client->transport();

  auto d = Deferred::wrap(h);
  for (int i = 0; i < n; ++i)
    d = d.map(stages::mul(2));
  auto before = t.request_frames();
  Value lazy = d.get();
  auto deferred_frames = t.request_frames() - before;

  before = t.request_frames();
  auto e = h;
  for (const auto &s : d.pipeline().stages)
    e = e.map(ShippedFn(s));
  auto map_frames = t.request_frames() - before;
  Value eager = e.get();
  auto get_frames = t.request_frames() - before - map_frames;

  r.value = "deferred=" + std::to_string(deferred_frames) +
            ",eager_map=" + std::to_string(map_frames) +
            ",eager_get=" + std::to_string(get_frames);
  out << "deferred frames for n=" << n << ": " << deferred_frames << "\n"
      << "eager frames for n=" << n << ": " << map_frames << " map + " << get_frames
      << " get\n";
  check(r, deferred_frames == 2, "deferred should use 2 frames");
  check(r, map_frames == n + 1 && get_frames == 1, "eager frame count");
  check(r, lazy == eager && lazy == Value::integer(1 << n), "results differ");
  return r;
}

} // namespace

std::vector<Record> run_all(const Options &opts, std::ostream &human) {
  Setup setup(opts);
  using Experiment = std::function<Record(Setup &, std::ostream &)>;
  const std::pair<const char *, Experiment> all[] = {
      {"session", session}, {"pair", pair}, {"locality", locality}, {"deferred", deferred}};

  std::vector<Record> out;
  for (const auto &[name, run] : all) {
    if (!opts.records)
      human << "== " << name << "\n";
    try {
      out.push_back(run(setup, human));
    } catch (const std::exception &e) {
      Record r{name, "error", "", false, e.what()};
      out.push_back(std::move(r));
    }
  }
  return out;
}

} // namespace remo::demo
