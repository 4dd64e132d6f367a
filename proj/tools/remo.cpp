#include "demo.hpp"

#include "remo/error.hpp"
#include "remo/runtime.hpp"
#include "remo/stdfns.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <csignal>
#include <iostream>
#include <optional>
#include <sstream>

using namespace remo;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitTransport = 10;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode c) { return 2 + static_cast<int>(c); }

std::string default_endpoint() {
  return "127.0.0.1:" + std::to_string(kDefaultPort);
}

EndpointAddr parse_endpoint(const std::string &s) {
  auto e = EndpointAddr::try_parse(s);
  if (!e)
    throw UsageError("expected host:port, got '" + s + "'");
  return *e;
}

void check_name(const std::string &name) {
  if (name.empty() || name.find('/') != std::string::npos)
    throw UsageError("invalid name '" + name + "'");
}

/// "name=int:N", "name=text:S" or "name=token".
std::pair<std::string, std::function<Value(Runtime &)>>
parse_binding(const std::string &text) {
  auto eq = text.find('=');
  if (eq == std::string::npos)
    throw UsageError("binding '" + text + "' is not name=constructor");
  std::string name = text.substr(0, eq), ctor = text.substr(eq + 1);
  check_name(name);
  if (ctor == "token")
    return {name, [](Runtime &rt) { return rt.new_token(); }};
  if (ctor.rfind("text:", 0) == 0) {
    Value v = Value::text(ctor.substr(5));
    return {name, [v](Runtime &) { return v; }};
  }
  if (ctor.rfind("int:", 0) == 0) {
    std::int64_t n = 0;
    std::string digits = ctor.substr(4);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty())
      throw UsageError("bad integer in '" + text + "'");
    return {name, [n](Runtime &) { return Value::integer(n); }};
  }
  throw UsageError("unknown constructor in '" + text + "' (use int:N, text:S or token)");
}

std::optional<std::uint64_t> parse_incarnation(const std::string &hex) {
  if (hex.empty())
    return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
  if (ec != std::errc{} || p != hex.data() + hex.size())
    throw UsageError("bad incarnation '" + hex + "'");
  return v;
}

/// Like parse_endpoint, but port 0 (pick an ephemeral port) is allowed.
std::pair<std::string, std::uint16_t> parse_listen(const std::string &s) {
  auto colon = s.rfind(':');
  if (colon != std::string::npos && s.substr(colon + 1) == "0")
    return {parse_endpoint(s.substr(0, colon) + ":1").host(), 0};
  EndpointAddr e = parse_endpoint(s);
  return {e.host(), e.port()};
}

int run_serve(const std::string &listen, const std::vector<std::string> &binds,
              bool no_locality, const std::string &incarnation) {
  auto [host, port] = parse_listen(listen);
  std::vector<std::pair<std::string, std::function<Value(Runtime &)>>> ctors;
  for (const auto &b : binds)
    ctors.push_back(parse_binding(b));

  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto rt = Runtime::tcp(host, port, standard_registry(),
                         RuntimeOptions{!no_locality, parse_incarnation(incarnation)});
  std::cout << "listening on " << rt->endpoint().str() << std::endl;
  for (auto &[name, make] : ctors) {
    rt->rebind(name, rt->apply(make(*rt)));
    std::cout << name << " bound in registry" << std::endl;
  }

  int sig = 0;
  sigwait(&sigs, &sig);
  rt->shutdown();
  return 0;
}

/// A handle rendering, "host:port/name", or a bare name at the server.
RemoteHandle resolve_target(Runtime &rt, const EndpointAddr &server,
                            const std::string &target) {
  if (auto d = parse_descriptor(target))
    return rt.handle(*d);
  auto slash = target.rfind('/');
  if (slash != std::string::npos) {
    std::string name = target.substr(slash + 1);
    check_name(name);
    return rt.lookup(parse_endpoint(target.substr(0, slash)), name);
  }
  check_name(target);
  return rt.lookup(server, target);
}

/// int:N, text:S, bool:true|false, or ref:<target>.
Capture parse_capture(Runtime &rt, const EndpointAddr &server, const std::string &s) {
  if (s.rfind("ref:", 0) == 0)
    return Capture::remote_ref(resolve_target(rt, server, s.substr(4)).descriptor());
  if (s == "bool:true" || s == "bool:false")
    return Capture::inline_value(Value::boolean(s == "bool:true"));
  try {
    auto [name, make] = parse_binding("capture=" + s);
    return Capture::inline_value(make(rt));
  } catch (const UsageError &) {
    throw UsageError("bad capture '" + s + "' (use int:N, text:S, bool:B or ref:TARGET)");
  }
}

struct ClientArgs {
  std::string connect = default_endpoint();
  std::string target;
  std::string fn;
  std::vector<std::string> captures;
};

int run_client(const std::string &command, const ClientArgs &args) {
  EndpointAddr server = parse_endpoint(args.connect);
  auto rt = Runtime::tcp("127.0.0.1", 0, standard_registry());

  if (command == "lookup") {
    std::cout << resolve_target(*rt, server, args.target) << "\n";
  } else if (command == "map" || command == "flatmap") {
    auto h = resolve_target(*rt, server, args.target);
    std::vector<Capture> caps;
    for (const auto &c : args.captures)
      caps.push_back(parse_capture(*rt, server, c));
    ShippedFn f(Stage(args.fn, std::move(caps)));
    std::cout << (command == "map" ? h.map(f) : h.flat_map(f)) << "\n";
  } else if (command == "get") {
    std::cout << to_text(resolve_target(*rt, server, args.target).get()) << "\n";
  } else if (command == "stats") {
    auto h = resolve_target(*rt, server, args.target);
    auto s = rt->stats(h.descriptor());
    std::cout << "serialization_count=" << s.serialization_count
              << " get_count=" << s.get_count << "\n";
  }
  rt->shutdown();
  return 0;
}

int run_demo(const demo::Options &opts) {
  std::ostringstream discard;
  auto records = demo::run_all(opts, opts.records ? discard : std::cout);
  int status = 0;
  for (const auto &r : records) {
    if (opts.records)
      std::cout << r.experiment << '\t' << r.key << '\t' << r.value << "\n";
    if (!r.ok) {
      std::cerr << "experiment " << r.experiment << " failed: " << r.failure << "\n";
      status = 1;
    }
  }
  return status;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Remote values: host daemon, client and demo"};
  app.require_subcommand(1);

  std::string listen = default_endpoint(), incarnation;
  std::vector<std::string> binds;
  bool no_locality = false;
  auto *serve = app.add_subcommand("serve", "Run a host until SIGINT or SIGTERM");
  serve->add_option("--listen", listen, "host:port to listen on")->capture_default_str();
  serve->add_option("--bind", binds, "name=int:N | name=text:S | name=token");
  serve->add_flag("--no-locality", no_locality, "Disable locality replacement");
  serve->add_option("--incarnation", incarnation, "Fixed incarnation (hex)");

  ClientArgs cargs;
  std::string command;
  auto *client = app.add_subcommand("client", "Run one request against a host");
  client->add_option("--connect", cargs.connect, "host:port of the host")
      ->capture_default_str();
  client->require_subcommand(1);
  auto add_cmd = [&](const char *name, const char *help) {
    auto *sub = client->add_subcommand(name, help);
    sub->add_option("target", cargs.target, "name, host:port/name or handle rendering")
        ->required();
    sub->callback([&command, name] { command = name; });
    return sub;
  };
  add_cmd("lookup", "Print the handle bound to a name");
  add_cmd("get", "Force a value and print it");
  add_cmd("stats", "Print a value's counters");
  for (const char *name : {"map", "flatmap"}) {
    auto *sub = add_cmd(name, "Ship a registered function and print the result handle");
    sub->add_option("fn", cargs.fn, "registered function id")->required();
    sub->add_option("captures", cargs.captures, "int:N | text:S | bool:B | ref:TARGET");
  }

  demo::Options dopts;
  std::string format = "human";
  auto *demo_cmd = app.add_subcommand("demo", "Run the scripted experiments");
  demo_cmd->add_flag("--distributed", dopts.distributed, "Use TCP hosts");
  demo_cmd->add_option("--seed", dopts.seed, "Seed for incarnations")->capture_default_str();
  demo_cmd->add_option("--format", format, "human or records")
      ->check(CLI::IsMember({"human", "records"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*serve)
      return run_serve(listen, binds, no_locality, incarnation);
    if (*client)
      return run_client(command, cargs);
    dopts.records = format == "records";
    return run_demo(dopts);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RemoteError &e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  } catch (const TransportError &e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}
