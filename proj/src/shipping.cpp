#include "remo/shipping.hpp"
#include "remo/error.hpp"
#include "remo/runtime.hpp"

#include <stdexcept>

namespace remo {

bool operator==(const Capture &a, const Capture &b) {
  if (a.is_inline() != b.is_inline())
    return false;
  if (a.is_inline())
    return a.as_inline().value == b.as_inline().value;
  return a.as_ref().descriptor == b.as_ref().descriptor;
}

ShippedFn compose(const ShippedFn &p, Stage s) {
  ShippedFn out = p;
  out.stages.push_back(std::move(s));
  return out;
}

ShippedFn concat(const ShippedFn &first, const ShippedFn &second) {
  ShippedFn out = first;
  out.stages.insert(out.stages.end(), second.stages.begin(),
                    second.stages.end());
  return out;
}

const Value &Arg::value() const {
  if (const Held *h = std::get_if<Held>(&v_))
    return h->value;
  throw std::invalid_argument("capture is a remote reference, not a value");
}

const RemoteHandle &Arg::handle() const {
  if (const RemoteHandle *h = std::get_if<RemoteHandle>(&v_))
    return *h;
  throw std::invalid_argument("capture is an inline value, not a reference");
}

Subject Arg::as_subject() const {
  const Held &h = std::get<Held>(v_);
  return Subject{h.value, h.origin};
}

Capture Arg::capture() const {
  if (const Held *h = std::get_if<Held>(&v_))
    return Capture::inline_value(h->value, h->origin);
  return Capture::remote_ref(std::get<RemoteHandle>(v_).descriptor());
}

void FnRegistry::register_fn(std::string fn_id, std::size_t arity,
                             FnBody body) {
  if (fn_id.empty())
    throw std::logic_error("function id must be non-empty");
  if (!body)
    throw std::logic_error("function '" + fn_id + "' has no body");
  auto [it, inserted] =
      entries_.emplace(std::move(fn_id), FnEntry{arity, std::move(body)});
  if (!inserted)
    throw std::logic_error("function '" + it->first + "' already registered");
}

void FnRegistry::register_unary(std::string fn_id,
                                std::function<Value(const Value &)> body) {
  register_fn(std::move(fn_id), 0,
              [body = std::move(body)](const Subject &s, std::span<const Arg>,
                                       Runtime &) {
                return FnResult::plain(body(s.value));
              });
}

const FnEntry *FnRegistry::find(std::string_view fn_id) const {
  auto it = entries_.find(fn_id);
  return it == entries_.end() ? nullptr : &it->second;
}

Stage FnRegistry::stage(std::string fn_id, std::vector<Capture> captures) const {
  const FnEntry *e = find(fn_id);
  if (!e)
    fail(ErrorCode::UnknownFunction, fn_id);
  if (e->arity != captures.size())
    fail(ErrorCode::ContractViolation,
         "function '" + fn_id + "' takes " + std::to_string(e->arity) +
             " captures, given " + std::to_string(captures.size()));
  return Stage(std::move(fn_id), std::move(captures));
}

std::vector<Arg> resolve_captures(std::span<const Capture> captures,
                                  Runtime &rt) {
  std::vector<Arg> out;
  out.reserve(captures.size());
  for (const auto &c : captures) {
    if (c.is_inline())
      out.push_back(Arg::of_value(c.as_inline().value, c.as_inline().origin));
    else
      out.push_back(Arg::of_handle(rt.handle(c.as_ref().descriptor)));
  }
  return out;
}

namespace {

FnResult run_stage(const FnRegistry &reg, const Stage &stage,
                   const Subject &subject, Runtime &rt) {
  const FnEntry *e = reg.find(stage.fn_id);
  if (!e)
    fail(ErrorCode::UnknownFunction, stage.fn_id);
  if (e->arity != stage.captures.size())
    fail(ErrorCode::ContractViolation,
         "function '" + stage.fn_id + "' takes " + std::to_string(e->arity) +
             " captures, shipped with " +
             std::to_string(stage.captures.size()));
  auto args = resolve_captures(stage.captures, rt);
  try {
    return e->body(subject, args, rt);
  } catch (const RemoteError &) {
    throw;
  } catch (const std::exception &ex) {
    fail(ErrorCode::ExecutionError, stage.fn_id + ": " + ex.what());
  } catch (...) {
    fail(ErrorCode::ExecutionError, stage.fn_id + ": unknown exception");
  }
}

} // namespace

FnResult evaluate(const FnRegistry &reg, const ShippedFn &f,
                  const Subject &subject, Runtime &rt) {
  if (f.empty())
    fail(ErrorCode::ContractViolation, "shipped function without stages");
  Value current;
  const Value *input = &subject.value;
  LocalRef origin = subject.origin;
  for (std::size_t i = 0;; ++i) {
    FnResult r = run_stage(reg, f.stages[i], Subject{*input, origin}, rt);
    if (i + 1 == f.size())
      return r;
    if (!r.is_plain())
      fail(ErrorCode::ContractViolation,
           "stage " + std::to_string(i) + " ('" + f.stages[i].fn_id +
               "') returned a remote reference before the last stage");
    current = r.plain_value();
    input = &current;
    origin = nullptr;
  }
}

} // namespace remo
