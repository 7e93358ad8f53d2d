#include "fcool/serialization.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <variant>

#include "fcool/error.hpp"

namespace fcool {

using nlohmann::json;

namespace {

const char* bound_name(BoundMode m) { return m == BoundMode::Unbounded ? "unbounded" : "symmetric_unit"; }

BoundMode parse_bound(const std::string& s) {
  if (s == "unbounded") return BoundMode::Unbounded;
  if (s == "symmetric_unit") return BoundMode::SymmetricUnit;
  fail(ErrorCode::Parse, "unknown bound_mode '" + s + "'");
}

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) fail(ErrorCode::Parse, std::string("missing numeric field '") + key + "'");
  return it->get<double>();
}

}  // namespace

std::string write_document(const CoolingProblem& problem, const Protocol& protocol) {
  json doc;
  doc["gamma"] = problem.gamma();
  doc["horizon"] = problem.horizon() ? json(*problem.horizon()) : json(nullptr);
  doc["bound_mode"] = bound_name(problem.bound_mode());
  json segs = json::array();
  for (const auto& seg : protocol.segments()) {
    if (const auto* i = std::get_if<Impulse>(&seg))
      segs.push_back({{"type", "impulse"}, {"weight", i->weight}});
    else if (const auto* b = std::get_if<Bang>(&seg))
      segs.push_back({{"type", "bang"}, {"u", b->u}, {"duration", b->duration}});
    else
      segs.push_back({{"type", "singular"}, {"duration", std::get<Singular>(seg).duration}});
  }
  doc["segments"] = std::move(segs);
  return doc.dump(2) + "\n";
}

Document parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed protocol document: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Parse, "protocol document must be a JSON object");
  try {
    const double gamma = number_field(doc, "gamma");
    std::optional<double> horizon;
    if (auto it = doc.find("horizon"); it != doc.end() && !it->is_null()) {
      if (!it->is_number()) fail(ErrorCode::Parse, "'horizon' must be a number or null");
      horizon = it->get<double>();
    }
    BoundMode mode = BoundMode::Unbounded;
    if (auto it = doc.find("bound_mode"); it != doc.end()) {
      if (!it->is_string()) fail(ErrorCode::Parse, "'bound_mode' must be a string");
      mode = parse_bound(it->get<std::string>());
    }
    const auto segs = doc.find("segments");
    if (segs == doc.end() || !segs->is_array()) fail(ErrorCode::Parse, "missing 'segments' array");
    Protocol protocol;
    for (const auto& s : *segs) {
      if (!s.is_object() || !s.contains("type") || !s["type"].is_string())
        fail(ErrorCode::Parse, "segment without a 'type'");
      const auto type = s["type"].get<std::string>();
      if (type == "impulse")
        protocol.impulse(number_field(s, "weight"));
      else if (type == "bang")
        protocol.bang(number_field(s, "u"), number_field(s, "duration"));
      else if (type == "singular")
        protocol.singular(number_field(s, "duration"));
      else
        fail(ErrorCode::Parse, "unknown segment type '" + type + "'");
    }
    CoolingProblem problem(gamma, horizon, mode);
    protocol.check_matches(problem);
    return {problem, std::move(protocol)};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Parse, std::string("invalid protocol document: ") + e.what());
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,x1,x2,u,running_J\n";
  out.reserve(out.size() + traj.samples.size() * 96);
  for (const auto& s : traj.samples) {
    out += format_double(s.t);
    out += ',';
    out += format_double(s.state.x1);
    out += ',';
    out += format_double(s.state.x2);
    out += ',';
    out += format_double(s.u);
    out += ',';
    out += format_double(s.running_cost);
    out += '\n';
  }
  return out;
}

}  // namespace fcool
