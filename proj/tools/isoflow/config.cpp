#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "isoflow/errors.hpp"

namespace isoflow::cli {

namespace {

const std::set<std::string> kKeys = {
    "flow", "seed",   "flow_dir", "order", "tableau", "partitioned", "variant", "h",
    "T",    "stride", "solver",   "monitors", "out",  "orders",      "hs"};

template <typename T>
T typed(const Json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigurationError("config: field '" + field + "' has the wrong type");
  }
}

double positive(const Json& j, const std::string& field) {
  const double v = typed<double>(j, field);
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigurationError("config: field '" + field + "' must be positive");
  return v;
}

std::size_t count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ConfigurationError("config: field '" + field + "' must be a positive integer");
  return j.get<std::size_t>();
}

}  // namespace

std::string solver_name(SolverMethod m) {
  return m == SolverMethod::kNewton ? "newton" : "fixed-point";
}

SolverMethod parse_solver(const std::string& s) {
  if (s == "fixed-point") return SolverMethod::kFixedPoint;
  if (s == "newton") return SolverMethod::kNewton;
  throw ConfigurationError("config: field 'solver.method' must be fixed-point or newton");
}

ExperimentConfig config_from_json(const Json& root) {
  const Json& j = root.is_object() && root.contains("config") ? root.at("config") : root;
  if (!j.is_object()) throw ConfigurationError("config: expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (!kKeys.contains(key)) throw ConfigurationError("config: unknown field '" + key + "'");

  ExperimentConfig c;
  if (j.contains("flow")) {
    c.flow = j.at("flow");
    if (!c.flow.is_string() && !c.flow.is_object())
      throw ConfigurationError("config: field 'flow' must be a name or an object");
  }
  if (j.contains("seed")) c.seed = typed<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("flow_dir")) c.flow_dir = typed<std::string>(j.at("flow_dir"), "flow_dir");
  if (j.contains("order")) c.order = count(j.at("order"), "order");
  if (j.contains("tableau")) c.tableau = tableau_from_json(j.at("tableau"), "tableau");
  if (j.contains("partitioned"))
    c.partitioned = partitioned_from_json(j.at("partitioned"), "partitioned");
  if (j.contains("variant")) c.variant = typed<std::string>(j.at("variant"), "variant");
  if (j.contains("h")) c.h = positive(j.at("h"), "h");
  if (j.contains("T")) c.t_final = positive(j.at("T"), "T");
  if (j.contains("stride")) c.stride = count(j.at("stride"), "stride");
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    if (!s.is_object()) throw ConfigurationError("config: field 'solver' must be an object");
    for (const auto& [key, value] : s.items())
      if (key != "method" && key != "tol" && key != "max_iter" && key != "refine")
        throw ConfigurationError("config: unknown field 'solver." + key + "'");
    if (s.contains("method"))
      c.solver.method = parse_solver(typed<std::string>(s.at("method"), "solver.method"));
    if (s.contains("tol")) c.solver.abs_tol = positive(s.at("tol"), "solver.tol");
    if (s.contains("max_iter")) c.solver.max_iter = count(s.at("max_iter"), "solver.max_iter");
    if (s.contains("refine")) c.solver.refine = typed<bool>(s.at("refine"), "solver.refine");
  }
  if (j.contains("monitors"))
    c.monitors = typed<std::vector<std::string>>(j.at("monitors"), "monitors");
  if (j.contains("out")) c.out = typed<std::string>(j.at("out"), "out");
  if (j.contains("orders")) {
    c.orders.clear();
    const Json& o = j.at("orders");
    if (!o.is_array()) throw ConfigurationError("config: field 'orders' must be an array");
    for (const auto& v : o) c.orders.push_back(count(v, "orders"));
  }
  if (j.contains("hs")) {
    c.hs.clear();
    const Json& o = j.at("hs");
    if (!o.is_array()) throw ConfigurationError("config: field 'hs' must be an array");
    for (const auto& v : o) c.hs.push_back(positive(v, "hs"));
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["flow"] = c.flow;
  j["seed"] = c.seed;
  if (!c.flow_dir.empty()) j["flow_dir"] = c.flow_dir;
  j["order"] = c.order;
  if (c.tableau) j["tableau"] = tableau_to_json(*c.tableau);
  if (c.partitioned) j["partitioned"] = partitioned_to_json(*c.partitioned);
  j["variant"] = c.variant;
  if (c.h) j["h"] = *c.h;
  if (c.t_final) j["T"] = *c.t_final;
  j["stride"] = c.stride;
  j["solver"] = {{"method", solver_name(c.solver.method)},
                 {"tol", c.solver.abs_tol},
                 {"max_iter", c.solver.max_iter},
                 {"refine", c.solver.refine}};
  if (c.monitors) j["monitors"] = *c.monitors;
  j["out"] = c.out;
  j["orders"] = c.orders;
  if (!c.hs.empty()) j["hs"] = c.hs;
  return j;
}

FlowPreset resolve_flow(const ExperimentConfig& c) {
  if (c.flow.is_object()) return flow_from_json(c.flow, c.seed);
  const std::string name = c.flow.get<std::string>();
  for (const auto& def : load_flow_dir(c.flow_dir))
    if (def.at("name") == name) return flow_from_json(def, c.seed);
  return make_preset(name, c.seed);
}

std::vector<FlowListing> list_flows(const std::string& flow_dir) {
  std::vector<FlowListing> out;
  for (const auto& name : preset_names()) {
    const FlowPreset p = make_preset(name == "heisenberg-N" ? "heisenberg-3" : name);
    FlowListing l{name, p.dimension(), p.subspace_kind(), p.has_hamiltonian(), false};
    out.push_back(l);
  }
  for (const auto& def : load_flow_dir(flow_dir)) {
    const FlowPreset p = flow_from_json(def, kDefaultSeed);
    out.push_back({p.name, p.dimension(), p.subspace_kind(), p.has_hamiltonian(), true});
  }
  return out;
}

}  // namespace isoflow::cli
