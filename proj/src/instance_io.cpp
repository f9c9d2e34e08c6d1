#include "amsp/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "amsp/errors.hpp"
#include "json.hpp"

namespace amsp {
namespace {

using nlohmann::json;

json bound_to_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

double bound_from_json(const json& j, double if_null) {
  return j.is_null() ? if_null : j.get<double>();
}

std::string_view sense_to_string(RowSense s) {
  switch (s) {
    case RowSense::leq:
      return "<=";
    case RowSense::eq:
      return "=";
    case RowSense::geq:
      return ">=";
  }
  return "?";
}

RowSense sense_from_string(const std::string& s) {
  if (s == "<=") return RowSense::leq;
  if (s == "=" || s == "==") return RowSense::eq;
  if (s == ">=") return RowSense::geq;
  throw ParameterError("unknown row sense '" + s + "'");
}

json var_to_json(const VarSpec& v) {
  return {{"name", v.name},
          {"lower", bound_to_json(v.lower)},
          {"upper", bound_to_json(v.upper)},
          {"integer", v.integer}};
}

void var_from_json(const json& j, VarSpec& v) {
  v.name = j.value("name", "");
  v.lower = bound_from_json(j.value("lower", json(0.0)), -kInfinity);
  v.upper = bound_from_json(j.value("upper", json(nullptr)), kInfinity);
  v.integer = j.value("integer", false);
}

json instance_to_json(const AmspInstance& inst) {
  json j;
  j["name"] = inst.name;
  j["mu"] = inst.mu;
  j["tree"] = {{"T", inst.tree.num_stages()}, {"B", inst.tree.branching()}};
  const ScenarioTree uniform = ScenarioTree::uniform(inst.tree.num_stages(), inst.tree.branching());
  bool custom = false;
  std::vector<double> probs;
  for (NodeId n = 1; n <= inst.tree.num_nodes(); ++n) {
    probs.push_back(inst.tree.probability(n));
    custom = custom || probs.back() != uniform.probability(n);
  }
  if (custom) j["tree"]["probabilities"] = probs;

  j["state_vars"] = json::array();
  for (const StateVarSpec& v : inst.state_vars) {
    json e = var_to_json(v);
    e["big_m"] = v.big_m;
    j["state_vars"].push_back(e);
  }
  j["stage_vars"] = json::array();
  for (const VarSpec& v : inst.stage_vars) j["stage_vars"].push_back(var_to_json(v));

  j["node_data"] = json::array();
  for (NodeId n = 1; n <= inst.tree.num_nodes(); ++n) {
    const NodeData& nd = inst.node(n);
    json rows = json::array();
    for (const NodeRow& r : nd.rows) {
      json x = json::array();
      json y = json::array();
      for (const NodeTerm& t : r.terms) {
        (t.block == VarBlock::state ? x : y).push_back(json::array({t.node, t.index, t.coef}));
      }
      rows.push_back({{"name", r.name},
                      {"x", x},
                      {"y", y},
                      {"sense", sense_to_string(r.sense)},
                      {"rhs", r.rhs}});
    }
    j["node_data"].push_back({{"node", n}, {"a", nd.state_cost}, {"b", nd.stage_cost}, {"rows", rows}});
  }
  j["bounds"] = json::array();
  for (const BoundOverride& b : inst.bounds) {
    j["bounds"].push_back({{"node", b.node},
                           {"block", b.block == VarBlock::state ? "x" : "y"},
                           {"index", b.index},
                           {"lower", bound_to_json(b.lower)},
                           {"upper", bound_to_json(b.upper)}});
  }
  return j;
}

AmspInstance instance_from_json(const json& j) {
  AmspInstance inst;
  inst.name = j.value("name", "");
  inst.mu = j.value("mu", 0);
  const json& tree = j.at("tree");
  const int T = tree.at("T").get<int>();
  const int B = tree.at("B").get<int>();
  inst.tree = tree.contains("probabilities")
                  ? ScenarioTree::with_probabilities(
                        T, B, tree.at("probabilities").get<std::vector<double>>())
                  : ScenarioTree::uniform(T, B);

  for (const json& e : j.at("state_vars")) {
    StateVarSpec v;
    var_from_json(e, v);
    v.big_m = e.value("big_m", v.upper);
    inst.state_vars.push_back(v);
  }
  for (const json& e : j.at("stage_vars")) {
    VarSpec v;
    var_from_json(e, v);
    inst.stage_vars.push_back(v);
  }

  inst.nodes.resize(static_cast<std::size_t>(inst.tree.num_nodes()));
  std::vector<bool> seen(inst.nodes.size(), false);
  for (const json& e : j.at("node_data")) {
    const NodeId n = e.at("node").get<NodeId>();
    if (!inst.tree.contains(n)) throw ParameterError("node_data references unknown node");
    if (seen[static_cast<std::size_t>(n - 1)]) throw ParameterError("node_data lists a node twice");
    seen[static_cast<std::size_t>(n - 1)] = true;
    NodeData& nd = inst.node(n);
    nd.state_cost = e.at("a").get<std::vector<double>>();
    nd.stage_cost = e.at("b").get<std::vector<double>>();
    for (const json& r : e.value("rows", json::array())) {
      NodeRow row;
      row.name = r.value("name", "");
      auto read_terms = [&](const char* key, VarBlock block) {
        for (const json& t : r.value(key, json::array())) {
          row.terms.push_back(
              {t.at(0).get<NodeId>(), block, t.at(1).get<int>(), t.at(2).get<double>()});
        }
      };
      read_terms("x", VarBlock::state);
      read_terms("y", VarBlock::stage);
      row.sense = sense_from_string(r.at("sense").get<std::string>());
      row.rhs = r.at("rhs").get<double>();
      nd.rows.push_back(std::move(row));
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParameterError("node_data must cover every tree node");
  }
  for (const json& e : j.value("bounds", json::array())) {
    BoundOverride b;
    b.node = e.at("node").get<NodeId>();
    const std::string block = e.at("block").get<std::string>();
    if (block != "x" && block != "y") throw ParameterError("bound block must be 'x' or 'y'");
    b.block = block == "x" ? VarBlock::state : VarBlock::stage;
    b.index = e.at("index").get<int>();
    b.lower = bound_from_json(e.value("lower", json(nullptr)), -kInfinity);
    b.upper = bound_from_json(e.value("upper", json(nullptr)), kInfinity);
    inst.bounds.push_back(b);
  }
  inst.validate();
  return inst;
}

}  // namespace

void write_instance(std::ostream& os, const AmspInstance& instance) {
  os << instance_to_json(instance).dump(1) << '\n';
}

AmspInstance read_instance(std::istream& is) {
  try {
    return instance_from_json(json::parse(is));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed instance file: ") + e.what());
  }
}

void save_instance(const std::filesystem::path& path, const AmspInstance& instance) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot write " + path.string());
  write_instance(os, instance);
}

AmspInstance load_instance(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot read " + path.string());
  return read_instance(is);
}

}  // namespace amsp
