#include <algorithm>
#include <functional>
#include <sstream>

#include "atlplus/engine.hpp"
#include "json.hpp"

namespace atlplus {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string node_label(const ProofNode& node) {
  if (node.rule == Rule::LeafTrue) return "T";
  if (node.rule == Rule::LeafEmpty) return "{}";
  return to_string(node.clause);
}

std::string cycle_name(CycleVerdict v) { return v == CycleVerdict::Success ? "success" : "failure"; }

}  // namespace

std::string export_proof(const ProofGraph& graph, ExportFormat format) {
  if (format == ExportFormat::Json) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& node : graph.nodes) {
      nlohmann::ordered_json clause = nlohmann::ordered_json::array();
      for (const auto& a : node.clause) clause.push_back({{"state", a.state}, {"formula", a.formula.text()}});
      nlohmann::ordered_json back = nlohmann::ordered_json::array();
      nlohmann::ordered_json cycles = nlohmann::ordered_json::array();
      for (const auto& e : node.back_edges) {
        back.push_back(e.target);
        cycles.push_back(cycle_name(e.cycle));
      }
      nlohmann::ordered_json j;
      j["id"] = node.id;
      j["clause"] = clause;
      j["rule"] = to_string(node.rule);
      j["children"] = node.children;
      j["backEdgeTo"] = back;
      j["backEdgeCycle"] = cycles;
      j["verdict"] = to_string(node.verdict);
      if (node.principal) j["principal"] = to_string(*node.principal);
      if (node.subsumed_by) j["subsumedBy"] = *node.subsumed_by;
      nodes.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& node : graph.nodes) {
    out << "  n" << node.id << " [label=\"" << node.id << ": " << escape(node_label(node)) << "\\n"
        << to_string(node.rule) << " / " << to_string(node.verdict) << "\"];\n";
  }
  for (const auto& node : graph.nodes) {
    for (auto child : node.children) {
      out << "  n" << node.id << " -> n" << child << " [label=\"" << to_string(node.rule) << "\"];\n";
    }
    for (const auto& e : node.back_edges) {
      out << "  n" << node.id << " -> n" << e.target << " [label=\"" << to_string(node.rule) << " (" << cycle_name(e.cycle)
          << ")\", style=dashed, constraint=false];\n";
    }
    if (node.subsumed_by) {
      out << "  n" << node.id << " -> n" << *node.subsumed_by << " [label=\"Subsumed\", style=dotted, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::vector<std::vector<std::size_t>> proof_sccs(const ProofGraph& graph) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& node : graph.nodes) {
    for (auto c : node.children) succ[node.id - 1].push_back(c - 1);
    for (const auto& e : node.back_edges) succ[node.id - 1].push_back(e.target - 1);
  }

  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  // Iterative Tarjan: proof graphs can be deep.
  struct Call {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Call> calls{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!calls.empty()) {
      Call& call = calls.back();
      const std::size_t v = call.v;
      if (call.next < succ[v].size()) {
        const std::size_t w = succ[v][call.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> component;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w + 1);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      calls.pop_back();
      if (!calls.empty()) low[calls.back().v] = std::min(low[calls.back().v], low[v]);
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

bool back_edges_target_scc_roots(const ProofGraph& graph) {
  const auto components = proof_sccs(graph);
  std::vector<std::size_t> root_of(graph.nodes.size() + 1, 0);
  for (const auto& c : components) {
    for (auto id : c) root_of[id] = c.front();
  }
  for (const auto& node : graph.nodes) {
    for (const auto& e : node.back_edges) {
      if (root_of[e.target] != e.target || root_of[node.id] != e.target) return false;
    }
  }
  return true;
}

}  // namespace atlplus
