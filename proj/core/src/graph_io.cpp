#include "netform/graph_io.hpp"

#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace netform {

std::optional<GraphFormat> graph_format_from_name(std::string_view name) {
  if (name == "edgelist") return GraphFormat::kEdgeList;
  if (name == "dot") return GraphFormat::kDot;
  if (name == "json") return GraphFormat::kJson;
  return std::nullopt;
}

std::string export_graph(const Graph& g, GraphFormat format) {
  std::ostringstream out;
  switch (format) {
    case GraphFormat::kEdgeList:
      for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
      return out.str();
    case GraphFormat::kDot:
      out << "graph g {\n";
      for (int i = 0; i < g.node_count(); ++i) out << "  " << i << ";\n";
      for (const auto& [i, j] : g.edges()) out << "  " << i << " -- " << j << ";\n";
      out << "}\n";
      return out.str();
    case GraphFormat::kJson: {
      nlohmann::ordered_json doc;
      doc["n"] = g.node_count();
      nlohmann::ordered_json edges = nlohmann::ordered_json::array();
      for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
      doc["edges"] = std::move(edges);
      return doc.dump() + "\n";
    }
  }
  throw std::invalid_argument("unknown graph format");
}

namespace {

Graph import_json_graph(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
    throw std::invalid_argument("graph JSON must be an object with keys n and edges");
  if (!doc["n"].is_number_integer())
    throw std::invalid_argument("graph JSON: n must be an integer");
  const int n = doc["n"].get<int>();
  std::vector<std::pair<int, int>> edges;
  if (!doc["edges"].is_array())
    throw std::invalid_argument("graph JSON: edges must be an array");
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw std::invalid_argument("graph JSON: each edge must be a pair of node ids");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

Graph import_graph(const std::string& text, std::optional<int> n_hint) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return import_json_graph(text);

  if (!n_hint) throw std::invalid_argument("edge-list import requires a node count");
  std::vector<std::pair<int, int>> edges;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    int i = 0;
    int j = 0;
    if (!(fields >> i >> j))
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected two node ids");
    std::string rest;
    if (fields >> rest)
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": trailing content");
    edges.emplace_back(i, j);
  }
  return Graph::from_edges(*n_hint, edges);
}

}  // namespace netform
