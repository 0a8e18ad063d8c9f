#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "netform/graph.hpp"

namespace netform {

enum class GraphFormat { kEdgeList, kDot, kJson };

std::optional<GraphFormat> graph_format_from_name(std::string_view name);

/// Text export. Edge list: one "i j" line per edge, i < j, ascending. DOT: an
/// undirected graph block with one statement per node and per edge. JSON:
/// {"n": n, "edges": [[i, j], ...]} with edges ascending. All three are
/// byte-deterministic for a given graph.
std::string export_graph(const Graph& g, GraphFormat format);

/// Reads a graph back from the JSON export or an edge-list document. Edge
/// lists carry no node count, so those require `n_hint`.
Graph import_graph(const std::string& text, std::optional<int> n_hint = std::nullopt);

}  // namespace netform
