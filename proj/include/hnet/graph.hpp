#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hnet/error.hpp"
#include "hnet/stats.hpp"

namespace hnet {

enum class NodeKind { Category, Numeric };

struct Node {
  std::string id;  // `feature=label`, `feature` for numeric nodes, `&`-joined for combinations
  std::string feature;
  std::string label;
  std::size_t positives = 0;
  double fraction = 0.0;  // non-missing fraction of the parent feature(s)
  NodeKind kind = NodeKind::Category;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;  // -log10 of the adjusted p-value
  double adjusted_log10_p = 0.0;
  std::optional<Direction> direction;  // set on category -> numeric edges

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphMeta {
  double alpha = 0.05;
  std::string mtm = "holm";
  std::size_t n_rows = 0;

  friend bool operator==(const GraphMeta&, const GraphMeta&) = default;
};

struct NetworkGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  GraphMeta meta;
  bool directed = true;

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return i;
    }
    return std::nullopt;
  }

  bool has_edge(std::string_view from, std::string_view to) const {
    auto s = find(from);
    auto t = find(to);
    if (!s || !t) return false;
    for (const auto& e : edges) {
      if (e.source == *s && e.target == *t) return true;
      if (!directed && e.source == *t && e.target == *s) return true;
    }
    return false;
  }

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;
};

enum class SymmetrizeMode { Max, And };

/// Collapses a directed graph onto unordered pairs. Max keeps a pair when
/// either direction is present, And only when both are; the weight is the
/// larger of the two. Undirected input is returned unchanged.
inline NetworkGraph symmetrize(const NetworkGraph& g, SymmetrizeMode mode = SymmetrizeMode::Max) {
  if (!g.directed) return g;
  struct Pair {
    const Edge* forward = nullptr;  // lower index -> higher index
    const Edge* backward = nullptr;
  };
  std::map<std::pair<std::size_t, std::size_t>, Pair> pairs;
  for (const auto& e : g.edges) {
    if (e.source == e.target) continue;
    auto key = std::minmax(e.source, e.target);
    auto& slot = pairs[{key.first, key.second}];
    (e.source < e.target ? slot.forward : slot.backward) = &e;
  }
  NetworkGraph out;
  out.nodes = g.nodes;
  out.meta = g.meta;
  out.directed = false;
  for (const auto& [key, pr] : pairs) {
    if (mode == SymmetrizeMode::And && (!pr.forward || !pr.backward)) continue;
    const Edge* best = pr.forward;
    if (!best || (pr.backward && pr.backward->weight > best->weight)) best = pr.backward;
    Edge e = *best;
    e.source = key.first;
    e.target = key.second;
    if (!e.direction) {
      const Edge* other = best == pr.forward ? pr.backward : pr.forward;
      if (other) e.direction = other->direction;
    }
    out.edges.push_back(e);
  }
  return out;
}

enum class ExportFormat { AdjacencyCsv, GraphJson, GraphML };

inline std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "adjacency-csv" || s == "csv") return ExportFormat::AdjacencyCsv;
  if (s == "json" || s == "graph-json") return ExportFormat::GraphJson;
  if (s == "graphml") return ExportFormat::GraphML;
  return std::nullopt;
}

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Square weight matrix, 0 where no edge. An undirected graph yields a
/// symmetric matrix.
inline std::string to_adjacency_csv(const NetworkGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<double> w(n * n, 0.0);
  for (const auto& e : g.edges) {
    w[e.source * n + e.target] = e.weight;
    if (!g.directed) w[e.target * n + e.source] = e.weight;
  }
  std::string out = "node";
  for (const auto& node : g.nodes) out += "," + detail::csv_field(node.id);
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += detail::csv_field(g.nodes[i].id);
    for (std::size_t j = 0; j < n; ++j) {
      out += ',';
      out += detail::format_real(w[i * n + j]);
    }
    out += '\n';
  }
  return out;
}

/// The GraphJson document read by the viewer. Key order is fixed.
inline nlohmann::ordered_json to_graph_json(const NetworkGraph& g) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json nodes = ordered_json::array();
  for (const auto& node : g.nodes) {
    ordered_json j;
    j["id"] = node.id;
    j["feature"] = node.feature;
    j["label"] = node.label;
    j["positives"] = node.positives;
    j["fraction"] = node.fraction;
    nodes.push_back(std::move(j));
  }
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) {
    ordered_json j;
    j["source"] = g.nodes[e.source].id;
    j["target"] = g.nodes[e.target].id;
    j["weight"] = e.weight;
    j["direction"] = e.direction ? ordered_json(std::string(to_string(*e.direction))) : ordered_json(nullptr);
    edges.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  ordered_json meta;
  meta["alpha"] = g.meta.alpha;
  meta["mtm"] = g.meta.mtm;
  meta["n_rows"] = g.meta.n_rows;
  meta["directed"] = g.directed;
  doc["meta"] = std::move(meta);
  return doc;
}

inline std::string to_graphml(const NetworkGraph& g) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out +=
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out += "  <key id=\"feature\" for=\"node\" attr.name=\"feature\" attr.type=\"string\"/>\n";
  out += "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  out += "  <key id=\"positives\" for=\"node\" attr.name=\"positives\" attr.type=\"long\"/>\n";
  out += "  <key id=\"fraction\" for=\"node\" attr.name=\"fraction\" attr.type=\"double\"/>\n";
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += "  <key id=\"direction\" for=\"edge\" attr.name=\"direction\" attr.type=\"string\"/>\n";
  out += std::string("  <graph id=\"hnet\" edgedefault=\"") + (g.directed ? "directed" : "undirected") + "\">\n";
  for (const auto& node : g.nodes) {
    out += "    <node id=\"" + detail::xml_escape(node.id) + "\">";
    out += "<data key=\"feature\">" + detail::xml_escape(node.feature) + "</data>";
    out += "<data key=\"label\">" + detail::xml_escape(node.label) + "</data>";
    out += "<data key=\"positives\">" + std::to_string(node.positives) + "</data>";
    out += "<data key=\"fraction\">" + detail::format_real(node.fraction) + "</data>";
    out += "</node>\n";
  }
  for (const auto& e : g.edges) {
    out += "    <edge source=\"" + detail::xml_escape(g.nodes[e.source].id) + "\" target=\"" +
           detail::xml_escape(g.nodes[e.target].id) + "\">";
    out += "<data key=\"weight\">" + detail::format_real(e.weight) + "</data>";
    if (e.direction) out += "<data key=\"direction\">" + std::string(to_string(*e.direction)) + "</data>";
    out += "</edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

inline std::string export_graph(const NetworkGraph& g, ExportFormat format) {
  switch (format) {
    case ExportFormat::AdjacencyCsv: return to_adjacency_csv(g);
    case ExportFormat::GraphJson: return to_graph_json(g).dump(2) + "\n";
    case ExportFormat::GraphML: return to_graphml(g);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown export format");
}

/// Inverse of to_graph_json.
inline NetworkGraph graph_from_json(std::string_view text) {
  NetworkGraph g;
  try {
    const auto doc = nlohmann::json::parse(text);
    std::map<std::string, std::size_t> index;
    for (const auto& j : doc.at("nodes")) {
      Node node;
      node.id = j.at("id").get<std::string>();
      node.feature = j.at("feature").get<std::string>();
      node.label = j.at("label").get<std::string>();
      node.positives = j.at("positives").get<std::size_t>();
      node.fraction = j.at("fraction").get<double>();
      node.kind = node.id == node.feature ? NodeKind::Numeric : NodeKind::Category;
      if (!index.emplace(node.id, g.nodes.size()).second) {
        throw Error(ErrorCode::MalformedGraph, "duplicate node id '" + node.id + "'");
      }
      g.nodes.push_back(std::move(node));
    }
    for (const auto& j : doc.at("edges")) {
      Edge e;
      auto s = index.find(j.at("source").get<std::string>());
      auto t = index.find(j.at("target").get<std::string>());
      if (s == index.end() || t == index.end()) throw Error(ErrorCode::MalformedGraph, "edge endpoint not in nodes");
      e.source = s->second;
      e.target = t->second;
      e.weight = j.at("weight").get<double>();
      e.adjusted_log10_p = -e.weight;
      const auto& dir = j.at("direction");
      if (!dir.is_null()) {
        const auto d = dir.get<std::string>();
        if (d == "higher") {
          e.direction = Direction::Higher;
        } else if (d == "lower") {
          e.direction = Direction::Lower;
        } else {
          throw Error(ErrorCode::MalformedGraph, "unknown direction '" + d + "'");
        }
      }
      g.edges.push_back(e);
    }
    const auto& meta = doc.at("meta");
    g.meta.alpha = meta.at("alpha").get<double>();
    g.meta.mtm = meta.at("mtm").get<std::string>();
    g.meta.n_rows = meta.at("n_rows").get<std::size_t>();
    g.directed = meta.value("directed", true);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedGraph, ex.what());
  }
  return g;
}

}  // namespace hnet
