#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hnet/error.hpp"
#include "hnet/ingest.hpp"

namespace hnet {

struct CpdNode {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> parents;
  // One row per parent-state combination, first parent varying slowest.
  std::vector<std::vector<double>> cpt;
};

/// Discrete Bayesian network: nodes in file order plus a topological order.
struct CpdNetwork {
  std::vector<CpdNode> nodes;
  std::vector<std::size_t> topo_order;
  // parent_index[i][j]: node index of the j-th parent of node i
  std::vector<std::vector<std::size_t>> parent_index;

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t arc_count() const {
    std::size_t arcs = 0;
    for (const auto& n : nodes) arcs += n.parents.size();
    return arcs;
  }

  std::size_t free_parameter_count() const {
    std::size_t params = 0;
    for (const auto& n : nodes) params += n.cpt.size() * (n.states.size() - 1);
    return params;
  }

  /// CPT row for the given parent state indices (mixed radix, first parent slowest).
  std::size_t cpt_row(std::size_t node, const std::vector<std::size_t>& parent_states) const {
    std::size_t row = 0;
    for (std::size_t j = 0; j < parent_index[node].size(); ++j) {
      row = row * nodes[parent_index[node][j]].states.size() + parent_states[j];
    }
    return row;
  }
};

inline constexpr double kCptTolerance = 1e-9;

/// Validates and indexes a network; throws on unknown parents, bad CPT
/// shape or rows, and cycles.
inline CpdNetwork make_network(std::vector<CpdNode> nodes) {
  CpdNetwork net;
  net.nodes = std::move(nodes);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& n = net.nodes[i];
    if (n.states.empty()) throw Error(ErrorCode::MalformedNetwork, "node '" + n.name + "' has no states");
    if (!index.emplace(n.name, i).second) throw Error(ErrorCode::MalformedNetwork, "duplicate node '" + n.name + "'");
  }
  net.parent_index.resize(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    const auto& n = net.nodes[i];
    std::size_t expected_rows = 1;
    for (const auto& p : n.parents) {
      auto it = index.find(p);
      if (it == index.end()) throw Error(ErrorCode::UnknownParent, "'" + n.name + "' lists unknown parent '" + p + "'");
      net.parent_index[i].push_back(it->second);
      expected_rows *= net.nodes[it->second].states.size();
    }
    if (n.cpt.size() != expected_rows) {
      throw Error(ErrorCode::MalformedCpt, "'" + n.name + "' has " + std::to_string(n.cpt.size()) + " CPT rows, expected " +
                                               std::to_string(expected_rows));
    }
    for (const auto& row : n.cpt) {
      if (row.size() != n.states.size()) {
        throw Error(ErrorCode::MalformedCpt, "'" + n.name + "' CPT row width differs from its state count");
      }
      double total = 0.0;
      for (double v : row) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::MalformedCpt, "'" + n.name + "' CPT entry outside [0,1]");
        total += v;
      }
      if (std::abs(total - 1.0) > kCptTolerance) {
        throw Error(ErrorCode::MalformedCpt, "'" + n.name + "' CPT row sums to " + std::to_string(total));
      }
    }
  }

  // Kahn's algorithm; ties resolved by file order for a stable sampling order.
  std::vector<std::size_t> indegree(net.nodes.size());
  std::vector<std::vector<std::size_t>> children(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    indegree[i] = net.parent_index[i].size();
    for (auto p : net.parent_index[i]) children[p].push_back(i);
  }
  std::vector<bool> done(net.nodes.size(), false);
  while (net.topo_order.size() < net.nodes.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
      if (done[i] || indegree[i] != 0) continue;
      done[i] = true;
      net.topo_order.push_back(i);
      for (auto c : children[i]) --indegree[c];
      progressed = true;
      break;
    }
    if (!progressed) throw Error(ErrorCode::CyclicGraph, "parent relation contains a cycle");
  }
  return net;
}

/// Reads the fixture schema
/// `{"nodes":[{"name","states":[...],"parents":[...],"cpt":[[...],...]}]}`.
/// Unknown top-level keys are ignored.
inline CpdNetwork load_network(std::string_view bytes) {
  std::vector<CpdNode> nodes;
  try {
    const auto doc = nlohmann::json::parse(bytes);
    for (const auto& j : doc.at("nodes")) {
      CpdNode n;
      n.name = j.at("name").get<std::string>();
      n.states = j.at("states").get<std::vector<std::string>>();
      n.parents = j.value("parents", std::vector<std::string>{});
      n.cpt = j.at("cpt").get<std::vector<std::vector<double>>>();
      nodes.push_back(std::move(n));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedNetwork, ex.what());
  }
  return make_network(std::move(nodes));
}

/// Draws n rows by ancestral sampling. Each row consumes one uniform per node
/// in topological order from a mt19937_64 stream seeded with `seed`, so the
/// output is a pure function of (net, n, seed).
inline FeatureTable forward_sample(const CpdNetwork& net, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidConfig, "sample size must be at least 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  FeatureTable table;
  table.n_rows = n;
  table.columns.resize(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    table.columns[i].name = net.nodes[i].name;
    table.columns[i].kind = FeatureKind::Discrete;
    table.columns[i].cells.reserve(n);
  }

  std::vector<std::size_t> state(net.nodes.size());
  std::vector<std::size_t> parent_states;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t node : net.topo_order) {
      parent_states.clear();
      for (auto p : net.parent_index[node]) parent_states.push_back(state[p]);
      const auto& row = net.nodes[node].cpt[net.cpt_row(node, parent_states)];
      const double u = uniform();
      double acc = 0.0;
      std::size_t pick = row.size() - 1;
      for (std::size_t s = 0; s < row.size(); ++s) {
        acc += row[s];
        if (u < acc) {
          pick = s;
          break;
        }
      }
      // Guard against a zero-probability last state absorbing rounding slack.
      while (row[pick] == 0.0 && pick > 0) --pick;
      state[node] = pick;
    }
    for (std::size_t i = 0; i < net.nodes.size(); ++i) table.columns[i].cells.emplace_back(net.nodes[i].states[state[i]]);
  }
  return table;
}

/// Renders a table as CSV with a header row (the format parse_csv reads).
inline std::string to_csv(const FeatureTable& table) {
  auto field = [](std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += field(table.columns[c].name);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.n_rows; ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      const auto& cell = table.columns[c].cells[r];
      if (cell) out += field(*cell);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hnet
