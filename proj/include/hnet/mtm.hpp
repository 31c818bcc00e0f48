#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hnet/error.hpp"
#include "hnet/graph.hpp"
#include "hnet/stats.hpp"

namespace hnet {

enum class Method { Holm, Bonferroni, BenjaminiHochberg };
enum class FamilyScope { PerResponse, Global };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Holm: return "holm";
    case Method::Bonferroni: return "bonferroni";
    case Method::BenjaminiHochberg: return "bh";
  }
  return "holm";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "holm") return Method::Holm;
  if (s == "bonferroni") return Method::Bonferroni;
  if (s == "bh" || s == "fdr_bh") return Method::BenjaminiHochberg;
  return std::nullopt;
}

inline std::string_view to_string(FamilyScope s) { return s == FamilyScope::Global ? "global" : "per-response"; }

inline std::optional<FamilyScope> parse_family_scope(std::string_view s) {
  if (s == "per-response") return FamilyScope::PerResponse;
  if (s == "global") return FamilyScope::Global;
  return std::nullopt;
}

/// Adjusts one family of log10 p-values. Multipliers are added in log space,
/// results are clamped at p = 1.
inline std::vector<double> adjust_log10(std::span<const double> log10_p, Method method) {
  const std::size_t m = log10_p.size();
  std::vector<double> adjusted(m);
  if (m == 0) return adjusted;
  const double log_m = std::log10(static_cast<double>(m));

  if (method == Method::Bonferroni) {
    for (std::size_t i = 0; i < m; ++i) adjusted[i] = std::min(0.0, log10_p[i] + log_m);
    return adjusted;
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return log10_p[a] < log10_p[b]; });

  if (method == Method::Holm) {
    // Step-down: rank i (0-based) is scaled by m - i, then made monotone.
    double running = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double scaled = std::min(0.0, log10_p[order[i]] + std::log10(static_cast<double>(m - i)));
      running = std::max(running, scaled);
      adjusted[order[i]] = running;
    }
  } else {
    // Step-up: rank i is scaled by m / (i + 1), minimum taken from the top.
    double running = 0.0;
    for (std::size_t i = m; i-- > 0;) {
      const double scaled = std::min(0.0, log10_p[order[i]] + log_m - std::log10(static_cast<double>(i + 1)));
      running = std::min(running, scaled);
      adjusted[order[i]] = running;
    }
  }
  return adjusted;
}

/// Raw and adjusted p-values between response categories (rows) and
/// candidate nodes (columns). Row r and column c refer into `nodes`; a cell
/// is absent when the pair was never tested.
struct AssociationMatrix {
  std::vector<Node> nodes;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<std::optional<LogP>> raw;
  std::vector<std::optional<LogP>> adjusted;
  std::vector<std::optional<Direction>> direction;
  Method method = Method::Holm;
  FamilyScope scope = FamilyScope::PerResponse;
  std::size_t n_rows = 0;

  AssociationMatrix() = default;
  AssociationMatrix(std::vector<Node> all_nodes, std::vector<std::size_t> row_nodes, std::vector<std::size_t> col_nodes)
      : nodes(std::move(all_nodes)),
        rows(std::move(row_nodes)),
        cols(std::move(col_nodes)),
        raw(rows.size() * cols.size()),
        adjusted(rows.size() * cols.size()),
        direction(rows.size() * cols.size()) {}

  std::size_t cell(std::size_t r, std::size_t c) const { return r * cols.size() + c; }

  std::size_t tested() const {
    return static_cast<std::size_t>(std::count_if(raw.begin(), raw.end(), [](const auto& v) { return v.has_value(); }));
  }
};

/// Applies the matrix's correction method within each family: one family per
/// response row, or all tested cells together under Global scope. Families
/// with no tested cell are skipped.
inline AssociationMatrix correct(AssociationMatrix m) {
  std::fill(m.adjusted.begin(), m.adjusted.end(), std::nullopt);
  auto run_family = [&](const std::vector<std::size_t>& cells) {
    if (cells.empty()) return;
    std::vector<double> lp;
    lp.reserve(cells.size());
    for (auto idx : cells) lp.push_back(m.raw[idx]->log10_p);
    const auto adj = adjust_log10(lp, m.method);
    for (std::size_t i = 0; i < cells.size(); ++i) m.adjusted[cells[i]] = LogP{adj[i]};
  };

  if (m.scope == FamilyScope::Global) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < m.raw.size(); ++i) {
      if (m.raw[i]) cells.push_back(i);
    }
    run_family(cells);
  } else {
    std::vector<std::size_t> cells;
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      cells.clear();
      for (std::size_t c = 0; c < m.cols.size(); ++c) {
        if (m.raw[m.cell(r, c)]) cells.push_back(m.cell(r, c));
      }
      run_family(cells);
    }
  }
  return m;
}

/// Significant cells become directed edges response -> candidate with weight
/// -log10(p adjusted). Only nodes touched by an edge are kept, in matrix
/// node order.
inline NetworkGraph edge_weights(const AssociationMatrix& m, double alpha = 0.05) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
  const double log_alpha = std::log10(alpha);

  struct Hit {
    std::size_t from, to;
    double log10_p;
    std::optional<Direction> dir;
  };
  std::vector<Hit> hits;
  std::vector<bool> used(m.nodes.size(), false);
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (std::size_t c = 0; c < m.cols.size(); ++c) {
      const auto& adj = m.adjusted[m.cell(r, c)];
      if (!adj || adj->log10_p > log_alpha) continue;
      hits.push_back({m.rows[r], m.cols[c], adj->log10_p, m.direction[m.cell(r, c)]});
      used[m.rows[r]] = used[m.cols[c]] = true;
    }
  }

  NetworkGraph g;
  g.meta.alpha = alpha;
  g.meta.mtm = std::string(to_string(m.method));
  g.meta.n_rows = m.n_rows;
  std::vector<std::size_t> remap(m.nodes.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = g.nodes.size();
    g.nodes.push_back(m.nodes[i]);
  }
  for (const auto& h : hits) {
    Edge e;
    e.source = remap[h.from];
    e.target = remap[h.to];
    e.adjusted_log10_p = h.log10_p;
    e.weight = h.log10_p == 0.0 ? 0.0 : -h.log10_p;
    e.direction = h.dir;
    g.edges.push_back(e);
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.source, a.target) < std::tie(b.source, b.target); });
  return g;
}

}  // namespace hnet
