#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hnet/combi.hpp"
#include "hnet/error.hpp"
#include "hnet/graph.hpp"
#include "hnet/ingest.hpp"
#include "hnet/mtm.hpp"
#include "hnet/stats.hpp"

namespace hnet {

struct HnetConfig {
  std::size_t y_min = 10;
  std::size_t k_max = 1;
  std::size_t max_candidates = 1'000'000;
  Method method = Method::Holm;
  FamilyScope scope = FamilyScope::PerResponse;
  double alpha = 0.05;
  unsigned threads = 1;
};

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

/// Counts at every pipeline stage. pairs_tested == category_pairs + numeric_pairs.
struct RunReport {
  std::size_t n_rows = 0;
  std::size_t discrete_features = 0;
  std::size_t numeric_features = 0;
  std::size_t raw_categories = 0;
  std::size_t surviving_categories = 0;
  std::size_t model_features = 0;  // surviving categories + numeric features
  std::size_t combinations_generated = 0;
  CombiStats combi;
  std::size_t category_pairs = 0;
  std::size_t numeric_pairs = 0;
  std::size_t degenerate_splits = 0;
  std::size_t pairs_tested = 0;
  std::size_t edges_significant = 0;
  std::size_t nodes_in_graph = 0;
  std::vector<StageTime> timings;
};

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["n_rows"] = r.n_rows;
  j["discrete_features"] = r.discrete_features;
  j["numeric_features"] = r.numeric_features;
  j["raw_categories"] = r.raw_categories;
  j["surviving_categories"] = r.surviving_categories;
  j["model_features"] = r.model_features;
  j["combinations_generated"] = r.combinations_generated;
  j["combination_candidates"] = r.combi.candidates;
  j["category_pairs"] = r.category_pairs;
  j["numeric_pairs"] = r.numeric_pairs;
  j["degenerate_splits"] = r.degenerate_splits;
  j["pairs_tested"] = r.pairs_tested;
  j["edges_significant"] = r.edges_significant;
  j["nodes_in_graph"] = r.nodes_in_graph;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& s : r.timings) t[s.stage] = s.seconds;
  j["seconds"] = std::move(t);
  return j;
}

struct RunResult {
  NetworkGraph graph;
  AssociationMatrix matrix;
  RunReport report;
};

namespace detail {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTime>& sink) : sink_(sink), last_(std::chrono::steady_clock::now()) {}
  void lap(std::string name) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({std::move(name), std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTime>& sink_;
  std::chrono::steady_clock::time_point last_;
};

// Runs body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Full pipeline on a typed table: encode, combine, test every response
/// category against every category of another feature (hypergeometric) and
/// every numeric feature (Mann-Whitney), correct, threshold.
inline RunResult run(const FeatureTable& table, const HnetConfig& config = {}) {
  RunResult result;
  RunReport& report = result.report;
  detail::StageClock clock(report.timings);
  report.n_rows = table.n_rows;

  const OneHotMatrix base = one_hot_encode(table, config.y_min);
  report.raw_categories = base.raw_columns;
  report.surviving_categories = base.columns.size();
  clock.lap("encode");

  const OneHotMatrix encoded =
      expand_combinations(base, CombiConfig{config.k_max, config.y_min, config.max_candidates}, &report.combi);
  report.combinations_generated = encoded.columns.size() - base.columns.size();
  clock.lap("combine");

  // Node list: features in table order (categories sorted by label, numeric
  // features as one node), then combinations.
  std::vector<Node> nodes;
  std::vector<std::size_t> rows, cols;
  std::vector<const CategoryColumn*> category_of;      // per node, null for numeric
  std::vector<const FeatureColumn*> numeric_of;        // per node, null for category
  auto add_category = [&](const CategoryColumn& cc) {
    Node node;
    node.id = cc.id();
    node.kind = NodeKind::Category;
    for (std::size_t i = 0; i < cc.parent_features.size(); ++i) {
      node.feature += (i ? "&" : "") + cc.parent_features[i];
      node.label += (i ? "&" : "") + cc.labels[i];
    }
    node.positives = cc.positives;
    node.fraction = table.n_rows ? static_cast<double>(cc.observed.count()) / static_cast<double>(table.n_rows) : 0.0;
    rows.push_back(nodes.size());
    cols.push_back(nodes.size());
    nodes.push_back(std::move(node));
    category_of.push_back(&cc);
    numeric_of.push_back(nullptr);
  };
  for (const auto& col : table.columns) {
    if (col.kind == FeatureKind::Discrete) {
      ++report.discrete_features;
      for (const auto& cc : encoded.columns) {
        if (cc.order() == 1 && cc.parent_features.front() == col.name) add_category(cc);
      }
    } else if (col.kind == FeatureKind::Numeric) {
      ++report.numeric_features;
      Node node;
      node.id = col.name;
      node.feature = col.name;
      node.kind = NodeKind::Numeric;
      node.positives = col.present_count();
      node.fraction = table.n_rows ? static_cast<double>(node.positives) / static_cast<double>(table.n_rows) : 0.0;
      cols.push_back(nodes.size());
      nodes.push_back(std::move(node));
      category_of.push_back(nullptr);
      numeric_of.push_back(&col);
    }
  }
  for (const auto& cc : encoded.columns) {
    if (cc.order() > 1) add_category(cc);
  }
  report.model_features = report.surviving_categories + report.numeric_features;

  AssociationMatrix matrix(std::move(nodes), std::move(rows), std::move(cols));
  matrix.method = config.method;
  matrix.scope = config.scope;
  matrix.n_rows = table.n_rows;

  std::atomic<std::size_t> degenerate{0};
  detail::parallel_for(matrix.rows.size(), config.threads, [&](std::size_t r) {
    const CategoryColumn& response = *category_of[matrix.rows[r]];
    for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
      const std::size_t node = matrix.cols[c];
      if (node == matrix.rows[r]) continue;
      const std::size_t cell = matrix.cell(r, c);
      if (const CategoryColumn* candidate = category_of[node]) {
        if (response.shares_feature_with(*candidate)) continue;
        matrix.raw[cell] = hypergeom_sf(pair_counts(response, *candidate));
      } else {
        try {
          const auto mw = mann_whitney(numeric_of[node]->numbers, response);
          matrix.raw[cell] = mw.p;
          matrix.direction[cell] = mw.direction;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateSplit) throw;
          ++degenerate;
        }
      }
    }
  });
  report.degenerate_splits = degenerate;
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    for (std::size_t c = 0; c < matrix.cols.size(); ++c) {
      if (!matrix.raw[matrix.cell(r, c)]) continue;
      (category_of[matrix.cols[c]] ? report.category_pairs : report.numeric_pairs)++;
    }
  }
  report.pairs_tested = report.category_pairs + report.numeric_pairs;
  clock.lap("test");
  if (report.pairs_tested == 0) throw Error(ErrorCode::NoTestsPerformed, "no pair of distinct features could be tested");

  result.matrix = correct(std::move(matrix));
  clock.lap("correct");

  result.graph = edge_weights(result.matrix, config.alpha);
  report.edges_significant = result.graph.edges.size();
  report.nodes_in_graph = result.graph.nodes.size();
  clock.lap("threshold");
  return result;
}

/// parse_csv + assign_types + run.
inline RunResult analyze_csv(std::string_view bytes, const IngestConfig& ingest, const HnetConfig& config) {
  return run(assign_types(parse_csv(bytes, ingest), ingest), config);
}

}  // namespace hnet
