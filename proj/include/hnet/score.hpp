#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hnet/engine.hpp"
#include "hnet/error.hpp"
#include "hnet/graph.hpp"
#include "hnet/simulate.hpp"
#include "hnet/stats.hpp"

namespace hnet {

/// Directed 0/1 adjacency over a fixed variable order. Diagonal is false.
struct EdgeLabeling {
  std::vector<std::string> order;
  std::vector<std::uint8_t> adj;  // order.size()^2, row-major

  EdgeLabeling() = default;
  explicit EdgeLabeling(std::vector<std::string> names)
      : order(std::move(names)), adj(order.size() * order.size(), 0) {}

  std::size_t size() const { return order.size(); }
  bool at(std::size_t i, std::size_t j) const { return adj[i * order.size() + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) { adj[i * order.size() + j] = v ? 1 : 0; }

  std::size_t edge_count() const { return static_cast<std::size_t>(std::count(adj.begin(), adj.end(), 1)); }

  friend bool operator==(const EdgeLabeling&, const EdgeLabeling&) = default;
};

/// Ground truth: parent -> child for every arc of the network.
inline EdgeLabeling truth_labeling(const CpdNetwork& net) {
  std::vector<std::string> names;
  for (const auto& n : net.nodes) names.push_back(n.name);
  EdgeLabeling out(std::move(names));
  for (std::size_t child = 0; child < net.nodes.size(); ++child) {
    for (auto parent : net.parent_index[child]) out.set(parent, child);
  }
  return out;
}

enum class ResponsePolicy { TrueStateOnly, AllStates };

inline bool is_true_state(std::string_view label) {
  std::string lower(label);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "true" || lower == "yes" || lower == "1";
}

/// Collapses category-level edges onto network variables. Under
/// TrueStateOnly, an edge counts only when its response (source) node is the
/// true state of its variable; variables with no true-like state fall back
/// to all states and are listed in `fallback` when given.
inline EdgeLabeling project_to_variables(const NetworkGraph& g, const CpdNetwork& net, ResponsePolicy policy,
                                         std::vector<std::string>* fallback = nullptr) {
  EdgeLabeling out = truth_labeling(net);
  std::fill(out.adj.begin(), out.adj.end(), 0);

  std::vector<bool> has_true(net.nodes.size(), false);
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    has_true[i] = std::any_of(net.nodes[i].states.begin(), net.nodes[i].states.end(), is_true_state);
    if (policy == ResponsePolicy::TrueStateOnly && !has_true[i] && fallback) fallback->push_back(net.nodes[i].name);
  }

  std::vector<std::size_t> var_of(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    auto v = net.find(g.nodes[i].feature);
    if (!v) throw Error(ErrorCode::UnknownVariable, "graph node '" + g.nodes[i].id + "' is not a network variable");
    var_of[i] = *v;
  }
  auto contributes = [&](std::size_t node) {
    if (policy == ResponsePolicy::AllStates) return true;
    const std::size_t v = var_of[node];
    if (!has_true[v] || g.nodes[node].kind == NodeKind::Numeric) return true;
    return is_true_state(g.nodes[node].label);
  };

  for (const auto& e : g.edges) {
    const std::size_t u = var_of[e.source];
    const std::size_t v = var_of[e.target];
    if (u == v) continue;
    if (g.directed) {
      if (contributes(e.source)) out.set(u, v);
    } else {
      if (contributes(e.source)) out.set(u, v);
      if (contributes(e.target)) out.set(v, u);
    }
  }
  return out;
}

enum class ScoreMode { Directed, Undirected };

inline std::string_view to_string(ScoreMode m) { return m == ScoreMode::Directed ? "directed" : "undirected"; }

struct Confusion {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct MccResult {
  double mcc = 0.0;
  double p_value = 1.0;  // one-sided Fisher exact (enrichment of true positives)
  Confusion confusion;
};

inline Confusion confusion(const EdgeLabeling& predicted, const EdgeLabeling& truth, ScoreMode mode) {
  if (predicted.order != truth.order) {
    throw Error(ErrorCode::DimensionMismatch, "labelings are over different variable orders");
  }
  const std::size_t n = truth.size();
  Confusion c;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = mode == ScoreMode::Directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      bool p = predicted.at(i, j);
      bool t = truth.at(i, j);
      if (mode == ScoreMode::Undirected) {
        p = p || predicted.at(j, i);
        t = t || truth.at(j, i);
      }
      if (p && t) {
        ++c.tp;
      } else if (p) {
        ++c.fp;
      } else if (t) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return c;
}

inline double mcc_from(const Confusion& c) {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(denom);
}

/// Matthews correlation over off-diagonal pairs (ordered pairs when
/// Directed; unordered, after OR-ing each matrix with its transpose, when
/// Undirected). A zero denominator scores 0.
inline MccResult mcc(const EdgeLabeling& predicted, const EdgeLabeling& truth, ScoreMode mode) {
  MccResult r;
  r.confusion = confusion(predicted, truth, mode);
  r.mcc = mcc_from(r.confusion);
  const auto& c = r.confusion;
  PairCounts pc{c.tp + c.fp + c.fn + c.tn, c.tp + c.fn, c.tp + c.fp, c.tp};
  r.p_value = hypergeom_sf(pc).p();
  return r;
}

struct BaselineSummary {
  double mean_mcc = 0.0;
  double std_error = 0.0;
  double mean_p_value = 1.0;
  std::size_t trials = 0;
};

/// MCC of uniformly random directed graphs with `edges` arcs against truth.
/// Trial t draws from a generator seeded by (seed, t), so trials can be run
/// in any order.
inline BaselineSummary random_baseline(const EdgeLabeling& truth, std::size_t edges, std::size_t trials,
                                       std::uint64_t seed, ScoreMode mode = ScoreMode::Directed) {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be at least 1");
  const std::size_t n = truth.size();
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) slots.push_back(i * n + j);
    }
  }
  edges = std::min(edges, slots.size());

  std::vector<double> scores;
  double p_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    auto pool = slots;
    EdgeLabeling pred(truth.order);
    for (std::size_t k = 0; k < edges; ++k) {
      // Partial Fisher-Yates; rejection sampling keeps the draw unbiased.
      const std::uint64_t range = pool.size() - k;
      const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
      std::uint64_t draw = rng();
      while (draw >= limit) draw = rng();
      std::swap(pool[k], pool[k + draw % range]);
      pred.adj[pool[k]] = 1;
    }
    const auto r = mcc(pred, truth, mode);
    scores.push_back(r.mcc);
    p_sum += r.p_value;
  }
  BaselineSummary s;
  s.trials = trials;
  s.mean_mcc = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(trials);
  s.mean_p_value = p_sum / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (double v : scores) ss += (v - s.mean_mcc) * (v - s.mean_mcc);
    s.std_error = std::sqrt(ss / static_cast<double>(trials - 1)) / std::sqrt(static_cast<double>(trials));
  }
  return s;
}

/// Seed for the sample of size n; depends only on (seed, n) so the same n
/// always reproduces the same data set.
inline std::uint64_t sample_seed(std::uint64_t seed, std::size_t n) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(n) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Runs the pipeline on a forward sample. An underpowered sample with no
/// usable category or pair yields an empty graph instead of an error.
inline NetworkGraph run_on_sample(const CpdNetwork& net, std::size_t n, std::uint64_t seed, const HnetConfig& config) {
  try {
    return run(forward_sample(net, n, sample_seed(seed, n)), config).graph;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoUsableColumns && e.code() != ErrorCode::NoTestsPerformed) throw;
    NetworkGraph empty;
    empty.meta.alpha = config.alpha;
    empty.meta.mtm = std::string(to_string(config.method));
    empty.meta.n_rows = n;
    return empty;
  }
}

struct ConvergencePoint {
  std::size_t n = 0;
  Method method = Method::Holm;
  std::size_t edge_count = 0;
  double overlap = 0.0;  // Jaccard index against the reference edge set
};

inline std::set<std::pair<std::string, std::string>> edge_set(const NetworkGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : g.edges) out.emplace(g.nodes[e.source].id, g.nodes[e.target].id);
  return out;
}

/// Edge count and overlap with the reference-size network for each sample
/// size and correction method.
inline std::vector<ConvergencePoint> convergence_curve(const CpdNetwork& net, const std::vector<std::size_t>& n_grid,
                                                       std::size_t reference_n, const HnetConfig& config,
                                                       const std::vector<Method>& methods, std::uint64_t seed) {
  if (n_grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty sample-size grid");
  std::vector<ConvergencePoint> out;
  for (Method method : methods) {
    HnetConfig cfg = config;
    cfg.method = method;
    const auto reference = edge_set(run_on_sample(net, reference_n, seed, cfg));
    for (std::size_t n : n_grid) {
      const auto edges = edge_set(run_on_sample(net, n, seed, cfg));
      std::size_t common = 0;
      for (const auto& e : edges) common += reference.count(e);
      const std::size_t uni = edges.size() + reference.size() - common;
      out.push_back({n, method, edges.size(), uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni)});
    }
  }
  return out;
}

struct BenchmarkRow {
  std::string model;  // hnet | random | truth
  std::size_t n = 0;
  ScoreMode mode = ScoreMode::Directed;
  double mcc = 0.0;
  double p_value = 1.0;
  std::size_t edges_pred = 0;
  std::size_t edges_true = 0;
};

struct BenchmarkOptions {
  HnetConfig config;
  ResponsePolicy policy = ResponsePolicy::TrueStateOnly;
  std::size_t trials = 10;
  std::uint64_t seed = 7;
};

/// HNet, random and truth-vs-truth scores, directed and undirected, for each
/// sample size. Edge counts are in the scoring universe of the row's mode.
inline std::vector<BenchmarkRow> benchmark(const CpdNetwork& net, const std::vector<std::size_t>& n_list,
                                           const BenchmarkOptions& opt) {
  const EdgeLabeling truth = truth_labeling(net);
  std::vector<BenchmarkRow> rows;
  for (std::size_t n : n_list) {
    const NetworkGraph g = run_on_sample(net, n, opt.seed, opt.config);
    const EdgeLabeling pred = project_to_variables(g, net, opt.policy);
    for (ScoreMode mode : {ScoreMode::Directed, ScoreMode::Undirected}) {
      const auto r = mcc(pred, truth, mode);
      const std::size_t edges_true = r.confusion.tp + r.confusion.fn;
      const std::size_t edges_pred = r.confusion.tp + r.confusion.fp;
      rows.push_back({"hnet", n, mode, r.mcc, r.p_value, edges_pred, edges_true});

      const auto base = random_baseline(truth, pred.edge_count(), opt.trials, sample_seed(opt.seed, n), mode);
      rows.push_back({"random", n, mode, base.mean_mcc, base.mean_p_value, pred.edge_count(), edges_true});

      const auto self = mcc(truth, truth, mode);
      rows.push_back({"truth", n, mode, self.mcc, self.p_value, edges_true, edges_true});
    }
  }
  return rows;
}

inline std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "model,n,mode,mcc,p_value,edges_pred,edges_true\n";
  for (const auto& r : rows) {
    out += r.model + "," + std::to_string(r.n) + "," + std::string(to_string(r.mode)) + "," +
           detail::format_real(r.mcc) + "," + detail::format_real(r.p_value) + "," + std::to_string(r.edges_pred) +
           "," + std::to_string(r.edges_true) + "\n";
  }
  return out;
}

}  // namespace hnet
