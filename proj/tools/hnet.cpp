// hnet command line: analyze, sample, benchmark, export, view.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hnet/hnet.hpp"
#include "hnet/viewer_asset.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hnet::Error(hnet::ErrorCode::Io, "cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hnet::Error(hnet::ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << bytes;
  if (!out) throw hnet::Error(hnet::ErrorCode::Io, "failed writing '" + path + "'");
}

void report_error(bool json, std::string_view code, const std::string& message) {
  if (json) {
    nlohmann::ordered_json j;
    j["error"] = code;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
  } else {
    std::cerr << "hnet: " << message << '\n';
  }
}

std::uint64_t default_seed(std::uint64_t fallback) {
  if (const char* env = std::getenv("HNET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw hnet::Error(hnet::ErrorCode::InvalidConfig, "HNET_SEED is not an unsigned integer");
    }
  }
  return fallback;
}

// Options shared by analyze and benchmark. Values start from the defaults,
// then a --config JSON file, then explicit flags.
struct PipelineOptions {
  std::string config_path;
  std::string delimiter = ",";
  std::vector<std::string> na_tokens;
  std::size_t y_min = 10;
  double unique_fraction = 0.20;
  std::vector<std::string> overrides;
  std::size_t k_max = 1;
  std::size_t max_candidates = 1'000'000;
  std::string mtm = "holm";
  std::string family = "per-response";
  double alpha = 0.05;

  std::vector<CLI::Option*> opts;

  void add_ingest(CLI::App* app) {
    opts.push_back(app->add_option("--delimiter", delimiter, "Field delimiter (single character)")->capture_default_str());
    opts.push_back(app->add_option("--na-token", na_tokens,
                                   "Cell text treated as missing; repeatable, replaces the defaults \"\", NA, NaN, None"));
    opts.push_back(app->add_option("--unique-fraction", unique_fraction,
                                   "All-numeric columns with at least this fraction of distinct values are numeric")
                       ->capture_default_str());
    opts.push_back(app->add_option("--type-override", overrides, "Force a column type: NAME=discrete|numeric|excluded; repeatable"));
  }
  void add_model(CLI::App* app) {
    opts.push_back(app->add_option("--config", config_path, "JSON file with any of the pipeline settings"));
    opts.push_back(app->add_option("--y-min", y_min, "Minimum positive samples for a category or combination")
                       ->capture_default_str());
    opts.push_back(app->add_option("--k-max", k_max, "Highest combination order")->capture_default_str());
    opts.push_back(app->add_option("--max-candidates", max_candidates, "Cap on combination candidates")->capture_default_str());
    opts.push_back(app->add_option("--mtm", mtm, "Multiple-testing correction: holm|bonferroni|bh")->capture_default_str());
    opts.push_back(app->add_option("--family", family, "Correction family: per-response|global")->capture_default_str());
    opts.push_back(app->add_option("--alpha", alpha, "Significance level for edges")->capture_default_str());
  }

  bool given(const std::string& name) const {
    for (auto* o : opts) {
      if (o->get_name() == name) return o->count() > 0;
    }
    return false;
  }

  void resolve(hnet::IngestConfig& ingest, hnet::HnetConfig& model) {
    nlohmann::json file = nlohmann::json::object();
    if (!config_path.empty()) {
      try {
        file = nlohmann::json::parse(read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw hnet::Error(hnet::ErrorCode::InvalidConfig, "config file: " + std::string(e.what()));
      }
    }
    try {
      if (!given("--delimiter") && file.contains("delimiter")) delimiter = file["delimiter"].get<std::string>();
      if (!given("--na-token") && file.contains("na_tokens")) na_tokens = file["na_tokens"].get<std::vector<std::string>>();
      if (!given("--unique-fraction") && file.contains("unique_fraction")) unique_fraction = file["unique_fraction"].get<double>();
      if (!given("--y-min") && file.contains("y_min")) y_min = file["y_min"].get<std::size_t>();
      if (!given("--k-max") && file.contains("k_max")) k_max = file["k_max"].get<std::size_t>();
      if (!given("--max-candidates") && file.contains("max_candidates")) max_candidates = file["max_candidates"].get<std::size_t>();
      if (!given("--mtm") && file.contains("mtm")) mtm = file["mtm"].get<std::string>();
      if (!given("--family") && file.contains("family")) family = file["family"].get<std::string>();
      if (!given("--alpha") && file.contains("alpha")) alpha = file["alpha"].get<double>();
      if (file.contains("type_overrides")) {
        for (const auto& [col, kind] : file["type_overrides"].items()) {
          overrides.insert(overrides.begin(), col + "=" + kind.get<std::string>());
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw hnet::Error(hnet::ErrorCode::InvalidConfig, "config file: " + std::string(e.what()));
    }

    if (delimiter.size() != 1) throw hnet::Error(hnet::ErrorCode::InvalidConfig, "--delimiter must be one character");
    ingest.delimiter = delimiter.front();
    if (!na_tokens.empty()) ingest.na_tokens = na_tokens;
    ingest.unique_fraction = unique_fraction;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      const auto kind = eq == std::string::npos ? std::nullopt : hnet::parse_feature_kind(o.substr(eq + 1));
      if (!kind) throw hnet::Error(hnet::ErrorCode::InvalidConfig, "bad --type-override '" + o + "'");
      ingest.type_overrides[o.substr(0, eq)] = *kind;
    }
    model.y_min = y_min;
    model.k_max = k_max;
    model.max_candidates = max_candidates;
    model.alpha = alpha;
    auto m = hnet::parse_method(mtm);
    if (!m) throw hnet::Error(hnet::ErrorCode::InvalidConfig, "unknown --mtm '" + mtm + "'");
    model.method = *m;
    auto f = hnet::parse_family_scope(family);
    if (!f) throw hnet::Error(hnet::ErrorCode::InvalidConfig, "unknown --family '" + family + "'");
    model.scope = *f;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hnet: association networks from mixed-type tabular data via hypergeometric and Mann-Whitney tests"};
  app.name("hnet");
  app.require_subcommand(1);
  bool json_errors = false;
  unsigned threads = 1;
  app.add_flag("--json-errors", json_errors, "Print errors to stderr as one-line JSON");
  app.add_option("--threads", threads, "Worker threads for pair testing")->capture_default_str()->check(CLI::Range(1u, 1024u));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Infer the association network of a CSV file");
  std::string an_in, an_out, an_html, an_adjacency, an_graphml, an_report;
  PipelineOptions an_opts;
  analyze->add_option("--in", an_in, "Input CSV with a header row")->required();
  analyze->add_option("--out", an_out, "Output GraphJson path ('-' for stdout)")->required();
  analyze->add_option("--html", an_html, "Also write a self-contained HTML view");
  analyze->add_option("--adjacency", an_adjacency, "Also write the weighted adjacency matrix as CSV");
  analyze->add_option("--graphml", an_graphml, "Also write GraphML");
  analyze->add_option("--report", an_report, "Also write per-stage counts and timings as JSON");
  an_opts.add_ingest(analyze);
  an_opts.add_model(analyze);

  // sample
  auto* sample = app.add_subcommand("sample", "Forward-sample a CPD network fixture to CSV");
  std::string sa_network, sa_out = "-";
  std::size_t sa_n = 1000;
  std::optional<std::uint64_t> sa_seed;
  sample->add_option("--network", sa_network, "Network fixture JSON")->required();
  sample->add_option("--n", sa_n, "Number of rows")->capture_default_str();
  sample->add_option("--seed", sa_seed, "Random seed (default 42, or HNET_SEED)");
  sample->add_option("--out", sa_out, "Output CSV path ('-' for stdout)")->capture_default_str();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Score recovered networks against a fixture's ground truth");
  std::string be_network, be_out = "-", be_policy = "true-state";
  std::vector<std::size_t> be_n{1000};
  std::size_t be_trials = 10;
  std::optional<std::uint64_t> be_seed;
  PipelineOptions be_opts;
  bench->add_option("--network", be_network, "Network fixture JSON")->required();
  bench->add_option("--n", be_n, "Comma-separated sample sizes")->delimiter(',')->capture_default_str();
  bench->add_option("--trials", be_trials, "Random-baseline trials per sample size")->capture_default_str();
  bench->add_option("--seed", be_seed, "Random seed (default 7, or HNET_SEED)");
  bench->add_option("--response-policy", be_policy, "Category states that count as responses: true-state|all-states")
      ->capture_default_str();
  bench->add_option("--out", be_out, "Results CSV path ('-' for stdout)")->capture_default_str();
  be_opts.add_model(bench);

  // export
  auto* exp = app.add_subcommand("export", "Convert a GraphJson file to another format");
  std::string ex_in, ex_out = "-", ex_format = "adjacency-csv", ex_sym = "none";
  exp->add_option("--in", ex_in, "GraphJson input")->required();
  exp->add_option("--format", ex_format, "adjacency-csv|json|graphml")->capture_default_str();
  exp->add_option("--symmetrize", ex_sym, "none|max|and")->capture_default_str();
  exp->add_option("--out", ex_out, "Output path ('-' for stdout)")->capture_default_str();

  // view
  auto* view = app.add_subcommand("view", "Write a self-contained interactive HTML view of a GraphJson file");
  std::string vi_in, vi_out;
  view->add_option("--in", vi_in, "GraphJson input")->required();
  view->add_option("--out", vi_out, "HTML output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(json_errors, "Usage", e.what());
    if (!json_errors) {
      const CLI::App* failed = &app;
      for (auto* sub : app.get_subcommands()) failed = sub;
      std::cerr << failed->help();
    }
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) {
      hnet::IngestConfig ingest;
      hnet::HnetConfig model;
      an_opts.resolve(ingest, model);
      model.threads = threads;
      const auto result = hnet::analyze_csv(read_file(an_in), ingest, model);
      write_file(an_out, hnet::export_graph(result.graph, hnet::ExportFormat::GraphJson));
      if (!an_html.empty()) write_file(an_html, hnet::render_html(result.graph, hnet::assets::kViewerHtml));
      if (!an_adjacency.empty()) write_file(an_adjacency, hnet::export_graph(result.graph, hnet::ExportFormat::AdjacencyCsv));
      if (!an_graphml.empty()) write_file(an_graphml, hnet::export_graph(result.graph, hnet::ExportFormat::GraphML));
      if (!an_report.empty()) write_file(an_report, hnet::to_json(result.report).dump(2) + "\n");
    } else if (sample->parsed()) {
      const auto net = hnet::load_network(read_file(sa_network));
      const auto table = hnet::forward_sample(net, sa_n, sa_seed ? *sa_seed : default_seed(42));
      write_file(sa_out, hnet::to_csv(table));
    } else if (bench->parsed()) {
      hnet::IngestConfig unused;
      hnet::BenchmarkOptions opt;
      be_opts.resolve(unused, opt.config);
      opt.config.threads = threads;
      opt.trials = be_trials;
      opt.seed = be_seed ? *be_seed : default_seed(7);
      if (be_policy == "true-state") {
        opt.policy = hnet::ResponsePolicy::TrueStateOnly;
      } else if (be_policy == "all-states") {
        opt.policy = hnet::ResponsePolicy::AllStates;
      } else {
        throw hnet::Error(hnet::ErrorCode::InvalidConfig, "unknown --response-policy '" + be_policy + "'");
      }
      const auto net = hnet::load_network(read_file(be_network));
      if (opt.policy == hnet::ResponsePolicy::TrueStateOnly) {
        std::vector<std::string> fallback;
        hnet::project_to_variables(hnet::NetworkGraph{}, net, opt.policy, &fallback);
        if (fallback.size() == net.nodes.size()) {
          std::cerr << "hnet: warning: no variable has a true-like state; scoring all states\n";
        } else if (!fallback.empty()) {
          std::cerr << "hnet: warning: " << fallback.size() << " variables without a true-like state use all states\n";
        }
      }
      write_file(be_out, hnet::benchmark_csv(hnet::benchmark(net, be_n, opt)));
    } else if (exp->parsed()) {
      auto g = hnet::graph_from_json(read_file(ex_in));
      if (ex_sym == "max") {
        g = hnet::symmetrize(g, hnet::SymmetrizeMode::Max);
      } else if (ex_sym == "and") {
        g = hnet::symmetrize(g, hnet::SymmetrizeMode::And);
      } else if (ex_sym != "none") {
        throw hnet::Error(hnet::ErrorCode::InvalidConfig, "unknown --symmetrize '" + ex_sym + "'");
      }
      const auto format = hnet::parse_export_format(ex_format);
      if (!format) throw hnet::Error(hnet::ErrorCode::UnsupportedFormat, "unknown --format '" + ex_format + "'");
      write_file(ex_out, hnet::export_graph(g, *format));
    } else if (view->parsed()) {
      write_file(vi_out, hnet::render_html(hnet::graph_from_json(read_file(vi_in)), hnet::assets::kViewerHtml));
    }
  } catch (const hnet::Error& e) {
    report_error(json_errors, hnet::to_string(e.code()), e.what());
    return kExitData;
  } catch (const std::exception& e) {
    report_error(json_errors, "Internal", e.what());
    return kExitData;
  }
  return kExitOk;
}
