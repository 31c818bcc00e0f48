#include <gtest/gtest.h>

#include "hnet/simulate.hpp"
#include "properties.hpp"
#include "test_paths.hpp"

using namespace hnet;

namespace {

ErrorCode load_error(const std::string& json) {
  try {
    load_network(json);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST(Network, SprinklerShape) {
  const auto net = load_network(testdata::read("sprinkler.json"));
  EXPECT_EQ(net.nodes.size(), 4u);
  EXPECT_EQ(net.arc_count(), 4u);
  EXPECT_EQ(net.free_parameter_count(), 9u);
}

TEST(Network, AlarmShape) {
  const auto net = load_network(testdata::read("alarm.json"));
  EXPECT_EQ(net.nodes.size(), 37u);
  EXPECT_EQ(net.arc_count(), 46u);
  EXPECT_EQ(net.free_parameter_count(), 509u);
}

TEST(Network, Validation) {
  EXPECT_EQ(load_error(R"({"nodes":[{"name":"A","states":["t","f"],"parents":[],"cpt":[[0.5,0.4]]}]})"),
            ErrorCode::MalformedCpt);
  EXPECT_EQ(load_error(R"({"nodes":[{"name":"A","states":["t","f"],"parents":["Z"],"cpt":[[0.5,0.5]]}]})"),
            ErrorCode::UnknownParent);
  EXPECT_EQ(load_error(R"({"nodes":[{"name":"A","states":["t","f"],"parents":["B"],"cpt":[[1,0],[0,1]]},
                                    {"name":"B","states":["t","f"],"parents":["A"],"cpt":[[1,0],[0,1]]}]})"),
            ErrorCode::CyclicGraph);
  EXPECT_EQ(load_error(R"({"nodes":[{"name":"A","states":["t","f"],"parents":[],"cpt":[[1,0],[0,1]]}]})"),
            ErrorCode::MalformedCpt);
  EXPECT_EQ(load_error("[1,2"), ErrorCode::MalformedNetwork);
}

TEST(Sampler, FairRootWithinThreeSigma) {
  const auto net = load_network(R"({"nodes":[{"name":"A","states":["True","False"],"parents":[],"cpt":[[0.5,0.5]]}]})");
  const auto t = forward_sample(net, 10000, 1);
  std::size_t yes = 0;
  for (const auto& c : t.columns[0].cells) yes += *c == "True";
  EXPECT_NEAR(static_cast<double>(yes) / 10000.0, 0.5, 0.015);
}

TEST(Sampler, DeterministicCpt) {
  const auto net = load_network(R"({"nodes":[
    {"name":"A","states":["x","y"],"parents":[],"cpt":[[0,1]]},
    {"name":"B","states":["p","q","r"],"parents":["A"],"cpt":[[1,0,0],[0,0,1]]}]})");
  const auto t = forward_sample(net, 500, 9);
  for (std::size_t r = 0; r < 500; ++r) {
    EXPECT_EQ(*t.columns[0].cells[r], "y");
    EXPECT_EQ(*t.columns[1].cells[r], "r");
  }
}

TEST(Sampler, SeedDeterminism) {
  const auto net = load_network(testdata::read("alarm.json"));
  EXPECT_EQ(to_csv(forward_sample(net, 2000, 5)), to_csv(forward_sample(net, 2000, 5)));
  EXPECT_NE(to_csv(forward_sample(net, 2000, 5)), to_csv(forward_sample(net, 2000, 6)));
}

TEST(Sampler, CsvRoundTrip) {
  const auto net = load_network(testdata::read("sprinkler.json"));
  const auto t = forward_sample(net, 50, 3);
  const auto back = parse_csv(to_csv(t));
  ASSERT_EQ(back.columns.size(), 4u);
  EXPECT_EQ(back.columns[3].cells, t.columns[3].cells);
}

TEST(SamplerProperty, SprinklerFrequenciesMatchCpt) {
  EXPECT_EQ(props::sampler_frequencies(load_network(testdata::read("sprinkler.json")), 100000, 1), "");
}

TEST(SamplerProperty, AlarmFrequenciesMatchCpt) {
  EXPECT_EQ(props::sampler_frequencies(load_network(testdata::read("alarm.json")), 100000, 2), "");
}
