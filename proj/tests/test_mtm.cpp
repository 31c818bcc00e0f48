#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hnet/mtm.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace hnet;

namespace {

std::vector<double> adjust(const std::vector<double>& p, Method m) {
  std::vector<double> lp;
  for (double v : p) lp.push_back(std::log10(v));
  std::vector<double> out;
  for (double v : adjust_log10(lp, m)) out.push_back(std::pow(10.0, v));
  return out;
}

// Three-node matrix: two category rows, all three nodes as columns.
AssociationMatrix small_matrix(const std::vector<std::optional<double>>& p) {
  std::vector<Node> nodes = {{"A=x", "A", "x", 10, 1.0, NodeKind::Category},
                             {"B=y", "B", "y", 10, 1.0, NodeKind::Category},
                             {"C", "C", "", 20, 1.0, NodeKind::Numeric}};
  AssociationMatrix m(nodes, {0, 1}, {0, 1, 2});
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) m.raw[i] = LogP::from_p(*p[i]);
  }
  return m;
}

}  // namespace

TEST(Correction, SingleTestUnchanged) {
  EXPECT_NEAR(adjust({0.04}, Method::Holm)[0], 0.04, 1e-15);
}

TEST(Correction, HolmHandExample) {
  const auto a = adjust({0.01, 0.02, 0.03}, Method::Holm);
  EXPECT_DOUBLE_EQ(a[0], 0.03);
  EXPECT_DOUBLE_EQ(a[1], 0.04);
  EXPECT_DOUBLE_EQ(a[2], 0.04);
}

TEST(Correction, BenjaminiHochbergHandExample) {
  const auto a = adjust({0.01, 0.02, 0.04}, Method::BenjaminiHochberg);
  EXPECT_DOUBLE_EQ(a[0], 0.03);
  EXPECT_DOUBLE_EQ(a[1], 0.03);
  EXPECT_DOUBLE_EQ(a[2], 0.04);
}

TEST(Correction, ClampedAtOne) {
  for (auto m : {Method::Holm, Method::Bonferroni, Method::BenjaminiHochberg}) {
    for (double v : adjust_log10(std::vector<double>{-0.1, -0.2, -0.01}, m)) EXPECT_LE(v, 0.0);
  }
}

TEST(Correction, MatchesLiteralDefinitions) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int family = 0; family < 1000; ++family) {
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    std::vector<double> p(m);
    for (auto& v : p) v = std::pow(u(rng), 3.0);
    const auto holm = adjust(p, Method::Holm);
    const auto bonf = adjust(p, Method::Bonferroni);
    const auto bh = adjust(p, Method::BenjaminiHochberg);
    const auto holm_ref = oracle::holm(p);
    const auto bonf_ref = oracle::bonferroni(p);
    const auto bh_ref = oracle::benjamini_hochberg(p);
    for (std::size_t i = 0; i < m; ++i) {
      ASSERT_NEAR(holm[i], holm_ref[i], 1e-12);
      ASSERT_NEAR(bonf[i], bonf_ref[i], 1e-12);
      ASSERT_NEAR(bh[i], bh_ref[i], 1e-12);
    }
  }
}

TEST(CorrectionProperty, HolmNeverAboveBonferroni) {
  EXPECT_EQ(props::holm_dominance(7), "");
}

TEST(CorrectionProperty, MonotoneInRawOrder) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-8.0, 0.0);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> lp(std::uniform_int_distribution<std::size_t>(1, 40)(rng));
    for (auto& v : lp) v = u(rng);
    const auto order = oracle::ascending(lp);
    for (auto method : {Method::Holm, Method::BenjaminiHochberg}) {
      const auto adj = adjust_log10(lp, method);
      for (std::size_t k = 1; k < order.size(); ++k) EXPECT_LE(adj[order[k - 1]], adj[order[k]]);
    }
  }
}

TEST(Matrix, PerResponseFamiliesDiffer) {
  // Row 0 tests two cells, row 1 tests one: same raw p, different m.
  auto m = small_matrix({std::nullopt, 0.01, 0.5, 0.01, std::nullopt, std::nullopt});
  const auto c = correct(m);
  EXPECT_NEAR(c.adjusted[1]->p(), 0.02, 1e-15);
  EXPECT_NEAR(c.adjusted[3]->p(), 0.01, 1e-15);
  EXPECT_FALSE(c.adjusted[0]);
  EXPECT_FALSE(c.adjusted[4]);
  m.scope = FamilyScope::Global;
  EXPECT_NEAR(correct(m).adjusted[3]->p(), 0.03, 1e-15);
}

TEST(Matrix, EmptyFamilySkipped) {
  const auto c = correct(small_matrix({std::nullopt, std::nullopt, std::nullopt, 0.2, std::nullopt, std::nullopt}));
  EXPECT_TRUE(c.adjusted[3]);
  EXPECT_EQ(c.tested(), 1u);
}

TEST(EdgeWeights, WeightIsMinusLog10) {
  auto m = correct(small_matrix({std::nullopt, 0.001, std::nullopt, std::nullopt, std::nullopt, std::nullopt}));
  const auto g = edge_weights(m, 0.05);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_NEAR(g.edges[0].weight, 3.0, 1e-12);
  EXPECT_EQ(g.nodes.size(), 2u);
  EXPECT_TRUE(g.has_edge("A=x", "B=y"));
}

TEST(EdgeWeights, AboveAlphaDropped) {
  auto m = correct(small_matrix({std::nullopt, 0.06, std::nullopt, std::nullopt, std::nullopt, std::nullopt}));
  const auto g = edge_weights(m, 0.05);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(g.nodes.empty());
}

TEST(EdgeWeights, InvalidAlpha) {
  const auto m = correct(small_matrix({std::nullopt, 0.01, std::nullopt, std::nullopt, std::nullopt, std::nullopt}));
  EXPECT_THROW(edge_weights(m, 0.0), Error);
  EXPECT_THROW(edge_weights(m, 1.0), Error);
}

TEST(EdgeWeightsProperty, LoweringAlphaNeverAddsEdges) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::optional<double>> p(6);
    for (auto& v : p) v = u(rng) < 0.2 ? std::nullopt : std::optional<double>(std::pow(u(rng), 4.0));
    p[0] = p[4] = std::nullopt;
    const auto m = correct(small_matrix(p));
    std::size_t previous = SIZE_MAX;
    for (double alpha : {0.5, 0.2, 0.1, 0.05, 0.01, 0.001}) {
      const auto n = edge_weights(m, alpha).edges.size();
      EXPECT_LE(n, previous);
      previous = n;
    }
  }
}
