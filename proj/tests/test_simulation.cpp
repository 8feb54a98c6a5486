#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dynsis/error.hpp"
#include "dynsis/netgen.hpp"
#include "dynsis/simulation.hpp"

using namespace dynsis;

TEST(Graph, RespectsCapAndSimplicity) {
  Graph g(4, 2);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(1, 0));
  EXPECT_FALSE(g.add_edge(2, 2));
  EXPECT_TRUE(g.add_edge(0, 2));
  EXPECT_FALSE(g.add_edge(0, 3));  // node 0 at cap
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.free_stubs(0), 0);
  EXPECT_TRUE(g.remove_edge(1, 0));
  EXPECT_FALSE(g.remove_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_TRUE(g.is_valid());
  EXPECT_EQ(g.degrees(), (std::vector<int>{1, 0, 1, 0}));
}

TEST(Graph, EdgeListRoundTrip) {
  const Graph g = regular_random(50, 3, 5, 9);
  std::stringstream buf;
  g.write_edge_list(buf);
  EXPECT_EQ(buf.str().substr(0, 11), "# N=50 M=5\n");
  const Graph back = Graph::read_edge_list(buf);
  EXPECT_EQ(back.size(), 50);
  EXPECT_EQ(back.max_degree(), 5);
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(Graph, EdgeListRejectsMalformedInput) {
  std::istringstream no_header("0,1\n");
  EXPECT_THROW(Graph::read_edge_list(no_header), std::exception);
  std::istringstream out_of_range("# N=2 M=1\n0,5\n");
  EXPECT_THROW(Graph::read_edge_list(out_of_range), std::exception);
  std::istringstream over_cap("# N=3 M=1\n0,1\n0,2\n");
  EXPECT_THROW(Graph::read_edge_list(over_cap), std::exception);
}

TEST(WeightTree, FindMatchesLinearScan) {
  WeightTree tree(13);
  std::vector<long long> w = {3, 0, 1, 4, 0, 0, 2, 5, 1, 0, 3, 2, 1};
  for (std::size_t k = 0; k < w.size(); ++k) tree.set(k, w[k]);
  tree.set(7, 2);
  w[7] = 2;
  long long total = 0;
  for (auto x : w) total += x;
  ASSERT_EQ(tree.total(), total);
  for (long long t = 0; t < total; ++t) {
    long long acc = 0;
    std::size_t want = 0;
    while (acc + w[want] <= t) acc += w[want++];
    EXPECT_EQ(tree.find(t), want) << "target " << t;
  }
}

TEST(EdgeSet, InsertEraseContains) {
  EdgeSet set;
  set.insert(3, 1);
  set.insert(2, 5);
  set.insert(0, 4);
  EXPECT_TRUE(set.contains(1, 3));
  set.erase(1, 3);
  EXPECT_FALSE(set.contains(3, 1));
  EXPECT_EQ(set.size(), 2u);
  EXPECT_TRUE(set.contains(5, 2));
  EXPECT_TRUE(set.contains(4, 0));
}

TEST(SimState, CountersFollowMutations) {
  Graph g(5, 3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  SimState st(g, {1});
  EXPECT_EQ(st.si_edge_count(), 2u);
  EXPECT_EQ(st.free_stubs(), 5 * 3 - 6);
  st.infect(2);
  EXPECT_EQ(st.si_edge_count(), 2u);  // 0-1 and 2-3
  st.unlink(2, 3);
  EXPECT_EQ(st.si_edge_count(), 1u);
  EXPECT_TRUE(st.link(4, 2));
  EXPECT_EQ(st.si_edge_count(), 2u);
  st.recover(1);
  EXPECT_EQ(st.si_edge_count(), 2u);  // 1-2 and 4-2
  EXPECT_EQ(st.check_consistency(), "");
}

TEST(Step, RatesAndAbsorption) {
  Graph g(4, 2);
  g.add_edge(0, 1);
  SimState st(g, {0});
  const ModelParams p{0.7, 1.3, 0.2, 0.4, 2, 4};
  const auto r = total_rates(st, p);
  EXPECT_DOUBLE_EQ(r.infection, 0.7);
  EXPECT_DOUBLE_EQ(r.recovery, 1.3);
  EXPECT_DOUBLE_EQ(r.deletion, 0.4);
  EXPECT_DOUBLE_EQ(r.creation, 0.2 * 6 / 2);

  SimState healthy(Graph(3, 2), {});
  Rng rng(1);
  EXPECT_FALSE(step(healthy, ModelParams{0.5, 1.0, 0.0, 0.0, 2, 3}, rng).has_value());
}

TEST(Run, TwoNodeLinkChainOccupancy) {
  // With M = 1 and two nodes the link flips on at rate alpha, off at rate omega.
  const double alpha = 0.3, omega = 0.9;
  const auto traj = run(Graph(2, 1), {}, ModelParams{0.0, 1.0, alpha, omega, 1, 2}, 40000.0, 1.0, 5);
  double on = 0.0;
  for (double e : traj.edges) on += e;
  EXPECT_NEAR(on / static_cast<double>(traj.edges.size()), alpha / (alpha + omega), 0.01);
}

TEST(Run, PureRecoveryMatchesExponentialDecay) {
  const ModelParams p{0.0, 1.0, 0.0, 0.0, 4, 400};
  std::vector<NodeId> all(400);
  for (NodeId v = 0; v < 400; ++v) all[v] = v;
  const auto traj = run(regular_random(400, 4, 4, 3), all, p, 2.0, 1.0, 17);
  // Binomial(400, e^-1) at t = 1: sd ~ 9.6.
  EXPECT_NEAR(traj.infected[1], 400 * std::exp(-1.0), 40.0);
}

TEST(Run, DegenerateGridAndDeterminism) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 6, 100};
  const Graph g = regular_random(100, 4, 6, 1);
  const auto infected = seed_infection(100, 10, 2);
  const auto zero = run(g, infected, p, 0.0, 1.0, 3);
  ASSERT_EQ(zero.times.size(), 1u);
  EXPECT_EQ(zero.infected[0], 10.0);
  const auto a = run(g, infected, p, 20.0, 0.5, 3);
  const auto b = run(g, infected, p, 20.0, 0.5, 3);
  EXPECT_EQ(a.infected, b.infected);
  EXPECT_EQ(a.edges, b.edges);
  const auto c = run(g, infected, p, 20.0, 0.5, 4);
  EXPECT_NE(a.edges, c.edges);
}

TEST(Run, ConsistencyChecksPass) {
  const ModelParams p{0.8, 1.0, 0.3, 0.2, 5, 60};
  SimOptions opt;
  opt.check_interval = 1;
  EXPECT_NO_THROW(run(regular_random(60, 2, 5, 4), seed_infection(60, 20, 5), p, 30.0, 1.0, 6, opt));
}

TEST(Ensemble, ThreadCountDoesNotChangeOutput) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 8, 200};
  GraphFactory factory = [](std::size_t, std::uint64_t seed) {
    return InitialCondition{regular_random(200, 4, 8, seed), seed_infection(200, 20, seed + 1)};
  };
  const auto one = ensemble(factory, p, 12, 20.0, 1.0, 99, {1, {}});
  const auto four = ensemble(factory, p, 12, 20.0, 1.0, 99, {4, {}});
  std::ostringstream a, b;
  one.write_runs_csv(a);
  four.write_runs_csv(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Ensemble, CsvRoundTripAndSummary) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 8, 100};
  GraphFactory factory = [](std::size_t, std::uint64_t seed) {
    return InitialCondition{regular_random(100, 4, 8, seed), seed_infection(100, 10, seed + 1)};
  };
  const auto res = ensemble(factory, p, 5, 5.0, 1.0, 3);
  std::stringstream buf;
  res.write_runs_csv(buf);
  const auto back = read_runs_csv(buf);
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t r = 0; r < 5; ++r) {
    EXPECT_EQ(back[r].times, res.runs[r].times);
    EXPECT_EQ(back[r].infected, res.runs[r].infected);
    EXPECT_EQ(back[r].mean_degree, res.runs[r].mean_degree);
    EXPECT_EQ(back[r].edges, res.runs[r].edges);
  }
  double mean0 = 0.0;
  for (const auto& r : res.runs) mean0 += r.infected[2] / 5.0;
  EXPECT_NEAR(res.infected_mean[2], mean0, 1e-12);
  std::ostringstream summary;
  res.write_summary_csv(summary);
  EXPECT_EQ(summary.str().substr(0, summary.str().find('\n')), kSummaryCsvHeader);
}

TEST(EmpiricalDistribution, Histogram) {
  Graph g(4, 3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  const auto d = empirical_degree_distribution(g);
  EXPECT_EQ(d.max_degree(), 3);
  EXPECT_DOUBLE_EQ(d[0], 0.25);
  EXPECT_DOUBLE_EQ(d[1], 0.5);
  EXPECT_DOUBLE_EQ(d[2], 0.25);
}
