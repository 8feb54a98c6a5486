#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dynsis/error.hpp"
#include "dynsis/ode.hpp"
#include "support/literal_model.hpp"

using namespace dynsis;

namespace {

StateVector random_state(int m, double n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(CompartmentIndex::domain_size(m));
  double sum = 0.0;
  for (auto& x : v) sum += (x = u(gen));
  for (auto& x : v) x *= n / sum;
  return StateVector(m, n, v);
}

ModelParams random_params(int m, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.05, 2.0);
  return {u(gen), u(gen), u(gen), u(gen), m, 1000};
}

}  // namespace

TEST(Rhs, MatchesTermByTermEquations) {
  std::mt19937_64 gen(7);
  for (int m : {1, 2, 3, 6, 12}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = random_state(m, 1000.0, gen);
      const auto p = random_params(m, gen);
      const auto got = rhs(x, p);
      const auto want = oracle::literal_rhs(x.index(), p, x.values());
      for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-9) << "m=" << m << " k=" << k;
    }
  }
}

TEST(Rhs, ConservesNodes) {
  std::mt19937_64 gen(8);
  const auto x = random_state(8, 1000.0, gen);
  const auto d = rhs(x, random_params(8, gen));
  double sum = 0.0;
  for (double v : d) sum += v;
  EXPECT_NEAR(sum, 0.0, 1e-9);
}

TEST(Rhs, DiseaseFreeStaticNetworkIsStationary) {
  const auto x = initial_state(DegreeDistribution::binomial(6, 0.5), 0.0, 1000.0);
  const auto d = rhs(x, ModelParams{0.7, 1.0, 0.0, 0.0, 6, 1000});
  for (double v : d) EXPECT_EQ(v, 0.0);
}

TEST(Mixing, ZeroDenominatorRule) {
  StateVector x(3, 10.0);
  x.at(Status::S, 0, 0) = 10.0;  // no stubs at all among susceptibles
  const auto mix = compute_mixing(x, ModelParams{1.0, 1.0, 1.0, 1.0, 3, 10});
  EXPECT_EQ(mix.g_s, 0.0);
  EXPECT_EQ(mix.g_i, 0.0);
  EXPECT_EQ(mix.p_s, 1.0);
  EXPECT_EQ(mix.p_i, 0.0);
}

TEST(Integrate, MeanDegreeRelaxesExponentially) {
  const ModelParams p{0.6, 1.0, 0.2, 0.3, 10, 1000};
  const auto x0 = initial_state(DegreeDistribution::point_mass(2, 10), 0.05, 1000.0);
  const auto traj = integrate(x0, p, 30.0, 0.5);
  const double ks = equilibrium_mean_degree(p);
  const auto k = traj.mean_degree();
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const double want = ks + (2.0 - ks) * std::exp(-(p.alpha + p.omega) * traj.times()[j]);
    EXPECT_NEAR(k[j], want, 1e-5 * want);
  }
}

TEST(Integrate, PureRecoveryDecays) {
  const ModelParams p{0.0, 1.0, 0.05, 0.1, 20, 1000};
  const auto x0 = initial_state(DegreeDistribution::point_mass(4, 20), 0.1, 1000.0);
  const auto traj = integrate(x0, p, 10.0, 1.0);
  for (std::size_t j = 0; j < traj.size(); ++j)
    EXPECT_NEAR(traj.state(j).infected(), 100.0 * std::exp(-traj.times()[j]), 1e-4);
  EXPECT_LT(traj.back().infected(), 1.0);
}

TEST(Integrate, ConservationOnEveryRow) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 20, 1000};
  const auto traj = integrate(initial_state(DegreeDistribution::point_mass(4, 20), 0.1, 1000.0), p, 50.0, 1.0);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const auto r = traj.row(j);
    EXPECT_NEAR(r.susceptible + r.infected, 1000.0, 1e-6 * 1000.0);
    EXPECT_TRUE(traj.state(j).is_valid());
  }
}

TEST(Integrate, Rk4AgreesWithAdaptive) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 8, 1000};
  const auto x0 = initial_state(DegreeDistribution::point_mass(4, 8), 0.1, 1000.0);
  IntegratorOptions rk4;
  rk4.method = IntegratorMethod::ClassicalRK4;
  rk4.rk4_step = 0.01;
  IntegratorOptions tight;
  tight.rel_tol = 1e-10;
  tight.abs_tol_per_node = 1e-12;
  const auto a = integrate(x0, p, 20.0, 2.0, tight);
  const auto b = integrate(x0, p, 20.0, 2.0, rk4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t k = 0; k < x0.values().size(); ++k)
      EXPECT_NEAR(a.state(j)[k], b.state(j)[k], 1e-6);
}

TEST(Integrate, RejectsBadArguments) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 4, 100};
  const auto x0 = initial_state(DegreeDistribution::point_mass(2, 4), 0.1, 100.0);
  EXPECT_THROW(integrate(x0, p, -1.0, 1.0), DomainError);
  EXPECT_THROW(integrate(x0, p, 1.0, 0.0), DomainError);
  ModelParams other = p;
  other.max_degree = 5;
  EXPECT_THROW(integrate(x0, other, 1.0, 1.0), DomainError);
}

TEST(SampleGrid, IncludesEndpoint) {
  EXPECT_EQ(sample_grid(1.0, 0.25), (std::vector<double>{0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(sample_grid(1.0, 0.3).back(), 1.0);
  EXPECT_EQ(sample_grid(0.0, 1.0), std::vector<double>{0.0});
}

TEST(Trajectory, CsvRoundTrip) {
  const ModelParams p{0.5, 1.0, 0.05, 0.1, 6, 1000};
  const auto traj = integrate(initial_state(DegreeDistribution::point_mass(3, 6), 0.1, 1000.0), p, 5.0, 1.0);
  std::stringstream buf;
  traj.write_csv(buf);
  const auto rows = read_trajectory_csv(buf);
  ASSERT_EQ(rows.size(), traj.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto r = traj.row(j);
    EXPECT_EQ(rows[j].t, r.t);
    EXPECT_EQ(rows[j].infected, r.infected);
    EXPECT_EQ(rows[j].susceptible, r.susceptible);
    EXPECT_EQ(rows[j].mean_degree, r.mean_degree);
    EXPECT_EQ(rows[j].edges, r.edges);
    EXPECT_EQ(rows[j].phi, r.phi);
  }
}
