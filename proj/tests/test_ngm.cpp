#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "dynsis/error.hpp"
#include "dynsis/ngm.hpp"
#include "support/literal_model.hpp"

using namespace dynsis;

namespace {

double dense_spectral_radius(const NgmMatrices& ngm) {
  const Eigen::MatrixXd k = ngm.F * ngm.V.inverse();
  return k.eigenvalues().cwiseAbs().maxCoeff();
}


DfeState random_dfe(int m, double n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DfeState dfe;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) sum += dfe.s_k0.emplace_back(u(gen));
  for (auto& v : dfe.s_k0) v *= n / sum;
  return dfe;
}

}  // namespace

TEST(DiseaseStateIndex, LayoutAndBijection) {
  for (int m : {1, 3, 20}) {
    const DiseaseStateIndex index(m);
    ASSERT_EQ(index.size(), static_cast<std::size_t>((m + 1) * (m + 1)));
    std::set<std::size_t> seen;
    for (std::size_t p = 0; p < index.size(); ++p) {
      const auto c = index.state(p);
      ASSERT_EQ(index.find(c), p);
      const int k = c.s + c.i;
      EXPECT_GE(p, DiseaseStateIndex::class_offset(k));
      EXPECT_LT(p, DiseaseStateIndex::class_offset(k + 1));
      seen.insert(p);
    }
    EXPECT_FALSE(index.find({Status::S, 2, 0}).has_value());
  }
  const DiseaseStateIndex three(3);
  // Class 2 occupies [4, 9): S_{1,1}, S_{0,2}, I_{2,0}, I_{1,1}, I_{0,2}.
  EXPECT_EQ(three.find({Status::S, 1, 1}), 4u);
  EXPECT_EQ(three.find({Status::S, 0, 2}), 5u);
  EXPECT_EQ(three.find({Status::I, 2, 0}), 6u);
  EXPECT_EQ(three.find({Status::I, 0, 2}), 8u);
}

TEST(Ngm, HandAssembledMaxDegreeOne) {
  // States: 0 = I_{0,0}, 1 = S_{0,1}, 2 = I_{1,0}, 3 = I_{0,1}.
  const double b = 0.7, g = 1.3, a = 0.4, w = 0.25;
  const ModelParams p{b, g, a, w, 1, 1000};
  const DfeState dfe{{300.0, 700.0}};
  Eigen::Matrix4d v_want;
  // clang-format off
  v_want << g + a, 0,         -w,        -w,
            0,     b + g + w,  0,        -g,
           -a,     0,          g + b + w, -g,
            0,    -b,         -b,         2 * g + w;
  // clang-format on
  Eigen::Matrix4d f_want = Eigen::Matrix4d::Zero();
  f_want(1, 0) = a;  // an isolated infected links to a free susceptible
  const auto ngm = assemble_ngm(dfe, p);
  EXPECT_LT((ngm.V - v_want).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((ngm.F - f_want).cwiseAbs().maxCoeff(), 1e-14);
  const double want = a * v_want.inverse()(0, 1);
  EXPECT_NEAR(r0(dfe, p), want, 1e-12 * want);
}

TEST(Ngm, JacobianMatchesLiteralEquations) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int m : {2, 3, 5}) {
    for (int rep = 0; rep < 4; ++rep) {
      const ModelParams p{u(gen), u(gen), u(gen), u(gen), m, 1000};
      const auto dfe = random_dfe(m, 1000.0, gen);
      const auto ngm = assemble_ngm(dfe, p);
      const Eigen::MatrixXd diff = ngm.F - ngm.V - oracle::literal_jacobian(dfe, p);
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-6) << "m=" << m;
      EXPECT_LT((ngm.F - ngm.V - jacobian_oracle(dfe, p)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Ngm, FIsNonnegativeAndVIsAnMMatrix) {
  const ModelParams p{0.4, 1.0, 0.1, 0.2, 6, 1000};
  const auto ngm = assemble_ngm(dfe_from_distribution(DegreeDistribution::point_mass(4, 6), 1000), p);
  EXPECT_GE(ngm.F.minCoeff(), 0.0);
  const Eigen::MatrixXd vinv = ngm.V.inverse();
  EXPECT_GE(vinv.minCoeff(), -1e-12);
  for (Eigen::Index c = 0; c < ngm.V.cols(); ++c) {
    // Column sums are the outflow to non-disease states.
    EXPECT_GE(ngm.V.col(c).sum(), -1e-12);
    for (Eigen::Index r = 0; r < ngm.V.rows(); ++r)
      if (r != c) EXPECT_LE(ngm.V(r, c), 0.0);
  }
}

TEST(Ngm, PowerIterationMatchesDenseEigensolver) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelParams p{u(gen), u(gen), u(gen), u(gen), 6, 1000};
    const auto ngm = assemble_ngm(random_dfe(6, 1000.0, gen), p);
    const double dense = dense_spectral_radius(ngm);
    EXPECT_NEAR(spectral_radius_power(ngm).value, dense, 1e-8 * dense);
  }
}

TEST(Ngm, ThresholdSignConsistency) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  for (int rep = 0; rep < 10; ++rep) {
    const ModelParams p{u(gen), u(gen), u(gen), u(gen), 4, 1000};
    const auto ngm = assemble_ngm(random_dfe(4, 1000.0, gen), p);
    const double growth = Eigen::MatrixXd(ngm.F - ngm.V).eigenvalues().real().maxCoeff();
    const double r = spectral_radius_power(ngm).value;
    EXPECT_EQ(r > 1.0, growth > 0.0) << "r0=" << r << " growth=" << growth;
  }
}

TEST(Ngm, StaticLimitMatchesBlockFormula) {
  for (const auto& dist : {DegreeDistribution::point_mass(4, 8), DegreeDistribution::binomial(8, 0.5),
                           DegreeDistribution::negative_binomial(3.0, 6.0, 8)}) {
    for (double beta : {0.2, 0.5, 1.1}) {
      const ModelParams p{beta, 1.0, 0.0, 0.0, 8, 1000};
      const double dynamic = r0(dfe_from_distribution(dist, 1000), p);
      const double fixed = static_r0(dist, beta, 1.0, 1000, 8);
      EXPECT_NEAR(dynamic, fixed, 1e-9 * fixed);
    }
  }
}

TEST(Ngm, StaticR0IsIndependentOfPopulationAndLinearInSmallBeta) {
  const auto dist = DegreeDistribution::point_mass(4, 4);
  EXPECT_NEAR(static_r0(dist, 0.3, 1.0, 100, 4), static_r0(dist, 0.3, 1.0, 1e6, 4), 1e-12);
  EXPECT_EQ(static_r0(dist, 0.0, 1.0, 100, 4), 0.0);
  EXPECT_THROW(static_r0(DegreeDistribution::point_mass(0, 4), 0.3, 1.0, 100, 4), DomainError);
}

TEST(Ngm, MeanFieldLimit) {
  const ModelParams p{0.5, 2.0, 1.0, 17.0 / 3.0, 20, 1000};
  EXPECT_NEAR(meanfield_r0(p), 0.5 * 3.0 / 2.0, 1e-12);
}

TEST(Ngm, DegenerateCases) {
  const auto dfe = dfe_from_distribution(DegreeDistribution::point_mass(3, 4), 100);
  EXPECT_EQ(r0(dfe, ModelParams{0.0, 1.0, 0.0, 0.1, 4, 100}), 0.0);
  // No recovery and no link deletion: I_{0,M} can never leave.
  EXPECT_THROW(r0(dfe, ModelParams{0.5, 0.0, 0.1, 0.0, 4, 100}), NumericalError);
  EXPECT_THROW(r0(dfe, ModelParams{0.5, 1.0, 0.1, 0.1, 5, 100}), DomainError);
}

TEST(Ngm, NetworkEquilibriumDfe) {
  const ModelParams p{0.3, 1.0, 0.05, 0.1, 20, 1000};
  const auto dfe = dfe_network_equilibrium(p);
  EXPECT_NEAR(dfe.population(), 1000.0, 1e-9);
  EXPECT_NEAR(dfe.stubs() / 1000.0, 20.0 / 3.0, 1e-10);
}
