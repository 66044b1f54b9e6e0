#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "kgnf/cyclic.hpp"
#include "kgnf/linearize.hpp"
#include "support.hpp"

using namespace kgnf;

namespace {

Eigen::MatrixXd to_dense(const Circulant& c) {
  Eigen::MatrixXd M(c.n, c.n);
  for (int j = 0; j < c.n; ++j)
    for (int k = 0; k < c.n; ++k) M(j, k) = c.row[((k - j) % c.n + c.n) % c.n];
  return M;
}

}  // namespace

TEST(Circulant, SpectrumExample) {
  const Circulant A = build_A(0.1, 4);
  const std::vector<double> expect = {1.0, 1.2, 1.4, 1.2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(A.spectrum[k], expect[k], 1e-15);
}

TEST(Circulant, SpectrumMatchesDenseEigensolver) {
  for (int n : {3, 8, 17, 32})
    for (double a : {0.01, 0.3}) {
      const Circulant A = build_A(a, n);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
      std::vector<double> lam = A.spectrum;
      std::sort(lam.begin(), lam.end());
      for (int k = 0; k < n; ++k) EXPECT_NEAR(lam[k], es.eigenvalues()(k), 1e-13);
      for (int k = 0; k < n; ++k) {
        const double s = std::sin(std::numbers::pi * k / n);
        EXPECT_NEAR(A.spectrum[k], 1.0 + 4.0 * a * s * s, 1e-14);
      }
    }
}

TEST(Circulant, PowersMatchDenseFunctionalCalculus) {
  const Circulant A = build_A(0.05, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A));
  for (double alpha : {0.5, 0.25, -0.25}) {
    const Eigen::VectorXd d = es.eigenvalues().array().pow(alpha);
    const Eigen::MatrixXd expect = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
    EXPECT_LE((to_dense(circulant_power(A, alpha)) - expect).cwiseAbs().maxCoeff(), 1e-14) << alpha;
  }
  const Circulant S = circulant_power(A, 0.5);
  const Eigen::MatrixXd Sd = to_dense(S);
  EXPECT_LE((Sd * Sd - to_dense(A)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Circulant, IdentityPowers) {
  const Circulant I = make_circulant({1.0, 0.0, 0.0, 0.0, 0.0});
  for (double alpha : {0.5, -0.25, 3.0}) {
    const Circulant P = circulant_power(I, alpha);
    EXPECT_NEAR(P.row[0], 1.0, 1e-15);
    for (int k = 1; k < 5; ++k) EXPECT_NEAR(P.row[k], 0.0, 1e-15);
  }
}

TEST(Circulant, RejectsBadInput) {
  EXPECT_THROW(make_circulant({1.0, 0.5, 0.0}), InvalidInput);
  EXPECT_THROW(build_A(-0.1, 4), InvalidInput);
  EXPECT_THROW(circulant_power(make_circulant({0.0, 1.0, 1.0}), 0.5), InvalidInput);
}

TEST(Linearize, CouplingConstants) {
  const LinearNF nf = linear_normalize(0.1, 8);
  EXPECT_NEAR(nf.mu, 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(nf.sigma0, std::log(6.0), 1e-14);
  EXPECT_NEAR(nf.sigma1, std::log(6.0) / 2.0, 1e-14);
}

TEST(Linearize, OmegaLiesInTheBand) {
  for (double a : {0.001, 0.05, 0.2}) {
    const LinearNF nf = linear_normalize(a, 16);
    EXPECT_GE(nf.omega, 1.0);
    EXPECT_LE(nf.omega, std::sqrt(1.0 + 4.0 * a));
  }
}

TEST(Linearize, DecoupledLimit) {
  const LinearNF nf = linear_normalize(0.0, 5);
  EXPECT_EQ(nf.omega, 1.0);
  EXPECT_EQ(nf.mu, 0.0);
  EXPECT_TRUE(nf.zeta0.empty());
  ASSERT_EQ(nf.h1.size(), 1u);
  EXPECT_EQ(nf.h1.coeff(Monomial::single(0, 4, 0)), cplx(0.25));
  const std::vector<double> z = {0.1, -0.2, 0.3, 0.4, 0.5, 0.6, -0.7, 0.8, 0.9, 1.0};
  EXPECT_EQ(apply_linear(nf, z), z);
}

TEST(Linearize, QuadraticPartMatchesDenseOracle) {
  const int n = 8;
  const double a = 0.05;
  const LinearNF nf = linear_normalize(a, n);
  const Eigen::MatrixXd A = to_dense(build_A(a, n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::MatrixXd S = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Poly H = realize(nf.h_omega + nf.zeta0, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double w = i == j ? 0.5 : 1.0;
      const Monomial mq = Monomial::from_factors({{int16_t(i), 1, 0}, {int16_t(j), 1, 0}});
      const Monomial mp = Monomial::from_factors({{int16_t(i), 0, 1}, {int16_t(j), 0, 1}});
      EXPECT_NEAR(H.coeff(mq).real(), w * S(i, j), 1e-13);
      EXPECT_NEAR(H.coeff(mp).real(), w * S(i, j), 1e-13);
    }
  bool base_zero = true;
  for (const auto& [m, c] : nf.zeta0.terms()) base_zero = base_zero && m.diameter() > 0;
  EXPECT_TRUE(base_zero);
}

TEST(Linearize, QuarticSeedIsTheTransformedPotential) {
  // h1 realized equals sum_j x_j^4 / 4 with x = A^{-1/4} q
  const int n = 6;
  const LinearNF nf = linear_normalize(0.05, n);
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const auto w = kgtest::random_vector(rng, 2 * n, 0.5);
    const auto z = apply_linear_inverse(nf, w);
    double expect = 0.0;
    for (int j = 0; j < n; ++j) expect += std::pow(z[j], 4) / 4.0;
    EXPECT_NEAR(evaluate_cyclic(nf.h1, w, n), expect, 1e-13);
  }
}

TEST(Linearize, ApplyRoundTrip) {
  const LinearNF nf = linear_normalize(0.05, 32);
  std::mt19937_64 rng(32);
  for (int k = 0; k < 10; ++k) {
    const auto z = kgtest::random_vector(rng, 64);
    const auto back = apply_linear_inverse(nf, apply_linear(nf, z));
    for (int i = 0; i < 64; ++i) EXPECT_NEAR(back[i], z[i], 1e-12);
  }
}

TEST(Linearize, Zeta0CoefficientsDecay) {
  const LinearNF nf = linear_normalize(0.05, 32);
  const auto b = zeta0_coefficients(nf);
  ASSERT_EQ(b.size(), 16u);
  for (std::size_t m = 1; m < 8; ++m) EXPECT_LT(std::abs(b[m]), std::abs(b[m - 1]));
}
