#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kgnf/cyclic.hpp"
#include "kgnf/linearize.hpp"
#include "support.hpp"

using namespace kgnf;

namespace {

Monomial mono(std::vector<Factor> fs) { return Monomial::from_factors(std::move(fs)); }

Poly bind(const Poly& f, int n) {
  Poly g = f;
  g.set_n(n);
  return g;
}

}  // namespace

TEST(Shift, Example) {
  Poly f(Kind::Real, 4);
  f.add(mono({{0, 1, 0}, {1, 0, 1}}), 1.0);
  const Poly g = cyclic_shift(f, 1);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.coeff(mono({{3, 1, 0}, {0, 0, 1}})), cplx(1.0));
}

TEST(Shift, FullTurnIsIdentity) {
  std::mt19937_64 rng(21);
  for (int n : {3, 5, 8}) {
    const Poly f = bind(kgtest::random_seed(rng), n);
    EXPECT_EQ(max_coeff_diff(cyclic_shift(f, n), f), 0.0);
    EXPECT_EQ(max_coeff_diff(cyclic_shift(cyclic_shift(f, 2), n - 2), f), 0.0);
  }
}

TEST(Realize, Examples) {
  Poly h(Kind::Real);
  h.add(Monomial::single(0, 2, 0), 0.5);
  h.add(Monomial::single(0, 0, 2), 0.5);
  const Poly H = realize(h, 3);
  EXPECT_EQ(H.size(), 6u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(H.coeff(Monomial::single(j, 2, 0)), cplx(0.5));
    EXPECT_EQ(H.coeff(Monomial::single(j, 0, 2)), cplx(0.5));
  }

  Poly f(Kind::Real);
  f.add(mono({{0, 1, 0}, {1, 1, 0}}), 1.0);
  const Poly F = realize(f, 2);
  ASSERT_EQ(F.size(), 1u);
  EXPECT_EQ(F.coeff(mono({{0, 1, 0}, {1, 1, 0}})), cplx(2.0));
}

TEST(Realize, IsShiftInvariant) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly F = realize(kgtest::random_seed(rng), 5);
    EXPECT_LE(max_coeff_diff(cyclic_shift(F, 1), F), 1e-15);
  }
}

TEST(Realize, RejectsLargeRings) { EXPECT_THROW(realize(Poly(Kind::Real), kRealizeCap + 1), InvalidInput); }

TEST(SeedBracket, MatchesDenseOracle) {
  std::mt19937_64 rng(23);
  for (int n : {4, 5, 6}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Poly f = kgtest::random_seed(rng), g = kgtest::random_seed(rng);
      const auto oracle = kgtest::bracket(kgtest::dense_realize(f, n), kgtest::dense_realize(g, n));
      EXPECT_LE(kgtest::max_diff(kgtest::dense_realize(seed_bracket(f, g), n), oracle), 1e-12);
      const Poly bound = seed_bracket(bind(f, n), bind(g, n));
      EXPECT_EQ(bound.n(), n);
      EXPECT_LE(kgtest::max_diff(kgtest::dense_realize(bound, n), oracle), 1e-12) << "n = " << n;
    }
  }
}

TEST(SeedBracket, ConfigurationSeedsCommute) {
  Poly f(Kind::Real), g(Kind::Real);
  f.add(Monomial::single(0, 2, 0), 1.0);
  g.add(mono({{0, 1, 0}, {3, 1, 0}}), 1.0);
  EXPECT_TRUE(seed_bracket(f, g).empty());
}

TEST(SeedBracket, HarmonicPartCommutesWithZeta0) {
  const LinearNF lnf = linear_normalize(0.05, 8);
  const Poly b = seed_bracket(lnf.h_omega, lnf.zeta0);
  EXPECT_LE(realize(b, 8).max_abs(), 1e-12);
}

TEST(SeedBracket, SeedResultIsLeftAligned) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly b = seed_bracket(kgtest::random_seed(rng), kgtest::random_seed(rng));
    EXPECT_TRUE(b.empty() || support_info(b).left_aligned);
  }
}

TEST(SymmetricAlign, Example) {
  Poly f(Kind::Real);
  f.add(mono({{0, 1, 0}, {3, 1, 0}}), 1.0);
  const Poly g = symmetric_align(f, 8);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.coeff(mono({{0, 1, 0}, {5, 1, 0}})), cplx(1.0));
  EXPECT_EQ(symmetric_decompose(g).begin()->first, 3);
  EXPECT_LE(max_coeff_diff(realize(g, 8), realize(f, 8)), 0.0);
}

TEST(SymmetricAlign, PreservesRealization) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const Poly f = kgtest::random_seed(rng, 4, 5);
    EXPECT_LE(max_coeff_diff(realize(symmetric_align(f, 9), 9), realize(f, 9)), 1e-14);
  }
}

TEST(FieldSeed, Examples) {
  const double omega = 1.3;
  Poly h(Kind::Real);
  h.add(Monomial::single(0, 2, 0), omega / 2);
  h.add(Monomial::single(0, 0, 2), omega / 2);
  const FieldSeed fs = field_seed(h);
  EXPECT_EQ(fs.x1.coeff(Monomial::single(0, 0, 1)), cplx(omega));
  EXPECT_EQ(fs.xn1.coeff(Monomial::single(0, 1, 0)), cplx(-omega));
  EXPECT_DOUBLE_EQ(field_norm(fs, 0.3), 2.0 * omega * 0.3);

  Poly q(Kind::Real);
  q.add(Monomial::single(0, 4, 0), 0.25);
  EXPECT_DOUBLE_EQ(field_norm(field_seed(q), 0.5), 0.125);
}

TEST(FieldSeed, ShiftLawAndDenseField) {
  // component j of X_F is tau^{-j} of the seed component
  std::mt19937_64 rng(26);
  const int n = 6;
  for (int trial = 0; trial < 20; ++trial) {
    const Poly f = kgtest::random_seed(rng, 4, 2);
    const FieldSeed fs = field_seed(f);
    const auto F = kgtest::dense_realize(f, n);
    for (int j = 0; j < n; ++j) {
      const auto Xj = kgtest::derivative(F, n + j);
      const auto Xnj = kgtest::derivative(F, j).scaled(-1.0);
      EXPECT_LE(kgtest::max_diff(kgtest::dense_from(cyclic_shift(fs.x1, -j), n), Xj), 1e-12);
      EXPECT_LE(kgtest::max_diff(kgtest::dense_from(cyclic_shift(fs.xn1, -j), n), Xnj), 1e-12);
    }
    const auto z = kgtest::random_vector(rng, 2 * n);
    const auto v = field_eval(f, z, n);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(v[j], kgtest::eval(kgtest::derivative(F, n + j), z), 1e-11);
      EXPECT_NEAR(v[n + j], -kgtest::eval(kgtest::derivative(F, j), z), 1e-11);
    }
    EXPECT_NEAR(evaluate_cyclic(f, z, n), kgtest::eval(F, z), 1e-11);
  }
}

TEST(FieldSeed, OperatorBoundOnSamples) {
  std::mt19937_64 rng(27);
  const int n = 7;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const Poly f = kgtest::random_homogeneous(rng, d, 3);
    const double c = field_norm(field_seed(f), 1.0);
    for (int k = 0; k < 50; ++k) {
      const auto z = kgtest::random_vector(rng, 2 * n);
      const auto v = field_eval(f, z, n);
      EXPECT_LE(kgtest::norm2(v), c * std::pow(kgtest::norm2(z), d - 1) * (1.0 + 1e-12));
      EXPECT_LE(kgtest::norm_inf(v), c * std::pow(kgtest::norm_inf(z), d - 1) * (1.0 + 1e-12));
    }
  }
}
