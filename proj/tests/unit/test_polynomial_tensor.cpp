#include <gtest/gtest.h>

#include "oracles.hpp"
#include "subjet/errors.hpp"
#include "subjet/lagrangian.hpp"
#include "subjet/polynomial.hpp"
#include "subjet/sampling.hpp"
#include "subjet/tensor_field.hpp"

using namespace subjet;

TEST(Polynomial, MergesDuplicateExponents) {
  Polynomial p(2);
  p.add_term(1.5, {1, 0});
  p.add_term(2.0, {1, 0});
  p.add_term(1.0, {0, 2});
  p.add_term(-1.0, {0, 2});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(p.terms().at({1, 0}), 3.5);
}

TEST(Polynomial, EvaluatesAndDifferentiatesExactly) {
  // p = 2 x^2 y - 3 y + 1
  Polynomial p(2);
  p.add_term(2.0, {2, 1});
  p.add_term(-3.0, {0, 1});
  p.add_term(1.0, {0, 0});
  Vec q(2);
  q << 1.5, -2.0;
  EXPECT_DOUBLE_EQ(p(q), 2.0 * 2.25 * -2.0 + 6.0 + 1.0);
  EXPECT_DOUBLE_EQ(p.derivative(0)(q), 4.0 * 1.5 * -2.0);
  EXPECT_DOUBLE_EQ(p.derivative(1)(q), 2.0 * 2.25 - 3.0);
  EXPECT_TRUE(p.derivative(0).derivative(0).derivative(0).is_zero());
  EXPECT_EQ(p.total_degree(), 3u);
}

TEST(Polynomial, RejectsWrongExponentLength) {
  Polynomial p(3);
  EXPECT_THROW(p.add_term(1.0, {1, 0}), InvalidArgument);
}

TEST(Polynomial, ProductMatchesPointwiseProduct) {
  SampleStream rng(7, 0);
  const auto a = random_polynomial(rng, 3, 1.0, 2);
  const auto b = random_polynomial(rng, 3, 1.0, 2);
  const Vec q = rng.uniform_vector(3, -1, 1);
  EXPECT_NEAR((a * b)(q), a(q) * b(q), 1e-13);
}

TEST(SymmetricTensorField, StorageIsSymmetric) {
  SymmetricTensorField g(3, 2);
  g.set({2, 0}, 4.0);
  Vec q = Vec::Zero(3);
  EXPECT_DOUBLE_EQ(g.value({0, 2}, as_span(q)), 4.0);
  EXPECT_DOUBLE_EQ(g.value({2, 0}, as_span(q)), 4.0);
  EXPECT_EQ(g.entries().size(), 1u);
  EXPECT_DOUBLE_EQ(g.entries().begin()->second.multiplicity, 2.0);
}

TEST(SymmetricTensorField, RejectsOddOrZeroDegree) {
  EXPECT_THROW(SymmetricTensorField(4, 3), InvalidArgument);
  EXPECT_THROW(SymmetricTensorField(4, 0), InvalidArgument);
  SymmetricTensorField g(4, 2);
  EXPECT_THROW(g.set({0, 1, 2}, 1.0), InvalidArgument);
  EXPECT_THROW(g.set({0, 4}, 1.0), InvalidArgument);
}

TEST(EvalG, MinkowskiExamples) {
  const auto eta = catalog::minkowski(4);
  const Vec q = Vec::Zero(4);
  EXPECT_DOUBLE_EQ(eval_G(eta, q, (Vec(4) << 1, 0, 0, 0).finished()), 1.0);
  EXPECT_DOUBLE_EQ(eval_G(eta, q, (Vec(4) << 2, 1, 0, 0).finished()), 3.0);
}

TEST(EvalG, QuarticIsSquareOfMinkowski) {
  const auto g4 = catalog::quartic_eta2(4);
  const Vec q = Vec::Zero(4);
  const Vec v = (Vec(4) << 2, 1, 0, 0).finished();
  EXPECT_NEAR(eval_G(g4, q, v), 9.0, 1e-13);
  EXPECT_NEAR(oracle::brute_force_G(g4, q, v), 9.0, 1e-13);
}

TEST(EvalG, MatchesBruteForceOnRandomFields) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    SampleStream rng(11, i);
    const auto base = i % 2 == 0 ? catalog::minkowski(4) : catalog::quartic_eta2(4);
    const auto g = random_tensor_field(rng, base, 0.2, 2);
    const Vec q = rng.uniform_vector(4, -1, 1);
    const Vec v = rng.uniform_vector(4, -1, 1);
    const double expected = oracle::brute_force_G(g, q, v);
    EXPECT_NEAR(eval_G(g, q, v), expected, 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST(EvalG, HomogeneousOfDegree2N) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    SampleStream rng(12, i);
    const auto base = i % 2 == 0 ? catalog::minkowski(4) : catalog::quartic_eta2(4);
    const auto g = random_tensor_field(rng, base, 0.2, 2);
    const Vec q = rng.uniform_vector(4, -1, 1);
    const Vec v = rng.uniform_vector(4, -1, 1);
    const double r = rng.uniform(-3, 3);
    const double lhs = eval_G(g, q, r * v);
    const double rhs = std::pow(r, static_cast<double>(g.degree())) * eval_G(g, q, v);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(FieldStrength, ExactlyAntisymmetric) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    SampleStream rng(13, i);
    const auto a = random_one_form(rng, 4, 1.0, 3);
    const FieldStrength f(a);
    const Mat fq = f.evaluate(rng.uniform_vector(4, -2, 2));
    EXPECT_TRUE((fq + fq.transpose()).isZero(0.0));
  }
}

TEST(FieldStrength, UniformFieldRecoversF) {
  const Mat f = oracle::magnetic_f12();
  const FieldStrength fs(catalog::uniform_field(f));
  EXPECT_TRUE((fs.evaluate(Vec::Random(4)) - f).isZero(1e-15));
  EXPECT_FALSE(fs.vanishes());
  EXPECT_TRUE(FieldStrength(catalog::constant_form(Vec::Ones(4))).vanishes());
}

TEST(FieldStrength, UniformFieldRejectsSymmetricInput) {
  EXPECT_THROW(catalog::uniform_field(Mat::Identity(4, 4)), InvalidArgument);
}
