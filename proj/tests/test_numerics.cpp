#include <gtest/gtest.h>

#include <cmath>

#include "mubforge/error.hpp"
#include "mubforge/numerics.hpp"

using namespace mubforge;

namespace {

CMatrix random_hermitian(int d, std::uint64_t seed) {
  const CMatrix g = ginibre_uniform(d, seed);
  return (g + g.adjoint()) * 0.5;
}

CMatrix rank_one(const CVector& v) { return v * v.adjoint(); }

double poly(double a2, double a1, double a0, double x) {
  return -x * x * x + a2 * x * x + a1 * x + a0;
}

}  // namespace

TEST(HermitianEig, IdentityHasUnitSpectrum) {
  const auto e = hermitian_eig(CMatrix::Identity(3, 3));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], 1.0, 1e-14);
}

TEST(HermitianEig, ZeroPlusProjectorPair) {
  CVector zero(2), plus(2);
  zero << 1.0, 0.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto e = hermitian_eig(rank_one(zero) + rank_one(plus));
  EXPECT_NEAR(e.values[0], 1.0 - 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(e.values[1], 1.0 + 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(HermitianEig, ReconstructionAndUnitarity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix h = random_hermitian(6, seed);
    const auto e = hermitian_eig(h);
    const CMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((back - h).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((e.vectors.adjoint() * e.vectors - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
    for (int k = 0; k + 1 < 6; ++k) EXPECT_LE(e.values[k], e.values[k + 1]);
  }
}

TEST(HermitianEig, EigenvalueSumIsTrace) {
  for (int d = 1; d <= 12; ++d) {
    const CMatrix h = random_hermitian(d, 100 + static_cast<std::uint64_t>(d));
    const double tr = h.trace().real();
    EXPECT_NEAR(hermitian_eig(h).values.sum(), tr, 1e-9 * std::max(1.0, std::abs(tr)));
  }
}

TEST(HermitianEig, RejectsBadInput) {
  EXPECT_THROW(hermitian_eig(CMatrix::Zero(2, 3)), ContractError);
  CMatrix h = CMatrix::Identity(2, 2);
  h(0, 1) = Complex(0.5, 0.0);
  EXPECT_THROW(hermitian_eig(h), ContractError);
  EXPECT_THROW(max_eig(h), ContractError);
}

TEST(MaxEig, DiagonalMatrix) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = 1;
  h(1, 1) = 2;
  h(2, 2) = 3;
  const auto top = max_eig(h);
  EXPECT_NEAR(top.value, 3.0, 1e-14);
  EXPECT_NEAR(std::abs(top.vector(2)), 1.0, 1e-12);
  EXPECT_NEAR(top.vector(2).imag(), 0.0, 1e-14);
  EXPECT_GT(top.vector(2).real(), 0.0);
}

TEST(MaxEig, TwoProjectorsGiveOnePlusOverlap) {
  CounterRng rng(7);
  for (int d = 2; d <= 6; ++d) {
    const CVector a = random_state(d, rng), b = random_state(d, rng);
    const double alpha = std::abs(a.dot(b));
    EXPECT_NEAR(max_eig(rank_one(a) + rank_one(b)).value, 1.0 + alpha, 1e-12);
  }
}

TEST(MaxEig, DegenerateIsDeterministicAndUnit) {
  const auto a = max_eig(CMatrix::Identity(4, 4));
  const auto b = max_eig(CMatrix::Identity(4, 4));
  EXPECT_NEAR(a.value, 1.0, 1e-14);
  EXPECT_NEAR(a.vector.norm(), 1.0, 1e-14);
  EXPECT_EQ(a.vector, b.vector);
}

TEST(MaxEig, VectorIsTopEigenvector) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix h = random_hermitian(5, seed);
    const auto top = max_eig(h);
    EXPECT_NEAR(top.vector.norm(), 1.0, 1e-12);
    EXPECT_LE((h * top.vector - top.value * top.vector).norm(), 1e-9);
  }
}

TEST(Rng, DeterministicAndSubstreamsDiffer) {
  CounterRng a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
  const CounterRng root(42);
  EXPECT_NE(root.substream(0)(), root.substream(1)());
  EXPECT_EQ(root.substream(3)(), root.substream(3)());
  CounterRng c(42);
  for (int k = 0; k < 1000; ++k) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Ginibre, SingleEntryInUnitSquare) {
  const CMatrix g = ginibre_uniform(1, 5);
  ASSERT_EQ(g.rows(), 1);
  EXPECT_GE(g(0, 0).real(), 0.0);
  EXPECT_LE(g(0, 0).real(), 1.0);
  EXPECT_GE(g(0, 0).imag(), 0.0);
  EXPECT_LE(g(0, 0).imag(), 1.0);
}

TEST(Ginibre, RepeatableFromSeed) {
  EXPECT_EQ(ginibre_uniform(6, 11), ginibre_uniform(6, 11));
  EXPECT_NE(ginibre_uniform(6, 11), ginibre_uniform(6, 12));
}

TEST(Ginibre, EmpiricalMean) {
  CounterRng rng(2024);
  Complex sum = 0.0;
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) sum += ginibre_uniform(1, rng)(0, 0);
  sum /= static_cast<double>(samples);
  EXPECT_NEAR(sum.real(), 0.5, 0.01);
  EXPECT_NEAR(sum.imag(), 0.5, 0.01);
}

TEST(RandomUnitary, UnitaryForManySeeds) {
  for (int d = 1; d <= 16; ++d)
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const CMatrix u = random_unitary(d, seed);
      ASSERT_LE((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10)
          << "d=" << d << " seed=" << seed;
    }
}

TEST(RandomUnitary, BitwiseStable) {
  EXPECT_EQ(random_unitary(5, 99), random_unitary(5, 99));
}

TEST(RandomUnitary, OverlapWithComputationalBasis) {
  CounterRng rng(31);
  double sum = 0.0;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) sum += std::norm(random_unitary(2, rng)(0, 0));
  EXPECT_NEAR(sum / draws, 0.5, 0.02);
}

TEST(SpanTracker, RepeatedIdentity) {
  SpanTracker t(3);
  EXPECT_TRUE(t.insert(RMatrix::Identity(3, 3)));
  EXPECT_FALSE(t.insert(RMatrix::Identity(3, 3)));
  EXPECT_EQ(t.dimension(), 1);
}

TEST(SpanTracker, DistinctDiagonalUnits) {
  SpanTracker t(3);
  RMatrix e1 = RMatrix::Zero(3, 3), e2 = RMatrix::Zero(3, 3);
  e1(0, 0) = 1;
  e2(1, 1) = 1;
  EXPECT_TRUE(t.insert(e1));
  EXPECT_TRUE(t.insert(e2));
}

TEST(SpanTracker, SaturatesAndStaysOrthonormal) {
  for (int d = 1; d <= 6; ++d) {
    SpanTracker t(d);
    CounterRng rng(static_cast<std::uint64_t>(d));
    std::vector<RMatrix> inserted;
    for (int k = 0; k < d * (d + 1); ++k) {
      RMatrix m(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = rng.uniform() - 0.5;
      m = (m + m.transpose()).eval();
      t.insert(m);
      inserted.push_back(m);
    }
    EXPECT_EQ(t.dimension(), d * (d + 1) / 2);
    const auto& v = t.basis_vectors();
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = 0; b < v.size(); ++b)
        EXPECT_NEAR(v[a].dot(v[b]), a == b ? 1.0 : 0.0, 1e-10);
    for (const auto& m : inserted) EXPECT_FALSE(t.insert(m));
  }
}

TEST(SpanTracker, VectorizeRoundTripAndMismatch) {
  SpanTracker t(4);
  RMatrix m = RMatrix::Random(4, 4);
  m = (m + m.transpose()).eval();
  EXPECT_LE((t.unvectorize(t.vectorize(m)) - m).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(t.vectorize(m).norm(), m.norm(), 1e-12);
  EXPECT_THROW(t.insert(RMatrix::Identity(3, 3)), ContractError);
}

TEST(Cubic, TripleRoot) {
  // (x - 1)^3 = x^3 - 3x^2 + 3x - 1, negated.
  const auto r = cubic_real_roots(3.0, -3.0, 1.0);
  for (double x : r) EXPECT_NEAR(x, 1.0, 1e-5);
}

TEST(Cubic, RootsSatisfyPolynomialAndDescend) {
  CounterRng rng(3);
  for (int k = 0; k < 200; ++k) {
    const double r1 = rng.uniform() * 4 - 2, r2 = rng.uniform() * 4 - 2, r3 = rng.uniform() * 4 - 2;
    const double a2 = r1 + r2 + r3, a1 = -(r1 * r2 + r1 * r3 + r2 * r3), a0 = r1 * r2 * r3;
    const auto r = cubic_real_roots(a2, a1, a0);
    EXPECT_GE(r[0], r[1]);
    EXPECT_GE(r[1], r[2]);
    for (double x : r) EXPECT_LE(std::abs(poly(a2, a1, a0, x)), 1e-9 * (1 + std::abs(x * x * x)));
  }
}

TEST(Cubic, QubitMubProjectorsMatchEigensolver) {
  const double s = 1.0 / std::sqrt(2.0);
  CVector z(2), p(2), c(2);
  z << 1.0, 0.0;
  p << s, s;
  c << s, Complex(0.0, s);
  const CMatrix h = rank_one(z) + rank_one(p) + rank_one(c);
  // Characteristic polynomial of a 2x2 h written as a cubic with root 0.
  const double tr = h.trace().real(), det = h.determinant().real();
  const auto r = cubic_real_roots(tr, -det, 0.0);
  const auto e = hermitian_eig(h);
  EXPECT_NEAR(r[0], e.values[1], 1e-9);
  EXPECT_NEAR(r[1], e.values[0], 1e-9);
  EXPECT_NEAR(r[2], 0.0, 1e-9);
}

TEST(Cubic, RankThreeSumsAgreeWithEigensolver) {
  for (int d = 3; d <= 8; ++d) {
    CounterRng rng(500 + static_cast<std::uint64_t>(d));
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const CVector a = random_state(d, rng), b = random_state(d, rng), c = random_state(d, rng);
      const double ab = std::norm(a.dot(b)), ac = std::norm(a.dot(c)), bc = std::norm(b.dot(c));
      const double m = ab + ac + bc - 3.0;
      const double n = 1.0 - ab - ac - bc + 2.0 * (a.dot(b) * b.dot(c) * c.dot(a)).real();
      const auto r = cubic_real_roots(3.0, m, n);
      const auto e = hermitian_eig(rank_one(a) + rank_one(b) + rank_one(c));
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(r[static_cast<std::size_t>(j)] - e.values[d - 1 - j]));
    }
    EXPECT_LE(worst, 1e-8) << "d=" << d;
  }
}

TEST(PairwiseSum, MatchesAndIsOrderShapeFixed) {
  EXPECT_EQ(pairwise_sum({}), 0.0);
  EXPECT_EQ(pairwise_sum({2.5}), 2.5);
  std::vector<double> v;
  for (int k = 1; k <= 1000; ++k) v.push_back(1.0 / k);
  double naive = 0.0;
  for (double x : v) naive += x;
  EXPECT_NEAR(pairwise_sum(v), naive, 1e-12);
  EXPECT_EQ(pairwise_sum(v), pairwise_sum(v));
}
