#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mubforge/bases.hpp"
#include "mubforge/sdp.hpp"

using namespace mubforge;

namespace {

// max tr(C X) s.t. tr X = 1, X >= 0 over an orthonormal symmetric basis.
LmiProblem lambda_max_problem(const RMatrix& c) {
  const int n = static_cast<int>(c.rows());
  LmiProblem p;
  std::vector<double> obj, eq;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<Eigen::Triplet<double>> t;
      if (i == j) {
        t.emplace_back(i, i, 1.0);
        obj.push_back(c(i, i));
        eq.push_back(1.0);
      } else {
        t.emplace_back(i, j, s);
        t.emplace_back(j, i, s);
        obj.push_back(2 * s * c(i, j));
        eq.push_back(0.0);
      }
      p.terms.push_back(LmiTerm::sparse(n, t));
    }
  const int v = static_cast<int>(obj.size());
  p.objective = Eigen::Map<RVector>(obj.data(), v);
  p.eq_lhs = Eigen::Map<RVector>(eq.data(), v).transpose();
  p.eq_rhs = RVector::Ones(1);
  return p;
}

RMatrix random_symmetric(int n, CounterRng& rng) {
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 2 * rng.uniform() - 1;
  return (m + m.transpose()) * 0.5;
}

double top_eigenvalue(const RMatrix& c) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(LmiTerm, DenseAndSparseAgree) {
  RMatrix f = RMatrix::Zero(3, 3);
  f(0, 1) = f(1, 0) = 2.0;
  f(2, 2) = -1.0;
  const LmiTerm dense(f);
  const LmiTerm sparse = LmiTerm::sparse(3, {{0, 1, 2.0}, {1, 0, 2.0}, {2, 2, -1.0}});
  EXPECT_EQ(sparse.to_dense(), f);
  RMatrix m = RMatrix::Identity(3, 3);
  m(0, 1) = m(1, 0) = 0.5;
  EXPECT_DOUBLE_EQ(dense.trace_with(m), sparse.trace_with(m));
  RMatrix a = RMatrix::Zero(3, 3), b = RMatrix::Zero(3, 3);
  dense.add_to(a, 0.5);
  sparse.add_to(b, 0.5);
  EXPECT_EQ(a, b);
}

TEST(SolveLmi, ScalarToy) {
  // maximize lambda s.t. 1 * I - lambda * I >= 0, with y_0 fixed to 1.
  LmiProblem p;
  p.terms.emplace_back(RMatrix::Identity(2, 2));
  p.terms.emplace_back(-RMatrix::Identity(2, 2));
  p.objective = RVector::Zero(2);
  p.objective(1) = 1.0;
  p.eq_lhs = RMatrix::Zero(1, 2);
  p.eq_lhs(0, 0) = 1.0;
  p.eq_rhs = RVector::Ones(1);
  const auto s = solve_lmi(p);
  EXPECT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-7);
  EXPECT_NEAR(s.y(0), 1.0, 1e-12);
}

TEST(SolveLmi, LambdaMaxEncoding) {
  CounterRng rng(12);
  for (int n : {2, 3, 5, 8, 12}) {
    const RMatrix c = random_symmetric(n, rng);
    const auto s = solve_lmi(lambda_max_problem(c));
    EXPECT_EQ(s.status, SdpStatus::optimal);
    EXPECT_NEAR(s.objective, top_eigenvalue(c), 1e-7) << "N=" << n;
    EXPECT_GE(s.dual_bound, s.objective - 1e-12);
    EXPECT_LE(s.gap, 1e-8);
  }
}

TEST(SolveLmi, WeakDualityAlongPath) {
  CounterRng rng(99);
  const auto s = solve_lmi(lambda_max_problem(random_symmetric(6, rng)));
  ASSERT_FALSE(s.history.empty());
  for (const auto& h : s.history) EXPECT_LE(h.primal, h.dual + 1e-9);
}

TEST(SolveLmi, DualMatrixIsPsd) {
  CounterRng rng(5);
  const RMatrix c = random_symmetric(5, rng);
  const auto s = solve_lmi(lambda_max_problem(c));
  ASSERT_EQ(s.dual_matrix.rows(), 5);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(s.dual_matrix, Eigen::EigenvaluesOnly);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
}

TEST(SolveLmi, UsesGivenStart) {
  CounterRng rng(8);
  LmiProblem p = lambda_max_problem(random_symmetric(4, rng));
  RVector y = RVector::Zero(p.variables());
  // Identity / 4 in coordinates: diagonal units carry 1/4.
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j, ++k)
      if (i == j) y(k) = 0.25;
  p.start = y;
  const double with_start = solve_lmi(p).objective;
  p.start.reset();
  EXPECT_NEAR(with_start, solve_lmi(p).objective, 1e-7);
}

TEST(SolveLmi, InfeasibleProblem) {
  RMatrix f = RMatrix::Zero(2, 2);
  f(0, 0) = 1.0;
  f(1, 1) = -1.0;
  LmiProblem p;
  p.terms.emplace_back(f);
  p.objective = RVector::Ones(1);
  p.eq_lhs = RMatrix::Zero(0, 1);
  p.eq_rhs = RVector::Zero(0);
  EXPECT_EQ(solve_lmi(p).status, SdpStatus::infeasible);
}

TEST(SolvePovm, ProjectorCosts) {
  const int d = 3;
  BlockSdpProblem p;
  for (int b = 0; b < d; ++b) {
    CMatrix s = CMatrix::Zero(d, d);
    s(b, b) = 1.0;
    p.costs.push_back(s);
  }
  const auto sol = solve_povm(p);
  EXPECT_EQ(sol.status, SdpStatus::optimal);
  // One unit per outcome.
  EXPECT_NEAR(sol.objective / d, 1.0, 1e-7);
  for (int b = 0; b < d; ++b) EXPECT_LE((sol.blocks[b] - p.costs[b]).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(SolvePovm, EqualCostsGiveTrace) {
  const CMatrix g = ginibre_uniform(4, 3);
  const CMatrix s = (g + g.adjoint()) * 0.5;
  BlockSdpProblem p{{s, s, s, s}};
  const auto sol = solve_povm(p);
  EXPECT_NEAR(sol.objective, s.trace().real(), 1e-7);
}

TEST(SolvePovm, CompletenessPsdAndScaling) {
  CounterRng rng(17);
  const int d = 4;
  BlockSdpProblem p;
  for (int b = 0; b < d; ++b) {
    const CMatrix g = ginibre_uniform(d, rng);
    p.costs.push_back((g + g.adjoint()) * 0.5);
  }
  const auto sol = solve_povm(p);
  CMatrix sum = CMatrix::Zero(d, d);
  double value = 0.0;
  for (int b = 0; b < d; ++b) {
    sum += sol.blocks[b];
    EXPECT_GE(min_eigenvalue(sol.blocks[b]), -1e-8);
    value += (p.costs[b] * sol.blocks[b]).trace().real();
  }
  EXPECT_LE((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_NEAR(value, sol.objective, 1e-7 * std::max(1.0, std::abs(value)));
  EXPECT_LE(sol.objective, sol.dual_bound + 1e-9);

  BlockSdpProblem scaled = p;
  for (auto& c : scaled.costs) c *= 7.5;
  const auto sol2 = solve_povm(scaled);
  EXPECT_NEAR(sol2.objective, 7.5 * sol.objective, 1e-6 * std::abs(sol2.objective));
  for (int b = 0; b < d; ++b) EXPECT_LE((sol2.blocks[b] - sol.blocks[b]).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SolvePovm, MubPairGameValue) {
  const int d = 3;
  const BasisSet f = mub_family(d);
  const Basis& e = f[0];
  const Basis& g = f[1];
  // Optimal encodings: normalized e_x0 + f_x1 with the phase fixing <e|f> >= 0.
  std::vector<CMatrix> rho(static_cast<std::size_t>(d * d));
  for (int x0 = 0; x0 < d; ++x0)
    for (int x1 = 0; x1 < d; ++x1) {
      const Complex ov = e.column(x0).dot(g.column(x1));
      const CVector v = (e.column(x0) + (std::conj(ov) / std::abs(ov)) * g.column(x1)).normalized();
      rho[static_cast<std::size_t>(x0 * d + x1)] = v * v.adjoint();
    }
  BlockSdpProblem p0, p1;
  for (int b = 0; b < d; ++b) {
    CMatrix s0 = CMatrix::Zero(d, d), s1 = CMatrix::Zero(d, d);
    for (int o = 0; o < d; ++o) {
      s0 += rho[static_cast<std::size_t>(b * d + o)];
      s1 += rho[static_cast<std::size_t>(o * d + b)];
    }
    p0.costs.push_back(s0);
    p1.costs.push_back(s1);
  }
  const double value = (solve_povm(p0).objective + solve_povm(p1).objective) / (2.0 * d * d);
  EXPECT_NEAR(value, 0.5 * (1 + 1 / std::sqrt(3.0)), 1e-6);
}

TEST(LmiDump, Format) {
  LmiProblem p;
  p.terms.emplace_back(RMatrix::Identity(2, 2));
  p.terms.push_back(LmiTerm::sparse(2, {{0, 1, 1.0}, {1, 0, 1.0}}));
  p.objective = RVector::Ones(2);
  p.eq_lhs = RMatrix::Zero(1, 2);
  p.eq_lhs(0, 0) = 1.0;
  p.eq_rhs = RVector::Ones(1);
  std::ostringstream os;
  write_lmi_dump(p, os);
  std::istringstream in(os.str());
  std::string tag;
  int n = 0, v = 0, rows = 0;
  in >> tag >> n >> v >> rows;
  EXPECT_EQ(tag, "lmi");
  EXPECT_EQ(n, 2);
  EXPECT_EQ(v, 2);
  EXPECT_EQ(rows, 1);
  EXPECT_NE(os.str().find("F 1"), std::string::npos);
  EXPECT_NE(os.str().find("eq "), std::string::npos);
}

TEST(Status, Names) {
  EXPECT_EQ(to_string(SdpStatus::optimal), "optimal");
  EXPECT_EQ(to_string(SdpStatus::max_iter), "max_iter");
  EXPECT_EQ(to_string(SdpStatus::infeasible), "infeasible");
}
