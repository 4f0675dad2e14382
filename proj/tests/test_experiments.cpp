#include <gtest/gtest.h>

#include <cmath>

#include "mubforge/bases.hpp"
#include "mubforge/error.hpp"
#include "mubforge/experiments.hpp"

using namespace mubforge;

TEST(Spearman, Examples) {
  const std::vector<double> xs{0.3, 1.5, -2.0, 4.0, 0.9};
  EXPECT_NEAR(spearman(xs, xs), 1.0, 1e-15);
  std::vector<double> ys(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = -xs[k];
  EXPECT_NEAR(spearman(xs, ys), -1.0, 1e-15);
}

TEST(Spearman, AverageRanksForTies) {
  const auto r = average_ranks({10.0, 20.0, 10.0, 30.0});
  EXPECT_EQ(r, (std::vector<double>{1.5, 3.0, 1.5, 4.0}));
  // Pearson correlation of the average ranks, worked by hand.
  const double rho = spearman({1, 2, 2, 3}, {1, 2, 3, 4});
  EXPECT_NEAR(rho, 4.5 / std::sqrt(4.5 * 5.0), 1e-14);
}

TEST(Spearman, InvariantUnderMonotoneMaps) {
  CounterRng rng(8);
  std::vector<double> xs, ys;
  for (int k = 0; k < 200; ++k) {
    const double x = rng.uniform();
    xs.push_back(x);
    ys.push_back(x + 0.5 * rng.uniform());
  }
  const double rho = spearman(xs, ys);
  std::vector<double> fx, fy;
  for (double x : xs) fx.push_back(std::exp(3 * x) - 7);
  for (double y : ys) fy.push_back(std::cbrt(y));
  EXPECT_EQ(spearman(fx, fy), rho);
  EXPECT_GT(rho, 0.5);
}

TEST(Spearman, Errors) {
  EXPECT_THROW(spearman({1, 2}, {1, 2, 3}), ContractError);
  EXPECT_THROW(spearman({1}, {1}), ContractError);
  EXPECT_THROW(spearman({1, 1, 1}, {1, 2, 3}), NumericalError);
}

TEST(DensityGrid, SingleSample) {
  const auto g = density_grid({{0.8, 0.9, 1}}, 5, 4);
  ASSERT_EQ(g.x_edges.size(), 6u);
  ASSERT_EQ(g.y_edges.size(), 5u);
  int nonzero = 0;
  for (const auto& row : g.cells)
    for (double c : row)
      if (c != 0.0) {
        ++nonzero;
        EXPECT_EQ(c, 1.0);
      }
  EXPECT_EQ(nonzero, 1);
}

TEST(DensityGrid, MassAndUniformity) {
  CounterRng rng(4);
  std::vector<Sample> s;
  for (int k = 0; k < 40000; ++k) s.push_back({rng.uniform(), rng.uniform(), 0});
  const auto g = density_grid(s, 10, 10);
  double mass = 0.0, chi2 = 0.0;
  const double expected = 0.01;
  for (const auto& row : g.cells)
    for (double c : row) {
      mass += c;
      chi2 += (c - expected) * (c - expected) / expected * 40000;
    }
  EXPECT_NEAR(mass, 1.0, 1e-12);
  // 99 degrees of freedom; very loose sanity bound.
  EXPECT_LT(chi2, 200.0);
  EXPECT_THROW(density_grid({}), ContractError);
}

TEST(MonteCarlo, ReproducibleAndBounded) {
  const auto a = monte_carlo(2, 2, 200, 17);
  const auto b = monte_carlo(2, 2, 200, 17, 4);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].pbar, b[k].pbar);
    EXPECT_EQ(a[k].dbar_sq, b[k].dbar_sq);
    EXPECT_EQ(a[k].seed, sample_seed(17, k));
    EXPECT_LE(a[k].pbar, (2 + std::sqrt(2.0)) / 4 + 1e-9);
    EXPECT_GE(a[k].pbar, 0.75 - 1e-9);
  }
  const auto one = monte_carlo(4, 6, 1, 3);
  EXPECT_EQ(one[0].pbar, monte_carlo(4, 6, 1, 3)[0].pbar);
  EXPECT_THROW(monte_carlo(4, 6, 0, 3), ContractError);
}

TEST(MonteCarlo, PositiveCorrelationInDimensionSix) {
  const auto s = monte_carlo(4, 6, 2000, 1);
  std::vector<double> p, q;
  for (const auto& x : s) {
    p.push_back(x.pbar);
    q.push_back(x.dbar_sq);
    EXPECT_LE(x.pbar, 0.5 * (1 + 1 / std::sqrt(6.0)) + 1e-9);
    EXPECT_GE(x.pbar, 0.5 * (1 + 1 / 6.0) - 1e-9);
  }
  EXPECT_GT(spearman(p, q), 0.8);
}

TEST(Csv, Headers) {
  const std::vector<Sample> s{{0.8, 0.9, 5}, {0.81, 0.92, 6}};
  const std::string csv = samples_csv(s);
  EXPECT_EQ(csv.rfind("seed,pbar,dbar_sq\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const std::string grid = grid_csv(density_grid(s, 3, 3));
  EXPECT_EQ(grid.rfind("x_lo,x_hi", 0), 0u);
  EXPECT_EQ(std::count(grid.begin(), grid.end(), '\n'), 4);
}
