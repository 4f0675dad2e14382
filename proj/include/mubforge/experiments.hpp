#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mubforge {

struct Sample {
  double pbar = 0.0;
  double dbar_sq = 0.0;
  std::uint64_t seed = 0;  ///< per-sample seed; regenerates the bases alone
};

/// Seed of sample k in a run with master seed `seed`.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t k);

/// `count` sets of n random bases; sample k uses sample_seed(seed, k).
std::vector<Sample> monte_carlo(int n, int d, int count, std::uint64_t seed,
                                unsigned threads = 1);

/// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& xs);

/// Spearman rank correlation. Throws ContractError on length mismatch or
/// fewer than two values, NumericalError when either rank vector is constant.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct DensityGrid {
  std::vector<double> x_edges;  ///< bins_x + 1 values
  std::vector<double> y_edges;  ///< bins_y + 1 values
  /// cells[i][j]: relative frequency of x bin i, y bin j.
  std::vector<std::vector<double>> cells;
};

/// 2D histogram of (pbar, dbar_sq) over the observed range, normalized to
/// relative frequencies. The top edge is inclusive.
DensityGrid density_grid(const std::vector<Sample>& samples, int bins_x = 50,
                         int bins_y = 50);

/// "seed,pbar,dbar_sq" header plus one line per sample.
std::string samples_csv(const std::vector<Sample>& samples);
/// Header "x_lo,x_hi,<y edges...>" then one row per x bin.
std::string grid_csv(const DensityGrid& grid);

}  // namespace mubforge
