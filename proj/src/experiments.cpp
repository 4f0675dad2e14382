#include "mubforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mubforge/bases.hpp"
#include "mubforge/error.hpp"
#include "mubforge/parallel.hpp"
#include "mubforge/seesaw.hpp"

namespace mubforge {

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t k) {
  return CounterRng(seed).substream(k)();
}

std::vector<Sample> monte_carlo(int n, int d, int count, std::uint64_t seed,
                                unsigned threads) {
  if (count < 1) throw ContractError("monte_carlo needs count >= 1");
  if (n < 2 || d < 2) throw ContractError("monte_carlo needs n >= 2 and d >= 2");
  std::vector<Sample> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), std::max(1u, threads), [&](std::size_t k) {
    const std::uint64_t s = sample_seed(seed, k);
    const BasisSet set = random_start(n, d, s);
    out[k] = {pbar(set), avg_distance_sq(set), s};
  });
  return out;
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw ContractError("spearman: inputs have different lengths (" +
                        std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + ")");
  if (xs.size() < 2) throw ContractError("spearman needs at least two values");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double mean = 0.5 * static_cast<double>(xs.size() + 1);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double a = rx[k] - mean, b = ry[k] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw NumericalError("spearman: constant input, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::vector<double> edges(double lo, double hi, int bins) {
  if (hi <= lo) {
    const double pad = std::max(1e-12, std::abs(lo) * 1e-12);
    lo -= pad;
    hi += pad;
  }
  std::vector<double> e(static_cast<std::size_t>(bins + 1));
  for (int k = 0; k <= bins; ++k) e[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / bins;
  e.back() = hi;
  return e;
}

int bin_of(double v, const std::vector<double>& e) {
  const int bins = static_cast<int>(e.size()) - 1;
  const auto it = std::upper_bound(e.begin(), e.end(), v);
  return std::clamp(static_cast<int>(it - e.begin()) - 1, 0, bins - 1);
}

}  // namespace

DensityGrid density_grid(const std::vector<Sample>& samples, int bins_x, int bins_y) {
  if (samples.empty()) throw ContractError("density_grid needs at least one sample");
  if (bins_x < 1 || bins_y < 1) throw ContractError("density_grid needs positive bin counts");
  const auto [xmin, xmax] = std::minmax_element(samples.begin(), samples.end(),
                                                [](const Sample& a, const Sample& b) { return a.pbar < b.pbar; });
  const auto [ymin, ymax] = std::minmax_element(samples.begin(), samples.end(),
                                                [](const Sample& a, const Sample& b) { return a.dbar_sq < b.dbar_sq; });
  DensityGrid g;
  g.x_edges = edges(xmin->pbar, xmax->pbar, bins_x);
  g.y_edges = edges(ymin->dbar_sq, ymax->dbar_sq, bins_y);
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(bins_x),
                                                 std::vector<std::uint64_t>(static_cast<std::size_t>(bins_y), 0));
  for (const auto& s : samples)
    ++counts[static_cast<std::size_t>(bin_of(s.pbar, g.x_edges))]
            [static_cast<std::size_t>(bin_of(s.dbar_sq, g.y_edges))];
  const double total = static_cast<double>(samples.size());
  g.cells.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (auto c : counts[i]) g.cells[i].push_back(static_cast<double>(c) / total);
  return g;
}

std::string samples_csv(const std::vector<Sample>& samples) {
  std::ostringstream os;
  os.precision(17);
  os << "seed,pbar,dbar_sq\n";
  for (const auto& s : samples) os << s.seed << ',' << s.pbar << ',' << s.dbar_sq << '\n';
  return os.str();
}

std::string grid_csv(const DensityGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "x_lo,x_hi";
  for (double e : grid.y_edges) os << ',' << e;
  os << '\n';
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    os << grid.x_edges[i] << ',' << grid.x_edges[i + 1];
    for (double c : grid.cells[i]) os << ',' << c;
    os << '\n';
  }
  return os.str();
}

}  // namespace mubforge
