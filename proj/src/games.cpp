#include "mubforge/games.hpp"

#include <cmath>
#include <sstream>

#include "mubforge/error.hpp"

namespace mubforge {
namespace {

std::vector<std::vector<int>> combinations(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    out.push_back(pick);
    int i = m - 1;
    while (i >= 0 && pick[i] == n - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::uint64_t checked_power(int base, int exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / static_cast<std::uint64_t>(base)) return cap + 1;
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

// Decodes input index k into digits, first position slowest.
void decode_input(std::uint64_t k, int d, std::vector<int>& x) {
  for (int i = static_cast<int>(x.size()) - 1; i >= 0; --i) {
    x[i] = static_cast<int>(k % static_cast<std::uint64_t>(d));
    k /= static_cast<std::uint64_t>(d);
  }
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

PqracGame::PqracGame(int n_, int m_, int d_) : n(n_), m(m_), d(d_) {
  if (d < 1 || m < 1 || m > n)
    throw ContractError("pQRAC needs d >= 1 and 1 <= m <= n");
}

std::uint64_t PqracGame::subsets() const { return binomial(n, m); }

std::uint64_t PqracGame::state_count() const {
  std::uint64_t v = subsets();
  for (int i = 0; i < m; ++i) v *= static_cast<std::uint64_t>(d);
  return v;
}

std::uint64_t PqracGame::measurement_count() const {
  return static_cast<std::uint64_t>(n) * d;
}

double PqracGame::weight() const {
  return 1.0 / (static_cast<double>(state_count()) * m);
}

std::string input_label(int n, int m, int d, std::size_t k) {
  const std::uint64_t per_subset = checked_power(d, m, ~0ULL >> 1);
  const auto subsets = combinations(n, m);
  const auto& z = subsets.at(k / per_subset);
  std::vector<int> x(static_cast<std::size_t>(m));
  decode_input(k % per_subset, d, x);
  std::ostringstream os;
  os << "z=";
  for (int i = 0; i < m; ++i) os << (i ? "," : "") << z[i];
  os << ";x=";
  for (int i = 0; i < m; ++i) os << (i ? "," : "") << x[i];
  return os.str();
}

double pair_value(const Basis& b1, const Basis& b2) {
  const RMatrix alpha = overlap_moduli(b1, b2);
  const double d = b1.dim();
  return (d * d + alpha.sum()) / (2.0 * d * d);
}

double three_basis_lambda_max(const CVector& v1, const CVector& v2,
                              const CVector& v3) {
  if (v1.size() != v2.size() || v1.size() != v3.size())
    throw ContractError("vectors must share one dimension");
  const Complex g12 = v1.dot(v2), g13 = v1.dot(v3), g23 = v2.dot(v3);
  const double s12 = std::norm(g12), s13 = std::norm(g13), s23 = std::norm(g23);
  const double m = s12 + s13 + s23 - 3.0;
  // Gram determinant of three unit vectors.
  const double n = 1.0 + 2.0 * std::real(g12 * g23 * std::conj(g13)) - s12 - s13 - s23;
  return cubic_real_roots(3.0, m, n)[0];
}

GameValueReport qrac_value(const BasisSet& set, const EvaluationOptions& opts) {
  const int n = set.size();
  const int d = set.dim();
  const std::uint64_t inputs = checked_power(d, n, opts.cap);
  if (inputs > opts.cap)
    throw ResourceError("qrac_value: d^n = " + std::to_string(d) + "^" +
                        std::to_string(n) + " exceeds the evaluation cap of " +
                        std::to_string(opts.cap));

  GameValueReport report;
  report.weight = 1.0 / (static_cast<double>(inputs) * n);
  report.per_input_success.resize(inputs);
  if (opts.keep_encodings) report.encodings.emplace(inputs);

  const bool closed_form = (n == 3 && !opts.keep_encodings);
  std::vector<int> x(static_cast<std::size_t>(n));
  CMatrix h(d, d);
  for (std::uint64_t k = 0; k < inputs; ++k) {
    decode_input(k, d, x);
    if (closed_form) {
      report.per_input_success[k] = three_basis_lambda_max(
          set[0].column(x[0]), set[1].column(x[1]), set[2].column(x[2]));
      continue;
    }
    h.setZero();
    for (int y = 0; y < n; ++y) {
      const auto v = set[y].column(x[y]);
      h.noalias() += v * v.adjoint();
    }
    auto top = max_eig(h);
    report.per_input_success[k] = top.value;
    if (report.encodings) (*report.encodings)[k] = std::move(top.vector);
  }
  report.value = report.weight * pairwise_sum(report.per_input_success);
  return report;
}

GameValueReport pqrac_value(const BasisSet& set, int m,
                            const EvaluationOptions& opts) {
  const int n = set.size();
  if (m < 2 || m > n)
    throw ContractError("pqrac_value needs 2 <= m <= n (m=" + std::to_string(m) +
                        ", n=" + std::to_string(n) + ")");
  const PqracGame game(n, m, set.dim());
  const std::uint64_t per_subset = checked_power(set.dim(), m, opts.cap);
  if (per_subset > opts.cap || game.subsets() > opts.cap / per_subset)
    throw ResourceError("pqrac_value: C(n,m) d^m exceeds the evaluation cap of " +
                        std::to_string(opts.cap));

  GameValueReport report;
  report.weight = game.weight();
  if (opts.keep_encodings) report.encodings.emplace();
  for (const auto& z : combinations(n, m)) {
    auto sub = qrac_value(set.subset(z), opts);
    report.per_input_success.insert(report.per_input_success.end(),
                                    sub.per_input_success.begin(),
                                    sub.per_input_success.end());
    if (report.encodings)
      for (auto& e : *sub.encodings) report.encodings->push_back(std::move(e));
  }
  report.value = report.weight * pairwise_sum(report.per_input_success);
  return report;
}

AnomalyScan anomaly_scan(int d, int n, double bin_width, std::uint64_t cap) {
  if (!(bin_width > 0.0)) throw ContractError("bin width must be positive");
  const BasisSet family = mub_family(d);
  if (n < 1 || n > family.size())
    throw ContractError("subset size must lie in [1, d+1]");
  const std::uint64_t per_subset = checked_power(d, n, cap);
  if (per_subset > cap || binomial(d + 1, n) > cap / per_subset)
    throw ResourceError("anomaly_scan: C(d+1,n) d^n exceeds the evaluation cap");

  AnomalyScan scan;
  scan.d = d;
  scan.n = n;
  scan.bin_width = bin_width;
  for (const auto& z : combinations(family.size(), n)) {
    const double v = qrac_value(family.subset(z), {cap, false}).value;
    scan.subsets.push_back({z, v});
    ++scan.bins[std::llround(v / bin_width)];
  }
  return scan;
}

CollapseReport uniform_collapse_check(const BasisSet& set, double tol,
                                      std::uint64_t cap) {
  const int n = set.size();
  if (n < 2) throw ContractError("uniform_collapse_check needs n >= 2");
  const auto report = qrac_value(set, {cap, true});
  const int d = set.dim();

  CollapseReport out;
  out.per_input_deviation.resize(report.per_input_success.size());
  std::vector<int> x(static_cast<std::size_t>(n));
  std::vector<double> p(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < out.per_input_deviation.size(); ++k) {
    decode_input(k, d, x);
    const CVector& enc = (*report.encodings)[k];
    double mean = 0.0;
    for (int y = 0; y < n; ++y) {
      p[y] = std::norm(set[y].column(x[y]).dot(enc));
      mean += p[y];
    }
    mean /= n;
    double dev = 0.0;
    for (int y = 0; y < n; ++y) dev = std::max(dev, std::abs(p[y] - mean));
    out.per_input_deviation[k] = dev;
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.uniform = out.max_deviation <= tol;
  return out;
}

}  // namespace mubforge
