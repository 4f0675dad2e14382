#include "mubforge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "mubforge/error.hpp"

namespace mubforge {

double hermiticity_defect(const CMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
  return worst;
}

void require_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw ContractError("expected a non-empty square matrix, got " +
                        std::to_string(h.rows()) + "x" +
                        std::to_string(h.cols()));
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTol * scale)
    throw ContractError("matrix is not hermitian (max |H - H^dagger| = " +
                        std::to_string(defect) + ")");
}

EigenDecomposition hermitian_eig(const CMatrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

TopEigenpair max_eig(const CMatrix& h) {
  const auto eig = hermitian_eig(h);
  const Eigen::Index n = eig.values.size();
  const double top = eig.values[n - 1];
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  Eigen::Index pick = n - 1;
  while (pick > 0 && top - eig.values[pick - 1] <= 1e-12 * scale) --pick;

  CVector v = eig.vectors.col(pick);
  Eigen::Index lead = 0;
  double lead_mod = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > lead_mod * (1.0 + 1e-12)) {
      lead_mod = m;
      lead = i;
    }
  }
  v *= std::conj(v[lead]) / lead_mod;
  v.normalize();
  return {top, std::move(v)};
}

CMatrix ginibre_uniform(int d, CounterRng& rng) {
  if (d < 1) throw ContractError("dimension must be positive");
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = rng.uniform();
      const double im = rng.uniform();
      a(i, j) = Complex(re, im);
    }
  return a;
}

CMatrix ginibre_uniform(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return ginibre_uniform(d, rng);
}

CMatrix random_unitary(int d, CounterRng& rng) {
  CMatrix a = ginibre_uniform(d, rng);
  for (std::uint64_t attempt = 0;; ++attempt) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    if (s[d - 1] > 1e-10 * s[0]) return svd.matrixU();
    std::clog << "random_unitary: singular draw (sigma_min/sigma_max = "
              << s[d - 1] / s[0] << "), resampling from substream "
              << attempt << '\n';
    CounterRng alt = rng.substream(attempt);
    a = ginibre_uniform(d, alt);
  }
}

CMatrix random_unitary(int d, std::uint64_t seed) {
  CounterRng rng(seed);
  return random_unitary(d, rng);
}

CVector random_state(int d, CounterRng& rng) {
  return random_unitary(d, rng).col(0);
}

SpanTracker::SpanTracker(int matrix_dim, double tol)
    : n_(matrix_dim), tol_(tol) {
  if (matrix_dim < 1) throw ContractError("span tracker needs a positive size");
  if (!(tol > 0.0)) throw ContractError("span tolerance must be positive");
}

RVector SpanTracker::vectorize(const RMatrix& m) const {
  if (m.rows() != n_ || m.cols() != n_)
    throw ContractError("span tracker expects " + std::to_string(n_) + "x" +
                        std::to_string(n_) + " matrices, got " +
                        std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
  RVector v(static_cast<Eigen::Index>(n_) * (n_ + 1) / 2);
  Eigen::Index k = 0;
  for (int i = 0; i < n_; ++i) v[k++] = m(i, i);
  for (int j = 1; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      v[k++] = std::numbers::sqrt2 * 0.5 * (m(i, j) + m(j, i));
  return v;
}

RMatrix SpanTracker::unvectorize(const RVector& v) const {
  RMatrix m(n_, n_);
  Eigen::Index k = 0;
  for (int i = 0; i < n_; ++i) m(i, i) = v[k++];
  for (int j = 1; j < n_; ++j)
    for (int i = 0; i < j; ++i) {
      m(i, j) = m(j, i) = v[k++] / std::numbers::sqrt2;
    }
  return m;
}

RVector SpanTracker::residual(const RVector& v) const {
  RVector r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis_) r -= b.dot(r) * b;
  return r;
}

double SpanTracker::relative_residual(const RMatrix& m) const {
  const RVector v = vectorize(m);
  const double norm = v.norm();
  if (norm == 0.0) return 0.0;
  return residual(v).norm() / norm;
}

bool SpanTracker::insert(const RMatrix& m) {
  const RVector v = vectorize(m);
  const double norm = v.norm();
  if (norm == 0.0) return false;
  RVector r = residual(v);
  const double rn = r.norm();
  if (rn <= tol_ * norm) return false;
  basis_.push_back(r / rn);
  return true;
}

RMatrix SpanTracker::basis_matrix(int k) const {
  return unvectorize(basis_.at(static_cast<std::size_t>(k)));
}

std::array<double, 3> cubic_real_roots(double a2, double a1, double a0) {
  // Monic form x^3 + b x^2 + c x + e, shifted to t^3 + p t + q.
  const double b = -a2, c = -a1, e = -a0;
  const double shift = -b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + e;
  const double scale = std::max({1.0, std::abs(a2), std::abs(a1), std::abs(a0)});

  const double disc = 4.0 * p * p * p + 27.0 * q * q;  // <= 0 for real roots
  const double disc_scale = std::max({1.0, std::pow(std::abs(p), 3), q * q});
  if (disc > 1e-9 * disc_scale)
    throw NumericalError("cubic has complex roots (discriminant " +
                         std::to_string(disc) + ")");

  std::array<double, 3> roots{};
  if (p > -1e-14 * scale * scale) {
    const double t = std::cbrt(-q);
    roots = {t, t, t};
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * r);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }

  auto poly = [&](double x) { return ((-x + a2) * x + a1) * x + a0; };
  auto dpoly = [&](double x) { return (-3.0 * x + 2.0 * a2) * x + a1; };
  for (auto& x : roots) {
    x += shift;
    for (int it = 0; it < 3; ++it) {
      const double f = poly(x);
      const double df = dpoly(x);
      if (std::abs(df) < 1e-6 * scale) break;
      const double nx = x - f / df;
      if (std::abs(poly(nx)) >= std::abs(f)) break;
      x = nx;
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

double pairwise_sum(const std::vector<double>& values) {
  std::vector<double> level = values;
  if (level.empty()) return 0.0;
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next[i / 2] = level[i] + level[i + 1];
    if (level.size() % 2 == 1) next.back() = level.back();
    level.swap(next);
  }
  return level[0];
}

}  // namespace mubforge
