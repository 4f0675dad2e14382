#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace mubforge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kSpanTol = 1e-7;

/// Largest entrywise |H - H^dagger|.
double hermiticity_defect(const CMatrix& h);

/// Throws ContractError unless `h` is square and hermitian to within
/// kHermitianTol * max(1, max|h_ij|).
void require_hermitian(const CMatrix& h);

struct EigenDecomposition {
  RVector values;   ///< ascending
  CMatrix vectors;  ///< unitary; column k pairs with values[k]
};

EigenDecomposition hermitian_eig(const CMatrix& h);

struct TopEigenpair {
  double value = 0.0;
  CVector vector;
};

/// Top eigenpair. Within a degenerate top eigenspace the lowest-index
/// eigenvector column is returned, phase-fixed so that its first entry of
/// largest modulus is real and positive.
TopEigenpair max_eig(const CMatrix& h);

/// Counter-based generator: output k of a stream with key K is
/// mix64(K + k * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
/// finalizer. substream(id) derives an independent key from (K, id), so any
/// sample can be regenerated from its (seed, path of stream ids) alone.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  CounterRng substream(std::uint64_t id) const {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(id + kGamma));
    return child;
  }

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// d x d matrix whose entries are x + iy with x, y independent uniform on
/// [0, 1]. Entries are drawn row by row, real part first.
CMatrix ginibre_uniform(int d, CounterRng& rng);
CMatrix ginibre_uniform(int d, std::uint64_t seed);

/// Left singular vectors of a ginibre_uniform draw. A numerically singular
/// draw is discarded and replaced by one from the next substream.
CMatrix random_unitary(int d, CounterRng& rng);
CMatrix random_unitary(int d, std::uint64_t seed);

/// Unit vector: first column of random_unitary.
CVector random_state(int d, CounterRng& rng);

/// Incrementally maintained orthonormal basis of a subspace of real
/// symmetric N x N matrices, under the Frobenius inner product.
class SpanTracker {
 public:
  explicit SpanTracker(int matrix_dim, double tol = kSpanTol);

  /// Adds `m` if its relative residual against the current span exceeds tol.
  bool insert(const RMatrix& m);

  /// Relative residual of `m` against the span, without modifying it.
  double relative_residual(const RMatrix& m) const;

  int matrix_dim() const { return n_; }
  int dimension() const { return static_cast<int>(basis_.size()); }
  double tol() const { return tol_; }

  /// Orthonormal basis element k as a symmetric matrix.
  RMatrix basis_matrix(int k) const;
  const std::vector<RVector>& basis_vectors() const { return basis_; }

  RVector vectorize(const RMatrix& m) const;
  RMatrix unvectorize(const RVector& v) const;

 private:
  RVector residual(const RVector& v) const;

  int n_;
  double tol_;
  std::vector<RVector> basis_;
};

/// Real roots of -x^3 + a2 x^2 + a1 x + a0, sorted descending.
std::array<double, 3> cubic_real_roots(double a2, double a1, double a0);

/// Sum with a fixed pairwise tree shape, independent of evaluation order.
double pairwise_sum(const std::vector<double>& values);

}  // namespace mubforge
