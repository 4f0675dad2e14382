#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mubforge/numerics.hpp"

namespace mubforge {

inline constexpr double kBasisTol = 1e-10;
inline constexpr double kFileBasisTol = 1e-8;

/// First column pair (i, j) whose inner product deviates from delta_ij by
/// more than tol, if any.
std::optional<std::pair<int, int>> orthonormality_violation(const CMatrix& v,
                                                            double tol);

/// An orthonormal basis of C^d, stored as the columns of a unitary matrix.
class Basis {
 public:
  /// Throws ValidationError if `vectors` is not square or its columns are not
  /// orthonormal within `tol`.
  explicit Basis(CMatrix vectors, double tol = kBasisTol);

  static Basis computational(int d);
  static Basis fourier(int d);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  const CMatrix& vectors() const { return vectors_; }
  auto column(int i) const { return vectors_.col(i); }
  /// Rank-1 projector onto column i.
  CMatrix projector(int i) const;

 private:
  CMatrix vectors_;
};

/// Ordered list of bases in a common dimension.
class BasisSet {
 public:
  explicit BasisSet(std::vector<Basis> bases);

  int dim() const { return bases_.front().dim(); }
  int size() const { return static_cast<int>(bases_.size()); }
  const Basis& operator[](int k) const { return bases_[static_cast<std::size_t>(k)]; }
  const std::vector<Basis>& bases() const { return bases_; }

  BasisSet subset(const std::vector<int>& indices) const;

 private:
  std::vector<Basis> bases_;
};

/// Matrix of |<b1_i | b2_j>|.
RMatrix overlap_moduli(const Basis& b1, const Basis& b2);

bool is_mub_pair(const Basis& b1, const Basis& b2, double tol = kBasisTol);

/// Complete set of d + 1 mutually unbiased bases for prime-power d.
/// The computational basis comes first. Odd characteristic uses the phases
/// omega^Tr(r l^2 + s l) over GF(p^k); characteristic two uses
/// i^(l^T S_r l) (-1)^(s.l) with S_r the Gram matrix of the trace form
/// (x, y) -> Tr(r x y). Throws UnsupportedDimension otherwise.
BasisSet mub_family(int d);

/// D^2 = 1 - (1/(d-1)) sum_ij (|<b1_i|b2_j>|^2 - 1/d)^2.
double distance_sq(const Basis& b1, const Basis& b2);

/// Mean of distance_sq over unordered pairs.
double avg_distance_sq(const BasisSet& set);

/// Optimal (n,2)^d pQRAC value with the set as measurements:
/// mean over pairs of 1/2 + (1/2d^2) sum_ij |<a_i|b_j>|.
double pbar(const BasisSet& set);

/// Classical 2^d -> 1 RAC value 1/2 (1 + 1/d).
double classical_pair_value(int d);
/// Quantum 2^d -> 1 QRAC optimum 1/2 (1 + 1/sqrt d).
double quantum_pair_value(int d);

/// pbar affinely rescaled so identical bases give 0 and MUBs give 1.
double qbar(const BasisSet& set);
/// Same quantity evaluated as the per-pair double sum
/// (1/(d(sqrt d - 1))) sum_ij (|<a_i|b_j>| - 1/d), averaged over pairs.
double qbar_double_sum(const BasisSet& set);

/// Basis-set document: {"d", "n", "bases": [[[ [re, im] x d ] x d ] x n]},
/// bases[k][c] being column c of basis k.
nlohmann::json basis_set_to_json(const BasisSet& set);
BasisSet basis_set_from_json(const nlohmann::json& doc,
                             double tol = kFileBasisTol);

/// Writes the document with 17 significant digits per number.
void save_basis_set(const BasisSet& set, const std::filesystem::path& path);
std::string basis_set_to_text(const BasisSet& set);
BasisSet load_basis_set(const std::filesystem::path& path);

}  // namespace mubforge
