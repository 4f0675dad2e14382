#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "mubforge/numerics.hpp"

namespace mubforge {

inline constexpr double kSdpTol = 1e-8;
inline constexpr int kSdpMaxIter = 200;

/// One coefficient matrix of a linear matrix inequality. Stored densely, or
/// as a full list of (row, col, value) entries when mostly zero.
class LmiTerm {
 public:
  explicit LmiTerm(RMatrix dense);
  /// `entries` must list both (i, j) and (j, i) for off-diagonal values.
  static LmiTerm sparse(int n, std::vector<Eigen::Triplet<double>> entries);

  int dim() const { return n_; }
  bool is_sparse() const { return sparse_; }
  const RMatrix& dense() const { return dense_; }
  const std::vector<Eigen::Triplet<double>>& entries() const { return entries_; }

  /// acc += scale * F
  void add_to(RMatrix& acc, double scale) const;
  /// tr(M F) for symmetric M.
  double trace_with(const RMatrix& m) const;
  RMatrix to_dense() const;

 private:
  LmiTerm() = default;
  int n_ = 0;
  bool sparse_ = false;
  RMatrix dense_;
  std::vector<Eigen::Triplet<double>> entries_;
};

/// maximize c.y  subject to  sum_i y_i F_i >= 0  and  A y = b.
struct LmiProblem {
  RVector objective;
  std::vector<LmiTerm> terms;
  RMatrix eq_lhs;  ///< rows x v (may have zero rows)
  RVector eq_rhs;
  /// Strictly feasible starting point; found by a phase-I solve when absent.
  std::optional<RVector> start;

  int size() const { return terms.empty() ? 0 : terms.front().dim(); }
  int variables() const { return static_cast<int>(terms.size()); }
};

/// maximize sum_b tr(S_b M_b)  subject to  M_b >= 0, sum_b M_b = I.
struct BlockSdpProblem {
  std::vector<CMatrix> costs;
};

enum class SdpStatus { optimal, max_iter, infeasible };

std::string to_string(SdpStatus s);

struct IterationRecord {
  double barrier_t;
  double primal;  ///< objective at the centered iterate
  double dual;    ///< matching dual objective
};

struct SdpSolution {
  SdpStatus status = SdpStatus::infeasible;
  double objective = 0.0;   ///< primal value
  double dual_bound = 0.0;  ///< dual value; an upper bound for maximization
  double gap = 0.0;         ///< (dual - primal) / max(1, |primal|) style estimate
  int iterations = 0;       ///< Newton steps taken
  RVector y;                ///< LMI variables
  RMatrix dual_matrix;      ///< LMI dual variable X >= 0
  std::vector<CMatrix> blocks;  ///< POVM elements
  std::vector<IterationRecord> history;
};

/// Dual log-barrier path following with Newton centering and a backtracking
/// line search that keeps iterates positive definite. The barrier weight
/// grows by 5x per outer step (reduction factor 0.2). Equality constraints
/// are handled in the Newton KKT system.
SdpSolution solve_lmi(const LmiProblem& problem, double tol = kSdpTol,
                      int max_iter = kSdpMaxIter);

/// Solves the POVM problem through its dual, min tr Y s.t. Y >= S_b, with a
/// complex-hermitian barrier. Primal blocks are recovered as M_b = (Y - S_b)^-1 / t
/// and congruence-normalized so that sum_b M_b = I exactly.
SdpSolution solve_povm(const BlockSdpProblem& problem, double tol = kSdpTol,
                       int max_iter = kSdpMaxIter);

/// Plain-text dump for cross-checking with external solvers:
///   "lmi N v p", then per term "F k" and its upper triangle row by row,
///   then "c" with v values, then p lines "eq a_1 .. a_v b".
void write_lmi_dump(const LmiProblem& problem, std::ostream& out);

}  // namespace mubforge
