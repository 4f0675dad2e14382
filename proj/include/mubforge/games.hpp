#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mubforge/bases.hpp"

namespace mubforge {

inline constexpr std::uint64_t kDefaultEvaluationCap = 10'000'000;

/// Parameters of an (n, m)^d -> 1 promise QRAC.
struct PqracGame {
  int n;
  int m;
  int d;

  PqracGame(int n, int m, int d);

  /// C(n, m): number of promise subsets.
  std::uint64_t subsets() const;
  /// C(n, m) d^m encoded states.
  std::uint64_t state_count() const;
  /// n d measurement operators.
  std::uint64_t measurement_count() const;
  /// 1 / (C(n, m) m d^m), the weight of a single tr[rho M] term.
  double weight() const;
};

std::uint64_t binomial(int n, int k);

/// Optimal game value for fixed measurement bases, with the optimal pure
/// encodings made explicit.
struct GameValueReport {
  double value = 0.0;
  /// Weight applied to each per-input contribution.
  double weight = 0.0;
  /// Success mass sum_{y in z} p(b = x_y) per input, in canonical input order
  /// (subset-major, then x lexicographic with the first selected basis
  /// slowest). value == weight * sum(per_input_success).
  std::vector<double> per_input_success;
  std::optional<std::vector<CVector>> encodings;
};

struct EvaluationOptions {
  std::uint64_t cap = kDefaultEvaluationCap;
  bool keep_encodings = false;
};

/// Label "z=..;x=.." of entry k of per_input_success for an (n, m)^d game.
std::string input_label(int n, int m, int d, std::size_t k);

/// (1/2d^2) sum_{x0,x1} (1 + |<b1_x0|b2_x1>|).
double pair_value(const Basis& b1, const Basis& b2);

/// n^d -> 1 QRAC value (1/(n d^n)) sum_x lambda_max(sum_y M^y_{x_y}).
GameValueReport qrac_value(const BasisSet& set, const EvaluationOptions& opts = {});

/// (n, m)^d -> 1 pQRAC value: mean of qrac_value over all m-subsets.
GameValueReport pqrac_value(const BasisSet& set, int m,
                            const EvaluationOptions& opts = {});

/// Largest eigenvalue of |v1><v1| + |v2><v2| + |v3><v3| from its
/// characteristic cubic -x^3 + 3x^2 + m x + n, where m = sum |<vi|vj>|^2 - 3
/// and n is the Gram determinant.
double three_basis_lambda_max(const CVector& v1, const CVector& v2,
                              const CVector& v3);

struct AnomalyScan {
  int d = 0;
  int n = 0;
  double bin_width = 1e-6;
  /// Rounded value (in units of bin_width) -> number of subsets.
  std::map<std::int64_t, int> bins;
  struct Entry {
    std::vector<int> subset;
    double value;
  };
  std::vector<Entry> subsets;

  double bin_value(std::int64_t key) const { return key * bin_width; }
};

/// qrac_value for every n-subset of mub_family(d), binned at bin_width.
AnomalyScan anomaly_scan(int d, int n, double bin_width = 1e-6,
                         std::uint64_t cap = kDefaultEvaluationCap);

struct CollapseReport {
  bool uniform = true;
  double max_deviation = 0.0;
  /// max_y |p(b = x_y) - mean_y p(b = x_y)| for each input x.
  std::vector<double> per_input_deviation;
};

/// Checks whether the optimal encodings are found with the same probability
/// by every measurement.
CollapseReport uniform_collapse_check(const BasisSet& set, double tol,
                                      std::uint64_t cap = kDefaultEvaluationCap);

}  // namespace mubforge
