#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubforge/bases.hpp"
#include "mubforge/numerics.hpp"
#include "mubforge/sdp.hpp"

namespace mubforge {

enum class Level { Q1, Q1succ };

std::string to_string(Level level);
/// Accepts "Q1" and "Q1succ" (also "Q1+succ"); throws ContractError otherwise.
Level parse_level(const std::string& text);

/// Operator label. States carry an ordered pair z1 < z2 and the dits
/// (x1, x2) = (x_{z1}, x_{z2}); measurements carry (y, b); success pairs carry
/// a state label plus a position i in {0, 1} and stand for
/// rho_{x,z} M^{z_i}_{x_i}.
struct WordLabel {
  enum class Kind { identity, state, measurement, success };
  Kind kind = Kind::identity;
  int z1 = 0, z2 = 0;
  int x1 = 0, x2 = 0;
  int y = 0, b = 0;
  int i = 0;

  static WordLabel identity() { return {}; }
  static WordLabel state(int z1, int z2, int x1, int x2);
  static WordLabel measurement(int y, int b);
  static WordLabel success(int z1, int z2, int x1, int x2, int i);

  auto operator<=>(const WordLabel&) const = default;
};

std::string to_string(const WordLabel& w);

/// Canonical word list: identity, states (pairs lexicographic, then x1, x2),
/// measurements (y, then b), and for Q1succ the success pairs (state order,
/// then i). Indices are computed arithmetically.
class WordSpace {
 public:
  WordSpace(int n, int d, Level level);

  int n() const { return n_; }
  int d() const { return d_; }
  Level level() const { return level_; }
  int size() const { return static_cast<int>(words_.size()); }
  /// C(n,2) d^2 states.
  int state_count() const { return a_; }
  /// n d measurement operators.
  int measurement_count() const { return n_ * d_; }
  const std::vector<WordLabel>& words() const { return words_; }
  const WordLabel& operator[](int k) const { return words_[static_cast<std::size_t>(k)]; }
  int index_of(const WordLabel& w) const;
  int pair_index(int z1, int z2) const;

 private:
  int n_, d_;
  Level level_;
  int a_;
  std::vector<int> pair_offset_;
  std::vector<WordLabel> words_;
};

std::vector<WordLabel> build_words(int n, int d, Level level);

/// g = (pi_1, ..., pi_n; omega). Acts on measurements as
/// (y, b) -> (omega(y), pi_{omega(y)}(b)).
struct GroupElement {
  std::vector<int> omega;
  std::vector<std::vector<int>> pis;

  static GroupElement identity(int n, int d);
  static GroupElement random(int n, int d, CounterRng& rng);
  /// (*this) after `g`: the element acting as this(g(w)).
  GroupElement compose(const GroupElement& g) const;
  GroupElement inverse() const;
  bool operator==(const GroupElement&) const = default;
};

/// Every element of S_d^n x| S_n (for small n, d).
std::vector<GroupElement> all_group_elements(int n, int d);

WordLabel apply_group(const GroupElement& g, const WordLabel& w);
/// perm[k] = index of g(words[k]).
std::vector<int> word_permutation(const GroupElement& g, const WordSpace& space);
/// Gamma'[perm[a], perm[b]] = Gamma[a, b].
RMatrix conjugate(const RMatrix& gamma, const std::vector<int>& perm);

/// Operators of a realization: A pure states and n bases.
struct Realization {
  std::vector<CVector> states;  ///< in WordSpace state order
  BasisSet bases;
};

Realization random_realization(int n, int d, std::uint64_t seed);
/// Realization whose states are the optimal encodings for `bases`.
Realization optimal_realization(const BasisSet& bases);

/// Re tr[w_i^dagger w_j] over the words, the identity word being I / sqrt(d)
/// so that Gamma_11 = 1 and Gamma stays a Gram matrix.
RMatrix moment_matrix(const Realization& r, const WordSpace& space);
RMatrix random_moment_matrix(const WordSpace& space, std::uint64_t seed);

/// Reynolds average: over S_n first, then over S_d at each station in turn.
RMatrix group_average(const RMatrix& gamma, const WordSpace& space);
/// Average over an explicit element list.
RMatrix group_average(const RMatrix& gamma, const WordSpace& space,
                      const std::vector<GroupElement>& elements);

struct SpanOptions {
  std::uint64_t seed = 0;
  double tol = kSpanTol;
  int stall_k = 10;
  unsigned threads = 1;
};

struct SpanResult {
  /// Averaged moment matrices that grew the span, in insertion order.
  std::vector<RMatrix> generators;
  /// Orthonormal basis of the span (Frobenius inner product).
  std::vector<RMatrix> basis;
  int samples = 0;
  int dimension() const { return static_cast<int>(basis.size()); }
};

SpanResult discover_span(const WordSpace& space, const SpanOptions& opts = {});

/// B with tr[B Gamma] equal to the (n,2)^d pQRAC value of the realization.
RMatrix game_matrix(const WordSpace& space);

/// Value of the (n,2)^d pQRAC for the realization's states and bases.
double realization_value(const Realization& r, const WordSpace& space);

struct BoundOptions {
  SpanOptions span;
  double tol = kSdpTol;
  int max_iter = kSdpMaxIter;
};

struct BoundReport {
  int n = 0;
  int d = 0;
  Level level = Level::Q1;
  int words = 0;
  int span_dim = 0;
  int reduced_size = 0;  ///< matrix size after restriction to the common range
  double ptilde_bound = 0.0;
  double qbar_bound = 0.0;
  double primal = 0.0;  ///< objective at the final iterate
  double gap = 0.0;     ///< certified gap in qbar units
  bool excluded = false;
  SdpStatus status = SdpStatus::infeasible;
  int iterations = 0;
};

/// The symmetry-reduced relaxation as an LMI over span coordinates, restricted
/// to the range shared by every span element.
struct HierarchyLmi {
  LmiProblem problem;
  RMatrix range;  ///< N x r isometry
};

HierarchyLmi build_hierarchy_lmi(const WordSpace& space, const SpanResult& span);
BoundReport upper_bound(int n, int d, Level level, const BoundOptions& opts = {});

nlohmann::json bound_report_to_json(const BoundReport& report);

struct MemoryEstimate {
  std::uint64_t a_plus_b = 0;
  std::uint64_t word_count = 0;  ///< saturates at UINT64_MAX
  bool saturated = false;
  double parameter_count = 0.0;  ///< |w_k|^2 / 2
  double bytes = 0.0;            ///< 8 per parameter
};

MemoryEstimate memory_estimate(int n, int d, int k);

}  // namespace mubforge
