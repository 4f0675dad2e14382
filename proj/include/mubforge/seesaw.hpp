#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubforge/bases.hpp"
#include "mubforge/sdp.hpp"

namespace mubforge {

enum class Rounding { loewdin };

struct SeesawConfig {
  int n = 4;
  int d = 3;
  std::vector<std::uint64_t> seeds{0};
  int max_rounds = 500;
  double improvement_eps = 1e-10;
  Rounding rounding = Rounding::loewdin;
  double sdp_tol = kSdpTol;
  unsigned threads = 1;

  void validate() const;
};

/// Optimal encodings of one pair z = {y1 < y2}. states[x1 * d + x2] is the top
/// eigenvector of M^{y1}_{x1} + M^{y2}_{x2}, values[...] its eigenvalue.
struct PairEncodings {
  int y1 = 0;
  int y2 = 1;
  std::vector<CVector> states;
  std::vector<double> values;
};

/// One entry per pair, pairs in lexicographic order.
std::vector<PairEncodings> state_step(const BasisSet& set);

struct MeasurementUpdate {
  BasisSet bases;
  /// sum_y sum_b tr(S^y_b M^y_b) of the unrounded POVMs.
  double povm_value = 0.0;
  std::vector<std::vector<CMatrix>> povms;
};

/// Cost blocks S^y_b of setting y for the given encodings.
std::vector<CMatrix> measurement_costs(const std::vector<PairEncodings>& enc, int n,
                                       int d, int y);

/// Optimal POVM per setting followed by projective rounding: top eigenvector
/// of each POVM element, then symmetric orthogonalization of the d vectors.
MeasurementUpdate measurement_step(const std::vector<PairEncodings>& enc,
                                   const BasisSet& set, double tol = kSdpTol);

struct SeedResult {
  std::uint64_t seed = 0;
  BasisSet bases;
  std::vector<double> trajectory;  ///< pbar after initialization and each round
  int rounds = 0;
  bool converged = false;
  int rejected_roundings = 0;
};

struct SeesawReport {
  int n = 0;
  int d = 0;
  SeedResult best;
  double pbar = 0.0;
  double qbar = 0.0;
  double dbar_sq = 0.0;
  /// Final pbar of every seed, in seed-list order.
  std::vector<std::pair<std::uint64_t, double>> per_seed;
};

/// Alternates state and measurement steps from `start` until the pbar
/// improvement drops below improvement_eps or max_rounds is reached.
SeedResult run_seed(const SeesawConfig& cfg, std::uint64_t seed, BasisSet start);

/// Random starting bases for a seed: one random unitary per setting.
BasisSet random_start(int n, int d, std::uint64_t seed);

/// Runs every seed (in parallel when cfg.threads > 1) and keeps the best.
SeesawReport run(const SeesawConfig& cfg);

nlohmann::json seesaw_report_to_json(const SeesawReport& report);
/// "round,pbar" lines for the best seed.
std::string trajectory_csv(const SeesawReport& report);

}  // namespace mubforge
