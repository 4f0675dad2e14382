#include "mubforge/seesaw.hpp"

#include <algorithm>
#include <sstream>

#include "mubforge/error.hpp"
#include "mubforge/games.hpp"
#include "mubforge/parallel.hpp"

namespace mubforge {

void SeesawConfig::validate() const {
  if (n < 2 || d < 2) throw ContractError("see-saw needs n >= 2 and d >= 2");
  if (seeds.empty()) throw ContractError("see-saw needs at least one seed");
  if (max_rounds < 1) throw ContractError("max_rounds must be positive");
}

std::vector<PairEncodings> state_step(const BasisSet& set) {
  const int n = set.size();
  const int d = set.dim();
  if (n < 2) throw ContractError("state_step needs n >= 2");
  std::vector<PairEncodings> out;
  for (int y1 = 0; y1 < n; ++y1)
    for (int y2 = y1 + 1; y2 < n; ++y2) {
      PairEncodings p;
      p.y1 = y1;
      p.y2 = y2;
      for (int x1 = 0; x1 < d; ++x1)
        for (int x2 = 0; x2 < d; ++x2) {
          const CMatrix h = set[y1].projector(x1) + set[y2].projector(x2);
          auto top = max_eig(h);
          p.states.push_back(std::move(top.vector));
          p.values.push_back(top.value);
        }
      out.push_back(std::move(p));
    }
  return out;
}

std::vector<CMatrix> measurement_costs(const std::vector<PairEncodings>& enc, int n,
                                       int d, int y) {
  const double weight = 1.0 / (static_cast<double>(binomial(n, 2)) * 2.0 * d * d);
  std::vector<CMatrix> costs(static_cast<std::size_t>(d), CMatrix::Zero(d, d));
  for (const auto& p : enc) {
    if (p.y1 != y && p.y2 != y) continue;
    for (int x1 = 0; x1 < d; ++x1)
      for (int x2 = 0; x2 < d; ++x2) {
        const int b = (p.y1 == y) ? x1 : x2;
        const CVector& s = p.states[static_cast<std::size_t>(x1 * d + x2)];
        costs[static_cast<std::size_t>(b)].noalias() += weight * (s * s.adjoint());
      }
  }
  for (auto& c : costs) c = 0.5 * (c + c.adjoint()).eval();
  return costs;
}

namespace {

// Unitary polar factor of the matrix whose columns are `vectors`.
CMatrix loewdin(const CMatrix& vectors) {
  Eigen::JacobiSVD<CMatrix> svd(vectors, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

MeasurementUpdate measurement_step(const std::vector<PairEncodings>& enc,
                                   const BasisSet& set, double tol) {
  const int n = set.size();
  const int d = set.dim();
  std::vector<Basis> bases;
  MeasurementUpdate out{set, 0.0, {}};
  for (int y = 0; y < n; ++y) {
    BlockSdpProblem problem{measurement_costs(enc, n, d, y)};
    const SdpSolution sol = solve_povm(problem, tol);
    if (sol.status == SdpStatus::infeasible)
      throw NumericalError("POVM solve failed for setting " + std::to_string(y));
    out.povm_value += sol.objective;
    CMatrix v(d, d);
    for (int b = 0; b < d; ++b) v.col(b) = max_eig(sol.blocks[static_cast<std::size_t>(b)]).vector;
    bases.emplace_back(loewdin(v));
    out.povms.push_back(sol.blocks);
  }
  out.bases = BasisSet(std::move(bases));
  return out;
}

BasisSet random_start(int n, int d, std::uint64_t seed) {
  const CounterRng root(seed);
  std::vector<Basis> bases;
  for (int y = 0; y < n; ++y) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(y));
    bases.emplace_back(random_unitary(d, rng));
  }
  return BasisSet(std::move(bases));
}

SeedResult run_seed(const SeesawConfig& cfg, std::uint64_t seed, BasisSet start) {
  SeedResult r{seed, std::move(start), {}, 0, false, 0};
  double current = pbar(r.bases);
  r.trajectory.push_back(current);
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    MeasurementUpdate update = [&] {
      try {
        return measurement_step(state_step(r.bases), r.bases, cfg.sdp_tol);
      } catch (const NumericalError& e) {
        throw NumericalError("see-saw seed " + std::to_string(seed) + " round " +
                             std::to_string(round) + ": " + e.what());
      }
    }();
    r.rounds = round;
    const double next = pbar(update.bases);
    if (next >= current - 1e-12) {
      r.bases = std::move(update.bases);
    } else {
      ++r.rejected_roundings;
    }
    const double accepted = std::max(next, current);
    r.trajectory.push_back(accepted);
    const double gain = accepted - current;
    current = accepted;
    if (gain < cfg.improvement_eps) {
      r.converged = true;
      break;
    }
  }
  return r;
}

SeesawReport run(const SeesawConfig& cfg) {
  cfg.validate();
  std::vector<std::optional<SeedResult>> results(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), std::max(1u, cfg.threads), [&](std::size_t i) {
    const auto seed = cfg.seeds[i];
    results[i] = run_seed(cfg, seed, random_start(cfg.n, cfg.d, seed));
  });

  std::vector<std::pair<std::uint64_t, double>> per_seed;
  std::size_t best = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double v = results[i]->trajectory.back();
    per_seed.emplace_back(cfg.seeds[i], v);
    const double bv = results[best]->trajectory.back();
    if (v > bv || (v == bv && cfg.seeds[i] < cfg.seeds[best])) best = i;
  }
  SeesawReport report{cfg.n, cfg.d, std::move(*results[best]), 0.0, 0.0, 0.0, std::move(per_seed)};
  report.pbar = pbar(report.best.bases);
  report.qbar = qbar(report.best.bases);
  report.dbar_sq = avg_distance_sq(report.best.bases);
  return report;
}

nlohmann::json seesaw_report_to_json(const SeesawReport& report) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& [seed, v] : report.per_seed) seeds.push_back({{"seed", seed}, {"pbar", v}});
  return {{"n", report.n},
          {"d", report.d},
          {"seed", report.best.seed},
          {"rounds", report.best.rounds},
          {"converged", report.best.converged},
          {"rejected_roundings", report.best.rejected_roundings},
          {"pbar", report.pbar},
          {"qbar", report.qbar},
          {"dbar_sq", report.dbar_sq},
          {"trajectory", report.best.trajectory},
          {"per_seed", std::move(seeds)},
          {"bases", basis_set_to_json(report.best.bases)}};
}

std::string trajectory_csv(const SeesawReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "round,pbar\n";
  for (std::size_t k = 0; k < report.best.trajectory.size(); ++k)
    os << k << ',' << report.best.trajectory[k] << '\n';
  return os.str();
}

}  // namespace mubforge
