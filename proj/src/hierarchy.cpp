#include "mubforge/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mubforge/error.hpp"
#include "mubforge/games.hpp"
#include "mubforge/parallel.hpp"

namespace mubforge {

std::string to_string(Level level) { return level == Level::Q1 ? "Q1" : "Q1succ"; }

Level parse_level(const std::string& text) {
  if (text == "Q1" || text == "q1") return Level::Q1;
  if (text == "Q1succ" || text == "Q1+succ" || text == "q1succ") return Level::Q1succ;
  throw ContractError("unknown hierarchy level '" + text + "' (use Q1 or Q1succ)");
}

WordLabel WordLabel::state(int z1, int z2, int x1, int x2) {
  WordLabel w;
  w.kind = Kind::state;
  w.z1 = z1;
  w.z2 = z2;
  w.x1 = x1;
  w.x2 = x2;
  return w;
}

WordLabel WordLabel::measurement(int y, int b) {
  WordLabel w;
  w.kind = Kind::measurement;
  w.y = y;
  w.b = b;
  return w;
}

WordLabel WordLabel::success(int z1, int z2, int x1, int x2, int i) {
  WordLabel w = state(z1, z2, x1, x2);
  w.kind = Kind::success;
  w.i = i;
  return w;
}

std::string to_string(const WordLabel& w) {
  const auto st = [&] {
    return "rho[z=" + std::to_string(w.z1) + "," + std::to_string(w.z2) +
           ";x=" + std::to_string(w.x1) + "," + std::to_string(w.x2) + "]";
  };
  switch (w.kind) {
    case WordLabel::Kind::identity: return "1";
    case WordLabel::Kind::state: return st();
    case WordLabel::Kind::measurement:
      return "M[y=" + std::to_string(w.y) + ";b=" + std::to_string(w.b) + "]";
    case WordLabel::Kind::success: return st() + "M[i=" + std::to_string(w.i) + "]";
  }
  return "?";
}

WordSpace::WordSpace(int n, int d, Level level) : n_(n), d_(d), level_(level) {
  if (n < 2 || d < 2) throw ContractError("word space needs n >= 2 and d >= 2");
  a_ = static_cast<int>(binomial(n, 2)) * d * d;
  pair_offset_.assign(static_cast<std::size_t>(n), 0);
  int p = 0;
  for (int z1 = 0; z1 < n; ++z1) {
    pair_offset_[static_cast<std::size_t>(z1)] = p - (z1 + 1);
    p += n - z1 - 1;
  }
  words_.push_back(WordLabel::identity());
  for (int z1 = 0; z1 < n; ++z1)
    for (int z2 = z1 + 1; z2 < n; ++z2)
      for (int x1 = 0; x1 < d; ++x1)
        for (int x2 = 0; x2 < d; ++x2) words_.push_back(WordLabel::state(z1, z2, x1, x2));
  for (int y = 0; y < n; ++y)
    for (int b = 0; b < d; ++b) words_.push_back(WordLabel::measurement(y, b));
  if (level == Level::Q1succ)
    for (int k = 1; k <= a_; ++k) {
      const WordLabel s = words_[static_cast<std::size_t>(k)];
      for (int i = 0; i < 2; ++i) words_.push_back(WordLabel::success(s.z1, s.z2, s.x1, s.x2, i));
    }
}

int WordSpace::pair_index(int z1, int z2) const {
  return pair_offset_[static_cast<std::size_t>(z1)] + z2;
}

int WordSpace::index_of(const WordLabel& w) const {
  const auto state_pos = [&] { return pair_index(w.z1, w.z2) * d_ * d_ + w.x1 * d_ + w.x2; };
  switch (w.kind) {
    case WordLabel::Kind::identity: return 0;
    case WordLabel::Kind::state: return 1 + state_pos();
    case WordLabel::Kind::measurement: return 1 + a_ + w.y * d_ + w.b;
    case WordLabel::Kind::success:
      if (level_ != Level::Q1succ) throw ContractError("success-pair word outside Q1succ");
      return 1 + a_ + n_ * d_ + 2 * state_pos() + w.i;
  }
  throw ContractError("bad word label");
}

std::vector<WordLabel> build_words(int n, int d, Level level) {
  return WordSpace(n, d, level).words();
}

GroupElement GroupElement::identity(int n, int d) {
  GroupElement g;
  g.omega.resize(static_cast<std::size_t>(n));
  std::iota(g.omega.begin(), g.omega.end(), 0);
  std::vector<int> id(static_cast<std::size_t>(d));
  std::iota(id.begin(), id.end(), 0);
  g.pis.assign(static_cast<std::size_t>(n), id);
  return g;
}

namespace {

void shuffle(std::vector<int>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<std::size_t>(rng() % i)]);
}

std::vector<int> invert(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) inv[static_cast<std::size_t>(p[k])] = static_cast<int>(k);
  return inv;
}

std::vector<std::vector<int>> all_permutations(int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

GroupElement GroupElement::random(int n, int d, CounterRng& rng) {
  GroupElement g = identity(n, d);
  shuffle(g.omega, rng);
  for (auto& p : g.pis) shuffle(p, rng);
  return g;
}

GroupElement GroupElement::compose(const GroupElement& g) const {
  const auto n = omega.size();
  const auto omega_inv = invert(omega);
  GroupElement h;
  h.omega.resize(n);
  h.pis.resize(n);
  for (std::size_t y = 0; y < n; ++y) h.omega[y] = omega[static_cast<std::size_t>(g.omega[y])];
  for (std::size_t k = 0; k < n; ++k) {
    const auto& inner = g.pis[static_cast<std::size_t>(omega_inv[k])];
    h.pis[k].resize(inner.size());
    for (std::size_t b = 0; b < inner.size(); ++b)
      h.pis[k][b] = pis[k][static_cast<std::size_t>(inner[b])];
  }
  return h;
}

GroupElement GroupElement::inverse() const {
  GroupElement g;
  g.omega = invert(omega);
  g.pis.resize(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k)
    g.pis[k] = invert(pis[static_cast<std::size_t>(omega[k])]);
  return g;
}

std::vector<GroupElement> all_group_elements(int n, int d) {
  const auto omegas = all_permutations(n);
  const auto perms = all_permutations(d);
  std::vector<GroupElement> out;
  std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
  for (const auto& om : omegas) {
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      GroupElement g;
      g.omega = om;
      for (int k = 0; k < n; ++k) g.pis.push_back(perms[digit[static_cast<std::size_t>(k)]]);
      out.push_back(std::move(g));
      int k = n - 1;
      while (k >= 0 && ++digit[static_cast<std::size_t>(k)] == perms.size()) digit[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

WordLabel apply_group(const GroupElement& g, const WordLabel& w) {
  switch (w.kind) {
    case WordLabel::Kind::identity: return w;
    case WordLabel::Kind::measurement: {
      const int y = g.omega[static_cast<std::size_t>(w.y)];
      return WordLabel::measurement(y, g.pis[static_cast<std::size_t>(y)][static_cast<std::size_t>(w.b)]);
    }
    case WordLabel::Kind::state:
    case WordLabel::Kind::success: {
      int z1 = g.omega[static_cast<std::size_t>(w.z1)];
      int z2 = g.omega[static_cast<std::size_t>(w.z2)];
      int x1 = g.pis[static_cast<std::size_t>(z1)][static_cast<std::size_t>(w.x1)];
      int x2 = g.pis[static_cast<std::size_t>(z2)][static_cast<std::size_t>(w.x2)];
      int i = w.i;
      if (z1 > z2) {
        std::swap(z1, z2);
        std::swap(x1, x2);
        i = 1 - i;
      }
      if (w.kind == WordLabel::Kind::state) return WordLabel::state(z1, z2, x1, x2);
      return WordLabel::success(z1, z2, x1, x2, i);
    }
  }
  throw ContractError("bad word label");
}

std::vector<int> word_permutation(const GroupElement& g, const WordSpace& space) {
  std::vector<int> perm(static_cast<std::size_t>(space.size()));
  for (int k = 0; k < space.size(); ++k)
    perm[static_cast<std::size_t>(k)] = space.index_of(apply_group(g, space[k]));
  return perm;
}

RMatrix conjugate(const RMatrix& gamma, const std::vector<int>& perm) {
  const auto n = gamma.rows();
  RMatrix out(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto pb = perm[static_cast<std::size_t>(b)];
    for (Eigen::Index a = 0; a < n; ++a) out(perm[static_cast<std::size_t>(a)], pb) = gamma(a, b);
  }
  return out;
}

Realization random_realization(int n, int d, std::uint64_t seed) {
  const CounterRng root(seed);
  CounterRng state_rng = root.substream(0);
  const WordSpace space(n, d, Level::Q1);
  std::vector<CVector> states;
  for (int k = 0; k < space.state_count(); ++k) states.push_back(random_state(d, state_rng));
  std::vector<Basis> bases;
  for (int y = 0; y < n; ++y) {
    CounterRng rng = root.substream(static_cast<std::uint64_t>(1 + y));
    bases.emplace_back(random_unitary(d, rng));
  }
  return {std::move(states), BasisSet(std::move(bases))};
}

Realization optimal_realization(const BasisSet& bases) {
  const int n = bases.size();
  const int d = bases.dim();
  std::vector<CVector> states;
  for (int z1 = 0; z1 < n; ++z1)
    for (int z2 = z1 + 1; z2 < n; ++z2)
      for (int x1 = 0; x1 < d; ++x1)
        for (int x2 = 0; x2 < d; ++x2)
          states.push_back(max_eig(bases[z1].projector(x1) + bases[z2].projector(x2)).vector);
  return {std::move(states), bases};
}

RMatrix moment_matrix(const Realization& r, const WordSpace& space) {
  const int d = space.d();
  if (r.bases.size() != space.n() || r.bases.dim() != d ||
      static_cast<int>(r.states.size()) != space.state_count())
    throw ContractError("realization does not match the word space");
  const int words = space.size();
  CMatrix v(d * d, words);
  const auto put = [&](int k, const CMatrix& op) {
    v.col(k) = Eigen::Map<const CVector>(op.data(), d * d);
  };
  for (int k = 0; k < words; ++k) {
    const WordLabel& w = space[k];
    switch (w.kind) {
      case WordLabel::Kind::identity:
        put(k, CMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
        break;
      case WordLabel::Kind::state: {
        const CVector& s = r.states[static_cast<std::size_t>(k - 1)];
        put(k, s * s.adjoint());
        break;
      }
      case WordLabel::Kind::measurement: put(k, r.bases[w.y].projector(w.b)); break;
      case WordLabel::Kind::success: {
        const CVector& s = r.states[static_cast<std::size_t>(
            space.index_of(WordLabel::state(w.z1, w.z2, w.x1, w.x2)) - 1)];
        const auto m = w.i == 0 ? r.bases[w.z1].column(w.x1) : r.bases[w.z2].column(w.x2);
        put(k, (s * s.adjoint()) * (m * m.adjoint()));
        break;
      }
    }
  }
  const CMatrix g = v.adjoint() * v;
  RMatrix gamma = g.real();
  return 0.5 * (gamma + gamma.transpose());
}

RMatrix random_moment_matrix(const WordSpace& space, std::uint64_t seed) {
  return moment_matrix(random_realization(space.n(), space.d(), seed), space);
}

RMatrix group_average(const RMatrix& gamma, const WordSpace& space) {
  const int n = space.n();
  const int d = space.d();
  GroupElement g = GroupElement::identity(n, d);
  RMatrix current = gamma;
  const auto omegas = all_permutations(n);
  RMatrix acc = RMatrix::Zero(gamma.rows(), gamma.cols());
  for (const auto& om : omegas) {
    g.omega = om;
    acc += conjugate(current, word_permutation(g, space));
  }
  current = acc / static_cast<double>(omegas.size());

  const auto perms = all_permutations(d);
  for (int station = 0; station < n; ++station) {
    g = GroupElement::identity(n, d);
    acc.setZero();
    for (const auto& p : perms) {
      g.pis[static_cast<std::size_t>(station)] = p;
      acc += conjugate(current, word_permutation(g, space));
    }
    current = acc / static_cast<double>(perms.size());
  }
  return current;
}

RMatrix group_average(const RMatrix& gamma, const WordSpace& space,
                      const std::vector<GroupElement>& elements) {
  if (elements.empty()) throw ContractError("empty group element list");
  RMatrix acc = RMatrix::Zero(gamma.rows(), gamma.cols());
  for (const auto& g : elements) acc += conjugate(gamma, word_permutation(g, space));
  return acc / static_cast<double>(elements.size());
}

SpanResult discover_span(const WordSpace& space, const SpanOptions& opts) {
  if (opts.stall_k < 1) throw ContractError("stall_k must be positive");
  const CounterRng root(opts.seed);
  SpanTracker tracker(space.size(), opts.tol);
  SpanResult out;
  const unsigned batch = std::max(1u, opts.threads);
  int stall = 0;
  std::uint64_t next = 0;
  while (stall < opts.stall_k) {
    std::vector<RMatrix> samples(batch);
    parallel_for(batch, batch, [&](std::size_t k) {
      const std::uint64_t seed = root.substream(next + k)();
      samples[k] = group_average(random_moment_matrix(space, seed), space);
    });
    next += batch;
    for (auto& m : samples) {
      if (stall >= opts.stall_k) break;
      ++out.samples;
      if (tracker.insert(m)) {
        out.generators.push_back(std::move(m));
        stall = 0;
      } else {
        ++stall;
      }
    }
  }
  for (int k = 0; k < tracker.dimension(); ++k) out.basis.push_back(tracker.basis_matrix(k));
  return out;
}

RMatrix game_matrix(const WordSpace& space) {
  const int n = space.n();
  const int d = space.d();
  const double weight = 1.0 / (static_cast<double>(binomial(n, 2)) * 2.0 * d * d);
  RMatrix b = RMatrix::Zero(space.size(), space.size());
  for (int k = 1; k <= space.state_count(); ++k) {
    const WordLabel& s = space[k];
    const int m1 = space.index_of(WordLabel::measurement(s.z1, s.x1));
    const int m2 = space.index_of(WordLabel::measurement(s.z2, s.x2));
    for (int m : {m1, m2}) {
      b(k, m) += weight / 2.0;
      b(m, k) += weight / 2.0;
    }
  }
  return b;
}

double realization_value(const Realization& r, const WordSpace& space) {
  const int n = space.n();
  const int d = space.d();
  const double weight = 1.0 / (static_cast<double>(binomial(n, 2)) * 2.0 * d * d);
  std::vector<double> terms;
  for (int k = 1; k <= space.state_count(); ++k) {
    const WordLabel& w = space[k];
    const CVector& s = r.states[static_cast<std::size_t>(k - 1)];
    terms.push_back(std::norm(r.bases[w.z1].column(w.x1).dot(s)) +
                    std::norm(r.bases[w.z2].column(w.x2).dot(s)));
  }
  return weight * pairwise_sum(terms);
}

HierarchyLmi build_hierarchy_lmi(const WordSpace& space, const SpanResult& span) {
  if (span.basis.empty()) throw ContractError("empty span");
  const auto words = static_cast<Eigen::Index>(space.size());
  RMatrix mean = RMatrix::Zero(words, words);
  for (const auto& g : span.generators) mean += g;
  mean /= static_cast<double>(span.generators.size());

  // Every span element shares the kernel of the mean generator (linear
  // operator identities), so restrict the LMI to its range.
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(mean);
  const double top = eig.eigenvalues()[words - 1];
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < words; ++k)
    if (eig.eigenvalues()[k] > 1e-9 * top) keep.push_back(k);
  HierarchyLmi out;
  out.range = eig.eigenvectors()(Eigen::all, keep);

  const RMatrix b = game_matrix(space);
  const auto v = static_cast<Eigen::Index>(span.basis.size());
  auto& p = out.problem;
  p.objective.resize(v);
  p.eq_lhs.resize(1, v);
  p.eq_rhs = RVector::Ones(1);
  RVector start(v);
  for (Eigen::Index j = 0; j < v; ++j) {
    const RMatrix& e = span.basis[static_cast<std::size_t>(j)];
    p.terms.emplace_back(out.range.transpose() * e * out.range);
    p.objective[j] = (b.array() * e.array()).sum();
    p.eq_lhs(0, j) = e(0, 0);
    start[j] = (e.array() * mean.array()).sum() / mean(0, 0);
  }
  p.start = start;
  return out;
}

BoundReport upper_bound(int n, int d, Level level, const BoundOptions& opts) {
  const WordSpace space(n, d, level);
  const SpanResult span = discover_span(space, opts.span);
  const HierarchyLmi lmi = build_hierarchy_lmi(space, span);
  const SdpSolution sol = solve_lmi(lmi.problem, opts.tol, opts.max_iter);

  BoundReport r;
  r.n = n;
  r.d = d;
  r.level = level;
  r.words = space.size();
  r.span_dim = span.dimension();
  r.reduced_size = static_cast<int>(lmi.range.cols());
  r.status = sol.status;
  r.iterations = sol.iterations;
  if (sol.status == SdpStatus::infeasible) {
    r.ptilde_bound = r.qbar_bound = r.primal = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double pc = classical_pair_value(d);
  const double pq = quantum_pair_value(d);
  r.ptilde_bound = sol.dual_bound;
  r.primal = sol.objective;
  r.qbar_bound = (sol.dual_bound - pc) / (pq - pc);
  r.gap = (sol.dual_bound - sol.objective) / (pq - pc);
  r.excluded = sol.status == SdpStatus::optimal && r.qbar_bound + 10.0 * r.gap < 1.0;
  return r;
}

nlohmann::json bound_report_to_json(const BoundReport& r) {
  return {{"n", r.n},
          {"d", r.d},
          {"level", to_string(r.level)},
          {"words", r.words},
          {"span_dim", r.span_dim},
          {"reduced_size", r.reduced_size},
          {"ptilde_bound", r.ptilde_bound},
          {"qbar_bound", r.qbar_bound},
          {"primal", r.primal},
          {"gap", r.gap},
          {"excluded", r.excluded},
          {"status", to_string(r.status)},
          {"iterations", r.iterations}};
}

MemoryEstimate memory_estimate(int n, int d, int k) {
  if (k < 0) throw ContractError("level k must be non-negative");
  if (n < 2 || d < 2) throw ContractError("memory_estimate needs n >= 2 and d >= 2");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const auto sat_mul = [&](std::uint64_t a, std::uint64_t b, bool& sat) {
    if (a != 0 && b > kMax / a) {
      sat = true;
      return kMax;
    }
    return a * b;
  };
  MemoryEstimate m;
  bool sat = false;
  const std::uint64_t a = sat_mul(binomial(n, 2), sat_mul(static_cast<std::uint64_t>(d),
                                                          static_cast<std::uint64_t>(d), sat), sat);
  const std::uint64_t b = sat_mul(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d), sat);
  m.a_plus_b = (a > kMax - b) ? (sat = true, kMax) : a + b;
  std::uint64_t power = 1;
  std::uint64_t total = 1;
  double approx = 1.0;
  double approx_power = 1.0;
  for (int i = 1; i <= k; ++i) {
    power = sat_mul(power, m.a_plus_b, sat);
    total = (total > kMax - power) ? (sat = true, kMax) : total + power;
    approx_power *= static_cast<double>(m.a_plus_b);
    approx += approx_power;
  }
  m.word_count = total;
  m.saturated = sat;
  m.parameter_count = 0.5 * approx * approx;
  m.bytes = 8.0 * m.parameter_count;
  return m;
}

}  // namespace mubforge
