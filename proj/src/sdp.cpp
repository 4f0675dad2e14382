#include "mubforge/sdp.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "mubforge/error.hpp"

namespace mubforge {

LmiTerm::LmiTerm(RMatrix dense) : n_(static_cast<int>(dense.rows())), dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols() || dense_.rows() == 0)
    throw ContractError("LMI coefficient must be a non-empty square matrix");
}

LmiTerm LmiTerm::sparse(int n, std::vector<Eigen::Triplet<double>> entries) {
  if (n < 1) throw ContractError("LMI coefficient must be non-empty");
  for (const auto& e : entries)
    if (e.row() < 0 || e.row() >= n || e.col() < 0 || e.col() >= n)
      throw ContractError("sparse LMI entry out of range");
  LmiTerm t;
  t.n_ = n;
  t.sparse_ = true;
  t.entries_ = std::move(entries);
  return t;
}

void LmiTerm::add_to(RMatrix& acc, double scale) const {
  if (!sparse_) {
    acc.noalias() += scale * dense_;
    return;
  }
  for (const auto& e : entries_) acc(e.row(), e.col()) += scale * e.value();
}

double LmiTerm::trace_with(const RMatrix& m) const {
  if (!sparse_) return (m.array() * dense_.array()).sum();
  double s = 0.0;
  for (const auto& e : entries_) s += m(e.col(), e.row()) * e.value();
  return s;
}

RMatrix LmiTerm::to_dense() const {
  if (!sparse_) return dense_;
  RMatrix out = RMatrix::Zero(n_, n_);
  add_to(out, 1.0);
  return out;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kBarrierGrowth = 5.0;  // t <- t / 0.2
constexpr double kCenterTol = 1e-10;    // half squared Newton decrement
constexpr double kArmijo = 0.25;

// log det of a positive definite matrix, or nullopt when the Cholesky fails.
template <typename Matrix>
std::optional<double> log_det_pd(const Matrix& f, Eigen::LLT<Matrix>& llt) {
  llt.compute(f);
  if (llt.info() != Eigen::Success) return std::nullopt;
  double s = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double di = std::real(l(i, i));
    if (!(di > 0.0)) return std::nullopt;
    s += std::log(di);
  }
  return 2.0 * s;
}

// Solves H X = rhs for symmetric positive (semi)definite H. The system is
// equilibrated by the diagonal first; a tiny ridge is added when Cholesky
// still fails. One step of iterative refinement follows.
RMatrix solve_spd(const RMatrix& h, const RMatrix& rhs) {
  RVector scale = h.diagonal().cwiseAbs();
  for (Eigen::Index i = 0; i < scale.size(); ++i)
    scale[i] = scale[i] > 0.0 ? 1.0 / std::sqrt(scale[i]) : 1.0;
  RMatrix hs = scale.asDiagonal() * h * scale.asDiagonal();
  Eigen::LLT<RMatrix> llt(hs);
  if (llt.info() != Eigen::Success) {
    hs.diagonal().array() += 1e-13;
    llt.compute(hs);
  }
  const RMatrix rs = scale.asDiagonal() * rhs;
  RMatrix x = llt.solve(rs);
  x += llt.solve(rs - hs * x);
  return scale.asDiagonal() * x;
}

// maximize c.u  subject to  F0 + sum_j u_j G_j > 0, with no equalities.
struct CoreProblem {
  const std::vector<LmiTerm>& terms;
  const RMatrix& constant;
  RVector c;
  int n;
  double offset = 0.0;  ///< constant added to c.u in the reported objective
};

struct CoreResult {
  SdpStatus status = SdpStatus::max_iter;
  RVector u;
  RMatrix w;  // F(u)^-1 at the last centered point
  double t = 1.0;
  int iterations = 0;
  std::vector<IterationRecord> history;
};

RMatrix assemble(const CoreProblem& p, const RVector& u) {
  RMatrix f = p.constant;
  for (std::size_t i = 0; i < p.terms.size(); ++i)
    if (u[static_cast<Eigen::Index>(i)] != 0.0)
      p.terms[i].add_to(f, u[static_cast<Eigen::Index>(i)]);
  return f;
}

// H_ij = tr(W F_i W F_j).
RMatrix barrier_hessian(const std::vector<LmiTerm>& terms, const RMatrix& w) {
  const auto v = static_cast<Eigen::Index>(terms.size());
  RMatrix h(v, v);
  std::vector<Eigen::Index> sparse_ids;
  for (Eigen::Index i = 0; i < v; ++i) {
    const auto& fi = terms[static_cast<std::size_t>(i)];
    if (fi.is_sparse()) {
      sparse_ids.push_back(i);
      continue;
    }
    const RMatrix t = w * fi.dense() * w;
    for (Eigen::Index j = 0; j < v; ++j) {
      const double val = terms[static_cast<std::size_t>(j)].trace_with(t);
      h(i, j) = val;
      h(j, i) = val;
    }
  }
  for (std::size_t a = 0; a < sparse_ids.size(); ++a) {
    const auto& fi = terms[static_cast<std::size_t>(sparse_ids[a])].entries();
    for (std::size_t b = a; b < sparse_ids.size(); ++b) {
      const auto& fj = terms[static_cast<std::size_t>(sparse_ids[b])].entries();
      double s = 0.0;
      for (const auto& ei : fi)
        for (const auto& ej : fj)
          s += ei.value() * ej.value() * w(ej.col(), ei.row()) * w(ei.col(), ej.row());
      h(sparse_ids[a], sparse_ids[b]) = s;
      h(sparse_ids[b], sparse_ids[a]) = s;
    }
  }
  return h;
}

CoreResult barrier_core(const CoreProblem& p, RVector u, double tol, int max_iter,
                        const std::function<bool(const RVector&)>& early_stop) {
  const auto v = static_cast<Eigen::Index>(p.terms.size());
  const double nu = p.n;
  CoreResult out;
  Eigen::LLT<RMatrix> llt;

  // Barrier part only; the linear part of a change is added separately so
  // that a large t does not swamp small decreases.
  auto barrier = [&](const RVector& uu) -> std::optional<double> {
    const auto ld = log_det_pd(assemble(p, uu), llt);
    if (!ld) return std::nullopt;
    return -*ld;
  };

  double t = 1.0;
  {
    // t minimizing the Newton decrement of the start, i.e. the least-squares
    // fit of t c + grad log det F in the H^-1 metric.
    llt.compute(assemble(p, u));
    const RMatrix w = llt.solve(RMatrix::Identity(p.n, p.n));
    RMatrix rhs(v, 2);
    rhs.col(0) = p.c;
    for (Eigen::Index i = 0; i < v; ++i) rhs(i, 1) = p.terms[static_cast<std::size_t>(i)].trace_with(w);
    const RMatrix hinv = solve_spd(barrier_hessian(p.terms, w), rhs);
    const double cc = p.c.dot(hinv.col(0));
    if (cc > 0.0) {
      const double fit = -p.c.dot(hinv.col(1)) / cc;
      if (std::isfinite(fit) && fit > 0.0) t = std::clamp(fit, 1e-6, 1e6);
    }
  }

  while (true) {
    bool stalled = false;
    while (true) {
      llt.compute(assemble(p, u));
      if (llt.info() != Eigen::Success) throw NumericalError("barrier iterate left the PSD cone");
      out.w = llt.solve(RMatrix::Identity(p.n, p.n));
      RVector grad(v);
      for (Eigen::Index i = 0; i < v; ++i)
        grad[i] = -t * p.c[i] - p.terms[static_cast<std::size_t>(i)].trace_with(out.w);
      const RVector step = -solve_spd(barrier_hessian(p.terms, out.w), RMatrix(grad)).col(0);
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 <= kCenterTol || !std::isfinite(decrement)) break;
      if (out.iterations >= max_iter) {
        out.status = SdpStatus::max_iter;
        out.u = u;
        out.t = t;
        return out;
      }
      ++out.iterations;

      const auto base = barrier(u);
      const double linear = -t * p.c.dot(step);
      double s = 1.0;
      bool moved = false;
      while (s > 1e-14) {
        const RVector trial = u + s * step;
        const auto val = barrier(trial);
        if (val && s * linear + (*val - *base) <= -kArmijo * s * decrement) {
          u = trial;
          moved = true;
          break;
        }
        s *= 0.5;
      }
      if (!moved) {
        stalled = true;
        break;
      }
    }

    const double primal = p.c.dot(u);
    const double gap = nu / t;
    out.history.push_back({t, primal, primal + gap});
    out.u = u;
    out.t = t;
    if (early_stop && early_stop(u)) {
      out.status = SdpStatus::optimal;
      return out;
    }
    if (gap <= tol * std::max(1.0, std::abs(primal + p.offset))) {
      out.status = SdpStatus::optimal;
      return out;
    }
    if (stalled && out.history.size() > 1) {
      // No progress possible at this precision.
      out.status = SdpStatus::max_iter;
      return out;
    }
    t *= kBarrierGrowth;
  }
}

// The equality constraints eliminated by pivoting: y = y0 + Z u, where Z has
// an identity block on the free columns. Terms become G_j = sum_i Z_ij F_i
// and F0 = sum_i y0_i F_i.
struct Reduced {
  std::vector<Eigen::Index> free;
  std::vector<Eigen::Index> pivots;
  RMatrix coupling;  // y_pivots = y0_pivots - coupling * u
  RVector y0;
  std::vector<LmiTerm> terms;
  RMatrix constant;
  RVector c;
  double c_offset = 0.0;

  RVector lift(const RVector& u) const {
    RVector y = y0;
    for (std::size_t k = 0; k < free.size(); ++k) y[free[k]] = u[static_cast<Eigen::Index>(k)];
    const RVector dp = coupling * u;
    for (std::size_t k = 0; k < pivots.size(); ++k) y[pivots[k]] -= dp[static_cast<Eigen::Index>(k)];
    return y;
  }
  RVector restrict(const RVector& y) const {
    RVector u(static_cast<Eigen::Index>(free.size()));
    for (std::size_t k = 0; k < free.size(); ++k) u[static_cast<Eigen::Index>(k)] = y[free[k]];
    return u;
  }
};

LmiTerm combine(const LmiTerm& base, const std::vector<std::pair<const LmiTerm*, double>>& extra) {
  bool sparse = base.is_sparse();
  for (const auto& [term, coef] : extra) sparse = sparse && term->is_sparse();
  if (!sparse) {
    RMatrix m = base.to_dense();
    for (const auto& [term, coef] : extra) term->add_to(m, coef);
    return LmiTerm(std::move(m));
  }
  std::vector<Eigen::Triplet<double>> entries = base.entries();
  for (const auto& [term, coef] : extra)
    for (const auto& e : term->entries()) entries.emplace_back(e.row(), e.col(), coef * e.value());
  return LmiTerm::sparse(base.dim(), std::move(entries));
}

std::optional<Reduced> reduce(const LmiProblem& problem) {
  const int n = problem.size();
  const auto v = static_cast<Eigen::Index>(problem.variables());
  const auto rows = problem.eq_lhs.rows();
  Reduced r;
  r.y0 = RVector::Zero(v);
  if (rows > 0) {
    Eigen::FullPivLU<RMatrix> lu(problem.eq_lhs);
    lu.setThreshold(1e-12);
    const auto rank = lu.rank();
    // Pivot columns come from the column permutation of the LU.
    std::vector<bool> is_pivot(static_cast<std::size_t>(v), false);
    for (Eigen::Index k = 0; k < rank; ++k) {
      const auto col = lu.permutationQ().indices()[k];
      is_pivot[static_cast<std::size_t>(col)] = true;
      r.pivots.push_back(col);
    }
    // Rows of A restricted to a basis of its row space.
    const RMatrix ap_all = problem.eq_lhs(Eigen::all, r.pivots);
    Eigen::ColPivHouseholderQR<RMatrix> rowsel(ap_all.transpose());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < rank; ++k) keep.push_back(rowsel.colsPermutation().indices()[k]);
    const RMatrix a = problem.eq_lhs(keep, Eigen::all);
    const RVector b = problem.eq_rhs(keep);
    const RMatrix ap = a(Eigen::all, r.pivots);
    const auto ap_lu = ap.partialPivLu();
    for (Eigen::Index j = 0; j < v; ++j)
      if (!is_pivot[static_cast<std::size_t>(j)]) r.free.push_back(j);
    r.coupling = ap_lu.solve(a(Eigen::all, r.free));
    const RVector yp = ap_lu.solve(b);
    for (std::size_t k = 0; k < r.pivots.size(); ++k) r.y0[r.pivots[k]] = yp[static_cast<Eigen::Index>(k)];
    if ((problem.eq_lhs * r.y0 - problem.eq_rhs).norm() > 1e-9 * (1.0 + problem.eq_rhs.norm()))
      return std::nullopt;  // inconsistent equalities
  } else {
    for (Eigen::Index j = 0; j < v; ++j) r.free.push_back(j);
    r.coupling = RMatrix::Zero(0, v);
  }

  r.constant = RMatrix::Zero(n, n);
  for (std::size_t k = 0; k < r.pivots.size(); ++k)
    problem.terms[static_cast<std::size_t>(r.pivots[k])].add_to(r.constant, r.y0[r.pivots[k]]);
  r.c_offset = problem.objective.dot(r.y0);
  r.c.resize(static_cast<Eigen::Index>(r.free.size()));
  for (std::size_t j = 0; j < r.free.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    double cj = problem.objective[r.free[j]];
    std::vector<std::pair<const LmiTerm*, double>> extra;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) {
      const double m = r.coupling(static_cast<Eigen::Index>(k), jj);
      if (m == 0.0) continue;
      cj -= m * problem.objective[r.pivots[k]];
      extra.emplace_back(&problem.terms[static_cast<std::size_t>(r.pivots[k])], -m);
    }
    r.c[jj] = cj;
    r.terms.push_back(combine(problem.terms[static_cast<std::size_t>(r.free[j])], extra));
  }
  return r;
}

std::optional<RVector> phase_one(const Reduced& r, int n, int max_iter) {
  const auto v = static_cast<Eigen::Index>(r.terms.size());
  const RVector u0 = RVector::Zero(v);
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(r.constant, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  const double lam_min = eig.eigenvalues()[0];
  if (lam_min > 1e-9 * scale) return u0;

  std::vector<LmiTerm> terms = r.terms;
  std::vector<Eigen::Triplet<double>> id;
  for (int i = 0; i < n; ++i) id.emplace_back(i, i, 1.0);
  terms.push_back(LmiTerm::sparse(n, std::move(id)));
  RVector c = RVector::Zero(v + 1);
  c[v] = -1.0;
  RVector start = RVector::Zero(v + 1);
  start[v] = -lam_min + 0.1 * scale;

  const double margin = 1e-7 * scale;
  const CoreProblem core{terms, r.constant, c, n};
  try {
    const auto res = barrier_core(core, start, 1e-12, max_iter,
                                  [&](const RVector& uu) { return uu[v] < -margin; });
    if (res.u[v] < -margin) return RVector(res.u.head(v));
  } catch (const NumericalError&) {
  }
  return std::nullopt;
}

}  // namespace

SdpSolution solve_lmi(const LmiProblem& problem, double tol, int max_iter) {
  const int v = problem.variables();
  if (v == 0) throw ContractError("LMI problem has no variables");
  const int n = problem.size();
  for (const auto& t : problem.terms)
    if (t.dim() != n) throw ContractError("LMI coefficients must share one size");
  if (problem.objective.size() != v)
    throw ContractError("objective length must equal the number of variables");
  if (problem.eq_lhs.rows() > 0 &&
      (problem.eq_lhs.cols() != v || problem.eq_rhs.size() != problem.eq_lhs.rows()))
    throw ContractError("equality rows must have one entry per variable");

  SdpSolution sol;
  const auto reduced = reduce(problem);
  if (!reduced) return sol;
  const Reduced& r = *reduced;

  std::optional<RVector> start;
  if (problem.start && problem.start->size() == v) {
    const RVector u = r.restrict(*problem.start);
    Eigen::LLT<RMatrix> llt;
    const CoreProblem probe{r.terms, r.constant, r.c, n};
    if ((r.lift(u) - *problem.start).norm() <= 1e-9 * (1.0 + problem.start->norm()) &&
        log_det_pd(assemble(probe, u), llt))
      start = u;
  }
  if (!start) start = phase_one(r, n, max_iter);
  if (!start) return sol;

  if (r.terms.empty()) {
    // The equalities pin every variable.
    sol.status = SdpStatus::optimal;
    sol.y = r.y0;
    sol.objective = r.c_offset;
    sol.dual_bound = sol.objective;
    return sol;
  }
  const CoreProblem core{r.terms, r.constant, r.c, n, r.c_offset};
  const auto res = barrier_core(core, *start, tol, max_iter, nullptr);

  sol.status = res.status;
  sol.y = r.lift(res.u);
  sol.iterations = res.iterations;
  sol.history = res.history;
  for (auto& h : sol.history) {
    h.primal += r.c_offset;
    h.dual += r.c_offset;
  }
  sol.objective = problem.objective.dot(sol.y);
  sol.dual_bound = sol.objective + n / res.t;
  sol.gap = (n / res.t) / std::max(1.0, std::abs(sol.objective));
  sol.dual_matrix = res.w / res.t;
  return sol;
}

namespace {

// Orthonormal basis of d x d hermitian matrices under Re tr(A B):
// diagonal units, (e_pq + e_qp)/sqrt2 and i(e_pq - e_qp)/sqrt2 for p < q.
struct HermitianUnit {
  int p, q;
  int kind;  // 0 diagonal, 1 real symmetric, 2 imaginary antisymmetric
};

std::vector<HermitianUnit> hermitian_units(int d) {
  std::vector<HermitianUnit> units;
  for (int p = 0; p < d; ++p) units.push_back({p, p, 0});
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q) {
      units.push_back({p, q, 1});
      units.push_back({p, q, 2});
    }
  return units;
}

// Entries of a unit as (row, col, value).
struct UnitEntry {
  int r, c;
  Complex v;
};

std::vector<std::vector<UnitEntry>> unit_entries(const std::vector<HermitianUnit>& units) {
  const double s = 1.0 / std::numbers::sqrt2;
  std::vector<std::vector<UnitEntry>> out;
  for (const auto& u : units) {
    if (u.kind == 0)
      out.push_back({{u.p, u.p, 1.0}});
    else if (u.kind == 1)
      out.push_back({{u.p, u.q, s}, {u.q, u.p, s}});
    else
      out.push_back({{u.p, u.q, Complex(0, s)}, {u.q, u.p, Complex(0, -s)}});
  }
  return out;
}

CMatrix hermitian_from(const RVector& u, const std::vector<std::vector<UnitEntry>>& entries, int d) {
  CMatrix y = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < entries.size(); ++k)
    for (const auto& e : entries[k]) y(e.r, e.c) += u[static_cast<Eigen::Index>(k)] * e.v;
  return y;
}

// Re tr(M E) for hermitian M.
double unit_pairing(const CMatrix& m, const std::vector<UnitEntry>& e) {
  Complex s = 0.0;
  for (const auto& x : e) s += m(x.c, x.r) * x.v;
  return s.real();
}

}  // namespace

SdpSolution solve_povm(const BlockSdpProblem& problem, double tol, int max_iter) {
  if (problem.costs.empty()) throw ContractError("POVM problem needs at least one block");
  const int d = static_cast<int>(problem.costs.front().rows());
  for (const auto& s : problem.costs) {
    if (s.rows() != d || s.cols() != d)
      throw ContractError("all POVM cost blocks must share one dimension");
    require_hermitian(s);
  }
  const int blocks = static_cast<int>(problem.costs.size());

  double top = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& s : problem.costs) {
    const auto ev = hermitian_eig(s).values;
    top = std::max(top, ev[d - 1]);
    scale = std::max(scale, ev.cwiseAbs().maxCoeff());
  }
  if (scale == 0.0) scale = 1.0;

  const auto units = hermitian_units(d);
  const auto entries = unit_entries(units);
  const auto dim = static_cast<Eigen::Index>(units.size());
  RVector c = RVector::Zero(dim);
  for (int p = 0; p < d; ++p) c[p] = 1.0;

  RVector u = RVector::Zero(dim);
  for (int p = 0; p < d; ++p) u[p] = top + scale;

  std::vector<Eigen::LLT<CMatrix>> llts(static_cast<std::size_t>(blocks));
  std::vector<CMatrix> w(static_cast<std::size_t>(blocks));

  auto barrier = [&](const RVector& uu) -> std::optional<double> {
    const CMatrix y = hermitian_from(uu, entries, d);
    double val = 0.0;
    Eigen::LLT<CMatrix> llt;
    for (const auto& s : problem.costs) {
      const auto ld = log_det_pd(CMatrix(y - s), llt);
      if (!ld) return std::nullopt;
      val -= *ld;
    }
    return val;
  };

  SdpSolution sol;
  const double nu = static_cast<double>(blocks) * d;
  double t = d / scale;
  while (true) {
    bool stalled = false;
    while (true) {
      const CMatrix y = hermitian_from(u, entries, d);
      for (int b = 0; b < blocks; ++b) {
        llts[b].compute(y - problem.costs[b]);
        if (llts[b].info() != Eigen::Success)
          throw NumericalError("POVM barrier iterate left the PSD cone");
        w[b] = llts[b].solve(CMatrix::Identity(d, d));
      }
      RVector grad = t * c;
      RMatrix h = RMatrix::Zero(dim, dim);
      for (int b = 0; b < blocks; ++b) {
        const CMatrix& wb = w[b];
        for (Eigen::Index k = 0; k < dim; ++k) {
          grad[k] -= unit_pairing(wb, entries[k]);
          for (Eigen::Index l = k; l < dim; ++l) {
            Complex s = 0.0;
            for (const auto& ek : entries[k])
              for (const auto& el : entries[l])
                s += ek.v * el.v * wb(el.c, ek.r) * wb(ek.c, el.r);
            h(k, l) += s.real();
          }
        }
      }
      h.triangularView<Eigen::StrictlyLower>() = h.transpose();
      const RVector step = -solve_spd(h, RMatrix(grad)).col(0);
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 <= kCenterTol || !std::isfinite(decrement)) break;
      if (sol.iterations >= max_iter) {
        sol.status = SdpStatus::max_iter;
        break;
      }
      ++sol.iterations;
      const auto base = barrier(u);
      const double slope = grad.dot(step);
      const double linear = t * c.dot(step);
      double s = 1.0;
      bool moved = false;
      while (s > 1e-14) {
        const RVector trial = u + s * step;
        const auto val = barrier(trial);
        if (val && s * linear + (*val - *base) <= kArmijo * s * slope) {
          u = trial;
          moved = true;
          break;
        }
        s *= 0.5;
      }
      if (!moved) {
        stalled = true;
        break;
      }
    }
    const double dual = c.dot(u);
    const double gap = nu / t;
    sol.history.push_back({t, dual - gap, dual});
    if (sol.status == SdpStatus::max_iter) break;
    if (gap <= tol * std::max(std::abs(dual - gap), scale)) {
      sol.status = SdpStatus::optimal;
      break;
    }
    if (stalled && sol.history.size() > 1) {
      sol.status = SdpStatus::max_iter;
      break;
    }
    t *= kBarrierGrowth;
  }

  // Recover the POVM from the last centered point and normalize sum_b M_b = I.
  const CMatrix y = hermitian_from(u, entries, d);
  CMatrix total = CMatrix::Zero(d, d);
  sol.blocks.resize(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) {
    Eigen::LLT<CMatrix> llt(y - problem.costs[b]);
    CMatrix m = llt.solve(CMatrix::Identity(d, d)) / t;
    m = 0.5 * (m + m.adjoint()).eval();
    sol.blocks[b] = m;
    total += m;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (total + total.adjoint()));
  const CMatrix inv_sqrt = eig.eigenvectors() *
                           eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                           eig.eigenvectors().adjoint();
  double primal = 0.0;
  for (int b = 0; b < blocks; ++b) {
    CMatrix m = inv_sqrt * sol.blocks[b] * inv_sqrt;
    m = 0.5 * (m + m.adjoint()).eval();
    primal += (problem.costs[b] * m).trace().real();
    sol.blocks[b] = std::move(m);
  }
  sol.objective = primal;
  sol.dual_bound = c.dot(u);
  sol.gap = (sol.dual_bound - primal) / std::max(std::abs(primal), scale);
  sol.y = u;
  return sol;
}

void write_lmi_dump(const LmiProblem& problem, std::ostream& out) {
  const int n = problem.size();
  const int v = problem.variables();
  const auto rows = problem.eq_lhs.rows();
  out << std::setprecision(17);
  out << "lmi " << n << ' ' << v << ' ' << rows << '\n';
  for (int k = 0; k < v; ++k) {
    const RMatrix f = problem.terms[static_cast<std::size_t>(k)].to_dense();
    out << "F " << k << '\n';
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) out << (j > i ? " " : "") << f(i, j);
      out << '\n';
    }
  }
  out << "c";
  for (int k = 0; k < v; ++k) out << ' ' << problem.objective[k];
  out << '\n';
  for (Eigen::Index r = 0; r < rows; ++r) {
    out << "eq";
    for (int k = 0; k < v; ++k) out << ' ' << problem.eq_lhs(r, k);
    out << ' ' << problem.eq_rhs[r] << '\n';
  }
}

}  // namespace mubforge
