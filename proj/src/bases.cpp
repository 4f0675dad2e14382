#include "mubforge/bases.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "mubforge/error.hpp"
#include "mubforge/galois_field.hpp"

namespace mubforge {

std::optional<std::pair<int, int>> orthonormality_violation(const CMatrix& v,
                                                            double tol) {
  const CMatrix gram = v.adjoint() * v;
  for (Eigen::Index j = 0; j < gram.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Complex expected = (i == j) ? Complex(1.0) : Complex(0.0);
      if (std::abs(gram(i, j) - expected) > tol)
        return std::pair{static_cast<int>(i), static_cast<int>(j)};
    }
  return std::nullopt;
}

Basis::Basis(CMatrix vectors, double tol) : vectors_(std::move(vectors)) {
  if (vectors_.rows() != vectors_.cols() || vectors_.rows() == 0)
    throw ValidationError("a basis needs d columns of length d, got " +
                          std::to_string(vectors_.rows()) + "x" +
                          std::to_string(vectors_.cols()));
  if (auto bad = orthonormality_violation(vectors_, tol))
    throw ValidationError("basis columns " + std::to_string(bad->first) +
                          " and " + std::to_string(bad->second) +
                          " are not orthonormal");
}

Basis Basis::computational(int d) {
  if (d < 1) throw ContractError("dimension must be positive");
  return Basis(CMatrix::Identity(d, d));
}

Basis Basis::fourier(int d) {
  if (d < 1) throw ContractError("dimension must be positive");
  CMatrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int l = 0; l < d; ++l)
    for (int j = 0; j < d; ++j)
      f(l, j) = std::polar(norm, 2.0 * std::numbers::pi * ((j * l) % d) / d);
  return Basis(std::move(f));
}

CMatrix Basis::projector(int i) const {
  return vectors_.col(i) * vectors_.col(i).adjoint();
}

BasisSet::BasisSet(std::vector<Basis> bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw ContractError("a basis set needs at least one basis");
  for (const auto& b : bases_)
    if (b.dim() != bases_.front().dim())
      throw ContractError("all bases in a set must share one dimension");
}

BasisSet BasisSet::subset(const std::vector<int>& indices) const {
  std::vector<Basis> picked;
  picked.reserve(indices.size());
  for (int k : indices) {
    if (k < 0 || k >= size()) throw ContractError("basis index out of range");
    picked.push_back(bases_[static_cast<std::size_t>(k)]);
  }
  return BasisSet(std::move(picked));
}

namespace {

void require_same_dim(const Basis& b1, const Basis& b2) {
  if (b1.dim() != b2.dim())
    throw ContractError("bases have different dimensions (" +
                        std::to_string(b1.dim()) + " vs " +
                        std::to_string(b2.dim()) + ")");
}

void require_pairs(const BasisSet& set) {
  if (set.size() < 2) throw ContractError("need at least two bases");
}

template <typename PairFn>
double mean_over_pairs(const BasisSet& set, PairFn fn) {
  std::vector<double> values;
  for (int a = 0; a < set.size(); ++a)
    for (int b = a + 1; b < set.size(); ++b) values.push_back(fn(set[a], set[b]));
  return pairwise_sum(values) / static_cast<double>(values.size());
}

BasisSet odd_characteristic_family(const GaloisField& field) {
  const int q = field.size();
  const int p = field.p();
  const double norm = 1.0 / std::sqrt(static_cast<double>(q));
  std::vector<Basis> bases{Basis::computational(q)};
  for (int r = 0; r < q; ++r) {
    CMatrix v(q, q);
    for (int s = 0; s < q; ++s)
      for (int l = 0; l < q; ++l) {
        const int arg = field.add(field.mul(r, field.mul(l, l)), field.mul(s, l));
        v(l, s) = std::polar(norm, 2.0 * std::numbers::pi * field.trace(arg) / p);
      }
    bases.emplace_back(std::move(v));
  }
  return BasisSet(std::move(bases));
}

BasisSet even_characteristic_family(const GaloisField& field) {
  const int q = field.size();
  const int k = field.k();
  const double norm = 1.0 / std::sqrt(static_cast<double>(q));
  static const Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<Basis> bases{Basis::computational(q)};
  for (int r = 0; r < q; ++r) {
    std::vector<int> form(static_cast<std::size_t>(k * k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        form[i * k + j] = field.trace(field.mul(
            r, field.mul(field.basis_element(i), field.basis_element(j))));
    CMatrix v(q, q);
    for (int l = 0; l < q; ++l) {
      int quad = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          quad += form[i * k + j] * field.digit(l, i) * field.digit(l, j);
      for (int s = 0; s < q; ++s) {
        int parity = 0;
        for (int i = 0; i < k; ++i) parity += field.digit(s, i) * field.digit(l, i);
        v(l, s) = norm * kPowersOfI[(quad + 2 * parity) % 4];
      }
    }
    bases.emplace_back(std::move(v));
  }
  return BasisSet(std::move(bases));
}

}  // namespace

RMatrix overlap_moduli(const Basis& b1, const Basis& b2) {
  require_same_dim(b1, b2);
  return (b1.vectors().adjoint() * b2.vectors()).cwiseAbs();
}

bool is_mub_pair(const Basis& b1, const Basis& b2, double tol) {
  const RMatrix mod = overlap_moduli(b1, b2);
  const double target = 1.0 / b1.dim();
  return (mod.array().square() - target).abs().maxCoeff() <= tol;
}

BasisSet mub_family(int d) {
  const auto pk = prime_power(d);
  if (!pk)
    throw UnsupportedDimension("no complete MUB construction for d=" +
                               std::to_string(d) + " (not a prime power)");
  const GaloisField field(pk->p, pk->k);
  return pk->p == 2 ? even_characteristic_family(field)
                    : odd_characteristic_family(field);
}

double distance_sq(const Basis& b1, const Basis& b2) {
  require_same_dim(b1, b2);
  const int d = b1.dim();
  if (d < 2) throw ContractError("distance_sq needs d >= 2");
  // Both orientations are summed so the result is exactly symmetric.
  const auto dev = [d](const Basis& a, const Basis& b) {
    return (overlap_moduli(a, b).array().square() - 1.0 / d).square().sum();
  };
  return 1.0 - 0.5 * (dev(b1, b2) + dev(b2, b1)) / (d - 1);
}

double avg_distance_sq(const BasisSet& set) {
  require_pairs(set);
  return mean_over_pairs(set, [](const Basis& a, const Basis& b) {
    return distance_sq(a, b);
  });
}

double pbar(const BasisSet& set) {
  require_pairs(set);
  const double d = set.dim();
  return mean_over_pairs(set, [d](const Basis& a, const Basis& b) {
    return 0.5 + overlap_moduli(a, b).sum() / (2.0 * d * d);
  });
}

double classical_pair_value(int d) { return 0.5 * (1.0 + 1.0 / d); }

double quantum_pair_value(int d) { return 0.5 * (1.0 + 1.0 / std::sqrt(double(d))); }

double qbar(const BasisSet& set) {
  require_pairs(set);
  const int d = set.dim();
  if (d < 2) throw ContractError("qbar is degenerate for d < 2");
  const double pc = classical_pair_value(d);
  return (pbar(set) - pc) / (quantum_pair_value(d) - pc);
}

double qbar_double_sum(const BasisSet& set) {
  require_pairs(set);
  const double d = set.dim();
  if (d < 2) throw ContractError("qbar is degenerate for d < 2");
  const double scale = 1.0 / (d * (std::sqrt(d) - 1.0));
  return mean_over_pairs(set, [&](const Basis& a, const Basis& b) {
    return scale * (overlap_moduli(a, b).array() - 1.0 / d).sum();
  });
}

nlohmann::json basis_set_to_json(const BasisSet& set) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : set.bases()) {
    nlohmann::json cols = nlohmann::json::array();
    for (int c = 0; c < b.dim(); ++c) {
      nlohmann::json col = nlohmann::json::array();
      for (int r = 0; r < b.dim(); ++r)
        col.push_back({b.vectors()(r, c).real(), b.vectors()(r, c).imag()});
      cols.push_back(std::move(col));
    }
    bases.push_back(std::move(cols));
  }
  return {{"d", set.dim()}, {"n", set.size()}, {"bases", std::move(bases)}};
}

BasisSet basis_set_from_json(const nlohmann::json& doc, double tol) {
  try {
    const int d = doc.at("d").get<int>();
    const int n = doc.at("n").get<int>();
    const auto& bases = doc.at("bases");
    if (d < 1 || n < 1)
      throw ValidationError("basis-set file needs d >= 1 and n >= 1");
    if (!bases.is_array() || static_cast<int>(bases.size()) != n)
      throw ValidationError("basis-set file declares n=" + std::to_string(n) +
                            " but lists " + std::to_string(bases.size()) +
                            " bases");
    std::vector<Basis> out;
    for (int k = 0; k < n; ++k) {
      const auto& cols = bases[static_cast<std::size_t>(k)];
      if (!cols.is_array() || static_cast<int>(cols.size()) != d)
        throw ValidationError("basis " + std::to_string(k) + " must have " +
                              std::to_string(d) + " columns");
      CMatrix v(d, d);
      for (int c = 0; c < d; ++c) {
        const auto& col = cols[static_cast<std::size_t>(c)];
        if (!col.is_array() || static_cast<int>(col.size()) != d)
          throw ValidationError("basis " + std::to_string(k) + " column " +
                                std::to_string(c) + " must have " +
                                std::to_string(d) + " entries");
        for (int r = 0; r < d; ++r) {
          const auto& z = col[static_cast<std::size_t>(r)];
          if (!z.is_array() || z.size() != 2)
            throw ValidationError("complex entries must be [re, im] pairs");
          v(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
        }
      }
      if (auto bad = orthonormality_violation(v, tol))
        throw ValidationError("basis " + std::to_string(k) + ": columns " +
                              std::to_string(bad->first) + " and " +
                              std::to_string(bad->second) +
                              " are not orthonormal");
      out.emplace_back(std::move(v), tol);
    }
    return BasisSet(std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed basis-set document: ") + e.what());
  }
}

std::string basis_set_to_text(const BasisSet& set) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"d\": " << set.dim() << ", \"n\": " << set.size() << ", \"bases\": [";
  for (int k = 0; k < set.size(); ++k) {
    os << (k ? ",\n  [" : "\n  [");
    const CMatrix& v = set[k].vectors();
    for (int c = 0; c < set.dim(); ++c) {
      os << (c ? ",\n   [" : "\n   [");
      for (int r = 0; r < set.dim(); ++r)
        os << (r ? ", [" : "[") << v(r, c).real() << ", " << v(r, c).imag() << "]";
      os << "]";
    }
    os << "]";
  }
  os << "]}\n";
  return os.str();
}

void save_basis_set(const BasisSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << basis_set_to_text(set);
  if (!out) throw ValidationError("failed writing " + path.string());
}

BasisSet load_basis_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed basis-set file " + path.string() + ": " +
                          e.what());
  }
  return basis_set_from_json(doc);
}

}  // namespace mubforge
