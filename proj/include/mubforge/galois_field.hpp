#pragma once

#include <optional>
#include <vector>

namespace mubforge {

/// Prime-power factorization d = p^k, if d is a prime power.
struct PrimePower {
  int p;
  int k;
};
std::optional<PrimePower> prime_power(int d);

/// Finite field GF(p^k) with full addition and multiplication tables.
/// Element e in [0, q) encodes the polynomial sum_i c_i x^i, with c_i the
/// base-p digits of e, reduced modulo the lexicographically first monic
/// irreducible polynomial of degree k.
class GaloisField {
 public:
  GaloisField(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  int size() const { return q_; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  /// Absolute trace a + a^p + ... + a^(p^(k-1)), an element of GF(p).
  int trace(int a) const { return trace_[a]; }
  /// Base-p digit i of the element encoding (coordinate in the power basis).
  int digit(int a, int i) const;
  /// The power-basis element x^i.
  int basis_element(int i) const;

  const std::vector<int>& modulus() const { return modulus_; }

 private:
  int p_, k_, q_;
  std::vector<int> modulus_;  // low-to-high coefficients, monic, degree k
  std::vector<int> add_, mul_, trace_;
};

}  // namespace mubforge
