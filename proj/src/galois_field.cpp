#include "mubforge/galois_field.hpp"

#include <string>

#include "mubforge/error.hpp"

namespace mubforge {
namespace {

using Poly = std::vector<int>;  // low-to-high coefficients mod p

bool is_prime(int n) {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

Poly decode(int value, int p, int len) {
  Poly c(len);
  for (int i = 0; i < len; ++i) {
    c[i] = value % p;
    value /= p;
  }
  return c;
}

int encode(const Poly& c, int p) {
  int v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * p + *it;
  return v;
}

int degree(const Poly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != 0) return i;
  return -1;
}

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

// Remainder of a modulo the nonzero polynomial m.
Poly poly_mod(Poly a, const Poly& m, int p) {
  const int dm = degree(m);
  const int inv_lead = inverse_mod(m[dm], p);
  for (int da = degree(a); da >= dm; da = degree(a)) {
    const int factor = a[da] * inv_lead % p;
    for (int i = 0; i <= dm; ++i)
      a[da - dm + i] = ((a[da - dm + i] - factor * m[i]) % p + p) % p;
  }
  a.resize(std::max(dm, 1));
  return a;
}

bool is_irreducible(const Poly& m, int p) {
  const int k = degree(m);
  // Any factorization has a monic factor of degree between 1 and k/2.
  for (int deg = 1; 2 * deg <= k; ++deg) {
    int count = 1;
    for (int i = 0; i < deg; ++i) count *= p;
    for (int low = 0; low < count; ++low) {
      Poly f = decode(low, p, deg + 1);
      f[deg] = 1;
      const Poly r = poly_mod(m, f, p);
      if (degree(r) < 0) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<PrimePower> prime_power(int d) {
  if (d < 2) return std::nullopt;
  for (int p = 2; p <= d; ++p) {
    if (d % p != 0) continue;
    if (!is_prime(p)) return std::nullopt;
    int k = 0, rest = d;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    if (rest != 1) return std::nullopt;
    return PrimePower{p, k};
  }
  return std::nullopt;
}

GaloisField::GaloisField(int p, int k) : p_(p), k_(k), q_(1) {
  if (!is_prime(p) || k < 1)
    throw UnsupportedDimension("GF(p^k) needs prime p and k >= 1, got p=" +
                               std::to_string(p) + " k=" + std::to_string(k));
  for (int i = 0; i < k; ++i) q_ *= p;

  for (int low = 0; low < q_; ++low) {
    Poly m = decode(low, p, k + 1);
    m[k] = 1;
    if (k == 1 || is_irreducible(m, p)) {
      modulus_ = m;
      break;
    }
  }

  add_.resize(static_cast<std::size_t>(q_) * q_);
  mul_.resize(static_cast<std::size_t>(q_) * q_);
  for (int a = 0; a < q_; ++a) {
    const Poly pa = decode(a, p, k);
    for (int b = 0; b < q_; ++b) {
      const Poly pb = decode(b, p, k);
      Poly sum(k);
      for (int i = 0; i < k; ++i) sum[i] = (pa[i] + pb[i]) % p;
      add_[a * q_ + b] = encode(sum, p);

      Poly prod(2 * k - 1, 0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
      mul_[a * q_ + b] = encode(poly_mod(prod, modulus_, p), p);
    }
  }

  trace_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    int power = a, acc = 0;
    for (int i = 0; i < k; ++i) {
      acc = add(acc, power);
      int next = 1;
      for (int j = 0; j < p; ++j) next = mul(next, power);
      power = next;
    }
    trace_[a] = acc;  // lies in the prime subfield, encoded as 0..p-1
  }
}

int GaloisField::digit(int a, int i) const {
  for (int j = 0; j < i; ++j) a /= p_;
  return a % p_;
}

int GaloisField::basis_element(int i) const {
  int v = 1;
  for (int j = 0; j < i; ++j) v *= p_;
  return v;
}

}  // namespace mubforge
