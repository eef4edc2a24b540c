#include "support/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracles {

using cuspforms::BigInt;
using Rational = boost::multiprecision::cpp_rational;

namespace {

using Poly = std::vector<std::int64_t>;  // ascending, mod q

Poly poly_mul(const Poly& a, const Poly& b, std::int64_t q) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = (out[i + j] +
                    static_cast<std::int64_t>(
                        static_cast<__int128>(a[i]) * b[j] % q)) %
                   q;
  return out;
}

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

}  // namespace

std::vector<std::int64_t> permutation_charpoly(
    const cuspforms::ScaledMatrix& A) {
  if (A.scale() != 0) throw std::runtime_error("oracle expects scale 0");
  const int n = A.n();
  const std::int64_t q = A.modulus();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Poly acc(static_cast<std::size_t>(n) + 1, 0);
  do {
    Poly prod{1};
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      const std::int64_t minus_a = (q - A.at(i, j) % q) % q;
      Poly factor = i == j ? Poly{minus_a, 1} : Poly{minus_a};
      prod = poly_mul(prod, factor, q);
    }
    const std::int64_t sgn = permutation_sign(perm) == 1 ? 1 : q - 1;
    for (std::size_t k = 0; k < prod.size(); ++k)
      acc[k] = (acc[k] + static_cast<std::int64_t>(
                             static_cast<__int128>(sgn) * prod[k] % q)) %
               q;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

namespace {

// Remainder of monic division a mod b over F_p (b monic).
Poly poly_mod(Poly a, const Poly& b, std::int64_t p) {
  while (a.size() >= b.size()) {
    const std::int64_t lead = a.back() % p;
    if (lead != 0) {
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i)
        a[shift + i] = ((a[shift + i] - lead * b[i]) % p + p) % p;
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() % p == 0) a.pop_back();
  return a;
}

}  // namespace

bool exhaustive_irreducible(std::int64_t p,
                            const std::vector<std::int64_t>& ascending) {
  const int deg = static_cast<int>(ascending.size()) - 1;
  if (deg < 1 || ascending.back() % p != 1)
    throw std::runtime_error("oracle expects a monic polynomial");
  if (deg == 1) return true;
  for (int d = 1; 2 * d <= deg; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t t = 0; t < count; ++t) {
      Poly divisor;
      std::int64_t rest = t;
      for (int i = 0; i < d; ++i) {
        divisor.push_back(rest % p);
        rest /= p;
      }
      divisor.push_back(1);
      if (poly_mod(ascending, divisor, p).empty()) return false;
    }
  }
  return true;
}

namespace {

std::int64_t rational_mod_power(const Rational& r, std::int64_t p,
                                int target) {
  BigInt q = 1;
  for (int i = 0; i < target; ++i) q *= p;
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den % p == 0)
    throw std::runtime_error("oracle: sum is not p-adically integral");
  // Inverse of den mod q by extended Euclid on big integers.
  BigInt a = den % q, b = q, x0 = 1, x1 = 0;
  while (b != 0) {
    BigInt s = a / b;
    BigInt t = a - s * b;
    a = b;
    b = t;
    t = x0 - s * x1;
    x0 = x1;
    x1 = t;
  }
  if (a != 1) throw std::runtime_error("oracle: denominator not invertible");
  BigInt res = ((num % q) * (x0 % q)) % q;
  if (res < 0) res += q;
  return res.convert_to<std::int64_t>();
}

}  // namespace

std::int64_t rational_exp_scalar(std::int64_t p, std::int64_t x, int target) {
  Rational sum = 0;
  Rational term = 1;  // x^k / k!
  const int cutoff = 2 * target + 8;
  for (int k = 0; k < cutoff; ++k) {
    sum += term;
    term *= x;
    term /= (k + 1);
  }
  return rational_mod_power(sum, p, target);
}

std::int64_t rational_log_scalar(std::int64_t p, std::int64_t y, int target) {
  Rational sum = 0;
  Rational power = 1;  // y^k
  const int cutoff = 4 * target + 8;
  for (int k = 1; k < cutoff; ++k) {
    power *= y;
    Rational term = power / k;
    sum += (k % 2 == 1) ? term : -term;
  }
  return rational_mod_power(sum, p, target);
}

cuspforms::Cyclotomic delta_transform_value(const cuspforms::LatticeWindow& w,
                                            std::int64_t src_key,
                                            std::int64_t dual_key) {
  const int d = w.depth();
  if (d < 1) throw std::runtime_error("oracle expects depth >= 1");
  const std::int64_t qd = w.radix();
  const auto& coords = w.coords();
  std::vector<std::int64_t> x = w.values_of_key(src_key);
  std::vector<std::int64_t> y = w.dual().values_of_key(dual_key);
  __int128 e = 0;
  for (std::size_t c = 0; c < coords.size(); ++c) {
    // position of the transposed coordinate (j, i)
    std::size_t t = coords.size();
    for (std::size_t s = 0; s < coords.size(); ++s)
      if (coords[s].i == coords[c].j && coords[s].j == coords[c].i) t = s;
    if (t == coords.size())
      throw std::runtime_error("oracle expects a transpose-closed subspace");
    e += static_cast<__int128>(x[c]) * y[t];
  }
  const std::int64_t exponent = static_cast<std::int64_t>(e % qd);
  const long long dim = w.dim();
  return cuspforms::Cyclotomic::root_of_unity(w.p(), d, exponent)
      .rescaled_p(-static_cast<long long>(w.invariance_scale()) * dim);
}

}  // namespace oracles
