#include "cuspforms/cyclotomic.hpp"

#include <cmath>
#include <numbers>

namespace cuspforms {

std::int64_t phi_p_power(std::int64_t p, int m) {
  if (m < 0) throw Error("phi_p_power: negative level");
  if (m == 0) return 1;
  return pow_i64(p, m - 1) * (p - 1);
}

void accumulate_root_multiple(std::vector<BigInt>& acc, std::int64_t p, int m,
                              std::int64_t e, const BigInt& c) {
  if (m == 0) {
    acc[0] += c;
    return;
  }
  const std::int64_t q = pow_i64(p, m);
  const std::int64_t qp = q / p;  // p^(m-1)
  const std::int64_t phi = qp * (p - 1);
  e %= q;
  if (e < 0) e += q;
  if (e < phi) {
    acc[static_cast<std::size_t>(e)] += c;
    return;
  }
  const std::int64_t r = e - phi;  // 0 <= r < qp
  for (std::int64_t j = 0; j <= p - 2; ++j)
    acc[static_cast<std::size_t>(r + j * qp)] -= c;
}

Cyclotomic::Cyclotomic(std::int64_t p, int level, long long pscale,
                       std::vector<BigInt> coeffs)
    : p_(p), level_(level), pscale_(pscale), c_(std::move(coeffs)) {
  if (!is_prime(p_)) throw ValidationError("Cyclotomic: p must be prime");
  if (level_ < 0) throw Error("Cyclotomic: negative level");
  if (static_cast<std::int64_t>(c_.size()) != phi_p_power(p_, level_))
    throw ValidationError("Cyclotomic: coefficient count does not match the level");
  canonicalize();
}

void Cyclotomic::canonicalize() {
  bool all_zero = true;
  for (const auto& c : c_)
    if (c != 0) {
      all_zero = false;
      break;
    }
  if (all_zero) {
    level_ = 0;
    pscale_ = 0;
    c_.assign(1, BigInt(0));
    return;
  }
  // Strip the largest common power of p into pscale.
  int strip = -1;
  for (const auto& c : c_) {
    if (c == 0) continue;
    BigInt v = c;
    int k = 0;
    while (v % p_ == 0 && (strip < 0 || k < strip)) {
      v /= p_;
      ++k;
    }
    strip = (strip < 0) ? k : std::min(strip, k);
    if (strip == 0) break;
  }
  if (strip > 0) {
    BigInt q = 1;
    for (int t = 0; t < strip; ++t) q *= p_;
    for (auto& c : c_) c /= q;
    pscale_ += strip;
  }
  // Descend to the minimal level: a level-m element lies at level m-1 exactly
  // when its support sits on exponents divisible by p.
  while (level_ >= 1) {
    bool descends = true;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0 && i % static_cast<std::size_t>(p_) != 0) {
        descends = false;
        break;
      }
    if (!descends) break;
    std::vector<BigInt> down(
        static_cast<std::size_t>(phi_p_power(p_, level_ - 1)));
    for (std::size_t k = 0; k < down.size(); ++k)
      down[k] = c_[k * static_cast<std::size_t>(p_)];
    c_ = std::move(down);
    --level_;
  }
}

Cyclotomic Cyclotomic::zero(std::int64_t p) {
  return Cyclotomic(p, 0, 0, {BigInt(0)});
}

Cyclotomic Cyclotomic::one(std::int64_t p) {
  return Cyclotomic(p, 0, 0, {BigInt(1)});
}

Cyclotomic Cyclotomic::integer(std::int64_t p, const BigInt& v) {
  return Cyclotomic(p, 0, 0, {v});
}

Cyclotomic Cyclotomic::root_of_unity(std::int64_t p, int m, std::int64_t e) {
  std::vector<BigInt> acc(static_cast<std::size_t>(phi_p_power(p, m)));
  accumulate_root_multiple(acc, p, m, e, BigInt(1));
  return Cyclotomic(p, m, 0, std::move(acc));
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  if (p_ != o.p_) return false;
  // Canonical values (everything the constructor returns) compare
  // structurally; a level-raised copy of the same value differs in shape, so
  // fall back to the exact difference test.
  if (level_ == o.level_ && pscale_ == o.pscale_) return c_ == o.c_;
  return (*this + -o).is_zero();
}

Cyclotomic Cyclotomic::raised_to_level(int m) const {
  if (m < level_) throw Error("raised_to_level: cannot lower the level");
  if (m == level_) return *this;
  Cyclotomic out = *this;  // bypasses the canonicalizing constructor
  out.c_.assign(static_cast<std::size_t>(phi_p_power(p_, m)), BigInt(0));
  if (level_ == 0) {
    out.c_[0] = c_[0];
  } else {
    // zeta_(p^level) = zeta_(p^m)^(p^(m-level)); the image of each basis
    // exponent stays below phi(p^m), so no reduction is needed.
    std::size_t stride = static_cast<std::size_t>(pow_i64(p_, m - level_));
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i * stride] = c_[i];
  }
  out.level_ = m;
  return out;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  if (p_ != o.p_) throw Error("Cyclotomic: mixed primes");
  const int m = std::max(level_, o.level_);
  const long long s = is_zero() ? o.pscale_
                    : o.is_zero() ? pscale_
                                  : std::min(pscale_, o.pscale_);
  std::vector<BigInt> acc(static_cast<std::size_t>(phi_p_power(p_, m)));
  auto mix = [&](const Cyclotomic& v) {
    if (v.is_zero()) return;
    BigInt f = 1;
    for (long long k = 0; k < v.pscale_ - s; ++k) f *= p_;
    std::size_t stride =
        v.level_ == 0 ? 0 : static_cast<std::size_t>(pow_i64(p_, m - v.level_));
    for (std::size_t i = 0; i < v.c_.size(); ++i)
      acc[v.level_ == 0 ? 0 : i * stride] += v.c_[i] * f;
  };
  mix(*this);
  mix(o);
  return Cyclotomic(p_, m, s, std::move(acc));
}

Cyclotomic Cyclotomic::operator-() const {
  std::vector<BigInt> c(c_);
  for (auto& v : c) v = -v;
  return Cyclotomic(p_, level_, pscale_, std::move(c));
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
  return *this + (-o);
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  if (p_ != o.p_) throw Error("Cyclotomic: mixed primes");
  if (is_zero() || o.is_zero()) return zero(p_);
  const int m = std::max(level_, o.level_);
  Cyclotomic a = raised_to_level(m);
  Cyclotomic b = o.raised_to_level(m);
  std::vector<BigInt> acc(static_cast<std::size_t>(phi_p_power(p_, m)));
  const std::int64_t q = m == 0 ? 1 : pow_i64(p_, m);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j] == 0) continue;
      accumulate_root_multiple(acc, p_, m,
                               static_cast<std::int64_t>(i + j) % q,
                               a.c_[i] * b.c_[j]);
    }
  }
  return Cyclotomic(p_, m, pscale_ + o.pscale_, std::move(acc));
}

Cyclotomic Cyclotomic::rescaled_p(long long k) const {
  if (is_zero()) return *this;
  return Cyclotomic(p_, level_, pscale_ + k, std::vector<BigInt>(c_));
}

Cyclotomic Cyclotomic::times_root(int m, std::int64_t e) const {
  if (is_zero()) return *this;
  const int lvl = std::max(level_, m);
  Cyclotomic a = raised_to_level(lvl);
  const std::int64_t q = lvl == 0 ? 1 : pow_i64(p_, lvl);
  const std::int64_t shift =
      (m == 0) ? 0 : (e % pow_i64(p_, m)) * pow_i64(p_, lvl - m);
  std::vector<BigInt> acc(static_cast<std::size_t>(phi_p_power(p_, lvl)));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    accumulate_root_multiple(
        acc, p_, lvl, (static_cast<std::int64_t>(i) + shift) % q, a.c_[i]);
  }
  return Cyclotomic(p_, lvl, pscale_, std::move(acc));
}

std::complex<double> Cyclotomic::to_complex() const {
  const double q = static_cast<double>(level_ == 0 ? 1 : pow_i64(p_, level_));
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / q;
    acc += static_cast<double>(c_[i]) *
           std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc * std::pow(static_cast<double>(p_), static_cast<double>(pscale_));
}

Cyclotomic additive_character(const ScaledResidue& x, int m) {
  if (m < 0) throw DomainViolation("additive_character: negative level");
  if (x.abs_precision() < 0)
    throw PrecisionError(
        "additive_character: x is not determined modulo Z_p");
  if (x.is_zero_at_precision()) return Cyclotomic::one(x.p());
  if (x.scale() < -m)
    throw DomainViolation(
        "additive_character: val(x) < -m needs a deeper root of unity");
  if (x.scale() >= 0) return Cyclotomic::one(x.p());
  const std::int64_t q = pow_i64(x.p(), m);
  // p^m * x = p^(m+scale) * residue; the exponent modulo p^m is determined
  // because residue is known modulo p^(-scale) at least.
  std::int64_t e = mul_mod(pow_i64(x.p(), m + x.scale()), x.residue() % q, q);
  return Cyclotomic::root_of_unity(x.p(), m, e);
}

}  // namespace cuspforms
