#pragma once

// Exact arithmetic in Z[1/p][zeta], zeta a p-power root of unity.
//
// An element is p^pscale times an integer combination of the power basis
// 1, zeta, ..., zeta^(phi(p^level)-1), with arbitrary-size integer
// coefficients reduced modulo the p^level-th cyclotomic polynomial.  The
// representation is canonical (minimal level, coefficients not all divisible
// by p, zero is level 0 / pscale 0), so equality and zero tests are exact
// structural checks.  The pscale slot carries exact powers of p -- typically
// Haar volumes -- and never masks whether the element is zero.

#include <complex>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cuspforms/padic.hpp"

namespace cuspforms {

using BigInt = boost::multiprecision::cpp_int;

// phi(p^m): number of power-basis coefficients at level m (1 for m = 0).
std::int64_t phi_p_power(std::int64_t p, int m);

// Adds c * zeta^e (0 <= e < p^m) into a phi(p^m)-length coefficient vector,
// applying the cyclotomic reduction for exponents at or above phi(p^m):
//   zeta^(r + q'(p-1)) = -(zeta^r + zeta^(r+q') + ... + zeta^(r+q'(p-2))),
// where q' = p^(m-1).  This is the single building block every transform
// inner loop uses.
void accumulate_root_multiple(std::vector<BigInt>& acc, std::int64_t p, int m,
                              std::int64_t e, const BigInt& c);

class Cyclotomic {
 public:
  // Validates sizes and canonicalizes.  Used directly by deserialization.
  Cyclotomic(std::int64_t p, int level, long long pscale,
             std::vector<BigInt> coeffs);

  static Cyclotomic zero(std::int64_t p);
  static Cyclotomic one(std::int64_t p);
  static Cyclotomic integer(std::int64_t p, const BigInt& v);
  // zeta_(p^m)^e, canonicalized (levels drop when e shares factors with p).
  static Cyclotomic root_of_unity(std::int64_t p, int m, std::int64_t e);

  std::int64_t p() const { return p_; }
  int level() const { return level_; }
  long long pscale() const { return pscale_; }
  const std::vector<BigInt>& coeffs() const { return c_; }

  bool is_zero() const;
  bool operator==(const Cyclotomic& o) const;

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator-() const;

  // Multiplication by the exact power p^k (adjusts pscale only).
  Cyclotomic rescaled_p(long long k) const;
  // Multiplication by zeta_(p^m)^e without building a temporary element.
  Cyclotomic times_root(int m, std::int64_t e) const;
  // The same value expressed at a level >= level() (ring embedding).  The
  // result of further arithmetic is identical either way; this exists so
  // tests can check exactly that.
  Cyclotomic raised_to_level(int m) const;

  // Numeric rendering for reports only; never part of a verification.
  std::complex<double> to_complex() const;

 private:
  std::int64_t p_;
  int level_;
  long long pscale_;
  std::vector<BigInt> c_;
  void canonicalize();
};

// The additive character of conductor exactly Z_p, evaluated at x and
// expressed at level m: psi(x) = zeta_(p^m)^(p^m * x mod p^m).
//   - PrecisionError if x is not determined modulo Z_p (scale + digits < 0).
//   - DomainViolation if val(x) < -m (the value would need a deeper level).
// x in Z_p (including the zero marker) yields 1.
Cyclotomic additive_character(const ScaledResidue& x, int m);

}  // namespace cuspforms
