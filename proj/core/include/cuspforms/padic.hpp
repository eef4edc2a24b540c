#pragma once

// Exact p-adic arithmetic at a fixed working precision.
//
// Values are "scaled residues": an integer power of the uniformizer p times a
// residue held modulo p^d.  A value is therefore known exactly modulo
// p^(scale+d), and every operation states how many digits of the result are
// determined by the digits of its inputs.  Nothing in this module rounds: a
// lost digit is a smaller d, never a perturbed residue.

#include <cstdint>
#include <vector>

#include "cuspforms/errors.hpp"

namespace cuspforms {

// ---- small integer helpers (64-bit, overflow-checked) ----

std::int64_t pow_i64(std::int64_t base, int exp);  // throws Error past 2^62
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t m);
std::int64_t inv_mod(std::int64_t a, std::int64_t m);  // gcd(a, m) must be 1
bool is_prime(std::int64_t n);

// p-adic valuation of a nonzero integer; val_p(0) is an error.
int val_p(std::int64_t v, std::int64_t p);
// Valuation of k! (Legendre sum).
int factorial_val_p(std::int64_t k, std::int64_t p);

// The ambient prime and the working exponent W: residues downstream live in
// Z/p^k for k <= W (series computations use a documented internal buffer on
// top of W).  p = 2 is accepted here; the exponential chart refuses it.
class PrimeContext {
 public:
  PrimeContext(std::int64_t p, int working_exponent);

  std::int64_t p() const { return p_; }
  int working_exponent() const { return w_; }
  std::int64_t pow(int k) const { return pow_i64(p_, k); }

 private:
  std::int64_t p_;
  int w_;
};

// A valuation that precision may not fully resolve: either "exactly `value`"
// or "at least `value`, every visible digit is zero".  The marker form is
// never silently treated as a number.
struct LatticeValuation {
  bool exact = true;
  int value = 0;

  bool certifies_at_least(int k) const { return value >= k; }
  bool certifies_below(int k) const { return exact && value < k; }
  bool operator==(const LatticeValuation&) const = default;
};

// p^scale * residue with residue in [0, p^digits), known modulo
// p^(scale+digits).  Canonical form: residue is 0 or coprime to p, so the
// scale carries the whole valuation.  residue == 0 means "zero to working
// precision", i.e. valuation >= scale + digits.
class ScaledResidue {
 public:
  ScaledResidue(std::int64_t p, int scale, std::int64_t residue, int digits);

  static ScaledResidue from_integer(const PrimeContext& ctx, std::int64_t v);
  static ScaledResidue zero(const PrimeContext& ctx);
  // p^k as a scaled residue at the context's working precision.
  static ScaledResidue uniformizer_power(const PrimeContext& ctx, int k);

  std::int64_t p() const { return p_; }
  int scale() const { return scale_; }
  std::int64_t residue() const { return residue_; }
  int digits() const { return digits_; }
  int abs_precision() const { return scale_ + digits_; }

  bool is_zero_at_precision() const { return residue_ == 0; }
  LatticeValuation valuation() const;

  ScaledResidue reciprocal() const;  // requires a unit residue
  ScaledResidue operator*(const ScaledResidue& o) const;
  ScaledResidue operator+(const ScaledResidue& o) const;
  ScaledResidue operator-() const;
  // Exact congruence at the shared absolute precision.
  bool congruent(const ScaledResidue& o) const;

 private:
  std::int64_t p_;
  int scale_;
  std::int64_t residue_;
  int digits_;
  void canonicalize();
};

// p^scale * (n x n residue matrix mod p^digits); entries are row-major.
// The value is known entrywise modulo p^(scale+digits).
class ScaledMatrix {
 public:
  ScaledMatrix(std::int64_t p, int n, int scale, int digits);

  static ScaledMatrix identity(const PrimeContext& ctx, int n);
  static ScaledMatrix zero(const PrimeContext& ctx, int n);

  std::int64_t p() const { return p_; }
  int n() const { return n_; }
  int scale() const { return scale_; }
  int digits() const { return digits_; }
  int abs_precision() const { return scale_ + digits_; }
  std::int64_t modulus() const { return pow_i64(p_, digits_); }

  std::int64_t at(int i, int j) const { return e_[i * n_ + j]; }
  void set(int i, int j, std::int64_t residue);  // reduced into [0, p^digits)
  const std::vector<std::int64_t>& raw() const { return e_; }

  ScaledResidue entry(int i, int j) const;

  // Same value presented at a lower scale (entries absorb p^(scale-new)).
  ScaledMatrix rebased(int new_scale) const;
  // Same value with digits truncated to new_digits <= digits.
  ScaledMatrix truncated(int new_digits) const;

  ScaledMatrix operator+(const ScaledMatrix& o) const;
  ScaledMatrix operator-(const ScaledMatrix& o) const;
  ScaledMatrix operator*(const ScaledMatrix& o) const;
  ScaledMatrix operator-() const;

  // Congruence at the shared absolute precision (value equality as far as
  // both sides are determined).
  bool congruent(const ScaledMatrix& o) const;

 private:
  std::int64_t p_;
  int n_;
  int scale_;
  int digits_;
  std::vector<std::int64_t> e_;
};

// min over entries of (scale + val_p(entry)); an all-zero residue matrix
// yields the marker form ">= scale + digits" rather than a silent infinity.
LatticeValuation lattice_valuation(const ScaledMatrix& m);

// Dense polynomial over Z/p^exp, coefficients ascending (coeff(0) is the
// constant term).  Leading zeros are trimmed, so degree() is honest.
class ResiduePolynomial {
 public:
  ResiduePolynomial(std::int64_t p, int modulus_exponent,
                    std::vector<std::int64_t> ascending_coeffs);

  std::int64_t p() const { return p_; }
  int modulus_exponent() const { return exp_; }
  std::int64_t modulus() const { return pow_i64(p_, exp_); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::int64_t coeff(int k) const;
  const std::vector<std::int64_t>& coeffs() const { return c_; }
  bool is_monic() const;

  ResiduePolynomial reduced_mod_p() const;
  bool operator==(const ResiduePolynomial&) const = default;

 private:
  std::int64_t p_;
  int exp_;
  std::vector<std::int64_t> c_;
};

// det(xI - M) via the Berkowitz recursion: additions and multiplications
// only, so every coefficient is exact modulo p^digits.  Requires scale >= 0.
ResiduePolynomial charpoly_division_free(const ScaledMatrix& m);

// Irreducibility over F_p by iterated Frobenius: f of degree n is
// irreducible iff x^(p^n) == x mod f and gcd(f, x^(p^(n/q)) - x) = 1 for
// every prime q | n.  The input is reduced mod p first and must be monic
// with degree >= 1 after reduction.
bool irreducible_over_residue_field(const ResiduePolynomial& f);

// Truncated exponential sum_{k} X^k / k!.  Requires p >= 3 and
// lattice valuation >= 1 (ConvergenceViolation otherwise).  The result
// carries the same absolute precision as the input: the series is cut at the
// least K with  k*val(X) - val_p(k!) >= abs_precision  for all k >= K, and
// the internal modulus carries val_p(K!) buffer digits so that the divided
// terms stay exact where they matter.
ScaledMatrix exp_truncated(const ScaledMatrix& x);

// Truncated logarithm of g in 1 + p*M_n(Z_p): sum (-1)^(k+1) (g-1)^k / k,
// cut at the least K with k*val(g-1) - val_p(k) >= abs_precision for all
// k >= K.  Works for every prime p (only exp needs p >= 3).
ScaledMatrix log_truncated(const ScaledMatrix& g);

// Inverse of a matrix whose determinant is a unit mod p, computed from the
// adjugate (division-free) times the inverted determinant.  Requires
// scale == 0.  Throws DomainViolation on a non-unit determinant.
ScaledMatrix matrix_inverse_unit(const ScaledMatrix& g);

}  // namespace cuspforms
