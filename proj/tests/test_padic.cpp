#include <doctest.h>

#include <cstdint>
#include <numeric>

#include "cuspforms/padic.hpp"
#include "cuspforms/rng.hpp"
#include "support/oracles.hpp"

using namespace cuspforms;

TEST_SUITE_BEGIN("padic");

TEST_CASE("modular utilities agree with wide-integer brute force") {
  DetRng rng(7);
  for (int s = 0; s < 500; ++s) {
    const std::int64_t m = 2 + rng.below(std::int64_t(1) << 40);
    const std::int64_t a = rng.below(m);
    const std::int64_t b = rng.below(m);
    CHECK(mul_mod(a, b, m) ==
          static_cast<std::int64_t>(static_cast<__int128>(a) * b % m));
  }
  CHECK(pow_mod(2, 10, 1000) == 24);
  CHECK(pow_mod(5, 0, 7) == 1);
  for (int s = 0; s < 200; ++s) {
    const std::int64_t m = 3 + 2 * rng.below(std::int64_t(1) << 30);
    std::int64_t a = 1 + rng.below(m - 1);
    while (std::gcd(a, m) != 1) a = 1 + rng.below(m - 1);
    CHECK(mul_mod(a, inv_mod(a, m), m) == 1);
  }
}

TEST_CASE("primality and valuations") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(5));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(91));  // 7 * 13

  DetRng rng(11);
  for (int s = 0; s < 200; ++s) {
    const std::int64_t p = (s % 2 == 0) ? 3 : 5;
    const int e = static_cast<int>(rng.below(8));
    std::int64_t u = 1 + rng.below(1000);
    while (u % p == 0) ++u;
    CHECK(val_p(u * pow_i64(p, e), p) == e);
  }
  // Legendre's count vs direct summation of factor valuations.
  for (std::int64_t k : {1, 2, 6, 9, 27, 100}) {
    for (std::int64_t p : {2, 3, 5}) {
      int direct = 0;
      for (std::int64_t i = 2; i <= k; ++i) direct += val_p(i, p);
      CHECK(factorial_val_p(k, p) == direct);
    }
  }
}

TEST_CASE("scaled residues canonicalize and obey ring laws") {
  PrimeContext ctx(3, 6);
  ScaledResidue nine = ScaledResidue::from_integer(ctx, 9);
  CHECK(nine.scale() == 2);
  CHECK(nine.residue() == 1);

  ScaledResidue x = ScaledResidue::from_integer(ctx, 7);
  ScaledResidue y = ScaledResidue::from_integer(ctx, 25);
  ScaledResidue z = ScaledResidue::from_integer(ctx, 33);
  CHECK(((x + y) + z).congruent(x + (y + z)));
  CHECK((x * (y + z)).congruent(x * y + x * z));
  CHECK((x * y).congruent(y * x));

  CHECK((x + -x).is_zero_at_precision());
  CHECK((x * x.reciprocal()).congruent(ScaledResidue::from_integer(ctx, 1)));

  LatticeValuation v = ScaledResidue::from_integer(ctx, 18).valuation();
  CHECK(v.exact);
  CHECK(v.value == 2);
  LatticeValuation zv = (x + -x).valuation();
  CHECK_FALSE(zv.exact);
  CHECK(zv.certifies_at_least(6));
  CHECK_FALSE(zv.certifies_below(6));

  CHECK(ScaledResidue::uniformizer_power(ctx, -2).valuation().value == -2);
}

TEST_CASE("scaled matrices: ring laws and valuation certificates") {
  PrimeContext ctx(3, 5);
  DetRng rng(13);
  auto random_matrix = [&](int scale) {
    ScaledMatrix m(3, 2, scale, 5);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.set(i, j, rng.below(m.modulus()));
    return m;
  };
  for (int s = 0; s < 50; ++s) {
    ScaledMatrix a = random_matrix(0), b = random_matrix(0),
                 c = random_matrix(0);
    CHECK((a * (b + c)).congruent(a * b + a * c));
    CHECK(((a * b) * c).congruent(a * (b * c)));
    CHECK((a - a).congruent(ScaledMatrix(3, 2, 0, 5)));
    CHECK((ScaledMatrix::identity(ctx, 2) * a).congruent(a));
  }

  ScaledMatrix m(3, 2, 0, 5);
  m.set(0, 1, 9);
  LatticeValuation v = lattice_valuation(m);
  CHECK(v.exact);
  CHECK(v.value == 2);
  CHECK(v.certifies_at_least(2));
  CHECK(v.certifies_below(3));

  LatticeValuation zero_v = lattice_valuation(ScaledMatrix(3, 2, 0, 5));
  CHECK_FALSE(zero_v.exact);
  CHECK(zero_v.certifies_at_least(5));

  // Rebasing to a lower scale preserves the represented congruence class.
  ScaledMatrix scaled(3, 2, 2, 3);
  scaled.set(0, 0, 4);
  ScaledMatrix rb = scaled.rebased(0);
  CHECK(rb.scale() == 0);
  CHECK(rb.abs_precision() == scaled.abs_precision());
  CHECK(rb.at(0, 0) == 36);
}

TEST_CASE("characteristic polynomial matches the permutation-sum oracle") {
  DetRng rng(17);
  for (std::int64_t p : {3, 5}) {
    for (int n = 1; n <= 4; ++n) {
      for (int digits = 1; digits <= 3; ++digits) {
        for (int s = 0; s < 12; ++s) {
          ScaledMatrix a(p, n, 0, digits);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a.set(i, j, rng.below(a.modulus()));
          ResiduePolynomial cp = charpoly_division_free(a);
          CHECK(cp.coeffs() == oracles::permutation_charpoly(a));
          CHECK(cp.is_monic());
          CHECK(cp.degree() == n);
        }
      }
    }
  }
}

TEST_CASE("irreducibility test agrees with exhaustive factor search") {
  for (std::int64_t p : {2, 3, 5}) {
    for (int deg = 2; deg <= 3; ++deg) {
      std::int64_t count = 1;
      for (int i = 0; i < deg; ++i) count *= p;
      int library_irreducible = 0;
      for (std::int64_t t = 0; t < count; ++t) {
        std::vector<std::int64_t> coeffs;
        std::int64_t rest = t;
        for (int k = 0; k < deg; ++k) {
          coeffs.push_back(rest % p);
          rest /= p;
        }
        coeffs.push_back(1);
        const bool lib = irreducible_over_residue_field(
            ResiduePolynomial(p, 1, coeffs));
        CHECK(lib == oracles::exhaustive_irreducible(p, coeffs));
        if (lib) ++library_irreducible;
      }
      // The number of monic irreducible polynomials of degree d over F_p
      // is (1/d) sum_{e | d} mu(e) p^(d/e): frozen counts.
      const int expected = deg == 2
                               ? static_cast<int>((count - p) / 2)
                               : static_cast<int>((count - p) / 3);
      CHECK(library_irreducible == expected);
    }
  }
}

TEST_CASE("scalar exponential and logarithm match rational-series oracle") {
  DetRng rng(19);
  for (std::int64_t p : {3, 5}) {
    for (int target = 3; target <= 9; ++target) {
      for (int s = 0; s < 10; ++s) {
        const std::int64_t x =
            p * (1 + rng.below(pow_i64(p, target - 1) - 1));
        ScaledMatrix m(p, 1, 0, target);
        m.set(0, 0, x % pow_i64(p, target));
        ScaledMatrix e = exp_truncated(m);
        CHECK(e.scale() == 0);
        CHECK(e.abs_precision() == target);
        CHECK(e.at(0, 0) == oracles::rational_exp_scalar(p, x, target));

        ScaledMatrix g(p, 1, 0, target);
        g.set(0, 0, (1 + x) % pow_i64(p, target));
        ScaledMatrix l = log_truncated(g);
        CHECK(l.at(0, 0) == oracles::rational_log_scalar(p, x, target));
      }
    }
  }
}

TEST_CASE("exponential of a nilpotent matrix is the terminating sum") {
  PrimeContext ctx(3, 6);
  ScaledMatrix x(3, 2, 0, 6);
  x.set(0, 1, 3);  // p * E_01, squares to zero
  ScaledMatrix expected = ScaledMatrix::identity(ctx, 2) + x;
  CHECK(exp_truncated(x).congruent(expected));
}

TEST_CASE("exp and log are mutually inverse at full precision") {
  DetRng rng(23);
  for (std::int64_t p : {3, 5}) {
    for (int s = 0; s < 25; ++s) {
      const int digits = 8;
      ScaledMatrix x(p, 2, 0, digits);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          x.set(i, j, p * rng.below(pow_i64(p, digits - 1)));
      CHECK(log_truncated(exp_truncated(x)).congruent(x));

      ScaledMatrix g = ScaledMatrix::identity(PrimeContext(p, digits), 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          g.set(i, j, (g.at(i, j) + p * rng.below(pow_i64(p, digits - 1))) %
                          pow_i64(p, digits));
      CHECK(exp_truncated(log_truncated(g)).congruent(g));
    }
  }
}

TEST_CASE("exp/log reject out-of-domain input") {
  ScaledMatrix unit_val(3, 2, 0, 4);
  unit_val.set(0, 0, 1);
  CHECK_THROWS_AS(exp_truncated(unit_val), ConvergenceViolation);

  ScaledMatrix p2(2, 2, 0, 4);
  p2.set(0, 1, 2);
  CHECK_THROWS_AS(exp_truncated(p2), ConvergenceViolation);

  PrimeContext ctx(3, 4);
  ScaledMatrix far = ScaledMatrix::identity(ctx, 2);
  far.set(0, 1, 1);  // g - 1 has valuation 0
  CHECK_THROWS_AS(log_truncated(far), ConvergenceViolation);
}

TEST_CASE("unit matrix inversion") {
  DetRng rng(29);
  PrimeContext ctx(3, 6);
  for (int s = 0; s < 25; ++s) {
    ScaledMatrix g = ScaledMatrix::identity(ctx, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        g.set(i, j, (g.at(i, j) + 3 * rng.below(pow_i64(3, 5))) %
                        pow_i64(3, 6));
    CHECK((g * matrix_inverse_unit(g))
              .congruent(ScaledMatrix::identity(ctx, 2)));
  }
  ScaledMatrix singular(3, 2, 0, 4);
  singular.set(0, 0, 3);
  singular.set(1, 1, 1);
  CHECK_THROWS_AS(matrix_inverse_unit(singular), DomainViolation);
}

TEST_SUITE_END();
