#include <doctest.h>

#include <cstdint>
#include <string>

#include "cuspforms/cusp.hpp"
#include "cuspforms/rng.hpp"

using namespace cuspforms;

TEST_SUITE_BEGIN("cusp");

namespace {

SchwartzFunction random_sparse(DetRng& rng, const LatticeWindow& w,
                               int support) {
  SchwartzFunction f(w);
  for (int s = 0; s < support; ++s) {
    Cyclotomic v =
        Cyclotomic::root_of_unity(w.p(), 2, rng.below(pow_i64(w.p(), 2))) *
        Cyclotomic::integer(w.p(), BigInt(1 + rng.below(5)));
    f.set(rng.below(w.point_count()), v);
  }
  return f;
}

}  // namespace

TEST_CASE("trace pairing: frozen values and symmetry") {
  PrimeContext ctx(3, 3);
  ScaledMatrix x(3, 2, 0, 3);
  x.set(0, 1, 2);  // 2 E_01
  ScaledMatrix y(3, 2, 0, 3);
  y.set(1, 0, 5);  // 5 E_10
  // tr(x y) = 2 * 5 = 10
  CHECK(trace_pairing(x, y).congruent(ScaledResidue::from_integer(ctx, 10)));
  CHECK(trace_pairing(y, x).congruent(ScaledResidue::from_integer(ctx, 10)));

  // E_01 pairs to zero against everything except E_10.
  ScaledMatrix e01(3, 2, 0, 3);
  e01.set(0, 1, 1);
  ScaledMatrix e00(3, 2, 0, 3);
  e00.set(0, 0, 1);
  CHECK(trace_pairing(e01, e00).is_zero_at_precision());
  CHECK(trace_pairing(e01, e01).is_zero_at_precision());
}

TEST_CASE("the annihilator of a parabolic under the trace is its nilradical") {
  for (int n : {2, 3}) {
    CoordList full = full_coords(n);
    for (const ParabolicData& P : standard_parabolics(n)) {
      for (Coord d : full) {
        ScaledMatrix ed(3, n, 0, 2);
        ed.set(d.i, d.j, 1);
        bool annihilates = true;
        for (Coord c : P.parabolic_coords) {
          ScaledMatrix ec(3, n, 0, 2);
          ec.set(c.i, c.j, 1);
          if (!trace_pairing(ec, ed).is_zero_at_precision())
            annihilates = false;
        }
        const bool in_nilradical =
            std::find(P.nilradical_coords.begin(), P.nilradical_coords.end(),
                      d) != P.nilradical_coords.end();
        CHECK(annihilates == in_nilradical);
      }
    }
  }
}

TEST_CASE("additive character of the trace pairing") {
  PrimeContext ctx(3, 4);
  ScaledResidue unit = ScaledResidue::from_integer(ctx, 5);
  CHECK(character_of(unit) == Cyclotomic::one(3));
  CHECK(character_of(ScaledResidue::zero(ctx)) == Cyclotomic::one(3));

  ScaledResidue third =
      ScaledResidue::from_integer(ctx, 2) *
      ScaledResidue::uniformizer_power(ctx, -1);
  CHECK(character_of(third) == Cyclotomic::root_of_unity(3, 1, 2));

  ScaledResidue ninth =
      ScaledResidue::from_integer(ctx, 4) *
      ScaledResidue::uniformizer_power(ctx, -2);
  CHECK(character_of(ninth) == Cyclotomic::root_of_unity(3, 2, 4));
}

TEST_CASE("descent identity holds pointwise with constant exactly 1") {
  DetRng rng(401);
  LatticeWindow w(3, 2, full_coords(2), 0, 1);
  const ParabolicData P = standard_parabolics(2)[0];
  for (int s = 0; s < 20; ++s) {
    SchwartzFunction phi = random_sparse(rng, w, 6);
    SchwartzFunction phihat = fourier_separable(phi);
    for (int t = 0; t < 5; ++t) {
      ScaledMatrix X = w.dual().representative(
          rng.below(w.dual().point_count()), 3);
      if (t == 4) X.set(1, 0, X.at(1, 0) + 9 * (1 + rng.below(2)));
      DescentIdentity one_arg = parabolic_descent_identity(phi, P, X);
      DescentIdentity two_arg =
          parabolic_descent_identity(phi, phihat, P, X);
      CHECK(one_arg.equal);
      CHECK(two_arg.equal);
      CHECK(one_arg.lhs == two_arg.lhs);
      CHECK(one_arg.rhs == two_arg.rhs);
    }
  }
}

TEST_CASE("descent identity: frozen normalization on the indicator") {
  LatticeWindow w(3, 2, full_coords(2), 0, 1);
  const ParabolicData P = standard_parabolics(2)[0];
  SchwartzFunction ind = SchwartzFunction::indicator(w);
  ScaledMatrix zero(3, 2, 0, 2);
  DescentIdentity id = parabolic_descent_identity(ind, P, zero);
  CHECK(id.equal);
  // Both sides evaluate to exactly 1: the parabolic has 27 window points,
  // each contributing psi(0) = 1, against the Haar factor 3^-3.
  CHECK(id.lhs == Cyclotomic::one(3));
  CHECK(id.rhs == Cyclotomic::one(3));
}

TEST_CASE("descent identity rejects mismatched transforms") {
  LatticeWindow w(3, 2, full_coords(2), 0, 1);
  const ParabolicData P = standard_parabolics(2)[0];
  SchwartzFunction phi = SchwartzFunction::indicator(w);
  ScaledMatrix zero(3, 2, 0, 2);
  SchwartzFunction wrong(w);  // lives on w, not on the dual of w
  CHECK_THROWS_AS(parabolic_descent_identity(phi, wrong, P, zero),
                  DomainViolation);
}

TEST_CASE("descent identity rejects X outside p^-b M_n") {
  // The finite pairing sum represents the integral only for X in the
  // invariance lattice of the transform; a deeper entry is rejected rather
  // than summed representative-dependently.
  LatticeWindow w(3, 2, full_coords(2), 0, 1);  // b = 1
  const ParabolicData P = standard_parabolics(2)[0];
  SchwartzFunction phi = SchwartzFunction::indicator(w);
  ScaledMatrix deep(3, 2, -2, 4);  // abs precision 2
  deep.set(0, 0, 1);               // valuation exactly -2 < -b
  CHECK_THROWS_AS(parabolic_descent_identity(phi, P, deep), DomainViolation);

  // The boundary itself (valuation exactly -b) is inside the domain.
  ScaledMatrix edge(3, 2, -1, 3);
  edge.set(0, 0, 1);
  DescentIdentity id = parabolic_descent_identity(phi, P, edge);
  CHECK(id.equal);
}

TEST_CASE("matrix-space verification: elliptic transform passes") {
  ScaledMatrix center = companion_elliptic(ResiduePolynomial(3, 1, {1, 0, 1}));
  SchwartzFunction phihat = fourier_separable(elliptic_bump(center, 1));
  CHECK(phihat.support_size() == 81);  // transform of a point mass

  LieCuspReport report =
      lie_cusp_verify(phihat, standard_parabolics(2), 1, 50);
  CHECK(report.pass);
  REQUIRE(report.per_parabolic.size() == 1);
  CHECK(report.per_parabolic[0].window_points == 81);
  CHECK(report.per_parabolic[0].outside_points == 50);
  CHECK(report.per_parabolic[0].violations == 0);
  CHECK(report.witnesses.empty());
  CHECK_NOTHROW(require_pass(report));
}

TEST_CASE("matrix-space verification: the indicator fails with a witness") {
  LatticeWindow w(3, 2, full_coords(2), -1, 0);
  SchwartzFunction ind = SchwartzFunction::indicator(w);
  LieCuspReport report = lie_cusp_verify(ind, standard_parabolics(2), 1, 10);
  CHECK_FALSE(report.pass);
  REQUIRE_FALSE(report.witnesses.empty());
  CHECK_FALSE(report.witnesses.front().value.is_zero());
  CHECK(report.per_parabolic[0].violations > 0);
  CHECK(report.per_parabolic[0].max_witness_abs > 0.0);
  try {
    require_pass(report);
    FAIL("expected CuspViolation");
  } catch (const CuspViolation& e) {
    CHECK(std::string(e.what()).find("(1,1)") != std::string::npos);
  }
}

TEST_CASE("verification requires a full-space window") {
  LatticeWindow sub(3, 2, {Coord{0, 1}}, 0, 1);
  SchwartzFunction f(sub);
  CHECK_THROWS_AS(lie_cusp_verify(f, standard_parabolics(2)),
                  DomainViolation);
}

TEST_CASE("conjugated elliptic transforms still pass") {
  ScaledMatrix center = companion_elliptic(ResiduePolynomial(3, 1, {1, 0, 1}));
  SchwartzFunction phihat = fourier_separable(elliptic_bump(center, 1));
  DetRng rng(409);
  ScaledMatrix g(3, 2, 0, 1);
  while (true) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g.set(i, j, rng.below(3));
    try {
      matrix_inverse_unit(g);
      break;
    } catch (const DomainViolation&) {
    }
  }
  CHECK(lie_cusp_verify(conjugate_function(phihat, g),
                        standard_parabolics(2), 1, 20)
            .pass);
}

TEST_SUITE_END();
