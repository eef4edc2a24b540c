#include <doctest.h>

#include <cstdint>
#include <set>

#include "cuspforms/gln.hpp"
#include "cuspforms/rng.hpp"
#include "support/oracles.hpp"

using namespace cuspforms;

TEST_SUITE_BEGIN("gln");

TEST_CASE("standard parabolic enumeration is complete and ordered") {
  auto p2 = standard_parabolics(2);
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].composition == std::vector<int>{1, 1});

  auto p3 = standard_parabolics(3);
  REQUIRE(p3.size() == 3);
  CHECK(p3[0].composition == std::vector<int>{1, 2});
  CHECK(p3[1].composition == std::vector<int>{2, 1});
  CHECK(p3[2].composition == std::vector<int>{1, 1, 1});

  auto p4 = standard_parabolics(4);
  CHECK(p4.size() == 7);
}

TEST_CASE("parabolic coordinates partition the matrix space") {
  for (int n : {2, 3, 4}) {
    for (const ParabolicData& P : standard_parabolics(n)) {
      CHECK(P.n() == n);
      CHECK(P.proper());
      std::set<Coord> all;
      for (Coord c : P.levi_coords) all.insert(c);
      for (Coord c : P.nilradical_coords) all.insert(c);
      for (Coord c : P.opposite_nilradical_coords) all.insert(c);
      CHECK(all.size() == static_cast<std::size_t>(n * n));
      CHECK(P.levi_coords.size() + P.nilradical_coords.size() +
                P.opposite_nilradical_coords.size() ==
            static_cast<std::size_t>(n * n));
      CHECK(P.parabolic_coords.size() ==
            P.levi_coords.size() + P.nilradical_coords.size());
      // Nilradical and its opposite are exchanged by transposition.
      std::set<Coord> nil(P.nilradical_coords.begin(),
                          P.nilradical_coords.end());
      for (Coord c : P.opposite_nilradical_coords)
        CHECK(nil.count(Coord{c.j, c.i}) == 1);
    }
  }
  // Frozen shape for the rank-2 Borel.
  ParabolicData b2 = parabolic_from_composition({1, 1});
  CHECK(b2.nilradical_coords == CoordList{Coord{0, 1}});
  CHECK(b2.opposite_nilradical_coords == CoordList{Coord{1, 0}});
}

TEST_CASE("composition validation") {
  CHECK_THROWS_AS(parabolic_from_composition({}), ValidationError);
  CHECK_THROWS_AS(parabolic_from_composition({0, 2}), ValidationError);
  CHECK_THROWS_AS(parabolic_from_composition({-1, 3}), ValidationError);
  CHECK_FALSE(parabolic_from_composition({2}).proper());
}

TEST_CASE("companion matrix: frozen entries and characteristic polynomial") {
  ResiduePolynomial f(3, 2, {1, 0, 1});  // x^2 + 1 mod 9
  ScaledMatrix c = companion_elliptic(f);
  CHECK(c.at(0, 0) == 0);
  CHECK(c.at(1, 0) == 1);
  CHECK(c.at(0, 1) == 8);  // -(constant coefficient) mod 9
  CHECK(c.at(1, 1) == 0);
  CHECK(charpoly_division_free(c).coeffs() == std::vector<std::int64_t>{1, 0, 1});
  CHECK(oracles::permutation_charpoly(c) == std::vector<std::int64_t>{1, 0, 1});

  ResiduePolynomial cubic(3, 1, {1, 2, 0, 1});  // x^3 + 2x + 1, irreducible
  ScaledMatrix c3 = companion_elliptic(cubic);
  CHECK(charpoly_division_free(c3).coeffs() ==
        std::vector<std::int64_t>{1, 2, 0, 1});

  ResiduePolynomial reducible(3, 1, {2, 0, 1});  // x^2 + 2 = (x+1)(x+2)
  CHECK_THROWS_AS(companion_elliptic(reducible), DomainViolation);
}

TEST_CASE("ellipticity certificates") {
  ScaledMatrix good = companion_elliptic(ResiduePolynomial(3, 1, {1, 0, 1}));
  EllipticityCertificate cert = ellipticity_certificate(good);
  CHECK(cert.irreducible);
  CHECK(cert.charpoly_mod_p.coeffs() == std::vector<std::int64_t>{1, 0, 1});

  ScaledMatrix swap(3, 2, 0, 1);  // charpoly x^2 - 1, reducible
  swap.set(0, 1, 1);
  swap.set(1, 0, 1);
  CHECK_FALSE(ellipticity_certificate(swap).irreducible);
}

TEST_CASE("elliptic bump: window, support, and rejection") {
  ScaledMatrix center = companion_elliptic(ResiduePolynomial(3, 2, {1, 0, 1}));
  EllipticBump bump = make_elliptic_bump(center, 2);
  CHECK(bump.depth == 2);
  CHECK(bump.function.window().support_scale() == 0);
  CHECK(bump.function.window().invariance_scale() == 2);
  CHECK(bump.function.support_size() == 1);
  auto key = bump.function.window().key_of(center);
  REQUIRE(key.has_value());
  CHECK(bump.function.value_at_key(*key) == Cyclotomic::one(3));
  CHECK(elliptic_bump(center, 2) == bump.function);

  CHECK_THROWS_AS(make_elliptic_bump(center, 0), DomainViolation);

  ScaledMatrix bad(3, 2, 0, 1);
  bad.set(0, 1, 1);
  bad.set(1, 0, 1);
  CHECK_THROWS_AS(make_elliptic_bump(bad, 1), DomainViolation);
}

TEST_CASE("conjugation moves point masses to conjugated cosets") {
  LatticeWindow w(3, 2, full_coords(2), 0, 2);
  PrimeContext ctx(3, 2);
  DetRng rng(307);
  for (int s = 0; s < 10; ++s) {
    ScaledMatrix g(3, 2, 0, 2);
    while (true) {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g.set(i, j, rng.below(9));
      try {
        matrix_inverse_unit(g);
        break;
      } catch (const DomainViolation&) {
      }
    }
    std::int64_t key = rng.below(w.point_count());
    SchwartzFunction delta =
        SchwartzFunction::delta(w, key, Cyclotomic::one(3));
    SchwartzFunction moved = conjugate_function(delta, g);
    CHECK(moved.support_size() == 1);
    ScaledMatrix z = w.representative(key, 2);
    ScaledMatrix gz = g * z * matrix_inverse_unit(g);
    auto moved_key = w.key_of(gz);
    REQUIRE(moved_key.has_value());
    CHECK(moved.value_at_key(*moved_key) == Cyclotomic::one(3));
  }

  // Non-unit conjugators are rejected.
  ScaledMatrix nonunit(3, 2, 0, 2);
  nonunit.set(0, 0, 3);
  nonunit.set(1, 1, 1);
  SchwartzFunction f(w);
  CHECK_THROWS_AS(conjugate_function(f, nonunit), DomainViolation);
}

TEST_CASE("conjugation commutes with the transform") {
  LatticeWindow w(3, 2, full_coords(2), 0, 1);
  DetRng rng(311);
  for (int s = 0; s < 5; ++s) {
    SchwartzFunction f(w);
    for (int t = 0; t < 6; ++t)
      f.set(rng.below(w.point_count()),
            Cyclotomic::root_of_unity(3, 1, rng.below(3)));
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
    CHECK(fourier_separable(conjugate_function(f, g)) ==
          conjugate_function(fourier_separable(f), g));
  }
}

TEST_SUITE_END();
