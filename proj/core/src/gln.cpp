#include "cuspforms/gln.hpp"

#include <algorithm>
#include <numeric>

namespace cuspforms {

int ParabolicData::n() const {
  return std::accumulate(composition.begin(), composition.end(), 0);
}

ParabolicData parabolic_from_composition(const std::vector<int>& composition) {
  if (composition.empty())
    throw ValidationError("parabolic_from_composition: empty composition");
  for (int part : composition)
    if (part < 1) throw ValidationError("parabolic_from_composition: nonpositive part");
  const int n = std::accumulate(composition.begin(), composition.end(), 0);
  std::vector<int> block(static_cast<std::size_t>(n));
  int row = 0;
  for (std::size_t b = 0; b < composition.size(); ++b)
    for (int k = 0; k < composition[b]; ++k)
      block[static_cast<std::size_t>(row++)] = static_cast<int>(b);

  ParabolicData out;
  out.composition = composition;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int bi = block[static_cast<std::size_t>(i)];
      const int bj = block[static_cast<std::size_t>(j)];
      if (bi == bj) out.levi_coords.push_back({i, j});
      if (bi <= bj) out.parabolic_coords.push_back({i, j});
      if (bi < bj) out.nilradical_coords.push_back({i, j});
      if (bi > bj) out.opposite_nilradical_coords.push_back({i, j});
    }
  return out;
}

std::vector<ParabolicData> standard_parabolics(int n) {
  if (n < 1) throw Error("standard_parabolics: n must be >= 1");
  std::vector<ParabolicData> out;
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    std::vector<int> composition;
    int last_cut = 0;
    for (int k = 0; k < n - 1; ++k)
      if (mask & (std::uint64_t{1} << k)) {
        composition.push_back(k + 1 - last_cut);
        last_cut = k + 1;
      }
    composition.push_back(n - last_cut);
    out.push_back(parabolic_from_composition(composition));
  }
  return out;
}

namespace {

// X re-presented at scale 0 with its full absolute precision; requires every
// entry to be a p-adic integer.
ScaledMatrix integral_presentation(const ScaledMatrix& X) {
  if (X.scale() == 0) return X;
  if (X.scale() > 0) return X.rebased(0);
  for (int i = 0; i < X.n(); ++i)
    for (int j = 0; j < X.n(); ++j) {
      ScaledResidue e = X.entry(i, j);
      if (!e.is_zero_at_precision() && e.scale() < 0)
        throw DomainViolation(
            "ellipticity_certificate: entries must be p-adic integers");
    }
  const int digits = X.abs_precision();
  if (digits < 1)
    throw PrecisionError(
        "ellipticity_certificate: entries not determined mod p");
  const std::int64_t q = pow_i64(X.p(), digits);
  const std::int64_t f = pow_i64(X.p(), -X.scale());
  ScaledMatrix out(X.p(), X.n(), 0, digits);
  for (int i = 0; i < X.n(); ++i)
    for (int j = 0; j < X.n(); ++j) {
      // entry = p^scale * res with p^(-scale) | res; divide exactly.
      std::int64_t res = X.at(i, j);
      out.set(i, j, (res / f) % q);
    }
  return out;
}

}  // namespace

EllipticityCertificate ellipticity_certificate(const ScaledMatrix& X) {
  if (X.abs_precision() < 1)
    throw PrecisionError(
        "ellipticity_certificate: entries not determined mod p");
  ScaledMatrix flat = integral_presentation(X);
  ResiduePolynomial cp = charpoly_division_free(flat.truncated(1));
  EllipticityCertificate cert{cp.reduced_mod_p(), false};
  // Degree can only drop below n if the leading coefficient degenerated,
  // which cannot happen for a characteristic polynomial (monic), so the
  // certificate is decidable directly.
  cert.irreducible = irreducible_over_residue_field(cert.charpoly_mod_p);
  return cert;
}

ScaledMatrix companion_elliptic(const ResiduePolynomial& f) {
  if (!f.is_monic()) throw DomainViolation("companion_elliptic: f not monic");
  const int n = f.degree();
  if (n < 1) throw DomainViolation("companion_elliptic: degree must be >= 1");
  if (!irreducible_over_residue_field(f))
    throw DomainViolation("companion_elliptic: f is reducible mod p");
  const std::int64_t q = f.modulus();
  ScaledMatrix c(f.p(), n, 0, f.modulus_exponent());
  for (int i = 0; i + 1 < n; ++i) c.set(i + 1, i, 1);
  for (int i = 0; i < n; ++i) {
    std::int64_t a = f.coeff(i) % q;
    c.set(i, n - 1, (q - a) % q);
  }
  return c;
}

EllipticBump make_elliptic_bump(const ScaledMatrix& center, int depth) {
  if (depth < 1)
    throw DomainViolation(
        "elliptic_bump: depth must be >= 1 (coset stability boundary)");
  EllipticityCertificate cert = ellipticity_certificate(center);
  if (!cert.irreducible)
    throw DomainViolation(
        "elliptic_bump: center's characteristic polynomial is reducible mod "
        "p");
  LatticeValuation lv = lattice_valuation(center);
  const int a = std::min(0, lv.value);
  LatticeWindow w(center.p(), center.n(), full_coords(center.n()), a, depth);
  auto key = w.key_of(center);
  if (!key)
    throw Error("elliptic_bump: center not representable in its own window");
  return EllipticBump{center, depth, cert,
                      SchwartzFunction::delta(w, *key,
                                              Cyclotomic::one(center.p()))};
}

SchwartzFunction elliptic_bump(const ScaledMatrix& center, int depth) {
  return make_elliptic_bump(center, depth).function;
}

SchwartzFunction conjugate_function(const SchwartzFunction& phi,
                                    const ScaledMatrix& g) {
  const LatticeWindow& w = phi.window();
  if (w.coords() != full_coords(w.n()))
    throw DomainViolation(
        "conjugate_function: window must cover the full matrix space");
  if (g.p() != w.p() || g.n() != w.n())
    throw Error("conjugate_function: shape mismatch");
  if (g.scale() != 0)
    throw DomainViolation("conjugate_function: g must be scale-0 integral");
  if (g.digits() < std::max(1, w.depth()))
    throw PrecisionError(
        "conjugate_function: g not determined to the window depth");
  ScaledMatrix ginv = matrix_inverse_unit(g);  // rejects non-unit determinant
  const int rep_digits = std::max(1, w.depth());
  SchwartzFunction out(w);
  for (const auto& [key, val] : phi.entries()) {
    ScaledMatrix x = w.representative(key, rep_digits);
    ScaledMatrix moved = g * x * ginv;  // support of g.phi is g Supp(phi) g^-1
    auto mk = w.key_of(moved);
    if (!mk)
      throw Error("conjugate_function: conjugated point left the window");
    out.set(*mk, val);
  }
  return out;
}

}  // namespace cuspforms
