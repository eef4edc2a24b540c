#pragma once

// Block structure of GL_n and certified construction of regular elliptic
// elements.
//
// A composition (n_1, ..., n_r) of n determines the standard parabolic of
// block upper-triangular matrices: its Levi part (block diagonal), its
// nilradical (strictly upper blocks), and the opposite nilradical (strictly
// lower blocks).  An element whose characteristic polynomial is irreducible
// over the residue field stabilizes no proper subspace of the reduction, so
// it lies in no proper parabolic subalgebra — that irreducibility check is
// the machine-checkable ellipticity certificate this module issues, and it
// is stable under perturbation by p * M_n(Z_p).

#include <cstdint>
#include <vector>

#include "cuspforms/lattice.hpp"
#include "cuspforms/padic.hpp"

namespace cuspforms {

struct ParabolicData {
  std::vector<int> composition;  // ordered positive parts summing to n
  CoordList levi_coords;         // block(i) == block(j), row-major
  CoordList parabolic_coords;    // block(i) <= block(j), row-major
  CoordList nilradical_coords;   // block(i) <  block(j), row-major
  CoordList opposite_nilradical_coords;  // block(i) > block(j), row-major

  int n() const;
  bool proper() const { return composition.size() >= 2; }
};

// The standard parabolic attached to one composition.
ParabolicData parabolic_from_composition(const std::vector<int>& composition);

// All 2^(n-1) - 1 standard proper parabolics, one per composition of n other
// than (n).  Deterministic order: compositions enumerated by their cut sets
// as ascending bitmasks (bit k set = cut after row k+1).
std::vector<ParabolicData> standard_parabolics(int n);

struct EllipticityCertificate {
  ResiduePolynomial charpoly_mod_p;  // monic, degree n, coefficients mod p
  bool irreducible = false;
};

// Issues the certificate for X: its characteristic polynomial reduced mod p
// and the irreducibility verdict.  X must have integral entries
// (DomainViolation otherwise) determined mod p at least (PrecisionError
// otherwise).  A true verdict certifies that X mod p generates a degree-n
// field extension, hence X is regular elliptic and avoids every proper
// parabolic subalgebra.
EllipticityCertificate ellipticity_certificate(const ScaledMatrix& X);

// Companion matrix of a monic degree-n polynomial that is irreducible mod p
// (rejected with DomainViolation otherwise).  Its characteristic polynomial
// is the input, exactly, at the input's modulus.
ScaledMatrix companion_elliptic(const ResiduePolynomial& f);

// The elliptic coset data: center, coset depth, certificate, and the
// indicator function of center + p^depth * M_n(Z_p) as a table on the window
// (min(0, val(center)), depth) — a single coset point.  depth >= 1 is
// required: it guarantees every point of the coset has the same mod-p
// characteristic polynomial as the center, so the whole support is certified
// regular elliptic.
struct EllipticBump {
  ScaledMatrix center;
  int depth = 1;
  EllipticityCertificate certificate;
  SchwartzFunction function;
};

EllipticBump make_elliptic_bump(const ScaledMatrix& center, int depth);
SchwartzFunction elliptic_bump(const ScaledMatrix& center, int depth);

// (g . phi)(X) = phi(g^{-1} X g) for g a unit of M_n(Z_p) (unit determinant;
// DomainViolation otherwise).  Conjugation by such g preserves every lattice
// p^k M_n(Z_p), so the window is unchanged.  Requires a full-space window
// and g determined to the window depth.
SchwartzFunction conjugate_function(const SchwartzFunction& phi,
                                    const ScaledMatrix& g);

}  // namespace cuspforms
