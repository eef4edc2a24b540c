#pragma once

// The cusp condition on the matrix algebra and its verification.
//
// A function is a cusp form when its integral over every affine slice
// X + nilradical vanishes, for every proper parabolic and every X.  For a
// windowed function this quantifier is finite: points outside the support
// window contribute an identically-zero integrand, so sweeping the covering
// window (all points of p^a L / p^b L) decides the condition exactly — and
// the outside claim itself is spot-checked on sampled points.
//
// The descent identity is the engine that produces cusp forms: the slice
// integral of a Fourier transform over a nilradical equals the pairing
// integral of the original function over the parabolic, because parabolic
// and nilradical are exact annihilators of each other under psi(tr(XY)).
// When the original function is supported away from every parabolic
// subalgebra, the right side is zero term by term.

#include <cstdint>
#include <vector>

#include "cuspforms/cyclotomic.hpp"
#include "cuspforms/gln.hpp"
#include "cuspforms/lattice.hpp"

namespace cuspforms {

// tr(XY) as a scaled residue with honest precision bookkeeping.
ScaledResidue trace_pairing(const ScaledMatrix& X, const ScaledMatrix& Y);

// The additive character of conductor Z_p evaluated at x, at the canonical
// minimal level (DomainViolation-free for any valuation: the level adapts).
Cyclotomic character_of(const ScaledResidue& x);

struct DescentIdentity {
  Cyclotomic lhs;  // slice integral of FT(phi) over the nilradical at X
  Cyclotomic rhs;  // pairing integral of phi over the parabolic against X
  bool equal = false;
};

// Computes both sides of the descent identity independently for phi on a
// full-space window:
//   lhs = integrate_affine_slice(FT(phi), nilradical(P), X)
//   rhs = p^(-b dim p(P)) * sum_{Y in parabolic points} phi(Y) psi(tr(XY))
// with no relating constant (the self-dual normalization forces it to 1).
// Domain: X must lie in p^(-b) M_n(Z_p), the invariance lattice of the
// transform (b = phi's window b).  Beyond it the finite sums on both sides
// stop representing the integrals, so deeper X raise DomainViolation.
DescentIdentity parabolic_descent_identity(const SchwartzFunction& phi,
                                           const ParabolicData& P,
                                           const ScaledMatrix& X);

// Same identity and domain with the transform supplied by the caller (it
// must be the transform of phi; pass it when checking many points against
// one phi so the transform is not recomputed per point).
DescentIdentity parabolic_descent_identity(const SchwartzFunction& phi,
                                           const SchwartzFunction& phi_hat,
                                           const ParabolicData& P,
                                           const ScaledMatrix& X);

struct LieCuspWitness {
  std::vector<int> composition;  // which parabolic
  std::int64_t x_key = 0;        // covering-window key of X (or sample index)
  bool outside_sample = false;
  Cyclotomic value;
};

struct LieCuspReport {
  struct PerParabolic {
    std::vector<int> composition;
    std::int64_t window_points = 0;
    std::int64_t outside_points = 0;
    std::int64_t violations = 0;
    double max_witness_abs = 0.0;  // |.| of the worst witness, 0 when clean
  };
  std::vector<PerParabolic> per_parabolic;
  std::vector<LieCuspWitness> witnesses;  // deterministic order
  bool pass = true;
};

// Asserts the slice integral of phi over each parabolic's nilradical is
// exactly zero at every point of phi's covering window, and that sampled
// points outside the window give an identically-zero integrand (every
// summand zero, not merely the sum).  phi must live on a full-space window.
LieCuspReport lie_cusp_verify(const SchwartzFunction& phi,
                              const std::vector<ParabolicData>& parabolics,
                              std::uint64_t seed = 1,
                              int outside_samples = 50);

// Throws CuspViolation carrying the first witness when the report failed.
void require_pass(const LieCuspReport& report);

}  // namespace cuspforms
