#include "cuspforms/cusp.hpp"

#include <algorithm>
#include <cmath>

#include "cuspforms/rng.hpp"

namespace cuspforms {

ScaledResidue trace_pairing(const ScaledMatrix& X, const ScaledMatrix& Y) {
  if (X.p() != Y.p() || X.n() != Y.n())
    throw Error("trace_pairing: shape mismatch");
  ScaledResidue acc = X.entry(0, 0) * Y.entry(0, 0);
  for (int i = 0; i < X.n(); ++i)
    for (int j = 0; j < X.n(); ++j) {
      if (i == 0 && j == 0) continue;
      acc = acc + X.entry(i, j) * Y.entry(j, i);
    }
  return acc;
}

Cyclotomic character_of(const ScaledResidue& x) {
  if (x.abs_precision() < 0)
    throw PrecisionError("character_of: x not determined modulo Z_p");
  if (x.is_zero_at_precision() || x.scale() >= 0)
    return Cyclotomic::one(x.p());
  return additive_character(x, -x.scale());
}

DescentIdentity parabolic_descent_identity(const SchwartzFunction& phi,
                                           const ParabolicData& P,
                                           const ScaledMatrix& X) {
  return parabolic_descent_identity(phi, fourier_separable(phi), P, X);
}

DescentIdentity parabolic_descent_identity(const SchwartzFunction& phi,
                                           const SchwartzFunction& phi_hat,
                                           const ParabolicData& P,
                                           const ScaledMatrix& X) {
  const LatticeWindow& w = phi.window();
  if (w.coords() != full_coords(w.n()))
    throw DomainViolation(
        "parabolic_descent_identity: window must cover the full matrix "
        "space");
  if (P.n() != w.n())
    throw DomainViolation("parabolic_descent_identity: rank mismatch");
  if (!(phi_hat.window() == w.dual()))
    throw DomainViolation(
        "parabolic_descent_identity: supplied transform lives on the wrong "
        "window");
  // Both sides represent integrals over unbounded domains by finite sums;
  // the finite sums are the integrals exactly when X lies in p^(-b) M_n,
  // the invariance lattice of the transform.  Deeper X would make the
  // pairing sum depend on the choice of coset representatives.
  if (!lattice_valuation(X).certifies_at_least(-w.invariance_scale()))
    throw DomainViolation(
        "parabolic_descent_identity: X must lie in p^(-b) M_n(Z_p); beyond "
        "that lattice the finite pairing sum no longer represents the "
        "integral");

  DescentIdentity out{Cyclotomic::zero(w.p()), Cyclotomic::zero(w.p()), false};
  out.lhs = integrate_affine_slice(phi_hat, P.nilradical_coords, X);

  // Pairing side: sum phi over the parabolic's window points against the
  // character of the trace pairing with X.
  LatticeWindow sub = w.restricted(P.parabolic_coords);
  const int rep_digits = std::max(1, sub.depth());
  // Positions of the parabolic coordinates inside the full-window key.
  std::vector<std::size_t> pos(static_cast<std::size_t>(sub.dim()));
  for (int c = 0; c < sub.dim(); ++c)
    pos[static_cast<std::size_t>(c)] = static_cast<std::size_t>(
        coord_index(w.coords(), sub.coords()[static_cast<std::size_t>(c)]));

  Cyclotomic acc = Cyclotomic::zero(w.p());
  std::vector<std::int64_t> full_vals(static_cast<std::size_t>(w.dim()), 0);
  for (std::int64_t k = 0; k < sub.point_count(); ++k) {
    auto sub_vals = sub.values_of_key(k);
    std::fill(full_vals.begin(), full_vals.end(), 0);
    for (int c = 0; c < sub.dim(); ++c)
      full_vals[pos[static_cast<std::size_t>(c)]] =
          sub_vals[static_cast<std::size_t>(c)];
    Cyclotomic val = phi.value_at_key(w.key_of_values(full_vals));
    if (val.is_zero()) continue;
    ScaledResidue t = trace_pairing(X, sub.representative(k, rep_digits));
    acc = acc + val * character_of(t);
  }
  const long long haar =
      -static_cast<long long>(w.invariance_scale()) * sub.dim();
  out.rhs = acc.rescaled_p(haar);
  out.equal = (out.lhs == out.rhs);
  return out;
}

namespace {

double witness_abs(const Cyclotomic& v) {
  return std::abs(v.to_complex());
}

// A point certifiably outside the covering window: one random coordinate is
// pushed below the support scale (valuation a - 1 - extra), the rest filled
// with a random in-window part.  Every slice summand at such a point
// vanishes, because the low coordinate keeps valuation < a after adding any
// nilradical point of the window.
ScaledMatrix sample_outside_point(const LatticeWindow& w, DetRng& rng) {
  const int a = w.support_scale();
  const int b = w.invariance_scale();
  const int extra = static_cast<int>(rng.below(2));
  const int low_scale = a - 1 - extra;
  const int digits = b - low_scale;  // abs precision b, enough to classify
  ScaledMatrix x(w.p(), w.n(), low_scale, digits);
  const std::int64_t low_cap = pow_i64(w.p(), 1 + extra);
  for (int c = 0; c < w.dim(); ++c) {
    Coord co = w.coords()[static_cast<std::size_t>(c)];
    // In-window digit at scale a for every coordinate.
    std::int64_t v = rng.below(w.radix());
    x.set(co.i, co.j, v * pow_i64(w.p(), a - low_scale));
  }
  // One coordinate gets a unit at the low scale.
  Coord low = w.coords()[static_cast<std::size_t>(rng.below(w.dim()))];
  std::int64_t unit = 1 + rng.below(low_cap - 1);
  while (unit % w.p() == 0) unit = 1 + rng.below(low_cap - 1);
  x.set(low.i, low.j, x.at(low.i, low.j) + unit);
  return x;
}

}  // namespace

LieCuspReport lie_cusp_verify(const SchwartzFunction& phi,
                              const std::vector<ParabolicData>& parabolics,
                              std::uint64_t seed, int outside_samples) {
  const LatticeWindow& w = phi.window();
  if (w.coords() != full_coords(w.n()))
    throw DomainViolation(
        "lie_cusp_verify: window must cover the full matrix space");

  LieCuspReport report;
  std::uint64_t parabolic_index = 0;
  for (const ParabolicData& P : parabolics) {
    if (P.n() != w.n()) throw Error("lie_cusp_verify: rank mismatch");
    if (!P.proper()) throw DomainViolation("lie_cusp_verify: improper parabolic");
    LieCuspReport::PerParabolic row;
    row.composition = P.composition;

    // Full covering sweep: every coset of the window.
    const int rep_digits = std::max(1, w.depth());
    for (std::int64_t k = 0; k < w.point_count(); ++k) {
      ScaledMatrix x = w.representative(k, rep_digits);
      Cyclotomic integral =
          integrate_affine_slice(phi, P.nilradical_coords, x);
      ++row.window_points;
      if (!integral.is_zero()) {
        ++row.violations;
        row.max_witness_abs =
            std::max(row.max_witness_abs, witness_abs(integral));
        report.witnesses.push_back(
            LieCuspWitness{P.composition, k, false, integral});
      }
    }

    // Sampled points outside the window: the whole integrand must vanish.
    DetRng rng(seed + 0x9e37 * ++parabolic_index);
    LatticeWindow nil = w.restricted(P.nilradical_coords);
    for (int s = 0; s < outside_samples; ++s) {
      ScaledMatrix x = sample_outside_point(w, rng);
      bool all_zero = true;
      for (std::int64_t k = 0; k < nil.point_count(); ++k)
        if (!phi.evaluate(x + nil.representative(k)).is_zero()) {
          all_zero = false;
          break;
        }
      Cyclotomic integral =
          integrate_affine_slice(phi, P.nilradical_coords, x);
      ++row.outside_points;
      if (!all_zero || !integral.is_zero()) {
        ++row.violations;
        row.max_witness_abs =
            std::max(row.max_witness_abs, witness_abs(integral));
        report.witnesses.push_back(
            LieCuspWitness{P.composition, s, true, integral});
      }
    }

    if (row.violations > 0) report.pass = false;
    report.per_parabolic.push_back(std::move(row));
  }
  return report;
}

void require_pass(const LieCuspReport& report) {
  if (report.pass) return;
  const LieCuspWitness& first = report.witnesses.front();
  std::string where = first.outside_sample ? "outside sample " : "window key ";
  std::string comp;
  for (std::size_t i = 0; i < first.composition.size(); ++i)
    comp += (i ? "," : "(") + std::to_string(first.composition[i]);
  comp += ")";
  throw CuspViolation("cusp condition violated at parabolic " + comp + ", " +
                      where + std::to_string(first.x_key));
}

}  // namespace cuspforms
