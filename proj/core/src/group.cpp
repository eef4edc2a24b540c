#include "cuspforms/group.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "cuspforms/rng.hpp"

namespace cuspforms {

std::string model_name(GroupModel model) {
  return model == GroupModel::exponential ? "exp" : "id-plus-x";
}

GroupModel model_from_name(const std::string& name) {
  if (name == "exp" || name == "exponential") return GroupModel::exponential;
  if (name == "id-plus-x" || name == "id_plus_x") return GroupModel::id_plus_x;
  throw ValidationError("unknown group model: " + name);
}

int lambda_threshold(int n0, int n1) {
  if (n0 < 0 || n1 < 0) throw Error("lambda_threshold: negative constants");
  return 2 * n1 + n0;
}

int scaled_support_level(int val_lambda, int n1) { return val_lambda - n1; }

ScaledMatrix chart_apply(GroupModel model, const ScaledMatrix& X) {
  if (model == GroupModel::exponential) return exp_truncated(X);
  PrimeContext ctx(X.p(), std::max(1, X.abs_precision()));
  return ScaledMatrix::identity(ctx, X.n()) + X;
}

ScaledMatrix chart_invert(GroupModel model, const ScaledMatrix& g) {
  if (model == GroupModel::exponential) return log_truncated(g);
  PrimeContext ctx(g.p(), std::max(1, g.abs_precision()));
  return g - ScaledMatrix::identity(ctx, g.n());
}

GroupFunction::GroupFunction(GroupModel model, LatticeWindow window,
                             LiftProvenance prov,
                             std::map<std::int64_t, Cyclotomic> values)
    : model_(model),
      window_(std::move(window)),
      prov_(prov),
      v_(std::move(values)) {
  if (window_.coords() != full_coords(window_.n()))
    throw ValidationError("GroupFunction: window must cover the full space");
  const int n = n_level();
  const int m = m_level();
  if (n < 1)
    throw DomainViolation(
        "GroupFunction: support level must be >= 1 (chart domain)");
  if (model_ == GroupModel::exponential && window_.p() < 3)
    throw DomainViolation(
        "GroupFunction: exponential chart requires p >= 3");
  if (2 * n < m)
    throw ValidationError(
        "GroupFunction: coset keying requires 2 * n_level >= m_level "
        "(scaling threshold)");
  if (prov_.n0 < 0 || prov_.n1 < 0)
    throw ValidationError("GroupFunction: negative provenance constants");
  if (scaled_support_level(prov_.val_lambda, prov_.n1) != n ||
      prov_.val_lambda + prov_.n0 != m)
    throw ValidationError(
        "GroupFunction: provenance constants do not reproduce the window "
        "levels");
  for (const auto& [key, val] : v_) {
    if (key < 0 || key >= window_.point_count())
      throw ValidationError("GroupFunction: key out of range");
    if (val.is_zero())
      throw ValidationError("GroupFunction: explicit zero entry");
  }
}

Cyclotomic GroupFunction::value_at_key(std::int64_t key) const {
  auto it = v_.find(key);
  return it == v_.end() ? Cyclotomic::zero(p()) : it->second;
}

ScaledMatrix GroupFunction::coset_representative(std::int64_t key,
                                                 int abs_precision) const {
  if (abs_precision <= n_level())
    throw PrecisionError("coset_representative: precision below the support");
  ScaledMatrix X = window_.representative(key, abs_precision - n_level());
  return chart_apply(model_, X);
}

namespace {

// g re-presented at scale 0 when it is an integral matrix; nullopt when some
// entry is certifiably outside Z_p.
std::optional<ScaledMatrix> integral_at_scale0(const ScaledMatrix& g) {
  if (g.scale() == 0) return g;
  if (g.scale() > 0) return g.rebased(0);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      ScaledResidue e = g.entry(i, j);
      if (!e.is_zero_at_precision() && e.scale() < 0) return std::nullopt;
    }
  const int digits = g.abs_precision();
  const std::int64_t q = pow_i64(g.p(), digits);
  const std::int64_t f = pow_i64(g.p(), -g.scale());
  ScaledMatrix out(g.p(), g.n(), 0, digits);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) out.set(i, j, (g.at(i, j) / f) % q);
  return out;
}

}  // namespace

Cyclotomic GroupFunction::evaluate(const ScaledMatrix& g) const {
  if (g.p() != p() || g.n() != rank()) throw Error("evaluate: shape mismatch");
  if (g.abs_precision() < m_level())
    throw PrecisionError("evaluate: group element not determined mod p^m");
  auto g0 = integral_at_scale0(g);
  if (!g0) return Cyclotomic::zero(p());  // outside GL_n(Z_p), hence K_n
  PrimeContext ctx(p(), g0->digits());
  ScaledMatrix y = *g0 - ScaledMatrix::identity(ctx, rank());
  LatticeValuation yv = lattice_valuation(y);
  if (yv.certifies_below(1))
    return Cyclotomic::zero(p());  // outside the chart domain 1 + p M_n(Z_p)
  ScaledMatrix X =
      model_ == GroupModel::exponential ? log_truncated(*g0) : y;
  auto key = window_.key_of(X);
  if (!key) return Cyclotomic::zero(p());
  return value_at_key(*key);
}

SchwartzFunction GroupFunction::table_function() const {
  SchwartzFunction out(window_);
  for (const auto& [key, val] : v_) out.set(key, val);
  return out;
}

bool GroupFunction::operator==(const GroupFunction& o) const {
  return model_ == o.model_ && window_ == o.window_ &&
         prov_.n0 == o.prov_.n0 && prov_.n1 == o.prov_.n1 &&
         prov_.val_lambda == o.prov_.val_lambda && v_ == o.v_;
}

GroupFunction lift_to_group(const SchwartzFunction& phi_lambda,
                            GroupModel model, LiftProvenance prov) {
  const LatticeWindow& w = phi_lambda.window();
  if (w.coords() != full_coords(w.n()))
    throw DomainViolation("lift_to_group: window must cover the full space");
  if (w.support_scale() < 1)
    throw DomainViolation(
        "lift_to_group: support exceeds the chart domain p*M_n(Z_p)");
  // The chart carries the table point-for-point: f(chart(X)) = phi_lambda(X).
  return GroupFunction(model, w, prov, phi_lambda.entries());
}

BCHWitness bch_defect_check(const ScaledMatrix& X, const ScaledMatrix& Y) {
  if (X.p() != Y.p() || X.n() != Y.n())
    throw Error("bch_defect_check: shape mismatch");
  LatticeValuation vx = lattice_valuation(X);
  LatticeValuation vy = lattice_valuation(Y);
  if (!vx.exact || !vy.exact)
    throw InsufficientPrecision(
        "bch_defect_check: argument valuation not resolved at this "
        "precision");
  if (vx.value < 1 || vy.value < 1)
    throw ConvergenceViolation(
        "bch_defect_check: arguments must lie in p*M_n(Z_p)");
  const int required = vx.value + vy.value;
  if (std::min(X.abs_precision(), Y.abs_precision()) < required + 1)
    throw InsufficientPrecision(
        "bch_defect_check: needs absolute precision >= " +
        std::to_string(required + 1) +
        " to resolve the required valuation honestly");
  ScaledMatrix g = exp_truncated(X) * exp_truncated(Y);
  ScaledMatrix defect = log_truncated(g) - X - Y;
  BCHWitness w{X, Y, defect, required, lattice_valuation(defect), false};
  w.pass = w.defect_valuation.certifies_at_least(required);
  return w;
}

namespace {

double witness_abs(const Cyclotomic& v) { return std::abs(v.to_complex()); }

// A point of GL_n(Z_p) certifiably outside K_n * N(F): its reduction mod p^n
// differs from every block-unipotent-upper matrix at one chosen coordinate
// outside the nilradical (an off-identity diagonal or a nonzero
// levi/lower entry below level n), then smeared by a random K_n factor,
// which does not change the class mod p^n.
ScaledMatrix sample_outside_group_point(const LatticeWindow& w,
                                        const ParabolicData& P, DetRng& rng,
                                        int abs_precision) {
  const std::int64_t p = w.p();
  const int rank = w.n();
  const int n = w.support_scale();
  ScaledMatrix x(p, rank, 0, abs_precision);
  for (int i = 0; i < rank; ++i) x.set(i, i, 1);

  CoordList off;  // coordinates whose nonzero low digits certify outside-ness
  for (Coord c : P.levi_coords) off.push_back(c);
  for (Coord c : P.opposite_nilradical_coords) off.push_back(c);
  while (true) {
    Coord c = off[static_cast<std::size_t>(rng.below(
        static_cast<std::int64_t>(off.size())))];
    const int e = static_cast<int>(rng.below(n));
    const std::int64_t u = 1 + rng.below(p - 1);  // unit digit
    if (c.i == c.j) {
      if (e == 0 && (1 + u) % p == 0) continue;  // keep the diagonal a unit
      x.set(c.i, c.j, 1 + u * pow_i64(p, e));
    } else {
      x.set(c.i, c.j, u * pow_i64(p, e));
    }
    break;
  }

  // Random K_n factor.
  ScaledMatrix k(p, rank, 0, abs_precision);
  const std::int64_t cap = pow_i64(p, abs_precision - n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      k.set(i, j, (i == j ? 1 : 0) + rng.below(cap) * pow_i64(p, n));
  return x * k;
}

}  // namespace

GroupCuspReport group_cusp_verify(const GroupFunction& f,
                                  const std::vector<ParabolicData>& parabolics,
                                  std::uint64_t seed, int outside_samples,
                                  int working_abs) {
  const LatticeWindow& w = f.window();
  const int n = f.n_level();
  const int m = f.m_level();
  const int floor_abs = m + 2 * n + 2;
  if (working_abs == 0) working_abs = floor_abs;
  if (working_abs < floor_abs)
    throw PrecisionError(
        "group_cusp_verify: working precision must be at least " +
        std::to_string(floor_abs));
  SchwartzFunction table = f.table_function();

  GroupCuspReport report;
  std::uint64_t parabolic_index = 0;
  for (const ParabolicData& P : parabolics) {
    if (P.n() != f.rank()) throw Error("group_cusp_verify: rank mismatch");
    if (!P.proper())
      throw DomainViolation("group_cusp_verify: improper parabolic");
    GroupCuspReport::PerParabolic row;
    row.composition = P.composition;
    const long long haar =
        -static_cast<long long>(m) *
        static_cast<long long>(P.nilradical_coords.size());

    // Integration points of the nilradical group, through the chart.
    LatticeWindow wn = w.restricted(P.nilradical_coords);
    std::vector<ScaledMatrix> npts;
    npts.reserve(static_cast<std::size_t>(wn.point_count()));
    for (std::int64_t u = 0; u < wn.point_count(); ++u)
      npts.push_back(
          chart_apply(f.model(), wn.representative(u, working_abs - n)));

    // Every coset of K_n / K_m.
    for (std::int64_t key = 0; key < w.point_count(); ++key) {
      ScaledMatrix x = f.coset_representative(key, working_abs);
      Cyclotomic acc = Cyclotomic::zero(f.p());
      for (const ScaledMatrix& npt : npts) acc = acc + f.evaluate(x * npt);
      Cyclotomic group_value = acc.rescaled_p(haar);
      Cyclotomic lie_value = integrate_affine_slice(
          table, P.nilradical_coords, w.representative(key, working_abs - n));
      ++row.coset_points;
      const bool violation = !group_value.is_zero();
      const bool mismatch = !(group_value == lie_value);
      if (violation) {
        ++row.violations;
        row.max_witness_abs =
            std::max(row.max_witness_abs, witness_abs(group_value));
      }
      if (mismatch) ++row.reduction_mismatches;
      if (violation || mismatch)
        report.witnesses.push_back(GroupCuspWitness{
            P.composition, key, false, group_value, lie_value, mismatch});
    }

    // Sampled x outside K_n N(F): identically zero integrand.
    DetRng rng(seed + 0x517c * ++parabolic_index);
    for (int s = 0; s < outside_samples; ++s) {
      ScaledMatrix x = sample_outside_group_point(w, P, rng, working_abs);
      Cyclotomic acc = Cyclotomic::zero(f.p());
      bool all_zero = true;
      for (const ScaledMatrix& npt : npts) {
        Cyclotomic term = f.evaluate(x * npt);
        if (!term.is_zero()) all_zero = false;
        acc = acc + term;
      }
      Cyclotomic group_value = acc.rescaled_p(haar);
      ++row.outside_points;
      if (!all_zero || !group_value.is_zero()) {
        ++row.violations;
        row.max_witness_abs =
            std::max(row.max_witness_abs, witness_abs(group_value));
        report.witnesses.push_back(GroupCuspWitness{
            P.composition, s, true, group_value, Cyclotomic::zero(f.p()),
            false});
      }
    }

    if (row.violations > 0 || row.reduction_mismatches > 0)
      report.pass = false;
    report.per_parabolic.push_back(std::move(row));
  }
  return report;
}

void require_pass(const GroupCuspReport& report) {
  if (report.pass) return;
  for (const auto& wit : report.witnesses)
    if (wit.reduction_mismatch)
      throw ReductionMismatch(
          "group-side sum disagrees with the table-side integral at coset "
          "key " +
          std::to_string(wit.x_key));
  const GroupCuspWitness& first = report.witnesses.front();
  throw CuspViolation(
      "group cusp condition violated at " +
      std::string(first.outside_sample ? "outside sample " : "coset key ") +
      std::to_string(first.x_key));
}

JacquetReport jacquet_vanishing_check(const GroupFunction& f,
                                      const ParabolicData& P,
                                      int working_abs) {
  if (P.n() != f.rank())
    throw Error("jacquet_vanishing_check: rank mismatch");
  if (!P.proper())
    throw DomainViolation("jacquet_vanishing_check: improper parabolic");
  const LatticeWindow& w = f.window();
  const int n = f.n_level();
  const int m = f.m_level();
  const std::int64_t p = f.p();
  const int floor_abs = m + 2 * n + 2;
  if (working_abs == 0) working_abs = floor_abs;
  if (working_abs < floor_abs)
    throw PrecisionError(
        "jacquet_vanishing_check: working precision must be at least " +
        std::to_string(floor_abs));

  JacquetReport report;
  report.composition = P.composition;

  // Separation exponent of the support: the largest j with
  // Supp(f)^{-1} Supp(f) inside K_j, read off the support keys.  Distinct
  // keys differ at some coordinate digit; the difference's valuation is
  // n + val_p(digit difference).
  int j = m;
  std::vector<std::vector<std::int64_t>> digit_vectors;
  for (const auto& [key, val] : f.entries())
    digit_vectors.push_back(w.values_of_key(key));
  for (std::size_t s = 0; s < digit_vectors.size(); ++s)
    for (std::size_t t = s + 1; t < digit_vectors.size(); ++t) {
      int pair_val = m;
      for (int c = 0; c < w.dim(); ++c) {
        std::int64_t diff = (digit_vectors[s][static_cast<std::size_t>(c)] -
                             digit_vectors[t][static_cast<std::size_t>(c)] +
                             w.radix()) %
                            w.radix();
        if (diff != 0) pair_val = std::min(pair_val, n + val_p(diff, p));
      }
      j = std::min(j, pair_val);
    }
  // Stage k of the graded filtration must contain N(F) ∩ K_j; for k <= n
  // that stage is 1 + p^(n-k) L_N, so k = n - j suffices (never positive
  // here: support inside K_n forces j >= n).
  report.k = std::max(0, n - j);
  if (report.k > n)
    throw Error("jacquet_vanishing_check: filtration index out of range");

  // Integration points of stage k: (p^(n-k) L_N)/(p^m L_N) via the chart.
  LatticeWindow wk(p, f.rank(), P.nilradical_coords, n - report.k, m);
  std::vector<ScaledMatrix> npts;
  npts.reserve(static_cast<std::size_t>(wk.point_count()));
  for (std::int64_t u = 0; u < wk.point_count(); ++u)
    npts.push_back(chart_apply(
        f.model(), wk.representative(u, working_abs - (n - report.k))));
  const long long haar =
      -static_cast<long long>(m) *
      static_cast<long long>(P.nilradical_coords.size());

  // All x in Supp(f) * N_k: integrals must vanish exactly.  (For any other
  // x the integrand is identically zero by support containment.)
  for (const auto& [key, val] : f.entries()) {
    ScaledMatrix xs = f.coset_representative(key, working_abs);
    for (const ScaledMatrix& shift : npts) {
      ScaledMatrix x = xs * shift;
      Cyclotomic acc = Cyclotomic::zero(p);
      for (const ScaledMatrix& npt : npts) acc = acc + f.evaluate(x * npt);
      ++report.points_checked;
      if (!acc.rescaled_p(haar).is_zero()) ++report.violations;
    }
  }
  report.pass = report.violations == 0;
  return report;
}

void require_pass(const JacquetReport& report) {
  if (report.pass) return;
  std::string comp;
  for (std::size_t i = 0; i < report.composition.size(); ++i)
    comp += (i ? "," : "(") + std::to_string(report.composition[i]);
  comp += ")";
  throw CuspViolation("finite-level vanishing failed at parabolic " + comp +
                      " with " + std::to_string(report.violations) +
                      " nonzero integrals");
}

}  // namespace cuspforms
