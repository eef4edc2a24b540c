#pragma once

// Lifting matrix-algebra functions to the group and verifying the group-side
// cusp conditions.
//
// For a function phi_lambda supported in p^n M_n(Z_p) and invariant under
// p^m M_n(Z_p) (n >= 1), the lift is f(chart(X)) = phi_lambda(X), zero off
// the chart image, where chart is either the truncated exponential (p >= 3)
// or g = 1 + X.  The congruence subgroups K_n = chart(p^n M_n(Z_p)) satisfy
// K_n = 1 + p^n M_n(Z_p) as sets, and f factors through K_n / K_m.  Lifted
// tables are keyed by the same lattice window as phi_lambda; this keying is
// consistent with group cosets provided 2n >= m in the exponential model
// (the Campbell-Hausdorff defect of two depth-n elements has valuation
// >= 2n), and unconditionally in the id-plus-x model.
//
// Everything group-side is computed honestly: coset representatives and
// integration points go through the chart, group multiplication is matrix
// multiplication, and evaluation inverts the chart (log or g - 1).  The
// pointwise match between the group-side nilradical sums and the
// matrix-algebra slice integrals is an audited claim, not a definition.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cuspforms/cusp.hpp"
#include "cuspforms/gln.hpp"
#include "cuspforms/lattice.hpp"

namespace cuspforms {

enum class GroupModel { exponential, id_plus_x };

std::string model_name(GroupModel model);
GroupModel model_from_name(const std::string& name);

// The sufficient valuation for the scaling parameter: a function invariant
// under p^n0 L and supported in p^(-n1) L lifts to a group cusp form once
// val(lambda) >= 2 n1 + n0.
int lambda_threshold(int n0, int n1);
// The support level after scaling: Supp(phi_lambda) is contained in p^n L
// with n = val(lambda) - n1.
int scaled_support_level(int val_lambda, int n1);

struct LiftProvenance {
  int n0 = 0;          // invariance exponent of the unscaled function
  int n1 = 0;          // support exponent of the unscaled function
  int val_lambda = 0;  // valuation of the scaling parameter
};

// chart(X) and its inverse in the chosen model, at the precision of the
// argument.  The exponential model requires p >= 3 and valuation >= 1.
ScaledMatrix chart_apply(GroupModel model, const ScaledMatrix& X);
ScaledMatrix chart_invert(GroupModel model, const ScaledMatrix& g);

class GroupFunction {
 public:
  // window: the lattice window (p^n L / p^m L) keying the table, full
  // coordinates, support scale n >= 1.  Validates the model constraints
  // (p >= 3 and 2n >= m for the exponential chart) and that the provenance
  // constants reproduce the window: n = val_lambda - n1, m = val_lambda + n0.
  GroupFunction(GroupModel model, LatticeWindow window, LiftProvenance prov,
                std::map<std::int64_t, Cyclotomic> values);

  GroupModel model() const { return model_; }
  const LatticeWindow& window() const { return window_; }
  const LiftProvenance& provenance() const { return prov_; }
  const std::map<std::int64_t, Cyclotomic>& entries() const { return v_; }
  std::int64_t p() const { return window_.p(); }
  int rank() const { return window_.n(); }
  int n_level() const { return window_.support_scale(); }
  int m_level() const { return window_.invariance_scale(); }
  bool is_zero() const { return v_.empty(); }

  Cyclotomic value_at_key(std::int64_t key) const;

  // The group element chart(representative(key)) carried to the given
  // absolute precision.
  ScaledMatrix coset_representative(std::int64_t key, int abs_precision) const;

  // f(g): inverts the chart honestly.  Returns 0 for g outside GL_n(Z_p),
  // outside the chart domain 1 + p M_n(Z_p), or outside the support.
  // Requires g determined mod p^m (PrecisionError otherwise).
  Cyclotomic evaluate(const ScaledMatrix& g) const;

  // The lifted table read back as a matrix-algebra function on the window.
  SchwartzFunction table_function() const;

  bool operator==(const GroupFunction& o) const;

 private:
  GroupModel model_;
  LatticeWindow window_;
  LiftProvenance prov_;
  std::map<std::int64_t, Cyclotomic> v_;
};

// The lift described above.  DomainViolation when the support window is not
// inside the chart domain (support scale < 1); ValidationError when the
// provenance constants do not match the window or the model constraints
// fail.
GroupFunction lift_to_group(const SchwartzFunction& phi_lambda,
                            GroupModel model, LiftProvenance prov);

// One Campbell-Hausdorff lattice check: defect = log(e^X e^Y) - X - Y must
// have valuation >= val_L(X) + val_L(Y).  Both arguments must have exact
// lattice valuation >= 1 and absolute precision >= required + 1, so that a
// pass can never be an artifact of precision exhaustion
// (InsufficientPrecision otherwise); p >= 3.
struct BCHWitness {
  ScaledMatrix X;
  ScaledMatrix Y;
  ScaledMatrix defect;
  int required_valuation = 0;
  LatticeValuation defect_valuation;
  bool pass = false;
};

BCHWitness bch_defect_check(const ScaledMatrix& X, const ScaledMatrix& Y);

struct GroupCuspWitness {
  std::vector<int> composition;
  std::int64_t x_key = 0;  // coset key, or sample index for outside points
  bool outside_sample = false;
  Cyclotomic group_value;
  Cyclotomic lie_value;
  bool reduction_mismatch = false;  // group and table sides disagreed
};

struct GroupCuspReport {
  struct PerParabolic {
    std::vector<int> composition;
    std::int64_t coset_points = 0;
    std::int64_t outside_points = 0;
    std::int64_t violations = 0;
    std::int64_t reduction_mismatches = 0;
    double max_witness_abs = 0.0;
  };
  std::vector<PerParabolic> per_parabolic;
  std::vector<GroupCuspWitness> witnesses;
  bool pass = true;
};

// For every listed parabolic P and every coset x of K_n/K_m: the normalized
// sum of f(x * chart(u)) over u in (p^n L_N)/(p^m L_N) must vanish exactly,
// and must equal the matrix-algebra slice integral of the table over the
// nilradical at the key's representative (the integral-reduction audit).
// Sampled x outside K_n N(F) — certified by their reduction mod p^n not
// being block-unipotent upper — must give an identically zero integrand.
// Chart arithmetic runs at absolute precision working_abs, which must be at
// least m + 2n + 2 (0 selects exactly that floor).
GroupCuspReport group_cusp_verify(const GroupFunction& f,
                                  const std::vector<ParabolicData>& parabolics,
                                  std::uint64_t seed = 1,
                                  int outside_samples = 50,
                                  int working_abs = 0);

// Throws CuspViolation on a vanishing failure, ReductionMismatch when a
// group-side sum disagreed with its table-side value.
void require_pass(const GroupCuspReport& report);

// The finite-level vanishing avatar: exhibits an exhaustion index k such
// that (i) the return set Supp(f)^{-1} Supp(f) meets the nilradical group
// inside stage k of the graded filtration
//   N_k = { 1 + u : block-distance-delta entries of u have
//           valuation >= min(n - k, (n - k) * delta) }
// (N_k = 1 + p^(n-k) L_N for k <= n; a group for every k; exhausts N(F)),
// and (ii) the normalized sum of f(x * chart(u)) over u in N_k reps
// vanishes for every x in Supp(f) * N_k.  k is computed from support
// valuations alone; stage-0 containment already follows from Supp(f) lying
// inside K_n.
struct JacquetReport {
  std::vector<int> composition;
  int k = 0;
  std::int64_t points_checked = 0;
  std::int64_t violations = 0;
  bool pass = true;
};

JacquetReport jacquet_vanishing_check(const GroupFunction& f,
                                      const ParabolicData& P,
                                      int working_abs = 0);

void require_pass(const JacquetReport& report);

}  // namespace cuspforms
