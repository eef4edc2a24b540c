#pragma once

// End-to-end driver: build an elliptic bump, Fourier-transform it into a
// matrix-space cusp function, verify the vanishing, scale it into the chart
// domain, lift it to the group, and verify the group-side vanishing plus the
// finite-level avatar.  Every verification is an exact zero test in the
// cyclotomic ring; the driver only orchestrates and reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuspforms/cusp.hpp"
#include "cuspforms/gln.hpp"
#include "cuspforms/group.hpp"
#include "cuspforms/lattice.hpp"
#include "cuspforms/serialize.hpp"

namespace cuspforms {

struct PipelineConfig {
  std::int64_t p = 3;
  int n = 2;  // matrix rank
  GroupModel model = GroupModel::exponential;
  // Ascending non-leading coefficients of the monic torus polynomial
  // (degree n, leading 1 implicit); empty selects the default for (p, n).
  std::vector<std::int64_t> poly;
  int depth = 1;       // bump invariance exponent: indicator of center + p^depth M_n
  int val_lambda = 3;  // valuation of the scaling element
  int precision = 0;   // working absolute precision; 0 = minimal sound value
  std::uint64_t seed = 1;
  std::string check = "all";  // ft | lie | bch | group | all
  int outside_samples = 50;
  int bch_pairs = 50;
  std::string dump_path;  // when nonempty: write stage functions as JSON
};

// Constants forced by the construction.  The transform of a depth-c bump
// lives on the window [-c, 0), so its decay/invariance exponents are
// n1 = c, n0 = 0; scaling by lambda moves it to [n_level, m_level) with
// n_level = val_lambda - n1 and m_level = val_lambda + n0, and the coset
// keying on the group is consistent iff val_lambda >= 2 n1 + n0.
struct DerivedConstants {
  int n0 = 0;
  int n1 = 0;
  int threshold = 0;  // minimal admissible val_lambda
  int n_level = 0;
  int m_level = 0;
  int working_precision = 0;
};

// Validates the configuration (prime p, rank >= 2, irreducibility is checked
// later at construction, val_lambda >= threshold, precision floor, machine
// representability of p^precision) and returns the derived constants.
// Throws ValidationError with the threshold spelled out when val_lambda is
// too small.
DerivedConstants derive_constants(const PipelineConfig& cfg);

// The default torus polynomial for (p, n): the first vector of non-leading
// coefficients, in base-p counting order, whose monic completion is
// irreducible modulo p.
std::vector<std::int64_t> default_polynomial(std::int64_t p, int n);

struct BchStageReport {
  int pairs = 0;
  int violations = 0;
  bool pass = true;
};

struct PipelineResult {
  PipelineConfig config;  // with the polynomial filled in
  DerivedConstants derived;
  std::optional<EllipticBump> bump;
  std::optional<SchwartzFunction> fourier;
  // Double-transform audit: FT(FT(phi)) must be the reflection of phi.
  bool ft_involution_checked = false;
  bool ft_involution_pass = true;
  std::optional<LieCuspReport> lie;
  std::optional<SchwartzFunction> scaled;
  std::optional<GroupFunction> lift;
  std::optional<GroupCuspReport> group;
  std::vector<JacquetReport> jacquet;
  std::optional<BchStageReport> bch;
  bool pass = true;
};

// Runs the staged construction.  Stage gating by cfg.check:
//   construct + fourier: always;  double-transform audit: ft, all;
//   matrix-space verification: lie, all;
//   scale + lift + group verification + finite-level: group, all;
//   chart-consistency sampling (log(exp X exp Y) defect): bch, all (p >= 3).
// Throws ValidationError / DomainViolation on rejected input; verification
// failures do NOT throw — they set pass = false with full reports.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Stable machine-readable report (schema_version 1, ordered keys, no
// timings: byte-identical across runs with equal config).
Json report_json(const PipelineResult& result);

// Human-readable report, one line per stage with PASS/FAIL.
std::string report_text(const PipelineResult& result);

// The stage functions as one JSON document (bump, transform, scaled, lift).
Json dump_functions_json(const PipelineResult& result);

Json config_to_json(const PipelineConfig& cfg);
// Reads the same schema; missing keys keep the supplied base's values.
PipelineConfig config_from_json(const Json& j, PipelineConfig base = {});

}  // namespace cuspforms
