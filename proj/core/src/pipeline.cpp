#include "cuspforms/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "cuspforms/rng.hpp"

namespace cuspforms {

namespace {

bool known_check(const std::string& c) {
  return c == "ft" || c == "lie" || c == "bch" || c == "group" || c == "all";
}

bool stage_on(const PipelineConfig& cfg, const char* which) {
  return cfg.check == which || cfg.check == "all";
}

// p^e <= 2^62, checked without overflow.
bool power_representable(std::int64_t p, int e) {
  const std::int64_t cap = std::int64_t(1) << 62;
  std::int64_t acc = 1;
  for (int i = 0; i < e; ++i) {
    if (acc > cap / p) return false;
    acc *= p;
  }
  return true;
}

}  // namespace

DerivedConstants derive_constants(const PipelineConfig& cfg) {
  if (!is_prime(cfg.p)) throw ValidationError("p must be prime");
  if (cfg.n < 2)
    throw ValidationError("rank must be at least 2 (no proper parabolic "
                          "subgroups below rank 2)");
  if (cfg.depth < 1) throw ValidationError("depth must be at least 1");
  if (cfg.model == GroupModel::exponential && cfg.p < 3)
    throw ValidationError("the exponential chart requires p >= 3");
  if (!known_check(cfg.check))
    throw ValidationError("unknown check: " + cfg.check +
                          " (expected ft, lie, bch, group, or all)");
  if (!cfg.poly.empty()) {
    if (cfg.poly.size() != static_cast<std::size_t>(cfg.n))
      throw ValidationError(
          "polynomial must list exactly n non-leading coefficients");
    for (std::int64_t c : cfg.poly)
      if (c < 0 || c >= cfg.p)
        throw ValidationError("polynomial coefficients must lie in [0, p)");
  }
  if (cfg.outside_samples < 0 || cfg.bch_pairs < 0)
    throw ValidationError("sample counts must be nonnegative");

  DerivedConstants d;
  d.n0 = 0;
  d.n1 = cfg.depth;
  d.threshold = 2 * d.n1 + d.n0;
  if (cfg.val_lambda < d.threshold)
    throw ValidationError(
        "val_lambda = " + std::to_string(cfg.val_lambda) +
        " is below the scaling threshold 2*n1 + n0 = " +
        std::to_string(d.threshold) +
        " (n1 = " + std::to_string(d.n1) + ", n0 = " + std::to_string(d.n0) +
        "); coset keying on the group would be inconsistent");
  d.n_level = scaled_support_level(cfg.val_lambda, d.n1);
  d.m_level = cfg.val_lambda + d.n0;
  const int floor_abs = d.m_level + 2 * d.n_level + 2;
  d.working_precision = cfg.precision == 0 ? floor_abs : cfg.precision;
  if (d.working_precision < floor_abs)
    throw ValidationError(
        "precision must be at least m + 2n + 2 = " + std::to_string(floor_abs));
  if (!power_representable(cfg.p, d.working_precision))
    throw ValidationError("p^precision exceeds the machine word");
  // The covering window must be enumerable.
  const long long key_digits =
      static_cast<long long>(cfg.depth) * cfg.n * cfg.n;
  if (key_digits > 62 || !power_representable(cfg.p, static_cast<int>(key_digits)))
    throw ValidationError("window has too many points to enumerate");
  return d;
}

std::vector<std::int64_t> default_polynomial(std::int64_t p, int n) {
  if (!is_prime(p)) throw ValidationError("p must be prime");
  if (n < 1) throw ValidationError("degree must be positive");
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > (std::int64_t(1) << 56) / p)
      throw ValidationError("default polynomial search space too large");
    total *= p;
  }
  for (std::int64_t t = 0; t < total; ++t) {
    std::vector<std::int64_t> coeffs;
    std::int64_t rest = t;
    for (int k = 0; k < n; ++k) {
      coeffs.push_back(rest % p);
      rest /= p;
    }
    coeffs.push_back(1);
    if (irreducible_over_residue_field(ResiduePolynomial(p, 1, coeffs))) {
      coeffs.pop_back();
      return coeffs;
    }
  }
  throw Error("no irreducible polynomial found");  // unreachable
}

PipelineResult run_pipeline(const PipelineConfig& cfg_in) {
  PipelineResult result;
  result.config = cfg_in;
  if (result.config.poly.empty())
    result.config.poly = default_polynomial(cfg_in.p, cfg_in.n);
  const PipelineConfig& cfg = result.config;
  result.derived = derive_constants(cfg);
  const DerivedConstants& d = result.derived;

  // Construct: companion matrix of the torus polynomial, bump on its coset.
  std::vector<std::int64_t> monic = cfg.poly;
  monic.push_back(1);
  ResiduePolynomial torus_poly(cfg.p, std::max(1, cfg.depth), monic);
  if (!irreducible_over_residue_field(torus_poly))
    throw ValidationError(
        "torus polynomial is reducible modulo p; the coset would not be "
        "elliptic");
  ScaledMatrix center = companion_elliptic(torus_poly);
  result.bump = make_elliptic_bump(center, cfg.depth);
  const SchwartzFunction& phi = result.bump->function;

  // Transform.
  SchwartzFunction phihat = fourier_separable(phi);
  result.fourier = phihat;
  if (stage_on(cfg, "ft")) {
    result.ft_involution_checked = true;
    SchwartzFunction twice = fourier_separable(phihat);
    SchwartzFunction reflected(phi.window());
    for (const auto& [key, val] : phi.entries())
      reflected.set(phi.window().negate_key(key), val);
    result.ft_involution_pass = twice == reflected;
  }

  std::vector<ParabolicData> parabolics = standard_parabolics(cfg.n);

  if (stage_on(cfg, "lie"))
    result.lie =
        lie_cusp_verify(phihat, parabolics, cfg.seed, cfg.outside_samples);

  if (stage_on(cfg, "group")) {
    PrimeContext lam_ctx(cfg.p, std::max(1, phihat.window().depth()));
    ScaledResidue lambda =
        ScaledResidue::uniformizer_power(lam_ctx, cfg.val_lambda);
    result.scaled = scale_function(phihat, lambda);
    result.lift = lift_to_group(*result.scaled, cfg.model,
                                LiftProvenance{d.n0, d.n1, cfg.val_lambda});
    result.group = group_cusp_verify(*result.lift, parabolics, cfg.seed,
                                     cfg.outside_samples, d.working_precision);
    for (const ParabolicData& P : parabolics)
      result.jacquet.push_back(
          jacquet_vanishing_check(*result.lift, P, d.working_precision));
  }

  if (stage_on(cfg, "bch")) {
    if (cfg.p < 3) {
      if (cfg.check == "bch")
        throw ValidationError("the chart-consistency check requires p >= 3");
      // under "all" with p = 2 the stage is silently inapplicable
    } else {
      BchStageReport bch;
      bch.pairs = cfg.bch_pairs;
      DetRng rng(cfg.seed + 0x9e3779b9);
      const int W = d.working_precision;
      const std::int64_t cap = pow_i64(cfg.p, W - 1);
      for (int s = 0; s < bch.pairs; ++s) {
        ScaledMatrix X(cfg.p, cfg.n, 0, W);
        ScaledMatrix Y(cfg.p, cfg.n, 0, W);
        while (true) {
          for (int i = 0; i < cfg.n; ++i)
            for (int j = 0; j < cfg.n; ++j) {
              X.set(i, j, cfg.p * rng.below(cap));
              Y.set(i, j, cfg.p * rng.below(cap));
            }
          LatticeValuation vx = lattice_valuation(X);
          LatticeValuation vy = lattice_valuation(Y);
          if (vx.exact && vy.exact && vx.value + vy.value + 1 <= W) break;
        }
        if (!bch_defect_check(X, Y).pass) ++bch.violations;
      }
      bch.pass = bch.violations == 0;
      result.bch = bch;
    }
  }

  result.pass = result.ft_involution_pass &&
                (!result.lie || result.lie->pass) &&
                (!result.group || result.group->pass) &&
                (!result.bch || result.bch->pass);
  for (const JacquetReport& jr : result.jacquet)
    result.pass = result.pass && jr.pass;

  if (!cfg.dump_path.empty())
    save_json(dump_functions_json(result), cfg.dump_path);
  return result;
}

namespace {

std::string check_name(const PipelineConfig& cfg) { return cfg.check; }

std::string poly_text(const std::vector<std::int64_t>& poly, int n) {
  std::ostringstream out;
  out << "x^" << n;
  for (int k = n - 1; k >= 0; --k) {
    std::int64_t c = poly[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    out << " + ";
    if (c != 1 || k == 0) out << c;
    if (k >= 1) {
      if (c != 1) out << "*";
      out << "x";
      if (k > 1) out << "^" << k;
    }
  }
  return out.str();
}

std::string composition_text(const std::vector<int>& comp) {
  std::string out = "(";
  for (std::size_t i = 0; i < comp.size(); ++i)
    out += (i ? "," : "") + std::to_string(comp[i]);
  return out + ")";
}

const char* verdict(bool pass) { return pass ? "[PASS]" : "[FAIL]"; }

}  // namespace

Json config_to_json(const PipelineConfig& cfg) {
  Json j;
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  j["model"] = model_name(cfg.model);
  j["poly"] = cfg.poly;
  j["depth"] = cfg.depth;
  j["val_lambda"] = cfg.val_lambda;
  j["precision"] = cfg.precision;
  j["seed"] = cfg.seed;
  j["check"] = check_name(cfg);
  j["outside_samples"] = cfg.outside_samples;
  j["bch_pairs"] = cfg.bch_pairs;
  if (!cfg.dump_path.empty()) j["dump_functions"] = cfg.dump_path;
  return j;
}

PipelineConfig config_from_json(const Json& j, PipelineConfig base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const char* known[] = {"p",         "n",          "model",
                                "poly",      "depth",      "val_lambda",
                                "precision", "seed",       "check",
                                "outside_samples", "bch_pairs",
                                "dump_functions"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ValidationError("unknown config key: " + key);
  }
  PipelineConfig cfg = std::move(base);
  if (j.contains("p")) cfg.p = j["p"].get<std::int64_t>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("model"))
    cfg.model = model_from_name(j["model"].get<std::string>());
  if (j.contains("poly")) {
    cfg.poly.clear();
    for (const auto& c : j["poly"]) cfg.poly.push_back(c.get<std::int64_t>());
  }
  if (j.contains("depth")) cfg.depth = j["depth"].get<int>();
  if (j.contains("val_lambda")) cfg.val_lambda = j["val_lambda"].get<int>();
  if (j.contains("precision")) cfg.precision = j["precision"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("check")) cfg.check = j["check"].get<std::string>();
  if (j.contains("outside_samples"))
    cfg.outside_samples = j["outside_samples"].get<int>();
  if (j.contains("bch_pairs")) cfg.bch_pairs = j["bch_pairs"].get<int>();
  if (j.contains("dump_functions"))
    cfg.dump_path = j["dump_functions"].get<std::string>();
  return cfg;
}

Json report_json(const PipelineResult& r) {
  Json j;
  j["schema_version"] = 1;
  j["tool"] = "cuspform";
  {
    Json c = config_to_json(r.config);
    c["precision"] = r.derived.working_precision;  // resolved value
    j["config"] = std::move(c);
  }
  {
    Json d;
    d["bump_window"] = Json::array({0, r.config.depth});
    d["transform_window"] = Json::array({-r.config.depth, 0});
    d["n0"] = r.derived.n0;
    d["n1"] = r.derived.n1;
    d["threshold"] = r.derived.threshold;
    d["n_level"] = r.derived.n_level;
    d["m_level"] = r.derived.m_level;
    d["working_precision"] = r.derived.working_precision;
    j["derived"] = std::move(d);
  }
  if (r.bump) {
    Json c;
    c["charpoly_mod_p"] = r.bump->certificate.charpoly_mod_p.coeffs();
    c["irreducible"] = r.bump->certificate.irreducible;
    c["support"] = r.bump->function.support_size();
    j["construct"] = std::move(c);
  }
  if (r.fourier) {
    Json f;
    f["support"] = r.fourier->support_size();
    f["involution"] = !r.ft_involution_checked ? "skipped"
                      : r.ft_involution_pass   ? "pass"
                                               : "fail";
    j["fourier"] = std::move(f);
  }
  if (r.lie) {
    Json l;
    l["pass"] = r.lie->pass;
    Json rows = Json::array();
    for (const auto& row : r.lie->per_parabolic) {
      Json x;
      x["composition"] = row.composition;
      x["window_points"] = row.window_points;
      x["outside_points"] = row.outside_points;
      x["violations"] = row.violations;
      x["max_witness_abs"] = row.max_witness_abs;
      rows.push_back(std::move(x));
    }
    l["per_parabolic"] = std::move(rows);
    j["lie"] = std::move(l);
  } else {
    j["lie"] = nullptr;
  }
  if (r.scaled) {
    Json s;
    s["window"] = Json::array({r.derived.n_level, r.derived.m_level});
    s["support"] = r.scaled->support_size();
    j["scale"] = std::move(s);
  } else {
    j["scale"] = nullptr;
  }
  if (r.lift) {
    Json s;
    s["model"] = model_name(r.lift->model());
    s["entries"] =
        static_cast<std::int64_t>(r.lift->entries().size());
    j["lift"] = std::move(s);
  } else {
    j["lift"] = nullptr;
  }
  if (r.group) {
    Json g;
    g["pass"] = r.group->pass;
    Json rows = Json::array();
    for (const auto& row : r.group->per_parabolic) {
      Json x;
      x["composition"] = row.composition;
      x["coset_points"] = row.coset_points;
      x["outside_points"] = row.outside_points;
      x["violations"] = row.violations;
      x["reduction_mismatches"] = row.reduction_mismatches;
      x["max_witness_abs"] = row.max_witness_abs;
      rows.push_back(std::move(x));
    }
    g["per_parabolic"] = std::move(rows);
    j["group"] = std::move(g);
  } else {
    j["group"] = nullptr;
  }
  if (!r.jacquet.empty()) {
    Json rows = Json::array();
    for (const JacquetReport& jr : r.jacquet) {
      Json x;
      x["composition"] = jr.composition;
      x["k"] = jr.k;
      x["points_checked"] = jr.points_checked;
      x["violations"] = jr.violations;
      x["pass"] = jr.pass;
      rows.push_back(std::move(x));
    }
    j["finite_level"] = std::move(rows);
  } else {
    j["finite_level"] = nullptr;
  }
  if (r.bch) {
    Json b;
    b["pairs"] = r.bch->pairs;
    b["violations"] = r.bch->violations;
    b["pass"] = r.bch->pass;
    j["bch"] = std::move(b);
  } else {
    j["bch"] = nullptr;
  }
  j["pass"] = r.pass;
  return j;
}

std::string report_text(const PipelineResult& r) {
  std::ostringstream out;
  out << "cuspform: p=" << r.config.p << " rank=" << r.config.n
      << " model=" << model_name(r.config.model)
      << " poly=" << poly_text(r.config.poly, r.config.n)
      << " depth=" << r.config.depth << " val_lambda=" << r.config.val_lambda
      << " precision=" << r.derived.working_precision
      << " seed=" << r.config.seed << " check=" << r.config.check << "\n";
  out << "derived: transform window [" << -r.config.depth
      << ",0) -> scaled window [" << r.derived.n_level << ","
      << r.derived.m_level << "); threshold val_lambda >= "
      << r.derived.threshold << "\n";
  if (r.bump)
    out << "construct: charpoly " << poly_text(r.config.poly, r.config.n)
        << " irreducible mod " << r.config.p << "; bump support "
        << r.bump->function.support_size() << " coset(s) "
        << verdict(r.bump->certificate.irreducible) << "\n";
  if (r.fourier) {
    out << "fourier: support " << r.fourier->support_size() << " point(s)";
    if (r.ft_involution_checked)
      out << "; double transform = reflection " << verdict(r.ft_involution_pass);
    out << "\n";
  }
  if (r.lie) {
    for (const auto& row : r.lie->per_parabolic)
      out << "matrix-space vanishing: parabolic "
          << composition_text(row.composition) << ": " << row.window_points
          << " window + " << row.outside_points << " outside point(s), "
          << row.violations << " violation(s) "
          << verdict(row.violations == 0) << "\n";
  }
  if (r.scaled && r.lift)
    out << "scale+lift: window [" << r.derived.n_level << ","
        << r.derived.m_level << "), model " << model_name(r.lift->model())
        << ", " << r.lift->entries().size() << " entries\n";
  if (r.group) {
    for (const auto& row : r.group->per_parabolic)
      out << "group vanishing: parabolic "
          << composition_text(row.composition) << ": " << row.coset_points
          << " coset + " << row.outside_points << " outside point(s), "
          << row.violations << " violation(s), " << row.reduction_mismatches
          << " reduction mismatch(es) "
          << verdict(row.violations == 0 && row.reduction_mismatches == 0)
          << "\n";
  }
  for (const JacquetReport& jr : r.jacquet)
    out << "finite-level vanishing: parabolic "
        << composition_text(jr.composition) << ": k=" << jr.k << ", "
        << jr.points_checked << " point(s), " << jr.violations
        << " violation(s) " << verdict(jr.pass) << "\n";
  if (r.bch)
    out << "chart consistency: " << r.bch->pairs << " pair(s), "
        << r.bch->violations << " violation(s) " << verdict(r.bch->pass)
        << "\n";
  out << "overall: " << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

Json dump_functions_json(const PipelineResult& r) {
  Json j;
  j["schema_version"] = 1;
  j["bump"] = r.bump ? schwartz_to_json(r.bump->function) : Json(nullptr);
  j["fourier"] = r.fourier ? schwartz_to_json(*r.fourier) : Json(nullptr);
  j["scaled"] = r.scaled ? schwartz_to_json(*r.scaled) : Json(nullptr);
  j["lift"] = r.lift ? group_function_to_json(*r.lift) : Json(nullptr);
  return j;
}

}  // namespace cuspforms
