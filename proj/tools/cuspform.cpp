// Command-line driver: constructs a cuspidal function from an elliptic bump
// and verifies every vanishing condition as an exact zero.  Exit codes:
//   0  all requested checks passed
//   1  a verification failed (report still printed)
//   2  invalid usage or rejected configuration
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuspforms/pipeline.hpp"

namespace {

std::vector<std::int64_t> parse_poly(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (cur.empty())
        throw cuspforms::ValidationError("empty polynomial coefficient");
      std::size_t pos = 0;
      out.push_back(std::stoll(cur, &pos));
      if (pos != cur.size())
        throw cuspforms::ValidationError("bad polynomial coefficient: " + cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cuspform: exact construction and verification of cuspidal functions "
      "on p-adic matrix groups"};

  std::string config_path;
  std::int64_t p = 0;
  int n = 0;
  std::string model_text;
  std::string poly_text;
  int depth = 0;
  int val_lambda = 0;
  int precision = -1;
  std::uint64_t seed = 0;
  std::string check_text;
  int outside_samples = -1;
  int bch_pairs = -1;
  std::string dump_path;
  std::string report_format = "json";

  app.add_option("--config", config_path,
                 "JSON config file (same keys as the flags; flags override)");
  auto* opt_p = app.add_option("--p", p, "residue characteristic (prime)");
  auto* opt_n = app.add_option("--n", n, "matrix rank");
  auto* opt_model = app.add_option(
      "--model", model_text, "chart model: exp or id-plus-x");
  auto* opt_poly = app.add_option(
      "--poly", poly_text,
      "torus polynomial, comma-separated ascending non-leading coefficients "
      "(monic degree n; default: first irreducible in base-p order)");
  auto* opt_depth =
      app.add_option("--depth", depth, "bump invariance exponent (>= 1)");
  auto* opt_vl = app.add_option("--val-lambda", val_lambda,
                                "valuation of the scaling element");
  auto* opt_prec = app.add_option(
      "--precision", precision,
      "working absolute precision (0 or omitted: minimal sound value)");
  auto* opt_seed = app.add_option("--seed", seed, "sampling seed");
  auto* opt_check = app.add_option(
      "--check", check_text, "which checks to run: ft, lie, bch, group, all");
  auto* opt_outside = app.add_option("--outside-samples", outside_samples,
                                     "points sampled outside each domain");
  auto* opt_bch =
      app.add_option("--bch-pairs", bch_pairs, "chart-consistency sample pairs");
  auto* opt_dump = app.add_option("--dump-functions", dump_path,
                                  "write stage functions as JSON to this path");
  app.add_option("--report", report_format, "report format: json or text")
      ->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0; usage errors exit 2
  }

  try {
    cuspforms::PipelineConfig cfg;
    if (!config_path.empty())
      cfg = cuspforms::config_from_json(cuspforms::load_json(config_path),
                                        cfg);
    if (opt_p->count()) cfg.p = p;
    if (opt_n->count()) cfg.n = n;
    if (opt_model->count()) cfg.model = cuspforms::model_from_name(model_text);
    if (opt_poly->count()) cfg.poly = parse_poly(poly_text);
    if (opt_depth->count()) cfg.depth = depth;
    if (opt_vl->count()) cfg.val_lambda = val_lambda;
    if (opt_prec->count()) cfg.precision = precision;
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_check->count()) cfg.check = check_text;
    if (opt_outside->count()) cfg.outside_samples = outside_samples;
    if (opt_bch->count()) cfg.bch_pairs = bch_pairs;
    if (opt_dump->count()) cfg.dump_path = dump_path;

    cuspforms::PipelineResult result = cuspforms::run_pipeline(cfg);
    if (report_format == "json")
      std::cout << cuspforms::report_json(result).dump(2) << "\n";
    else
      std::cout << cuspforms::report_text(result);
    return result.pass ? 0 : 1;
  } catch (const cuspforms::ValidationError& e) {
    std::cerr << "cuspform: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const cuspforms::DomainViolation& e) {
    std::cerr << "cuspform: rejected input: " << e.what() << "\n";
    return 2;
  } catch (const cuspforms::Error& e) {
    std::cerr << "cuspform: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cuspform: error: " << e.what() << "\n";
    return 2;
  }
}
