// Command-line harness: curve emission, threshold reports, certificates,
// Monte-Carlo drivers, DIMACS generation, and the exact tiny-universe
// verifier. Exit code 0 on success/pass, 1 on certificate failure, 2 on any
// error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "satlab/satlab.hpp"

namespace {

using namespace satlab;

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(out);
  if (!os) throw ParseError("cannot open output file " + out);
  os << text;
}

ModelPoint model_from(int k, std::optional<double> eps, std::optional<double> c) {
  if (eps.has_value() == c.has_value())
    throw PreconditionError("exactly one of --eps / --c must be given");
  return eps ? ModelPoint::from_eps(k, *eps) : ModelPoint::from_density(k, *c);
}

std::string rat_str(const BigRat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

json tiny_report_json(const TinyUniverseReport& rep) {
  json u = json::array(), f = json::array(), hist = json::object();
  for (const auto& x : rep.u_expected) u.push_back(rat_str(x));
  for (const auto& x : rep.f_expected) f.push_back(rat_str(x));
  for (const auto& [i, t] : rep.t_histogram) hist[std::to_string(i)] = t.str();
  return json{{"schema", "satlab.verify_identity.v1"},
              {"n", rep.n},
              {"k", rep.k},
              {"m", rep.m},
              {"T", rat_str(rep.T)},
              {"W", rat_str(rep.W)},
              {"T_from_hist", rat_str(rep.T_from_hist)},
              {"W_from_hist", rat_str(rep.W_from_hist)},
              {"u_expected", u},
              {"f_expected", f},
              {"t_histogram", hist},
              {"identity_holds", rep.identity_holds},
              {"T_le_W", rep.t_le_w},
              {"formula_count", rep.formula_count.str()},
              {"satisfiable_count", rep.satisfiable_count.str()}};
}

struct CommonFlags {
  int k = 0;
  std::optional<double> eps;
  std::optional<double> c;
  int n = 0;
  std::int64_t m = -1;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  int grid = 0;
  std::uint64_t max_tries = 1'000'000;
  std::string out;
  std::string format = "csv";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satlab: solution-space geometry of random k-CNF formulas"};
  app.require_subcommand(1);
  int exit_code = 0;
  CommonFlags fl;

  // ------------------------------------------------------------------ curve
  auto* curve = app.add_subcommand("curve", "emit the rate curve f*(x)");
  curve->add_option("--k", fl.k, "clause width")->required();
  curve->add_option("--eps", fl.eps, "density offset (c = (1+eps) 2^k ln 2)");
  curve->add_option("--c", fl.c, "density m/n");
  curve->add_option("--grid", fl.grid, "number of interior grid points")->default_val(512);
  curve->add_option("--out", fl.out, "output path (default stdout)");
  curve->add_option("--format", fl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");
  curve->callback([&] {
    const RateCurve rc = run_curve(model_from(fl.k, fl.eps, fl.c), fl.grid);
    if (fl.format == "json") {
      emit(fl.out, curve_json(rc).dump(1) + "\n");
    } else {
      std::ostringstream os;
      write_curve_csv(rc, os);
      emit(fl.out, os.str());
    }
  });

  // ------------------------------------------------------------- thresholds
  double tol = 1e-9;
  auto* thresholds = app.add_subcommand("thresholds", "eps1/eps2 window for one k");
  thresholds->add_option("--k", fl.k, "clause width")->required();
  thresholds->add_option("--tol", tol, "bisection tolerance")->default_val(1e-9);
  thresholds->add_option("--out", fl.out, "output path (default stdout)");
  thresholds->add_option("--format", fl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("json");
  thresholds->callback([&] {
    const ThresholdReport rep = run_thresholds(fl.k, tol);
    if (fl.format == "json") {
      emit(fl.out, thresholds_json(rep).dump(1) + "\n");
    } else {
      std::ostringstream os;
      os << "key,value\n";
      os << "k," << rep.k << "\n";
      os << "eps1," << detail::fmt_double(rep.eps1) << "\n";
      os << "eps2," << detail::fmt_double(rep.eps2) << "\n";
      os << "gap," << detail::fmt_double(rep.gap) << "\n";
      os << "assumption_passed," << (rep.assumption.passed ? 1 : 0) << "\n";
      os << "eps1_slice_x05," << detail::fmt_double(rep.eps1_slice_x05) << "\n";
      os << "eps2_slice_x05," << detail::fmt_double(rep.eps2_slice_x05) << "\n";
      emit(fl.out, os.str());
    }
    if (!rep.assumption.passed) exit_code = 1;
  });

  // ---------------------------------------------------------------- certify
  std::string claim;
  double y_min = 0.2;
  int lambda_count = 1000;
  auto* certify = app.add_subcommand("certify", "grid-check one analytic claim");
  certify->add_option("claim", claim, "prop32 | prop33 | theorem | diameter | assumption")
      ->required()
      ->check(CLI::IsMember({"prop32", "prop33", "theorem", "diameter", "assumption"}));
  certify->add_option("--k", fl.k, "clause width")->required();
  certify->add_option("--eps", fl.eps, "density offset");
  certify->add_option("--c", fl.c, "density m/n");
  certify->add_option("--grid", fl.grid, "grid size")->default_val(10000);
  certify->add_option("--lambda-count", lambda_count, "lambda grid size (prop33)")
      ->default_val(1000);
  certify->add_option("--y-min", y_min, "left endpoint of the diameter window")->default_val(0.2);
  certify->add_option("--out", fl.out, "output path (default stdout)");
  certify->add_option("--format", fl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("json");
  certify->callback([&] {
    json extra = json::object();
    Certificate cert;
    if (claim == "prop32") {
      if (!fl.eps) throw PreconditionError("certify prop32: --eps required");
      cert = certify_prop32(fl.k, *fl.eps, fl.grid);
    } else if (claim == "prop33") {
      if (!fl.eps) throw PreconditionError("certify prop33: --eps required");
      const auto lambdas = lambda_log_grid(fl.k, lambda_count);
      cert = certify_prop33(fl.k, *fl.eps, lambdas);
    } else if (claim == "theorem") {
      if (!fl.eps) throw PreconditionError("certify theorem: --eps required");
      const TheoremReport rep = certify_theorem(fl.k, *fl.eps);
      cert = rep.certificate;
      extra["prop32"] = detail::certificate_json(rep.prop32);
      extra["prop33"] = detail::certificate_json(rep.prop33);
      extra["combined_exponent"] = rep.combined_exponent;
      extra["exponent_bound"] = rep.exponent_bound;
    } else if (claim == "diameter") {
      const ModelPoint model = model_from(fl.k, fl.eps, fl.c);
      cert = diameter_exponent_certificate(fl.k, model.c, y_min, fl.grid);
      extra["w_rate"] = w_rate(model, fl.grid).numeric_rate;
      extra["y_min"] = y_min;
    } else {
      if (!fl.eps) throw PreconditionError("certify assumption: --eps required");
      cert = check_assumption_neg(fl.k, *fl.eps, fl.grid);
    }
    json j = detail::certificate_json(cert);
    j["schema"] = "satlab.certificate.v1";
    j["claim"] = claim;
    j["k"] = fl.k;
    if (fl.eps) j["eps"] = *fl.eps;
    if (fl.c) j["c"] = *fl.c;
    for (auto& [key, val] : extra.items()) j[key] = val;
    if (fl.format == "json") {
      emit(fl.out, j.dump(1) + "\n");
    } else {
      std::ostringstream os;
      os << "claim,passed,margin,worst_x,grid_size\n"
         << claim << "," << (cert.passed ? 1 : 0) << "," << detail::fmt_double(cert.margin)
         << "," << detail::fmt_double(cert.worst_x) << "," << cert.grid_size << "\n";
      emit(fl.out, os.str());
    }
    std::cerr << (cert.passed ? "PASS" : "FAIL") << " " << claim
              << " margin=" << detail::fmt_double(cert.margin) << "\n";
    if (!cert.passed) exit_code = 1;
  });

  // ------------------------------------------------------------- mc-planted
  auto* mcp = app.add_subcommand("mc-planted", "Monte-Carlo check of the exact E[f_d] formula");
  mcp->add_option("--n", fl.n, "variable count")->required();
  mcp->add_option("--k", fl.k, "clause width")->required();
  mcp->add_option("--eps", fl.eps, "density offset");
  mcp->add_option("--c", fl.c, "density m/n");
  mcp->add_option("--trials", fl.trials, "number of instances")->required();
  mcp->add_option("--seed", fl.seed, "RNG seed")->required();
  mcp->add_option("--out", fl.out, "output path (default stdout)");
  mcp->add_option("--format", fl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");
  mcp->callback([&] {
    const ModelPoint model = model_from(fl.k, fl.eps, fl.c);
    const McPlantedReport rep = run_mc_planted({fl.n, fl.k, model.c, fl.trials, fl.seed});
    if (fl.format == "json") {
      emit(fl.out, mc_planted_json(rep).dump(1) + "\n");
    } else {
      std::ostringstream os;
      write_mc_planted_csv(rep, os);
      emit(fl.out, os.str());
    }
    std::cerr << (rep.flagged_count == 0 ? "PASS" : "FAIL") << " mc-planted flagged="
              << rep.flagged_count << "\n";
    if (rep.flagged_count != 0) exit_code = 1;
  });

  // ------------------------------------------------------------ mc-diameter
  auto* mcd = app.add_subcommand("mc-diameter", "r_max/n histogram over uniform-satisfiable draws");
  mcd->add_option("--n", fl.n, "variable count")->required();
  mcd->add_option("--k", fl.k, "clause width")->required();
  mcd->add_option("--eps", fl.eps, "density offset");
  mcd->add_option("--c", fl.c, "density m/n");
  mcd->add_option("--trials", fl.trials, "number of accepted formulas")->required();
  mcd->add_option("--seed", fl.seed, "RNG seed")->required();
  mcd->add_option("--max-tries", fl.max_tries, "rejection budget per trial")
      ->default_val(1'000'000);
  mcd->add_option("--out", fl.out, "output path (default stdout)");
  mcd->add_option("--format", fl.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");
  mcd->callback([&] {
    const ModelPoint model = model_from(fl.k, fl.eps, fl.c);
    const McDiameterReport rep =
        run_mc_diameter({fl.n, fl.k, model.c, fl.trials, fl.seed, fl.max_tries, false});
    if (fl.format == "json") {
      emit(fl.out, mc_diameter_json(rep).dump(1) + "\n");
    } else {
      std::ostringstream os;
      write_mc_diameter_csv(rep, os);
      emit(fl.out, os.str());
    }
    std::cerr << "acceptance_rate=" << detail::fmt_double(rep.acceptance_rate)
              << " mean_solutions=" << detail::fmt_double(rep.mean_solutions) << "\n";
  });

  // -------------------------------------------------------------------- gen
  std::string dist = "uniform";
  int doubly_d = -1;
  bool no_repetition = false;
  auto* gen = app.add_subcommand("gen", "sample a formula and write DIMACS");
  gen->add_option("--n", fl.n, "variable count")->required();
  gen->add_option("--k", fl.k, "clause width")->required();
  gen->add_option("--m", fl.m, "clause count");
  gen->add_option("--c", fl.c, "density m/n (alternative to --m)");
  gen->add_option("--seed", fl.seed, "RNG seed")->required();
  gen->add_option("--dist", dist, "uniform | planted | doubly | satisfiable")
      ->check(CLI::IsMember({"uniform", "planted", "doubly", "satisfiable"}))
      ->default_val("uniform");
  gen->add_option("--d", doubly_d, "Hamming distance between the two planted assignments");
  gen->add_flag("--no-repetition", no_repetition, "draw distinct clauses");
  gen->add_option("--max-tries", fl.max_tries, "rejection budget (satisfiable)")
      ->default_val(1'000'000);
  gen->add_option("--out", fl.out, "output path (default stdout)");
  gen->callback([&] {
    if ((fl.m < 0) == !fl.c)
      throw PreconditionError("gen: exactly one of --m / --c must be given");
    const std::int64_t m = fl.m >= 0 ? fl.m : std::llround(*fl.c * fl.n);
    const SamplerConfig cfg{fl.n, fl.k, m, !no_repetition};
    RngStream rng(fl.seed, 0);
    std::ostringstream os;
    if (dist == "uniform") {
      write_dimacs(sample_uniform_formula(cfg, rng), os);
    } else if (dist == "planted") {
      write_dimacs(sample_planted(cfg, rng), os);
    } else if (dist == "doubly") {
      if (doubly_d < 0 || doubly_d > fl.n)
        throw PreconditionError("gen --dist doubly: need --d in [0, n]");
      const Assignment phi = random_assignment(fl.n, rng);
      Assignment psi = phi;
      for (int i = 0; i < doubly_d; ++i) psi.flip(i);  // any d-flip set; phi is uniform
      write_dimacs(sample_doubly_planted(cfg, phi, psi, rng), os, phi);
    } else {
      write_dimacs(sample_uniform_satisfiable(cfg, rng, fl.max_tries).formula, os);
    }
    emit(fl.out, os.str());
  });

  // -------------------------------------------------------- verify-identity
  auto* verify = app.add_subcommand("verify-identity", "exact tiny-universe check of the "
                                                       "transfer identity and T <= W");
  verify->add_option("--n", fl.n, "variable count")->required();
  verify->add_option("--k", fl.k, "clause width")->required();
  verify->add_option("--m", fl.m, "clause count")->required();
  verify->add_option("--out", fl.out, "output path (default stdout)");
  verify->callback([&] {
    const TinyUniverseReport rep = verify_identity(fl.n, fl.k, fl.m);
    emit(fl.out, tiny_report_json(rep).dump(1) + "\n");
    std::cerr << (rep.identity_holds && rep.t_le_w ? "PASS" : "FAIL") << " T=" << rep.T
              << " W=" << rep.W << "\n";
    if (!(rep.identity_holds && rep.t_le_w)) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
