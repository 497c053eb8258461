#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "satlab/analytic.hpp"
#include "satlab/enumeration.hpp"
#include "satlab/errors.hpp"
#include "satlab/samplers.hpp"
#include "satlab/stats.hpp"

namespace satlab {

using nlohmann::json;

namespace detail {

// Shortest text that round-trips the double exactly.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("expected a real number, got '" + std::string(s) + "'");
  return v;
}

inline json certificate_json(const Certificate& c) {
  return json{{"name", c.name},
              {"passed", c.passed},
              {"worst_x", c.worst_x},
              {"margin", c.margin},
              {"grid_size", c.grid_size}};
}

}  // namespace detail

// ---------------------------------------------------------------- rate curve

/// Samples f*(x) on a grid of interior points x_i = (i+1)/(grid+1).
inline RateCurve run_curve(const ModelPoint& model, int grid = 512) {
  if (grid < 1) throw PreconditionError("run_curve: need grid >= 1");
  RateCurve curve{model, {}};
  curve.points.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i + 1) / (grid + 1);
    curve.points.push_back({x, f_star_rate(x, model)});
  }
  return curve;
}

inline void write_curve_csv(const RateCurve& curve, std::ostream& os) {
  os << "x,f_star\n";
  for (const auto& p : curve.points)
    os << detail::fmt_double(p.x) << "," << detail::fmt_double(p.f_star) << "\n";
}

/// Parses the exact format write_curve_csv emits; values round-trip bit-exactly.
inline RateCurve read_curve_csv(std::istream& is, const ModelPoint& model) {
  std::string line;
  if (!std::getline(is, line) || line != "x,f_star")
    throw ParseError("curve csv: missing 'x,f_star' header");
  RateCurve curve{model, {}};
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("curve csv: malformed row");
    curve.points.push_back({detail::parse_double(std::string_view(line).substr(0, comma)),
                            detail::parse_double(std::string_view(line).substr(comma + 1))});
  }
  return curve;
}

inline json curve_json(const RateCurve& curve) {
  json pts = json::array();
  for (const auto& p : curve.points) pts.push_back(json{{"x", p.x}, {"f_star", p.f_star}});
  return json{{"schema", "satlab.curve.v1"},
              {"k", curve.model.k},
              {"eps", curve.model.eps},
              {"c", curve.model.c},
              {"points", pts}};
}

inline RateCurve curve_from_json(const json& j) {
  RateCurve curve{ModelPoint::from_density(j.at("k").get<int>(), j.at("c").get<double>()), {}};
  for (const auto& p : j.at("points"))
    curve.points.push_back({p.at("x").get<double>(), p.at("f_star").get<double>()});
  return curve;
}

// ---------------------------------------------------------------- thresholds

/// eps1/eps2 threshold window plus the negativity check at eps2. The x = 0.5
/// slice crossings are reported alongside as diagnostic anchors (closed form
/// for eps1; they lower-bound the window-sup roots).
struct ThresholdReport {
  int k = 0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double gap = 0.0;
  Certificate assumption;
  double eps1_slice_x05 = 0.0;
  double eps2_slice_x05 = 0.0;
};

inline ThresholdReport run_thresholds(int k, double tol = 1e-9) {
  ThresholdReport rep;
  rep.k = k;
  rep.eps1 = find_eps1(k, tol);
  rep.eps2 = find_eps2(k, tol);
  rep.gap = rep.eps1 - rep.eps2;
  rep.assumption = check_assumption_neg(k, rep.eps2, 10000);
  const double pk = std::exp2(k);
  rep.eps1_slice_x05 = 1.0 / (pk * -std::log1p(-(1.0 - std::exp2(-k)) / (pk - 1.0))) - 1.0;
  rep.eps2_slice_x05 = detail::bisect_decreasing(
      [&](double eps) { return f_max_rate(0.5, ModelPoint::from_eps(k, eps)); }, -0.9, 2.0, tol,
      "eps2 slice");
  return rep;
}

inline json thresholds_json(const ThresholdReport& r) {
  return json{{"schema", "satlab.thresholds.v1"},
              {"k", r.k},
              {"eps1", r.eps1},
              {"eps2", r.eps2},
              {"gap", r.gap},
              {"assumption", detail::certificate_json(r.assumption)},
              {"eps1_slice_x05", r.eps1_slice_x05},
              {"eps2_slice_x05", r.eps2_slice_x05}};
}

// --------------------------------------------------------- planted MC trials

struct McPlantedRequest {
  int n = 0;
  int k = 0;
  double c = 0.0;          // density; m = round(c * n)
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct McPlantedRow {
  int d = 0;
  double empirical_mean = 0.0;
  double exact_mean = 0.0;
  double std_err = 0.0;
  bool flagged = false;  // |empirical - exact| > 3 * std_err
};

struct McPlantedReport {
  McPlantedRequest request;
  std::int64_t m = 0;
  std::vector<McPlantedRow> rows;
  int flagged_count = 0;
};

/// Samples planted instances, averages the empirical distance profile f_d,
/// and compares each d against the exact finite-n expectation. Trial t runs
/// on RNG stream t, so results do not depend on execution order.
inline McPlantedReport run_mc_planted(const McPlantedRequest& req) {
  if (req.trials <= 0) throw PreconditionError("run_mc_planted: trials must be positive");
  McPlantedReport rep;
  rep.request = req;
  rep.m = std::llround(req.c * req.n);
  const SamplerConfig cfg{req.n, req.k, rep.m, true};
  cfg.validate();
  std::vector<RunningStat> stats(static_cast<std::size_t>(req.n) + 1);
  for (std::int64_t t = 0; t < req.trials; ++t) {
    RngStream rng(req.seed, static_cast<std::uint64_t>(t));
    const PlantedInstance inst = sample_planted(cfg, rng);
    const DistanceProfile prof = distance_profile(inst.formula, inst.planted);
    for (int d = 0; d <= req.n; ++d)
      stats[static_cast<std::size_t>(d)].add(
          static_cast<double>(prof.counts[static_cast<std::size_t>(d)]));
  }
  for (int d = 0; d <= req.n; ++d) {
    const auto& st = stats[static_cast<std::size_t>(d)];
    McPlantedRow row;
    row.d = d;
    row.empirical_mean = st.mean();
    row.exact_mean = std::exp(expected_f_log(d, req.n, req.k, rep.m));
    row.std_err = st.std_error();
    const double dev = std::fabs(row.empirical_mean - row.exact_mean);
    row.flagged = row.std_err > 0.0 ? dev > 3.0 * row.std_err : dev != 0.0;
    if (row.flagged) ++rep.flagged_count;
    rep.rows.push_back(row);
  }
  return rep;
}

inline void write_mc_planted_csv(const McPlantedReport& rep, std::ostream& os) {
  os << "d,empirical_mean,exact_mean,std_err,flagged\n";
  for (const auto& r : rep.rows)
    os << r.d << "," << detail::fmt_double(r.empirical_mean) << ","
       << detail::fmt_double(r.exact_mean) << "," << detail::fmt_double(r.std_err) << ","
       << (r.flagged ? 1 : 0) << "\n";
}

inline json mc_planted_json(const McPlantedReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back(json{{"d", r.d},
                        {"empirical_mean", r.empirical_mean},
                        {"exact_mean", r.exact_mean},
                        {"std_err", r.std_err},
                        {"flagged", r.flagged}});
  return json{{"schema", "satlab.mc_planted.v1"},
              {"n", rep.request.n},
              {"k", rep.request.k},
              {"c", rep.request.c},
              {"m", rep.m},
              {"trials", rep.request.trials},
              {"seed", rep.request.seed},
              {"flagged_count", rep.flagged_count},
              {"rows", rows}};
}

// -------------------------------------------------------- diameter MC trials

struct McDiameterRequest {
  int n = 0;
  int k = 0;
  double c = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_tries = 1'000'000;
  bool keep_formulas = false;  // retain accepted formulas for auditing
};

struct McDiameterReport {
  McDiameterRequest request;
  std::int64_t m = 0;
  std::vector<std::uint64_t> r_histogram;  // index r in [0, n]: count of r_max = r
  std::uint64_t total_draws = 0;
  double acceptance_rate = 0.0;
  double mean_solutions = 0.0;
  std::vector<Formula> accepted;  // only when keep_formulas
};

/// Draws uniform-satisfiable formulas by rejection and histograms r_max.
/// ExhaustedError propagates when a trial uses up max_tries.
inline McDiameterReport run_mc_diameter(const McDiameterRequest& req) {
  if (req.trials <= 0) throw PreconditionError("run_mc_diameter: trials must be positive");
  McDiameterReport rep;
  rep.request = req;
  rep.m = std::llround(req.c * req.n);
  const SamplerConfig cfg{req.n, req.k, rep.m, true};
  cfg.validate();
  rep.r_histogram.assign(static_cast<std::size_t>(req.n) + 1, 0);
  double sol_sum = 0.0;
  for (std::int64_t t = 0; t < req.trials; ++t) {
    RngStream rng(req.seed, static_cast<std::uint64_t>(t));
    SatisfiableSample sample = sample_uniform_satisfiable(cfg, rng, req.max_tries);
    rep.total_draws += sample.tries;
    const auto sols = detail::solution_masks(sample.formula, {});
    int r = 0;
    for (std::size_t i = 0; i < sols.size(); ++i)
      for (std::size_t j = i + 1; j < sols.size(); ++j)
        r = std::max(r, std::popcount(sols[i] ^ sols[j]));
    ++rep.r_histogram[static_cast<std::size_t>(r)];
    sol_sum += static_cast<double>(sols.size());
    if (req.keep_formulas) rep.accepted.push_back(std::move(sample.formula));
  }
  rep.acceptance_rate = static_cast<double>(req.trials) / static_cast<double>(rep.total_draws);
  rep.mean_solutions = sol_sum / static_cast<double>(req.trials);
  return rep;
}

inline void write_mc_diameter_csv(const McDiameterReport& rep, std::ostream& os) {
  os << "r,r_over_n,count\n";
  for (std::size_t r = 0; r < rep.r_histogram.size(); ++r)
    os << r << "," << detail::fmt_double(static_cast<double>(r) / rep.request.n) << ","
       << rep.r_histogram[r] << "\n";
}

inline json mc_diameter_json(const McDiameterReport& rep) {
  json hist = json::array();
  for (std::size_t r = 0; r < rep.r_histogram.size(); ++r)
    hist.push_back(json{{"r", r},
                        {"r_over_n", static_cast<double>(r) / rep.request.n},
                        {"count", rep.r_histogram[r]}});
  return json{{"schema", "satlab.mc_diameter.v1"},
              {"n", rep.request.n},
              {"k", rep.request.k},
              {"c", rep.request.c},
              {"m", rep.m},
              {"trials", rep.request.trials},
              {"seed", rep.request.seed},
              {"max_tries", rep.request.max_tries},
              {"total_draws", rep.total_draws},
              {"acceptance_rate", rep.acceptance_rate},
              {"mean_solutions", rep.mean_solutions},
              {"histogram", hist}};
}

}  // namespace satlab
