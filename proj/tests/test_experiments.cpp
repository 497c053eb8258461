#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "satlab/experiments.hpp"
#include "satlab/stats.hpp"
#include "satlab/tiny_universe.hpp"

using namespace satlab;
using Catch::Matchers::WithinAbs;

TEST_CASE("run_curve samples the interior grid and finds the interior local maximum") {
  const RateCurve minus = run_curve(ModelPoint::from_eps(6, -std::exp2(-6)), 512);
  REQUIRE(minus.points.size() == 512);
  double prev = 0.0;
  bool first = true;
  double sup = -1e300, sup_x = 0.0;
  for (const auto& p : minus.points) {
    REQUIRE(p.x > 0.0);
    REQUIRE(p.x < 1.0);
    REQUIRE(std::isfinite(p.f_star));
    if (!first) REQUIRE(p.x > prev);
    prev = p.x;
    first = false;
    if (p.x >= 0.3 && p.x <= 0.6 && p.f_star > sup) {
      sup = p.f_star;
      sup_x = p.x;
    }
  }
  // true window sup is +0.0089575 at x = 0.44425 (the maximum sits left of
  // 1/2 by a few multiples of 2^-k); a 512-point grid lands within 5e-5
  REQUIRE_THAT(sup, WithinAbs(0.0089574969398550675, 5e-5));
  REQUIRE_THAT(sup_x, WithinAbs(0.44424944042223785, 3e-3));

  const RateCurve plus = run_curve(ModelPoint::from_eps(6, std::exp2(-6)), 512);
  double sup_p = -1e300;
  for (const auto& p : plus.points)
    if (p.x >= 0.3 && p.x <= 0.6) sup_p = std::max(sup_p, p.f_star);
  REQUIRE_THAT(sup_p, WithinAbs(-0.012552145823019477, 5e-5));
}

TEST_CASE("curve csv and json round-trip bit-exactly") {
  const RateCurve curve = run_curve(ModelPoint::from_eps(6, -std::exp2(-6)), 100);
  std::ostringstream os;
  write_curve_csv(curve, os);
  std::istringstream is(os.str());
  const RateCurve back = read_curve_csv(is, curve.model);
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    REQUIRE(back.points[i].x == curve.points[i].x);
    REQUIRE(back.points[i].f_star == curve.points[i].f_star);
  }

  const json j = curve_json(curve);
  REQUIRE(j.at("schema") == "satlab.curve.v1");
  const RateCurve jback = curve_from_json(json::parse(j.dump()));
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    REQUIRE(jback.points[i].x == curve.points[i].x);
    REQUIRE(jback.points[i].f_star == curve.points[i].f_star);
  }

  std::istringstream bad("nope\n1,2\n");
  REQUIRE_THROWS_AS(read_curve_csv(bad, curve.model), ParseError);
}

TEST_CASE("run_thresholds at k = 6") {
  const ThresholdReport rep = run_thresholds(6);
  REQUIRE_THAT(rep.eps1, WithinAbs(-0.0026158536871662363, 1e-5));
  REQUIRE_THAT(rep.eps2, WithinAbs(-0.014318499257205985, 1e-5));
  REQUIRE(rep.gap > 0.005);
  REQUIRE(rep.assumption.passed);
  // x = 0.5 slice anchors (lower bounds for the window-sup roots)
  REQUIRE_THAT(rep.eps1_slice_x05, WithinAbs(-0.0078330055883756431, 1e-9));
  REQUIRE_THAT(rep.eps2_slice_x05, WithinAbs(-0.018457524405675940, 1e-6));
  REQUIRE(rep.eps1_slice_x05 < rep.eps1);
  REQUIRE(rep.eps2_slice_x05 < rep.eps2);

  const json j = json::parse(thresholds_json(rep).dump());
  REQUIRE(j.at("schema") == "satlab.thresholds.v1");
  REQUIRE(j.at("eps1").get<double>() == rep.eps1);
  REQUIRE(j.at("eps2").get<double>() == rep.eps2);
  REQUIRE(j.at("assumption").at("passed").get<bool>() == true);
  REQUIRE(j.at("assumption").at("margin").get<double>() == rep.assumption.margin);
}

TEST_CASE("run_mc_planted matches the exact formula and is reproducible") {
  const McPlantedRequest req{10, 3, 4.0, 3000, 20260101};
  const McPlantedReport rep = run_mc_planted(req);
  REQUIRE(rep.m == 40);
  REQUIRE(rep.flagged_count == 0);
  REQUIRE(rep.rows[0].empirical_mean == 1.0);  // d = 0: the planted itself
  REQUIRE(rep.rows[0].exact_mean == 1.0);
  REQUIRE(rep.rows[0].std_err == 0.0);

  // byte-for-byte reproducibility of the emitted CSV
  std::ostringstream a, b;
  write_mc_planted_csv(rep, a);
  write_mc_planted_csv(run_mc_planted(req), b);
  REQUIRE(a.str() == b.str());

  const json j = mc_planted_json(rep);
  REQUIRE(j.at("schema") == "satlab.mc_planted.v1");
  REQUIRE(j.at("flagged_count").get<int>() == 0);

  // serialized doubles survive a parse round trip exactly
  const json back = json::parse(j.dump());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    REQUIRE(back.at("rows")[i].at("empirical_mean").get<double>() ==
            rep.rows[i].empirical_mean);
    REQUIRE(back.at("rows")[i].at("exact_mean").get<double>() == rep.rows[i].exact_mean);
    REQUIRE(back.at("rows")[i].at("std_err").get<double>() == rep.rows[i].std_err);
  }
}

TEST_CASE("doubling trials roughly halves the standard error") {
  const McPlantedReport small = run_mc_planted({10, 3, 4.0, 1500, 7});
  const McPlantedReport big = run_mc_planted({10, 3, 4.0, 6000, 7});
  const auto& rs = small.rows[5];
  const auto& rb = big.rows[5];
  REQUIRE(rs.std_err > 0.0);
  const double ratio = rb.std_err / rs.std_err;  // expect ~1/2
  REQUIRE(ratio > 0.35);
  REQUIRE(ratio < 0.7);
}

TEST_CASE("run_mc_diameter mechanism") {
  const McDiameterRequest req{12, 3, 3.0, 60, 424242, 1'000'000, true};
  const McDiameterReport rep = run_mc_diameter(req);
  REQUIRE(rep.m == 36);
  std::uint64_t total = 0;
  for (std::size_t r = 0; r < rep.r_histogram.size(); ++r) total += rep.r_histogram[r];
  REQUIRE(total == 60);
  REQUIRE(rep.accepted.size() == 60);
  for (const Formula& f : rep.accepted) REQUIRE(is_satisfiable(f));
  // density 3.0 sits well below the k=3 threshold: acceptance close to 1
  REQUIRE(rep.acceptance_rate > 0.7);
  REQUIRE(rep.mean_solutions >= 1.0);

  const json j = mc_diameter_json(rep);
  REQUIRE(j.at("schema") == "satlab.mc_diameter.v1");
  const json back = json::parse(j.dump());
  REQUIRE(back.at("acceptance_rate").get<double>() == rep.acceptance_rate);
  REQUIRE(back.at("mean_solutions").get<double>() == rep.mean_solutions);
  for (std::size_t r = 0; r < rep.r_histogram.size(); ++r)
    REQUIRE(back.at("histogram")[r].at("count").get<std::uint64_t>() == rep.r_histogram[r]);
  std::ostringstream os;
  write_mc_diameter_csv(rep, os);
  REQUIRE(os.str().starts_with("r,r_over_n,count\n"));
}

TEST_CASE("uniform-satisfiable sampling matches the tiny-universe law (chi-square)") {
  // n=4, k=3, m=2: the tiny universe says all 1024 ordered formulas are
  // satisfiable, so the conditioned law is uniform over them
  const TinyUniverseReport tiny = verify_identity(4, 3, 2);
  REQUIRE(tiny.satisfiable_count == 1024);

  const SamplerConfig cfg{4, 3, 2, true};
  const int trials = 100'000;
  std::vector<std::int64_t> counts(1024, 0);
  RngStream rng(31337, 0);
  for (int t = 0; t < trials; ++t) {
    const SatisfiableSample s = sample_uniform_satisfiable(cfg, rng);
    const auto i0 = static_cast<std::uint64_t>(encode_clause(s.formula.clauses()[0], 4));
    const auto i1 = static_cast<std::uint64_t>(encode_clause(s.formula.clauses()[1], 4));
    ++counts[static_cast<std::size_t>(i0 * 32 + i1)];
  }
  const double expected = static_cast<double>(trials) / 1024.0;
  double stat = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double p = chi_square_sf(stat, 1023);
  REQUIRE(p > 0.001);
  REQUIRE(p < 0.9999);
}
