#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "satlab/enumeration.hpp"
#include "satlab/rng.hpp"
#include "satlab/samplers.hpp"

using namespace satlab;

namespace {

Clause make_clause(std::initializer_list<int> signed_vars) {
  std::vector<Literal> lits;
  for (int v : signed_vars) lits.push_back({std::abs(v) - 1, v > 0});
  return Clause(std::move(lits));
}

Formula make_formula(int n, int k, std::initializer_list<std::initializer_list<int>> clauses) {
  Formula f(n, k);
  for (auto c : clauses) f.add_clause(make_clause(c));
  return f;
}

// Independent oracle: direct loop over all 2^n assignments.
std::set<std::uint64_t> brute_force_solutions(const Formula& f) {
  std::set<std::uint64_t> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << f.n()); ++a)
    if (evaluate(f, Assignment::from_word(f.n(), a))) out.insert(a);
  return out;
}

std::set<std::uint64_t> to_masks(const SolutionSet& s) {
  std::set<std::uint64_t> out;
  for (const Assignment& a : s.assignments) out.insert(a.low_word());
  return out;
}

Formula random_formula(int n, int k, int m, RngStream& rng) {
  return sample_uniform_formula({n, k, m, true}, rng);
}

}  // namespace

TEST_CASE("all_satisfying on the worked examples") {
  REQUIRE(all_satisfying(make_formula(3, 3, {{1, 2, 3}})).size() == 7);
  REQUIRE(all_satisfying(make_formula(3, 3, {{1, 2, 3}, {-1, -2, -3}})).size() == 6);

  Formula all_patterns(3, 3);
  for (int p = 0; p < 8; ++p)
    all_patterns.add_clause(Clause({{0, (p & 1) != 0}, {1, (p & 2) != 0}, {2, (p & 4) != 0}}));
  REQUIRE(all_satisfying(all_patterns).empty());
}

TEST_CASE("scan and backtracking agree with brute force") {
  RngStream rng(271828, 0);
  const double densities[] = {1.0, 3.0, 4.26, 6.0};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(9));  // 4..12
    const int k = 3 + static_cast<int>(rng.below(2));
    const int m = static_cast<int>(densities[trial % 4] * n);
    const Formula f = random_formula(n, k, m, rng);
    const auto expected = brute_force_solutions(f);

    EnumerateOptions scan;
    scan.strategy = EnumerateOptions::Strategy::Scan;
    EnumerateOptions backtrack;
    backtrack.strategy = EnumerateOptions::Strategy::Backtrack;
    REQUIRE(to_masks(all_satisfying(f, scan)) == expected);
    REQUIRE(to_masks(all_satisfying(f, backtrack)) == expected);
    REQUIRE(is_satisfiable(f) == !expected.empty());
  }
}

TEST_CASE("r_max") {
  REQUIRE(r_max(make_formula(3, 3, {{1, 2, 3}})) == 3);

  Formula pin(3, 3);  // unique solution 111
  for (int p = 0; p < 7; ++p)
    pin.add_clause(Clause({{0, (p & 1) != 0}, {1, (p & 2) != 0}, {2, (p & 4) != 0}}));
  REQUIRE(all_satisfying(pin).size() == 1);
  REQUIRE(r_max(pin) == 0);

  Formula unsat(3, 3);
  for (int p = 0; p < 8; ++p)
    unsat.add_clause(Clause({{0, (p & 1) != 0}, {1, (p & 2) != 0}, {2, (p & 4) != 0}}));
  REQUIRE_THROWS_AS(r_max(unsat), UnsatisfiableError);
}

TEST_CASE("distance_profile examples") {
  const Formula f = make_formula(3, 3, {{1, 2, 3}});
  const auto prof = distance_profile(f, Assignment::from_bits("111"));
  REQUIRE(prof.counts == std::vector<std::uint64_t>{1, 3, 3, 0});

  // a satisfying reference always contributes counts[0] = 1
  REQUIRE(distance_profile(f, Assignment::from_bits("100")).counts[0] == 1);

  const Formula empty(3, 3);
  REQUIRE(distance_profile(empty, Assignment::from_bits("010")).counts ==
          std::vector<std::uint64_t>{1, 3, 3, 1});
}

TEST_CASE("pair_profile examples") {
  const auto prof = pair_profile(make_formula(3, 3, {{1, 2, 3}}));
  REQUIRE(prof.counts == std::vector<std::uint64_t>{0, 9, 9, 3});
  REQUIRE(prof.total() == 21);  // C(7,2)

  Formula pin(3, 3);
  for (int p = 0; p < 7; ++p)
    pin.add_clause(Clause({{0, (p & 1) != 0}, {1, (p & 2) != 0}, {2, (p & 4) != 0}}));
  REQUIRE(pair_profile(pin).total() == 0);

  Formula unsat = pin;
  unsat.add_clause(make_clause({-1, -2, -3}));  // removes 111 as well
  REQUIRE(pair_profile(unsat).total() == 0);
}

TEST_CASE("profile sums, r_max consistency, monotone clause append") {
  RngStream rng(5050, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(6));
    const int m = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 * n)));
    Formula f = random_formula(n, 3, m, rng);
    const auto sols = all_satisfying(f);
    const Assignment ref = Assignment::from_word(n, rng.bits(n));
    REQUIRE(distance_profile(f, ref).total() == sols.size());

    const auto pairs = pair_profile(f);
    REQUIRE(pairs.total() == sols.size() * (sols.size() - 1) / 2);
    REQUIRE(pairs.counts[0] == 0);

    if (!sols.empty()) {
      int largest = 0;
      for (int d = 0; d <= n; ++d)
        if (pairs.counts[static_cast<std::size_t>(d)] > 0) largest = d;
      REQUIRE(r_max(f) == largest);

      // appending a clause can only shrink the solution set and r_max
      Formula g = f;
      g.add_clause(random_formula(n, 3, 1, rng).clauses()[0]);
      const auto sub = to_masks(all_satisfying(g));
      const auto super = to_masks(sols);
      for (auto mask : sub) REQUIRE(super.contains(mask));
      if (!sub.empty()) REQUIRE(r_max(g) <= r_max(f));
    }
  }
}

TEST_CASE("flip criterion matches direct re-evaluation") {
  RngStream rng(404, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(5));
    const Formula f = random_formula(n, 3, 3 * n, rng);
    const auto sols = all_satisfying(f);
    if (sols.empty()) continue;
    const Assignment& a = sols.assignments[rng.below(sols.size())];
    for (int i = 0; i < n; ++i) {
      Assignment flipped = a;
      flipped.flip(i);
      REQUIRE(flip_breaks_satisfaction(f, a, i) == !evaluate(f, flipped));
    }
  }
}

TEST_CASE("is_maximal on the worked instance") {
  const Formula f = make_formula(3, 3, {{1, 2, 3}});
  const PlantedInstance inst(f, Assignment::from_bits("111"));
  REQUIRE(is_maximal(inst, Assignment::from_bits("001")));
  REQUIRE(is_maximal(inst, Assignment::from_bits("100")));
  REQUIRE_FALSE(is_maximal(inst, Assignment::from_bits("111")));
  REQUIRE_THROWS_AS(is_maximal(inst, Assignment::from_bits("000")), PreconditionError);
}

TEST_CASE("complement of the planted assignment is vacuously maximal") {
  const Formula empty(4, 3);
  const Assignment planted = Assignment::from_bits("0110");
  const PlantedInstance inst(empty, planted);
  REQUIRE(is_maximal(inst, planted.complemented()));
  REQUIRE_FALSE(is_maximal(inst, planted));
}

TEST_CASE("maximalize greedy trace on the worked instance") {
  const Formula f = make_formula(3, 3, {{1, 2, 3}});
  const PlantedInstance inst(f, Assignment::from_bits("111"));
  const auto res = maximalize_with_trace(inst, Assignment::from_bits("111"));
  REQUIRE(res.flips == std::vector<int>{0, 1});
  REQUIRE(res.assignment == Assignment::from_bits("001"));
  REQUIRE(hamming(res.assignment, inst.planted) == 2);

  // already-maximal start is returned unchanged
  const auto res2 = maximalize_with_trace(inst, Assignment::from_bits("001"));
  REQUIRE(res2.flips.empty());
  REQUIRE(res2.assignment == Assignment::from_bits("001"));

  REQUIRE_THROWS_AS(maximalize(inst, Assignment::from_bits("000")), PreconditionError);
}

TEST_CASE("maximalize output is maximal and each flip raises the distance by one") {
  RngStream rng(909, 0);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(7));
    const int m = static_cast<int>((3.0 + static_cast<double>(rng.below(3))) * n);
    const PlantedInstance inst = sample_planted({n, 3, m, true}, rng);
    const auto res = maximalize_with_trace(inst, inst.planted);
    REQUIRE(is_maximal(inst, res.assignment));
    REQUIRE(hamming(res.assignment, inst.planted) == static_cast<int>(res.flips.size()));

    // replay: each flipped variable agreed with the planted assignment at
    // flip time and the intermediate assignments all satisfy
    Assignment cur = inst.planted;
    int dist = 0;
    for (int var : res.flips) {
      REQUIRE(cur.get(var) == inst.planted.get(var));
      cur.flip(var);
      ++dist;
      REQUIRE(evaluate(inst.formula, cur));
      REQUIRE(hamming(cur, inst.planted) == dist);
    }
    REQUIRE(cur == res.assignment);
  }
}

TEST_CASE("maximal_profile") {
  const Formula f = make_formula(3, 3, {{1, 2, 3}});
  const PlantedInstance inst(f, Assignment::from_bits("111"));
  REQUIRE(maximal_profile(inst).counts == std::vector<std::uint64_t>{0, 0, 3, 0});

  // empty formula: only the antipode is maximal
  const PlantedInstance empty(Formula(4, 3), Assignment::from_bits("1010"));
  REQUIRE(maximal_profile(empty).counts == std::vector<std::uint64_t>{0, 0, 0, 0, 1});

  RngStream rng(1234, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(5));
    const PlantedInstance rnd = sample_planted({n, 3, 4 * n, true}, rng);
    REQUIRE(maximal_profile(rnd).total() >= 1);  // satisfiable => some maximal
  }
}

TEST_CASE("strict maximality implies single-flip maximality but not conversely") {
  const Formula f = make_formula(3, 3, {{1, 2, 3}});
  const PlantedInstance inst(f, Assignment::from_bits("111"));
  // 001 is single-flip maximal, yet 010 disagrees with both 001 and 111 on
  // variable 3 and still satisfies: not strictly maximal
  REQUIRE(is_maximal(inst, Assignment::from_bits("001")));
  REQUIRE_FALSE(is_maximal_strict(inst, Assignment::from_bits("001")));

  RngStream rng(777, 0);
  int strict_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(5));
    const PlantedInstance rnd = sample_planted({n, 3, 4 * n, true}, rng);
    const auto sols = all_satisfying(rnd.formula);
    for (const Assignment& a : sols.assignments)
      if (is_maximal_strict(rnd, a)) {
        ++strict_seen;
        REQUIRE(is_maximal(rnd, a));
      }
  }
  REQUIRE(strict_seen > 0);
}

TEST_CASE("enumeration limits") {
  Formula wide(70, 3);
  REQUIRE_THROWS_AS(all_satisfying(wide), EnumerationLimitError);

  EnumerateOptions tight;
  tight.solution_cap = 10;
  REQUIRE_THROWS_AS(all_satisfying(Formula(8, 3), tight), EnumerationLimitError);

  // n = 34 forces the backtracking path (scan bound is 32); self-consistency
  RngStream rng(55, 0);
  const Formula f = sample_uniform_formula({34, 3, 175, true}, rng);
  EnumerateOptions opts;
  opts.solution_cap = std::uint64_t{1} << 22;
  const auto sols = all_satisfying(f, opts);
  REQUIRE(is_satisfiable(f) == !sols.empty());
  std::set<std::uint64_t> dedup;
  for (const Assignment& a : sols.assignments) {
    REQUIRE(evaluate(f, a));
    dedup.insert(a.low_word());
  }
  REQUIRE(dedup.size() == sols.size());
}
