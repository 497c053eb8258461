#include <catch2/catch_amalgamated.hpp>

#include "satlab/core.hpp"
#include "satlab/rng.hpp"

using namespace satlab;

namespace {

Clause make_clause(std::initializer_list<int> signed_vars) {
  // 1-based signed shorthand: 2 = x2 positive, -3 = x3 negated
  std::vector<Literal> lits;
  for (int v : signed_vars) lits.push_back({std::abs(v) - 1, v > 0});
  return Clause(std::move(lits));
}

Formula make_formula(int n, int k, std::initializer_list<std::initializer_list<int>> clauses) {
  Formula f(n, k);
  for (auto c : clauses) f.add_clause(make_clause(c));
  return f;
}

}  // namespace

TEST_CASE("assignment bit operations and bit strings") {
  Assignment a = Assignment::from_bits("0110");
  REQUIRE(a.n() == 4);
  REQUIRE_FALSE(a.get(0));
  REQUIRE(a.get(1));
  REQUIRE(a.get(2));
  REQUIRE_FALSE(a.get(3));
  REQUIRE(a.to_bit_string() == "0110");
  a.flip(0);
  REQUIRE(a.to_bit_string() == "1110");
  REQUIRE(a.complemented().to_bit_string() == "0001");

  Assignment wide(130);
  wide.set(129, true);
  REQUIRE(wide.get(129));
  REQUIRE(wide.complemented().get(129) == false);
  REQUIRE(hamming(wide, wide.complemented()) == 130);
}

TEST_CASE("hamming distance basics") {
  const Assignment a = Assignment::from_bits("0110");
  REQUIRE(hamming(a, a) == 0);
  REQUIRE(hamming(Assignment::from_bits("0000"), Assignment::from_bits("1111")) == 4);
  REQUIRE(hamming(Assignment::from_bits("0110"), Assignment::from_bits("1010")) == 2);
  REQUIRE_THROWS_AS(hamming(a, Assignment(5)), DimensionMismatch);
}

TEST_CASE("hamming is invariant under complementing both sides") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(90));
    Assignment a(n), b(n);
    for (int i = 0; i < n; ++i) {
      if (rng.coin()) a.flip(i);
      if (rng.coin()) b.flip(i);
    }
    REQUIRE(hamming(a, b) == hamming(a.complemented(), b.complemented()));
  }
}

TEST_CASE("clause canonicalization sorts by variable and rejects duplicates") {
  const Clause c = make_clause({3, -1, 2});
  REQUIRE(c.width() == 3);
  REQUIRE(c.literals()[0].var == 0);
  REQUIRE_FALSE(c.literals()[0].positive);
  REQUIRE(c.literals()[1].var == 1);
  REQUIRE(c.literals()[2].var == 2);
  REQUIRE_THROWS_AS(make_clause({1, -1, 2}), PreconditionError);
}

TEST_CASE("evaluate") {
  const Formula f1 = make_formula(3, 3, {{1, 2, 3}});
  REQUIRE_FALSE(evaluate(f1, Assignment::from_bits("000")));
  REQUIRE(evaluate(f1, Assignment::from_bits("010")));

  const Formula f2 = make_formula(3, 3, {{1, 2, 3}, {-1, -2, -3}});
  REQUIRE(evaluate(f2, Assignment::from_bits("011")));
  REQUIRE_FALSE(evaluate(f2, Assignment::from_bits("111")));

  const Formula empty(3, 3);
  REQUIRE(evaluate(empty, Assignment::from_bits("000")));

  REQUIRE_THROWS_AS(evaluate(f1, Assignment(4)), DimensionMismatch);
}

TEST_CASE("evaluate is monotone under clause removal") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(6));
    Formula full(n, 3);
    Formula sub(n, 3);
    const int m = 2 + static_cast<int>(rng.below(20));
    for (int i = 0; i < m; ++i) {
      std::vector<Literal> lits;
      int v0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
      lits.push_back({v0, rng.coin()});
      lits.push_back({v0 + 1, rng.coin()});
      lits.push_back({v0 + 2, rng.coin()});
      Clause c(lits);
      if (rng.coin()) sub.add_clause(c);  // sub-multiset
      full.add_clause(std::move(c));
    }
    Assignment a(n);
    for (int i = 0; i < n; ++i)
      if (rng.coin()) a.flip(i);
    if (evaluate(full, a)) REQUIRE(evaluate(sub, a));
  }
}

TEST_CASE("planted instance validates the planted assignment") {
  Formula f = make_formula(3, 3, {{1, 2, 3}});
  REQUIRE_NOTHROW(PlantedInstance(f, Assignment::from_bits("100")));
  REQUIRE_THROWS_AS(PlantedInstance(f, Assignment::from_bits("000")), PreconditionError);
}

TEST_CASE("clause universe sizes") {
  REQUIRE(clause_universe_size(4, 3, UniverseMode::All) == 32);
  REQUIRE(clause_universe_size(4, 3, UniverseMode::ConsistentOne) == 28);
  REQUIRE(clause_universe_size(4, 3, UniverseMode::ConsistentTwo, 1) == 25);
  REQUIRE_THROWS_AS(clause_universe_size(2, 3, UniverseMode::All), PreconditionError);

  // ConsistentTwo(0) collapses to ConsistentOne; d >= 1 keeps the lower bound
  for (int n = 3; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      REQUIRE(clause_universe_size(n, k, UniverseMode::ConsistentTwo, 0) ==
              clause_universe_size(n, k, UniverseMode::ConsistentOne));
      for (int d = 1; d <= n; ++d)
        REQUIRE(clause_universe_size(n, k, UniverseMode::ConsistentTwo, d) >=
                (big_pow2(k) - 2) * big_binomial(n, k));
    }
  }

  // big-integer regime: C(64,32) * 2^32
  const BigInt expect = BigInt("1832624140942590534") * BigInt(std::uint64_t{1} << 32);
  REQUIRE(clause_universe_size(64, 32, UniverseMode::All) == expect);
}

TEST_CASE("ConsistentTwo counts match brute-force enumeration of the universe") {
  // oracle: walk every clause of the (n, k) universe and test the two
  // assignments directly
  for (int n : {4, 5}) {
    const int k = 3;
    const BigInt universe = clause_universe_size(n, k, UniverseMode::All);
    for (int d = 0; d <= n; ++d) {
      Assignment phi(n);
      for (int i = 0; i < n; ++i) phi.set(i, i % 2 == 0);
      Assignment psi = phi;
      for (int i = 0; i < d; ++i) psi.flip(i);
      std::int64_t count = 0;
      for (BigInt idx = 0; idx < universe; ++idx) {
        const Clause c = decode_clause(idx, n, k);
        if (c.satisfied_by(phi) && c.satisfied_by(psi)) ++count;
      }
      REQUIRE(BigInt(count) == clause_universe_size(n, k, UniverseMode::ConsistentTwo, d));
    }
  }
}

TEST_CASE("clause universe indexing is a bijection") {
  const int n = 5, k = 3;
  const BigInt universe = clause_universe_size(n, k, UniverseMode::All);
  std::vector<Clause> seen;
  for (BigInt idx = 0; idx < universe; ++idx) {
    const Clause c = decode_clause(idx, n, k);
    REQUIRE(encode_clause(c, n) == idx);
    for (const Clause& prev : seen) REQUIRE_FALSE(prev == c);
    seen.push_back(c);
  }
  REQUIRE(seen.size() == 80);

  // spot checks in a larger universe
  RngStream rng(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const BigInt idx = static_cast<std::uint64_t>(rng.below(1u << 20));
    if (idx >= clause_universe_size(40, 5, UniverseMode::All)) continue;
    REQUIRE(encode_clause(decode_clause(idx, 40, 5), 40) == idx);
  }
  REQUIRE_THROWS_AS(decode_clause(clause_universe_size(5, 3, UniverseMode::All), 5, 3),
                    PreconditionError);
}
