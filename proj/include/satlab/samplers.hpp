#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "satlab/core.hpp"
#include "satlab/enumeration.hpp"
#include "satlab/errors.hpp"
#include "satlab/rng.hpp"

namespace satlab {

/// Parameters shared by the formula samplers. with_repetition=true draws the
/// m clauses i.i.d. (the model all exact expectation formulas here assume);
/// false draws a uniform m-subset of distinct clauses.
struct SamplerConfig {
  int n = 0;
  int k = 0;
  std::int64_t m = 0;
  bool with_repetition = true;

  void validate() const {
    if (n <= 0 || k < 1 || k > n) throw PreconditionError("SamplerConfig: need 1 <= k <= n");
    if (m < 0) throw PreconditionError("SamplerConfig: m must be nonnegative");
  }
};

/// Uniform assignment over {0,1}^n.
inline Assignment random_assignment(int n, RngStream& rng) {
  Assignment a(n);
  for (int i = 0; i < n; i += 64) {
    const int width = std::min(64, n - i);
    std::uint64_t w = rng.bits(width);
    for (int j = 0; j < width; ++j)
      if ((w >> j) & 1) a.set(i + j, true);
  }
  return a;
}

namespace detail {

// k distinct variable indices from [0, n), sorted ascending. Rejection when
// collisions are rare, partial Fisher-Yates otherwise.
inline std::vector<int> sample_distinct_vars(int n, int k, RngStream& rng) {
  std::vector<int> vars;
  vars.reserve(static_cast<std::size_t>(k));
  if (static_cast<std::int64_t>(k) * 8 <= n) {
    while (static_cast<int>(vars.size()) < k) {
      const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      bool dup = false;
      for (int u : vars) dup |= (u == v);
      if (!dup) vars.push_back(v);
    }
  } else {
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      vars.push_back(pool[static_cast<std::size_t>(i)]);
    }
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

inline Clause clause_from(const std::vector<int>& vars, std::uint64_t pattern) {
  std::vector<Literal> lits;
  lits.reserve(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j)
    lits.push_back({vars[j], ((pattern >> j) & 1) != 0});
  return Clause(std::move(lits));
}

// The unique polarity pattern on `vars` falsified by `a`.
inline std::uint64_t forbidden_pattern(const std::vector<int>& vars, const Assignment& a) {
  std::uint64_t p = 0;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (!a.get(vars[j])) p |= std::uint64_t{1} << j;
  return p;
}

}  // namespace detail

/// One clause uniform over the full universe of 2^k * C(n,k).
inline Clause random_clause(int n, int k, RngStream& rng) {
  const auto vars = detail::sample_distinct_vars(n, k, rng);
  return detail::clause_from(vars, rng.bits(k));
}

/// One clause uniform over the clauses consistent with `planted`: draw a
/// (variable set, pattern) pair and reject the single forbidden pattern.
/// Expected tries 2^k/(2^k - 1).
inline Clause random_consistent_clause(int n, int k, const Assignment& planted, RngStream& rng) {
  for (;;) {
    const auto vars = detail::sample_distinct_vars(n, k, rng);
    const std::uint64_t pattern = rng.bits(k);
    if (pattern != detail::forbidden_pattern(vars, planted))
      return detail::clause_from(vars, pattern);
  }
}

/// One clause uniform over the clauses consistent with both `phi` and `psi`
/// (the doubly-planted per-clause law). Joint rejection keeps the pair
/// (variable set, pattern) uniform even though variable sets inside the
/// agreement region forbid one pattern and the rest forbid two.
inline Clause random_doubly_consistent_clause(int n, int k, const Assignment& phi,
                                              const Assignment& psi, RngStream& rng) {
  for (;;) {
    const auto vars = detail::sample_distinct_vars(n, k, rng);
    const std::uint64_t pattern = rng.bits(k);
    if (pattern == detail::forbidden_pattern(vars, phi)) continue;
    if (pattern == detail::forbidden_pattern(vars, psi)) continue;
    return detail::clause_from(vars, pattern);
  }
}

namespace detail {

template <class DrawClause>
Formula draw_formula(const SamplerConfig& cfg, const BigInt& universe, DrawClause&& draw) {
  if (!cfg.with_repetition && BigInt(cfg.m) > universe)
    throw PreconditionError("sampler: m exceeds universe size with with_repetition=false");
  Formula f(cfg.n, cfg.k);
  std::set<Clause> seen;
  while (f.m() < cfg.m) {
    Clause c = draw();
    if (!cfg.with_repetition && !seen.insert(c).second) continue;
    f.add_clause(std::move(c));
  }
  return f;
}

}  // namespace detail

/// A formula from F_{n,m,k}: every clause uniform over the full universe.
inline Formula sample_uniform_formula(const SamplerConfig& cfg, RngStream& rng) {
  cfg.validate();
  return detail::draw_formula(cfg, clause_universe_size(cfg.n, cfg.k, UniverseMode::All),
                              [&] { return random_clause(cfg.n, cfg.k, rng); });
}

/// A planted instance: uniform planted assignment, then m clauses uniform
/// over the universe consistent with it.
inline PlantedInstance sample_planted(const SamplerConfig& cfg, RngStream& rng) {
  cfg.validate();
  Assignment planted = random_assignment(cfg.n, rng);
  Formula f = detail::draw_formula(
      cfg, clause_universe_size(cfg.n, cfg.k, UniverseMode::ConsistentOne),
      [&] { return random_consistent_clause(cfg.n, cfg.k, planted, rng); });
  return PlantedInstance(std::move(f), std::move(planted));
}

/// A formula whose clauses are uniform over those satisfied by both phi and
/// psi (the doubly-planted distribution at distance hamming(phi, psi)).
inline Formula sample_doubly_planted(const SamplerConfig& cfg, const Assignment& phi,
                                     const Assignment& psi, RngStream& rng) {
  cfg.validate();
  if (phi.n() != cfg.n || psi.n() != cfg.n)
    throw DimensionMismatch("sample_doubly_planted: assignment n != cfg.n");
  const int d = hamming(phi, psi);
  return detail::draw_formula(
      cfg, clause_universe_size(cfg.n, cfg.k, UniverseMode::ConsistentTwo, d),
      [&] { return random_doubly_consistent_clause(cfg.n, cfg.k, phi, psi, rng); });
}

struct SatisfiableSample {
  Formula formula;
  std::uint64_t tries;  // draws from F_{n,m,k} until one was satisfiable
};

/// A formula from U_{n,m,k} = F_{n,m,k} conditioned on satisfiability,
/// realized by rejection. Throws ExhaustedError when max_tries uniform draws
/// all come out unsatisfiable (density too far above threshold for this n).
inline SatisfiableSample sample_uniform_satisfiable(const SamplerConfig& cfg, RngStream& rng,
                                                    std::uint64_t max_tries = 1'000'000) {
  cfg.validate();
  for (std::uint64_t t = 1; t <= max_tries; ++t) {
    Formula f = sample_uniform_formula(cfg, rng);
    if (is_satisfiable(f)) return {std::move(f), t};
  }
  throw ExhaustedError(max_tries);
}

}  // namespace satlab
