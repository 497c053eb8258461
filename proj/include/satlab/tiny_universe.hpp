#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "satlab/bigint.hpp"
#include "satlab/core.hpp"
#include "satlab/errors.hpp"

namespace satlab {

/// Exact-arithmetic verdict on the transfer identity E[u_d] = T * E[f_d] / 2
/// and the companion inequality T <= W, computed by enumerating every
/// ordered with-repetition formula of the (n, k, m) universe.
///
/// T is the mean solution count over satisfiable formulas (the uniform
/// satisfiable ensemble), W the mean solution count of the planted ensemble.
/// Everything is an exact rational; identity_holds demands exact equality
/// for every d >= 1 (d = 0 is the degenerate diagonal: u counts distinct
/// pairs, so u_0 = 0 by convention while f_0 = 1).
struct TinyUniverseReport {
  int n = 0;
  int k = 0;
  std::int64_t m = 0;
  BigRat T;
  BigRat W;
  std::vector<BigRat> u_expected;  // index d in [0, n]
  std::vector<BigRat> f_expected;
  std::map<std::uint64_t, BigInt> t_histogram;  // solution count -> formula count
  BigRat T_from_hist;  // sum i * t_i / sum t_i   (i >= 1)
  BigRat W_from_hist;  // sum i^2 * t_i / sum i * t_i
  bool identity_holds = false;
  bool t_le_w = false;
  BigInt formula_count;
  BigInt satisfiable_count;
};

namespace detail {

// Per-clause satisfying-assignment bitset over the 2^n assignment masks.
struct TinyClause {
  std::vector<std::uint64_t> sat;  // bit a set iff assignment a satisfies
};

inline std::vector<TinyClause> tiny_universe_clauses(int n, int k) {
  std::vector<TinyClause> out;
  const std::size_t words = (std::size_t{1} << n) / 64 + (((std::size_t{1} << n) % 64) ? 1 : 0);
  std::vector<int> vars(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) vars[static_cast<std::size_t>(i)] = i;
  for (;;) {
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << k); ++pattern) {
      TinyClause tc;
      tc.sat.assign(words, 0);
      std::uint64_t vmask = 0;
      std::uint64_t fals = 0;
      for (int j = 0; j < k; ++j) {
        vmask |= std::uint64_t{1} << vars[static_cast<std::size_t>(j)];
        if (((pattern >> j) & 1) == 0) fals |= std::uint64_t{1} << vars[static_cast<std::size_t>(j)];
      }
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a)
        if ((a & vmask) != fals) tc.sat[a >> 6] |= std::uint64_t{1} << (a & 63);
      out.push_back(std::move(tc));
    }
    // next k-combination of [0, n) in lexicographic order
    int j = k - 1;
    while (j >= 0 && vars[static_cast<std::size_t>(j)] == n - k + j) --j;
    if (j < 0) break;
    ++vars[static_cast<std::size_t>(j)];
    for (int t = j + 1; t < k; ++t)
      vars[static_cast<std::size_t>(t)] = vars[static_cast<std::size_t>(t - 1)] + 1;
  }
  return out;
}

}  // namespace detail

/// Enumerates the full ordered-with-repetition formula universe and checks
/// the transfer identity and T <= W exactly. Throws EnumerationLimitError
/// when the universe (or the planted sweep) exceeds the feasibility bound.
inline TinyUniverseReport verify_identity(int n, int k, std::int64_t m,
                                          std::uint64_t feasibility_bound = 10'000'000) {
  if (n <= 0 || k < 1 || k > n) throw PreconditionError("verify_identity: need 1 <= k <= n");
  if (m < 0) throw PreconditionError("verify_identity: m must be nonnegative");
  if (n > 20) throw EnumerationLimitError("verify_identity: n > 20 assignment space too large");
  const BigInt universe_big = clause_universe_size(n, k, UniverseMode::All);
  BigInt total = 1;
  for (std::int64_t i = 0; i < m; ++i) {
    total *= universe_big;
    if (total > feasibility_bound)
      throw EnumerationLimitError("verify_identity: formula universe too large");
  }
  const BigInt cons_big = clause_universe_size(n, k, UniverseMode::ConsistentOne);
  BigInt planted_total = BigInt(1) << n;
  for (std::int64_t i = 0; i < m; ++i) planted_total *= cons_big;
  if (planted_total > BigInt(10) * feasibility_bound)
    throw EnumerationLimitError("verify_identity: planted sweep too large");

  const auto clauses = detail::tiny_universe_clauses(n, k);
  const std::uint64_t N = static_cast<std::uint64_t>(universe_big);
  const std::uint64_t assignments = std::uint64_t{1} << n;
  const std::size_t words = clauses.empty() ? 1 : clauses.front().sat.size();
  std::vector<std::uint64_t> full(words, 0);
  for (std::uint64_t a = 0; a < assignments; ++a) full[a >> 6] |= std::uint64_t{1} << (a & 63);

  TinyUniverseReport rep;
  rep.n = n;
  rep.k = k;
  rep.m = m;
  rep.u_expected.assign(static_cast<std::size_t>(n) + 1, BigRat(0));
  rep.f_expected.assign(static_cast<std::size_t>(n) + 1, BigRat(0));
  rep.formula_count = total;

  // --- uniform side: every ordered formula over the full universe ---------
  std::vector<BigInt> u_num(static_cast<std::size_t>(n) + 1, BigInt(0));
  BigInt sat_count = 0;
  BigInt sol_sum = 0;
  std::vector<std::uint64_t> sols;
  std::vector<std::uint64_t> pairs_d(static_cast<std::size_t>(n) + 1, 0);

  auto process_uniform = [&](const std::vector<std::uint64_t>& cur) {
    std::uint64_t s = 0;
    for (auto w : cur) s += static_cast<std::uint64_t>(std::popcount(w));
    rep.t_histogram[s] += 1;
    if (s == 0) return;
    sat_count += 1;
    sol_sum += s;
    sols.clear();
    for (std::size_t w = 0; w < cur.size(); ++w) {
      std::uint64_t word = cur[w];
      while (word) {
        const int j = std::countr_zero(word);
        word &= word - 1;
        sols.push_back((static_cast<std::uint64_t>(w) << 6) | static_cast<std::uint64_t>(j));
      }
    }
    std::fill(pairs_d.begin(), pairs_d.end(), 0);
    for (std::size_t i = 0; i < sols.size(); ++i)
      for (std::size_t j = i + 1; j < sols.size(); ++j)
        ++pairs_d[static_cast<std::size_t>(std::popcount(sols[i] ^ sols[j]))];
    for (std::size_t d = 1; d < pairs_d.size(); ++d)
      if (pairs_d[d]) u_num[d] += pairs_d[d];
  };

  // Odometer over ordered clause index tuples with partial intersections.
  std::vector<std::vector<std::uint64_t>> stack(static_cast<std::size_t>(m) + 1,
                                                std::vector<std::uint64_t>(words));
  stack[0] = full;
  std::function<void(std::int64_t)> rec_uniform = [&](std::int64_t level) {
    if (level == m) {
      process_uniform(stack[static_cast<std::size_t>(level)]);
      return;
    }
    for (std::uint64_t idx = 0; idx < N; ++idx) {
      for (std::size_t w = 0; w < words; ++w)
        stack[static_cast<std::size_t>(level) + 1][w] =
            stack[static_cast<std::size_t>(level)][w] & clauses[idx].sat[w];
      rec_uniform(level + 1);
    }
  };
  rec_uniform(0);

  if (sat_count == 0) throw UnsatisfiableError("verify_identity: no satisfiable formula");
  rep.satisfiable_count = sat_count;
  rep.T = BigRat(sol_sum, sat_count);
  for (std::size_t d = 0; d <= static_cast<std::size_t>(n); ++d)
    rep.u_expected[d] = BigRat(u_num[d], sat_count);

  // --- planted side: every (assignment, consistent ordered formula) pair --
  std::vector<BigInt> f_num(static_cast<std::size_t>(n) + 1, BigInt(0));
  BigInt w_num = 0;
  std::vector<std::uint64_t> f_local(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint64_t> consistent;
  std::uint64_t phi = 0;

  auto process_planted = [&](const std::vector<std::uint64_t>& cur) {
    std::uint64_t s = 0;
    for (auto w : cur) s += static_cast<std::uint64_t>(std::popcount(w));
    w_num += s;
    std::fill(f_local.begin(), f_local.end(), 0);
    for (std::size_t w = 0; w < cur.size(); ++w) {
      std::uint64_t word = cur[w];
      while (word) {
        const int j = std::countr_zero(word);
        word &= word - 1;
        const std::uint64_t a = (static_cast<std::uint64_t>(w) << 6) | static_cast<std::uint64_t>(j);
        ++f_local[static_cast<std::size_t>(std::popcount(a ^ phi))];
      }
    }
    for (std::size_t d = 0; d < f_local.size(); ++d)
      if (f_local[d]) f_num[d] += f_local[d];
  };

  std::function<void(std::int64_t)> rec_planted = [&](std::int64_t level) {
    if (level == m) {
      process_planted(stack[static_cast<std::size_t>(level)]);
      return;
    }
    for (std::uint64_t idx : consistent) {
      for (std::size_t w = 0; w < words; ++w)
        stack[static_cast<std::size_t>(level) + 1][w] =
            stack[static_cast<std::size_t>(level)][w] & clauses[idx].sat[w];
      rec_planted(level + 1);
    }
  };

  for (phi = 0; phi < assignments; ++phi) {
    consistent.clear();
    for (std::uint64_t idx = 0; idx < N; ++idx)
      if ((clauses[idx].sat[phi >> 6] >> (phi & 63)) & 1) consistent.push_back(idx);
    rec_planted(0);
  }

  const BigInt planted_count = planted_total;
  rep.W = BigRat(w_num, planted_count);
  for (std::size_t d = 0; d <= static_cast<std::size_t>(n); ++d)
    rep.f_expected[d] = BigRat(f_num[d], planted_count);

  // --- verdicts ------------------------------------------------------------
  rep.identity_holds = true;
  for (std::size_t d = 1; d <= static_cast<std::size_t>(n); ++d)
    if (rep.u_expected[d] != rep.T * rep.f_expected[d] / 2) rep.identity_holds = false;
  rep.t_le_w = rep.T <= rep.W;

  BigInt ti0 = 0, ti1 = 0, ti2 = 0;
  for (const auto& [i, t] : rep.t_histogram) {
    if (i == 0) continue;
    ti0 += t;
    ti1 += BigInt(i) * t;
    ti2 += BigInt(i) * i * t;
  }
  rep.T_from_hist = BigRat(ti1, ti0);
  rep.W_from_hist = BigRat(ti2, ti1);
  return rep;
}

/// Closed-form exact rational E[f_d] for the i.i.d. planted model:
/// C(n,d) * (((2^k - 2) C(n,k) + C(n-d,k)) / ((2^k - 1) C(n,k)))^m.
inline std::vector<BigRat> exact_expected_f(int n, int k, std::int64_t m) {
  if (n <= 0 || k < 1 || k > n) throw PreconditionError("exact_expected_f: need 1 <= k <= n");
  std::vector<BigRat> out(static_cast<std::size_t>(n) + 1);
  const BigInt denom = clause_universe_size(n, k, UniverseMode::ConsistentOne);
  for (int d = 0; d <= n; ++d) {
    const BigInt numer = clause_universe_size(n, k, UniverseMode::ConsistentTwo, d);
    BigRat factor(1);
    const BigRat ratio(numer, denom);
    for (std::int64_t i = 0; i < m; ++i) factor *= ratio;
    out[static_cast<std::size_t>(d)] = BigRat(big_binomial(n, d)) * factor;
  }
  return out;
}

}  // namespace satlab
