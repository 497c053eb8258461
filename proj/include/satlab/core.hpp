#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "satlab/bigint.hpp"
#include "satlab/errors.hpp"

namespace satlab {

/// Truth assignment over n Boolean variables, 0-indexed. Bit i is the value
/// of variable i. Stored as packed 64-bit words, so n is not limited to
/// machine word size.
class Assignment {
 public:
  explicit Assignment(int n) : n_(n), words_((n + 63) / 64, 0) {
    if (n <= 0) throw PreconditionError("Assignment: n must be positive");
  }

  /// Builds from a bit string; character i is variable i ('0' or '1').
  static Assignment from_bits(std::string_view bits) {
    Assignment a(static_cast<int>(bits.size()));
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1')
        a.set(static_cast<int>(i), true);
      else if (bits[i] != '0')
        throw PreconditionError("Assignment::from_bits: expected '0' or '1'");
    }
    return a;
  }

  /// Builds from the low n bits of a word (n <= 64).
  static Assignment from_word(int n, std::uint64_t w) {
    if (n > 64) throw PreconditionError("Assignment::from_word: n > 64");
    Assignment a(n);
    a.words_[0] = n == 64 ? w : (w & ((std::uint64_t{1} << n) - 1));
    return a;
  }

  int n() const { return n_; }

  bool get(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(int i, bool v) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  void flip(int i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  Assignment complemented() const {
    Assignment a(*this);
    for (auto& w : a.words_) w = ~w;
    a.mask_top();
    return a;
  }

  std::uint64_t low_word() const { return words_[0]; }

  std::span<const std::uint64_t> words() const { return words_; }

  std::string to_bit_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int i = 0; i < n_; ++i)
      if (get(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

  /// Numeric order (variable 0 is the least significant bit).
  friend bool operator<(const Assignment& a, const Assignment& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("Assignment order: n mismatch");
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

 private:
  void mask_top() {
    const int rem = n_ & 63;
    if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

/// Hamming distance between two assignments over the same variable set.
inline int hamming(const Assignment& a, const Assignment& b) {
  if (a.n() != b.n()) throw DimensionMismatch("hamming: assignments over different n");
  int d = 0;
  auto wa = a.words(), wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) d += std::popcount(wa[i] ^ wb[i]);
  return d;
}

/// Signed literal: variable index plus polarity.
struct Literal {
  int var = 0;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A width-k clause in canonical form: literals sorted by variable index,
/// all variables distinct. Canonical form makes duplicate detection and the
/// universe index bijection well defined.
class Clause {
 public:
  explicit Clause(std::vector<Literal> literals) : lits_(std::move(literals)) {
    if (lits_.empty()) throw PreconditionError("Clause: must have at least one literal");
    std::sort(lits_.begin(), lits_.end(),
              [](const Literal& a, const Literal& b) { return a.var < b.var; });
    for (std::size_t i = 1; i < lits_.size(); ++i)
      if (lits_[i].var == lits_[i - 1].var)
        throw PreconditionError("Clause: duplicate variable");
    for (const Literal& l : lits_)
      if (l.var < 0) throw PreconditionError("Clause: negative variable index");
  }

  int width() const { return static_cast<int>(lits_.size()); }
  std::span<const Literal> literals() const { return lits_; }
  int max_var() const { return lits_.back().var; }

  bool satisfied_by(const Assignment& a) const {
    for (const Literal& l : lits_)
      if (a.get(l.var) == l.positive) return true;
    return false;
  }

  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause& a, const Clause& b) { return a.lits_ <=> b.lits_; }

 private:
  std::vector<Literal> lits_;
};

/// k-CNF formula: an ordered sequence of m width-k clauses over n variables.
/// Duplicate clauses are permitted; density m/n is always derived.
class Formula {
 public:
  Formula(int n, int k) : n_(n), k_(k) {
    if (n <= 0) throw PreconditionError("Formula: n must be positive");
    if (k < 0 || k > n) throw PreconditionError("Formula: need 0 <= k <= n");
  }

  Formula(int n, int k, std::vector<Clause> clauses) : Formula(n, k) {
    for (auto& c : clauses) add_clause(std::move(c));
  }

  void add_clause(Clause c) {
    if (c.width() != k_) throw PreconditionError("Formula::add_clause: clause width != k");
    if (c.max_var() >= n_) throw PreconditionError("Formula::add_clause: variable out of range");
    clauses_.push_back(std::move(c));
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::int64_t m() const { return static_cast<std::int64_t>(clauses_.size()); }
  double density() const { return static_cast<double>(m()) / n_; }
  std::span<const Clause> clauses() const { return clauses_; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.clauses_ == b.clauses_;
  }

 private:
  int n_;
  int k_;
  std::vector<Clause> clauses_;
};

/// True iff every clause has a literal made true by `a`. An empty formula is
/// vacuously satisfied.
inline bool evaluate(const Formula& f, const Assignment& a) {
  if (a.n() != f.n()) throw DimensionMismatch("evaluate: assignment n != formula n");
  for (const Clause& c : f.clauses())
    if (!c.satisfied_by(a)) return false;
  return true;
}

/// A formula together with an assignment that satisfies all of it.
struct PlantedInstance {
  Formula formula;
  Assignment planted;

  PlantedInstance(Formula f, Assignment p) : formula(std::move(f)), planted(std::move(p)) {
    if (!evaluate(formula, planted))
      throw PreconditionError("PlantedInstance: planted assignment does not satisfy the formula");
  }
};

/// Which slice of the width-k clause universe over n variables to count.
enum class UniverseMode {
  All,            ///< every clause: 2^k * C(n,k)
  ConsistentOne,  ///< clauses satisfied by one fixed assignment: (2^k - 1) * C(n,k)
  ConsistentTwo,  ///< clauses satisfied by two fixed assignments at Hamming distance d
};

/// Exact clause-universe count. For ConsistentTwo the count is
/// (2^k - 2) * C(n,k) + C(n-d,k): by inclusion-exclusion a variable set loses
/// one polarity pattern per assignment, and the two forbidden patterns
/// coincide exactly when all k variables lie in the agreement set.
inline BigInt clause_universe_size(int n, int k, UniverseMode mode, int d = 0) {
  if (k < 1 || k > n) throw PreconditionError("clause_universe_size: need 1 <= k <= n");
  const BigInt nk = big_binomial(n, k);
  switch (mode) {
    case UniverseMode::All:
      return big_pow2(k) * nk;
    case UniverseMode::ConsistentOne:
      return (big_pow2(k) - 1) * nk;
    case UniverseMode::ConsistentTwo:
      if (d < 0 || d > n) throw PreconditionError("clause_universe_size: need 0 <= d <= n");
      return (big_pow2(k) - 2) * nk + big_binomial(n - d, k);
  }
  throw PreconditionError("clause_universe_size: unknown mode");
}

/// Universe index of a canonical clause: colex rank of its variable set,
/// composed with the k-bit polarity pattern (bit j = polarity of the j-th
/// literal in variable order). A fixed, documented bijection onto
/// [0, 2^k * C(n,k)).
inline BigInt encode_clause(const Clause& c, int n) {
  if (c.max_var() >= n) throw PreconditionError("encode_clause: variable out of range");
  const auto lits = c.literals();
  const int k = c.width();
  BigInt rank = 0;
  BigInt pattern = 0;
  for (int j = 0; j < k; ++j) {
    rank += big_binomial(lits[static_cast<std::size_t>(j)].var, j + 1);
    if (lits[static_cast<std::size_t>(j)].positive) pattern += big_pow2(j) * 1;
  }
  return rank * big_pow2(k) + pattern;
}

/// Inverse of encode_clause.
inline Clause decode_clause(const BigInt& index, int n, int k) {
  if (k < 1 || k > n) throw PreconditionError("decode_clause: need 1 <= k <= n");
  if (index < 0 || index >= clause_universe_size(n, k, UniverseMode::All))
    throw PreconditionError("decode_clause: index out of range");
  const BigInt pk = big_pow2(k);
  BigInt rank = index / pk;
  const BigInt pattern = index % pk;
  std::vector<Literal> lits(static_cast<std::size_t>(k));
  int hi = n - 1;
  for (int j = k - 1; j >= 0; --j) {
    int v = hi;
    while (big_binomial(v, j + 1) > rank) --v;
    rank -= big_binomial(v, j + 1);
    lits[static_cast<std::size_t>(j)] = {v, boost::multiprecision::bit_test(pattern, unsigned(j))};
    hi = v - 1;
  }
  return Clause(std::move(lits));
}

}  // namespace satlab
