#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "satlab/core.hpp"
#include "satlab/errors.hpp"

namespace satlab {

/// Limits for exact enumeration. Scan is the bit-parallel exhaustive sweep
/// (64 assignments per word); above scan_max_vars an exact backtracking
/// search with unit propagation takes over, up to max_vars.
struct EnumerateOptions {
  enum class Strategy { Auto, Scan, Backtrack };
  Strategy strategy = Strategy::Auto;
  int scan_max_vars = 32;
  int max_vars = 64;
  std::uint64_t solution_cap = std::uint64_t{1} << 20;
};

/// All satisfying assignments of a formula, sorted in numeric order.
struct SolutionSet {
  int n = 0;
  std::vector<Assignment> assignments;

  std::size_t size() const { return assignments.size(); }
  bool empty() const { return assignments.empty(); }
};

/// Counts indexed by Hamming distance d in [0, n].
struct DistanceProfile {
  int n = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

namespace detail {

// Bit position patterns of the 6 lowest variables across one 64-assignment word.
inline constexpr std::uint64_t kLowVarPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

struct ScanClause {
  std::uint64_t vars_high = 0;  // variables >= 6, as assignment bits
  std::uint64_t fals_high = 0;
  std::uint64_t low_or = 0;  // word positions where some low literal is true
};

inline std::vector<ScanClause> compile_scan(const Formula& f) {
  std::vector<ScanClause> out;
  out.reserve(static_cast<std::size_t>(f.m()));
  for (const Clause& c : f.clauses()) {
    ScanClause sc;
    for (const Literal& l : c.literals()) {
      if (l.var < 6) {
        sc.low_or |= l.positive ? kLowVarPattern[l.var] : ~kLowVarPattern[l.var];
      } else {
        sc.vars_high |= std::uint64_t{1} << l.var;
        if (!l.positive) sc.fals_high |= std::uint64_t{1} << l.var;
      }
    }
    out.push_back(sc);
  }
  return out;
}

// Exhaustive bit-parallel sweep over all 2^n assignments, n <= 64 in
// principle (practical well below). Invokes fn(base, word) per 64-block with
// the word's set bits marking satisfying assignments base|j.
template <class Fn>
void scan_blocks(const Formula& f, Fn&& fn) {
  const int n = f.n();
  const auto clauses = compile_scan(f);
  const std::uint64_t blocks = n > 6 ? (std::uint64_t{1} << (n - 6)) : 1;
  const std::uint64_t full =
      n >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::uint64_t{1} << n)) - 1);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint64_t base = b << 6;
    std::uint64_t word = full;
    for (const ScanClause& sc : clauses) {
      if ((base & sc.vars_high) != sc.fals_high) continue;  // a high literal is true
      word &= sc.low_or;
      if (word == 0) break;
    }
    if (word != 0) fn(base, word);
  }
}

// Exact backtracking enumeration with unit propagation. Assignments are
// reported as 64-bit masks (requires n <= 64). Returns false if the cap was
// hit.
class Backtracker {
 public:
  Backtracker(const Formula& f, std::uint64_t cap) : f_(f), cap_(cap), value_(f.n(), -1) {}

  // fn(mask) -> bool; returning false stops the search (used for SAT-only
  // queries). Result: true if the search completed within cap.
  bool run(const std::function<bool(std::uint64_t)>& fn) {
    fn_ = &fn;
    emitted_ = 0;
    stopped_ = false;
    capped_ = false;
    search();
    return !capped_;
  }

  bool stopped_early() const { return stopped_; }

 private:
  void search() {
    if (stopped_ || capped_) return;
    std::vector<int> trail;
    if (!propagate(trail)) {
      undo(trail);
      return;
    }
    // All clauses satisfied: every completion of the free variables works.
    if (all_satisfied()) {
      emit_completions(0, current_mask());
      undo(trail);
      return;
    }
    int var = first_unassigned();
    if (var < 0) {  // fully assigned and not conflicting => satisfying
      emit(current_mask());
      undo(trail);
      return;
    }
    for (int v = 0; v <= 1 && !stopped_ && !capped_; ++v) {
      value_[static_cast<std::size_t>(var)] = static_cast<signed char>(v);
      search();
      value_[static_cast<std::size_t>(var)] = -1;
    }
    undo(trail);
  }

  // Unit propagation to fixpoint; false on conflict.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Clause& c : f_.clauses()) {
        int unassigned = -1;
        int free_count = 0;
        bool sat = false;
        for (const Literal& l : c.literals()) {
          const signed char v = value_[static_cast<std::size_t>(l.var)];
          if (v < 0) {
            ++free_count;
            unassigned = l.var;
          } else if ((v == 1) == l.positive) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        if (free_count == 0) return false;
        if (free_count == 1) {
          bool polarity = false;
          for (const Literal& l : c.literals())
            if (l.var == unassigned) polarity = l.positive;
          value_[static_cast<std::size_t>(unassigned)] = polarity ? 1 : 0;
          trail.push_back(unassigned);
          changed = true;
        }
      }
    }
    return true;
  }

  void undo(std::vector<int>& trail) {
    for (int v : trail) value_[static_cast<std::size_t>(v)] = -1;
    trail.clear();
  }

  bool all_satisfied() const {
    for (const Clause& c : f_.clauses()) {
      bool sat = false;
      for (const Literal& l : c.literals()) {
        const signed char v = value_[static_cast<std::size_t>(l.var)];
        if (v >= 0 && (v == 1) == l.positive) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  }

  int first_unassigned() const {
    for (int i = 0; i < f_.n(); ++i)
      if (value_[static_cast<std::size_t>(i)] < 0) return i;
    return -1;
  }

  std::uint64_t current_mask() const {
    std::uint64_t m = 0;
    for (int i = 0; i < f_.n(); ++i)
      if (value_[static_cast<std::size_t>(i)] == 1) m |= std::uint64_t{1} << i;
    return m;
  }

  void emit_completions(int from, std::uint64_t mask) {
    if (stopped_ || capped_) return;
    int var = -1;
    for (int i = from; i < f_.n(); ++i) {
      if (value_[static_cast<std::size_t>(i)] < 0) {
        var = i;
        break;
      }
    }
    if (var < 0) {
      emit(mask);
      return;
    }
    emit_completions(var + 1, mask);
    emit_completions(var + 1, mask | (std::uint64_t{1} << var));
  }

  void emit(std::uint64_t mask) {
    if (stopped_ || capped_) return;
    if (emitted_ >= cap_) {
      capped_ = true;
      return;
    }
    ++emitted_;
    if (!(*fn_)(mask)) stopped_ = true;
  }

  const Formula& f_;
  std::uint64_t cap_;
  std::vector<signed char> value_;
  const std::function<bool(std::uint64_t)>* fn_ = nullptr;
  std::uint64_t emitted_ = 0;
  bool stopped_ = false;
  bool capped_ = false;
};

inline bool use_scan(const Formula& f, const EnumerateOptions& opts) {
  if (f.n() > opts.max_vars || f.n() > 64)
    throw EnumerationLimitError("enumeration: n exceeds configured bound");
  switch (opts.strategy) {
    case EnumerateOptions::Strategy::Scan:
      if (f.n() > opts.scan_max_vars)
        throw EnumerationLimitError("enumeration: n exceeds scan bound");
      return true;
    case EnumerateOptions::Strategy::Backtrack:
      return false;
    case EnumerateOptions::Strategy::Auto:
      return f.n() <= opts.scan_max_vars;
  }
  return true;
}

// Visits every satisfying assignment as a mask. Order is unspecified;
// callers that need a canonical order sort. Throws if the cap is exceeded.
template <class Fn>
void for_each_solution(const Formula& f, const EnumerateOptions& opts, Fn&& fn) {
  if (use_scan(f, opts)) {
    std::uint64_t seen = 0;
    bool over = false;
    scan_blocks(f, [&](std::uint64_t base, std::uint64_t word) {
      if (over) return;
      seen += static_cast<std::uint64_t>(std::popcount(word));
      if (seen > opts.solution_cap) {
        over = true;
        return;
      }
      while (word) {
        const int j = std::countr_zero(word);
        word &= word - 1;
        fn(base | static_cast<std::uint64_t>(j));
      }
    });
    if (over) throw EnumerationLimitError("enumeration: solution cap exceeded");
  } else {
    Backtracker bt(f, opts.solution_cap);
    if (!bt.run([&](std::uint64_t mask) {
          fn(mask);
          return true;
        }))
      throw EnumerationLimitError("enumeration: solution cap exceeded");
  }
}

inline std::vector<std::uint64_t> solution_masks(const Formula& f, const EnumerateOptions& opts) {
  std::vector<std::uint64_t> masks;
  for_each_solution(f, opts, [&](std::uint64_t m) { masks.push_back(m); });
  std::sort(masks.begin(), masks.end());
  return masks;
}

}  // namespace detail

/// Exactly the set of satisfying assignments.
inline SolutionSet all_satisfying(const Formula& f, const EnumerateOptions& opts = {}) {
  SolutionSet s;
  s.n = f.n();
  for (std::uint64_t m : detail::solution_masks(f, opts))
    s.assignments.push_back(Assignment::from_word(f.n(), m));
  return s;
}

/// Exact satisfiability decision (backtracking, stops at the first model).
inline bool is_satisfiable(const Formula& f) {
  if (f.n() > 64) throw EnumerationLimitError("is_satisfiable: n exceeds configured bound");
  if (f.m() == 0) return true;
  bool found = false;
  detail::Backtracker bt(f, ~std::uint64_t{0});
  bt.run([&](std::uint64_t) {
    found = true;
    return false;
  });
  return found;
}

/// Maximal Hamming distance between two satisfying assignments; 0 when the
/// solution set is a singleton. Throws UnsatisfiableError on unsatisfiable
/// input.
inline int r_max(const Formula& f, const EnumerateOptions& opts = {}) {
  const auto masks = detail::solution_masks(f, opts);
  if (masks.empty()) throw UnsatisfiableError("r_max: formula is unsatisfiable");
  int best = 0;
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      best = std::max(best, std::popcount(masks[i] ^ masks[j]));
  return best;
}

/// counts[d] = number of satisfying assignments at distance d from `reference`.
inline DistanceProfile distance_profile(const Formula& f, const Assignment& reference,
                                        const EnumerateOptions& opts = {}) {
  if (reference.n() != f.n()) throw DimensionMismatch("distance_profile: n mismatch");
  DistanceProfile p;
  p.n = f.n();
  p.counts.assign(static_cast<std::size_t>(f.n()) + 1, 0);
  const std::uint64_t ref = reference.low_word();
  detail::for_each_solution(f, opts, [&](std::uint64_t m) {
    ++p.counts[static_cast<std::size_t>(std::popcount(m ^ ref))];
  });
  return p;
}

/// counts[d] = number of unordered pairs of distinct satisfying assignments
/// at mutual distance d; counts[0] = 0. All-zero for unsatisfiable input.
inline DistanceProfile pair_profile(const Formula& f, const EnumerateOptions& opts = {}) {
  DistanceProfile p;
  p.n = f.n();
  p.counts.assign(static_cast<std::size_t>(f.n()) + 1, 0);
  const auto masks = detail::solution_masks(f, opts);
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      ++p.counts[static_cast<std::size_t>(std::popcount(masks[i] ^ masks[j]))];
  return p;
}

/// True iff flipping `var` in satisfying assignment `a` breaks satisfaction,
/// i.e. some clause has its literal on `var` as the unique true literal.
inline bool flip_breaks_satisfaction(const Formula& f, const Assignment& a, int var) {
  if (a.n() != f.n()) throw DimensionMismatch("flip_breaks_satisfaction: n mismatch");
  for (const Clause& c : f.clauses()) {
    int true_count = 0;
    int true_var = -1;
    bool contains_var = false;
    for (const Literal& l : c.literals()) {
      if (l.var == var) contains_var = true;
      if (a.get(l.var) == l.positive) {
        ++true_count;
        true_var = l.var;
        if (true_count > 1) break;
      }
    }
    if (contains_var && true_count == 1 && true_var == var) return true;
  }
  return false;
}

/// Single-flip maximality: every variable agreeing with the planted
/// assignment is pinned (flipping it would falsify some clause). An
/// assignment with no agreeing variable is vacuously maximal.
inline bool is_maximal(const PlantedInstance& inst, const Assignment& candidate) {
  if (!evaluate(inst.formula, candidate))
    throw PreconditionError("is_maximal: candidate does not satisfy the formula");
  for (int i = 0; i < inst.formula.n(); ++i) {
    if (candidate.get(i) != inst.planted.get(i)) continue;
    if (!flip_breaks_satisfaction(inst.formula, candidate, i)) return false;
  }
  return true;
}

/// Strict maximality (quantifying over all assignments, not single flips):
/// every assignment that disagrees with both candidate and planted somewhere
/// is non-satisfying; equivalently all solutions lie in the coordinate cube
/// spanned by the two. Strictly stronger than is_maximal; exposed for
/// experimentation.
inline bool is_maximal_strict(const PlantedInstance& inst, const Assignment& candidate,
                              const EnumerateOptions& opts = {}) {
  if (!evaluate(inst.formula, candidate))
    throw PreconditionError("is_maximal_strict: candidate does not satisfy the formula");
  const std::uint64_t cand = candidate.low_word();
  const std::uint64_t plant = inst.planted.low_word();
  bool ok = true;
  detail::for_each_solution(inst.formula, opts, [&](std::uint64_t psi) {
    // psi must agree with candidate or planted on every variable
    if (((psi ^ cand) & (psi ^ plant)) != 0) ok = false;
  });
  return ok;
}

struct MaximalizeResult {
  Assignment assignment;
  std::vector<int> flips;  // variables flipped, in order
};

/// Greedy maximalization: while some variable agreeing with the planted
/// assignment can be flipped without breaking satisfaction, flip the
/// lowest-index one. Each flip moves the assignment one step further from
/// the planted assignment; terminates within n flips.
inline MaximalizeResult maximalize_with_trace(const PlantedInstance& inst,
                                              const Assignment& start) {
  if (!evaluate(inst.formula, start))
    throw PreconditionError("maximalize: start does not satisfy the formula");
  MaximalizeResult r{start, {}};
  const int n = inst.formula.n();
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (int i = 0; i < n; ++i) {
      if (r.assignment.get(i) != inst.planted.get(i)) continue;
      if (flip_breaks_satisfaction(inst.formula, r.assignment, i)) continue;
      r.assignment.flip(i);
      r.flips.push_back(i);
      progressed = true;
      break;  // restart at the lowest index
    }
  }
  return r;
}

inline Assignment maximalize(const PlantedInstance& inst, const Assignment& start) {
  return maximalize_with_trace(inst, start).assignment;
}

/// counts[d] = number of maximal satisfying assignments at distance d from
/// the planted assignment.
inline DistanceProfile maximal_profile(const PlantedInstance& inst,
                                       const EnumerateOptions& opts = {}) {
  DistanceProfile p;
  p.n = inst.formula.n();
  p.counts.assign(static_cast<std::size_t>(p.n) + 1, 0);
  detail::for_each_solution(inst.formula, opts, [&](std::uint64_t m) {
    const Assignment a = Assignment::from_word(p.n, m);
    if (is_maximal(inst, a))
      ++p.counts[static_cast<std::size_t>(hamming(a, inst.planted))];
  });
  return p;
}

}  // namespace satlab
