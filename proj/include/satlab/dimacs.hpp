#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "satlab/core.hpp"
#include "satlab/errors.hpp"

namespace satlab {

/// Result of parsing a DIMACS file: the formula plus the planted assignment
/// if a "c planted <bits>" comment was present.
struct DimacsFile {
  Formula formula;
  std::optional<Assignment> planted;
};

/// Writes standard DIMACS CNF: optional "c planted <bitstring>" comment,
/// "p cnf <n> <m>" header, one clause per line as 1-based signed integers
/// terminated by 0. Clause order and duplicates are preserved.
inline void write_dimacs(const Formula& f, std::ostream& os,
                         const std::optional<Assignment>& planted = std::nullopt) {
  if (planted && planted->n() != f.n())
    throw DimensionMismatch("write_dimacs: planted n != formula n");
  if (planted) os << "c planted " << planted->to_bit_string() << "\n";
  os << "p cnf " << f.n() << " " << f.m() << "\n";
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals()) os << (l.positive ? l.var + 1 : -(l.var + 1)) << " ";
    os << "0\n";
  }
  if (!os) throw ParseError("write_dimacs: stream write failed");
}

inline void write_dimacs(const PlantedInstance& inst, std::ostream& os) {
  write_dimacs(inst.formula, os, inst.planted);
}

inline void write_dimacs_file(const Formula& f, const std::string& path,
                              const std::optional<Assignment>& planted = std::nullopt) {
  std::ofstream os(path);
  if (!os) throw ParseError("write_dimacs: cannot open " + path);
  write_dimacs(f, os, planted);
}

inline void write_dimacs_file(const PlantedInstance& inst, const std::string& path) {
  write_dimacs_file(inst.formula, path, inst.planted);
}

/// Parses DIMACS CNF. Literals are 1-based in the file, 0-based in memory.
/// Clause width must be uniform (it becomes the formula's k; an empty
/// formula gets k = 0). The clause count must match the header.
inline DimacsFile read_dimacs(std::istream& is) {
  std::string line;
  int n = -1;
  std::int64_t m = -1;
  std::optional<std::string> planted_bits;
  std::vector<std::vector<int>> raw_clauses;
  std::vector<int> current;
  bool in_clauses = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') {
      std::istringstream ls(line);
      std::string c, tag;
      ls >> c >> tag;
      if (tag == "planted") {
        std::string bits;
        ls >> bits;
        if (bits.empty()) throw ParseError("read_dimacs: malformed planted comment");
        planted_bits = bits;
      }
      continue;
    }
    if (line[0] == 'p') {
      if (in_clauses || n >= 0) throw ParseError("read_dimacs: duplicate or late header");
      std::istringstream ls(line);
      std::string p, cnf;
      ls >> p >> cnf >> n >> m;
      if (!ls || cnf != "cnf" || n <= 0 || m < 0) throw ParseError("read_dimacs: bad header");
      continue;
    }
    if (n < 0) throw ParseError("read_dimacs: clause before header");
    in_clauses = true;
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw ParseError("read_dimacs: empty clause");
        raw_clauses.push_back(current);
        current.clear();
      } else {
        const int var = std::abs(lit) - 1;
        if (var >= n) throw ParseError("read_dimacs: literal out of range");
        current.push_back(lit);
      }
    }
    if (!ls.eof() && ls.fail()) {
      ls.clear();
      std::string junk;
      if (ls >> junk) throw ParseError("read_dimacs: unexpected token '" + junk + "'");
    }
  }
  if (n < 0) throw ParseError("read_dimacs: missing header");
  if (!current.empty()) throw ParseError("read_dimacs: unterminated clause");
  if (static_cast<std::int64_t>(raw_clauses.size()) != m)
    throw ParseError("read_dimacs: clause count disagrees with header");

  const int k = raw_clauses.empty() ? 0 : static_cast<int>(raw_clauses.front().size());
  Formula f(n, k);
  for (const auto& raw : raw_clauses) {
    if (static_cast<int>(raw.size()) != k) throw ParseError("read_dimacs: mixed clause widths");
    std::vector<Literal> lits;
    lits.reserve(raw.size());
    for (int lit : raw) lits.push_back({std::abs(lit) - 1, lit > 0});
    try {
      f.add_clause(Clause(std::move(lits)));
    } catch (const PreconditionError& e) {
      throw ParseError(std::string("read_dimacs: ") + e.what());
    }
  }

  DimacsFile out{std::move(f), std::nullopt};
  if (planted_bits) {
    if (static_cast<int>(planted_bits->size()) != n)
      throw ParseError("read_dimacs: planted bitstring length != n");
    out.planted = Assignment::from_bits(*planted_bits);
  }
  return out;
}

inline DimacsFile read_dimacs_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("read_dimacs: cannot open " + path);
  return read_dimacs(is);
}

}  // namespace satlab
