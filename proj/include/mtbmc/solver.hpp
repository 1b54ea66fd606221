// CDCL SAT solver with assumptions and final-conflict unsat cores.
//
// Literals use DIMACS conventions: variable v >= 1 is literal v, its
// negation is -v.

#ifndef MTBMC_SOLVER_HPP
#define MTBMC_SOLVER_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace mtbmc {

struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<int> selectors;  // variables meant to be passed as assumptions

  int new_var() { return ++num_vars; }
  void add(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
  std::string to_dimacs() const;
};

Cnf parse_dimacs(const std::string& text);

struct SolverOptions {
  std::uint64_t seed = 0;
  std::int64_t conflict_limit = -1;  // negative: unlimited
};

enum class SolveStatus { Sat, Unsat, ResourceOut };

struct SolveStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnts = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::ResourceOut;
  std::vector<bool> model;  // indexed by variable, entry 0 unused
  std::vector<int> core;    // failed assumptions, in the order they were passed
  SolveStats stats;

  bool value(int var) const { return var > 0 && var < static_cast<int>(model.size()) && model[var]; }
  bool lit_true(int lit) const { return lit > 0 ? value(lit) : !value(-lit); }
};

SolveResult solve(const Cnf& cnf, const std::vector<int>& assumptions = {}, const SolverOptions& opts = {});

bool satisfies(const Cnf& cnf, const std::vector<bool>& model);

}  // namespace mtbmc

#endif
