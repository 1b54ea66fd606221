// Verification formulas and their lowering to CNF and SMT-LIB2.

#ifndef MTBMC_FORMULA_HPP
#define MTBMC_FORMULA_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mtbmc/solver.hpp"
#include "mtbmc/term.hpp"

namespace mtbmc {

struct Selector {
  std::string name;
  Term term;  // asserted only while the selector is assumed
};

struct Formula {
  std::vector<Term> constraints;  // conjunction
  Term property = mk_false();     // disjunction of guarded negated assertions
  std::vector<Selector> selectors;
  unsigned width = 32;

  // constraints AND property, ignoring selectors.
  Term body() const;
};

// Bit-level view of a blasted formula.
struct BlastedFormula {
  Cnf cnf;
  std::map<std::string, std::vector<int>> vars;  // name -> literals, LSB first
  std::map<std::string, Sort> sorts;
  std::map<std::string, int> selector_vars;      // selector name -> variable
  std::vector<int> assumptions;                  // selector variables in Formula order

  // Signed value of a variable in a model; booleans are 0/1.
  std::int64_t value(const SolveResult& r, const std::string& name) const;
  Valuation valuation(const SolveResult& r) const;
};

BlastedFormula bitblast(const Formula& f);

// Incremental term-to-CNF translation; bitblast() is built on it.
class Blaster {
 public:
  Blaster();
  ~Blaster();
  Blaster(const Blaster&) = delete;
  Blaster& operator=(const Blaster&) = delete;

  int lit(const Term& boolean);
  std::vector<int> bits(const Term& bv);
  void assert_true(const Term& boolean);
  int add_selector(const std::string& name, const Term& boolean);
  BlastedFormula& out();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string to_smtlib(const Formula& f);

}  // namespace mtbmc

#endif
