// Shared helpers for the unit, property and acceptance tests.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "../oracle/oracle.hpp"
#include "mtbmc/frontend.hpp"
#include "mtbmc/solver.hpp"
#include "mtbmc/strategies.hpp"

namespace testkit {

std::string corpus_dir();
std::vector<std::string> corpus_files();  // sorted
std::string read_file(const std::string& path);
mtbmc::TypedProgram load_text(const std::string& text, const std::string& origin = "test.mtc");
mtbmc::TypedProgram load_corpus(const std::string& name);  // file name inside the corpus dir

mtbmc::VerifyConfig config(mtbmc::Strategy s, unsigned width = 32, bool por = true, unsigned unwind = 10);
mtbmc::Report run(const mtbmc::TypedProgram& p, mtbmc::Strategy s, unsigned width = 32, bool por = true,
                  unsigned unwind = 10);

// Every distinct interleaving of the program, in exploration order.
std::vector<mtbmc::SsaTrace> traces(const mtbmc::TypedProgram& p, unsigned width = 32, bool por = true,
                                    unsigned unwind = 10);
// Blasts and solves with the internal solver; selectors are assumed.
bool satisfiable(const mtbmc::Formula& f);

// External solver; nullopt when no z3 binary was found at configure time.
std::optional<std::string> z3_path();
std::string run_z3(const std::string& smtlib);  // "sat", "unsat", or the raw answer
// Runs the command-line tool, returning its exit status and standard output.
int run_cli(const std::string& args, std::string& out);

mtbmc::Cnf random_cnf(std::mt19937_64& rng, int vars, int clauses, int max_len = 3);
bool brute_force_sat(const mtbmc::Cnf& cnf, const std::vector<int>& assumptions = {});

// Small programs for the explicit-state comparison: at most three threads
// (main included), at most four statements per thread.
oracle::Prog random_program(std::uint64_t seed);

struct Check {
  bool ok = true;
  std::string detail;  // first failure
  int cases = 0;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Check cross_strategy_agreement();
Check por_agreement();
Check solver_soundness(int instances, std::uint64_t seed);
Check smtlib_vs_z3();
Check oracle_agreement(int programs, std::uint64_t seed);
Check cnf_truth_table(int instances, std::uint64_t seed);
Check deadlock_suite();
Check report_determinism();

}  // namespace testkit
