// The three verification drivers and their common report.
//
//   lazy      one formula per interleaving, stops at the first failure
//   schedule  all interleavings in one formula gated by ts_i guards
//   uw        the schedule formula under control literals, widened by cores

#ifndef MTBMC_STRATEGIES_HPP
#define MTBMC_STRATEGIES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtbmc/encoder.hpp"
#include "mtbmc/frontend.hpp"

namespace mtbmc {

enum class Strategy { Lazy, Schedule, Uw };

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

struct VerifyConfig {
  Strategy strategy = Strategy::Lazy;
  unsigned unwind = 10;
  bool unwinding_assertions = true;
  unsigned width = 32;
  bool por = true;
  std::uint64_t seed = 0;
  std::int64_t conflict_limit = -1;
  bool exhaustive = false;  // lazy: keep going after the first failure
  std::size_t max_core = 500;
  bool div_by_zero_check = false;
  std::string dump_smtlib;  // directory, empty for none
  std::string dump_cnf;
};

enum class Verdict { Safe, Violated, BoundInsufficient, ResourceOut };

const char* verdict_name(Verdict v);
int exit_code(Verdict v);

struct TraceLine {
  int index = 0;
  int thread = 0;
  std::string thread_name;
  int line = 0;
  std::string stmt;
  std::vector<std::pair<std::string, std::int64_t>> values;  // locations written, post-state
};

struct Counterexample {
  std::vector<int> schedule;
  std::map<std::string, std::int64_t> nondet;
  std::vector<TraceLine> lines;
  PropertyKind property = PropertyKind::Assertion;
  int thread = 0;
  int line = 0;
  bool replay_valid = false;
};

struct Stats {
  std::uint64_t interleavings = 0;
  std::uint64_t failed_interleavings = 0;
  std::uint64_t iterations = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t states = 0;
  std::uint64_t core_fallbacks = 0;  // UW iterations that relaxed every literal
  std::uint64_t wall_time_ms = 0;
};

struct Report {
  Verdict verdict = Verdict::Safe;
  Strategy strategy = Strategy::Lazy;
  std::string origin;
  std::optional<Counterexample> counterexample;
  Stats stats;
};

Report verify_lazy(const TypedProgram& p, const VerifyConfig& cfg);
Report verify_schedule(const TypedProgram& p, const VerifyConfig& cfg);
Report verify_uw(const TypedProgram& p, const VerifyConfig& cfg);
Report verify(const TypedProgram& p, const VerifyConfig& cfg);

// Human-readable and key=value renderings.
std::string format_human(const Report& r, bool trace);
std::string format_machine(const Report& r, bool trace);
std::string format_trace_line(const TraceLine& l, const std::string& origin);

}  // namespace mtbmc

#endif
