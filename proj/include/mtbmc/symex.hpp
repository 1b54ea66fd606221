// Symbolic execution of interleaved thread CFGs into SSA constraints.
//
// A SymState holds every thread's program counter and path guard plus one
// SSA slot per memory location. Locations are named after the source:
// globals "x", array elements "a[2]", synchronization fields "m.lock", and
// thread locals "t1:x" (thread id 1). Executing an assignment emits the
// equation  loc#n = ite(guard, value, previous)  as an Event.

#ifndef MTBMC_SYMEX_HPP
#define MTBMC_SYMEX_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtbmc/cfg.hpp"
#include "mtbmc/term.hpp"

namespace mtbmc {

enum class ThreadStatus { Free, JoinWait, LockWait, CondWait, Exited };

const char* status_name(ThreadStatus s);

// Raised for programs outside the supported fragment, e.g. create() under a
// symbolic branch condition, or join() on a handle that was never started.
class VerificationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a schedule names a thread that cannot run.
class ScheduleError : public std::logic_error {
  using std::logic_error::logic_error;
};

struct Event {
  enum class Kind { Assign, Assume, Assert };
  Kind kind = Kind::Assign;
  int thread = 0;
  int node = 0;
  Term guard;
  Term lhs;   // Assign: SSA variable
  Term rhs;   // Assign: new value; Assume/Assert: condition
  PropertyKind property = PropertyKind::Assertion;
  std::string location;  // Assign: location name
};

// One executed CFG node, for counterexample rendering.
struct ExecRecord {
  int thread = 0;
  int node = 0;
  Term guard;
  std::size_t first_event = 0;
  std::size_t end_event = 0;
};

struct StepRecord {
  int thread = 0;
  int threads = 1;  // threads created before the step
  std::size_t first_event = 0;
  std::size_t end_event = 0;
};

struct SsaTrace {
  std::vector<Event> events;
  std::vector<StepRecord> steps;
  std::vector<ExecRecord> execs;
  std::vector<int> schedule;  // thread run by each step
  std::vector<std::string> thread_names;
  bool killed = false;        // an assumption folded to false

  std::string key() const;
  bool has_obligations() const;
};

struct SymexOptions {
  unsigned width = 32;
  bool por = true;  // glue invisible instructions to the preceding step
  bool div_by_zero_check = false;
  // Replaces the free variable of each nondet call by a constant.
  std::map<std::string, std::int64_t> nondet_values;
};

struct ThreadState {
  int def_index = -1;
  std::string name;
  int pc = 0;
  ThreadStatus status = ThreadStatus::Free;
  Term guard = mk_true();
  std::map<int, Term> pending;  // guards of forward jumps, by target
  int atomic = 0;

  // Progress inside a multi-phase intrinsic.
  int phase = 0;
  Term unlocked;      // lock: outcome of the first section
  Term wait_bid;      // wait: broadcast counter when the wait started
  std::string mutex;  // lock/wait: mutex being (re)acquired
  int join_target = -1;
};

struct Slot {
  Term ssa;    // latest SSA variable, or the initial constant
  Term value;  // what reads see: a known constant or ssa
};

class SymState {
 public:
  SymState(const UnrolledProgram& prog, SymexOptions opts);

  const UnrolledProgram& program() const { return *prog_; }
  const SymexOptions& options() const { return opts_; }
  unsigned width() const { return opts_.width; }
  const std::vector<ThreadState>& threads() const { return threads_; }
  const ThreadState& thread(int t) const { return threads_[t]; }
  ThreadState& thread(int t) { return threads_[t]; }
  const UnrolledCfg& cfg_of(int t) const { return prog_->cfg_for(threads_[t].def_index); }
  const CfgNode& node_of(int t) const { return cfg_of(t).cfg.nodes[threads_[t].pc]; }
  const SsaTrace& trace() const { return trace_; }
  SsaTrace& trace() { return trace_; }
  bool killed() const { return trace_.killed; }

  int live_threads() const;     // created and not exited (trds_in_run)
  int blocked_threads() const;  // join/lock/cond-wait
  bool all_exited() const { return live_threads() == 0; }

  // Memory.
  Term read(const std::string& loc, Sort sort) const;
  void write(int t, int node, const std::string& loc, const Term& value, const Term& guard);
  // Sets a location without emitting an equation (parameter passing, handles).
  void bind(const std::string& loc, const Term& value);
  Term fresh_nondet(Sort sort);
  std::string local_loc(int t, const std::string& name) const;
  std::string loc_of(int t, const Expr& ident) const;
  Sort sort_of(MtcType type) const;
  Term bv(std::int64_t v) const { return mk_bv(v, opts_.width); }

  // Constraints.
  void emit_assume(int t, int node, const Term& guard, const Term& cond);
  void emit_assert(int t, int node, const Term& guard, const Term& cond, PropertyKind kind);

  int add_thread(int def_index);
  void exit_thread(int t);

  bool node_visible(int t, int pc) const;

 private:
  void init_slots(const std::string& prefix, const std::string& name, MtcType type, const GlobalDecl* g);

  const UnrolledProgram* prog_;
  SymexOptions opts_;
  std::vector<ThreadState> threads_;
  std::map<std::string, Slot> mem_;
  std::map<std::string, int> versions_;
  int nondets_ = 0;
  SsaTrace trace_;
  std::shared_ptr<const std::vector<std::vector<char>>> visible_;  // by def index + 1
};

SymState initial_state(const UnrolledProgram& prog, const SymexOptions& opts);

// Threads that are free, not finished, and whose remaining instructions can
// still do something observable after constant folding.
std::vector<int> enabled(const SymState& s);

// Threads the explorer may run next: free threads plus blocked threads whose
// wake-up condition does not fold to false.
std::vector<int> schedulable(const SymState& s);

// When every live thread is blocked, the thread that performs the global
// deadlock check; -1 otherwise.
int deadlock_candidate(const SymState& s);

// Runs one context-switch-free step of thread t.
void step(SymState& s, int t);

// Replays an explicit schedule from the initial state. Blocked threads named
// by the schedule run their wake-up check; an exited one is a ScheduleError.
SsaTrace execute_interleaving(const UnrolledProgram& prog, const std::vector<int>& schedule,
                              const SymexOptions& opts);

// Evaluates an expression of thread t in the current state.
Term eval_expr(SymState& s, int t, int node, const Expr& e);

struct ExploreStats {
  std::uint64_t states = 0;
  std::uint64_t leaves = 0;    // including duplicates
  std::uint64_t distinct = 0;  // distinct traces handed to the callback
};

// Depth-first enumeration of interleavings in ascending thread order. Each
// distinct trace is handed to on_trace once; returning false stops.
ExploreStats explore(const UnrolledProgram& prog, const SymexOptions& opts,
                     const std::function<bool(SsaTrace&&)>& on_trace);

}  // namespace mtbmc

#endif
