// Verification conditions over SSA traces.
//
// encode_lazy() turns one interleaving into a formula; encode_schedule()
// merges many interleavings into a trie of effective-context-switch (ECS)
// blocks, gating each block's equations with thread-selection guards
// ts_i = j; encode_uw() adds named selectors that force chosen guard
// conjunctions false.

#ifndef MTBMC_ENCODER_HPP
#define MTBMC_ENCODER_HPP

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mtbmc/formula.hpp"
#include "mtbmc/symex.hpp"

namespace mtbmc {

// One guarded negated assertion: satisfiable iff the assertion can fail.
struct Obligation {
  Term term;
  PropertyKind kind = PropertyKind::Assertion;
  int thread = 0;
  int node = 0;
  std::size_t event = 0;  // index into the trace's events
  int block = -1;         // trie node (schedule encoding only)
};

enum class ObligationSet { Real, Unwinding };

bool in_set(PropertyKind k, ObligationSet set);

struct TraceEncoding {
  std::vector<Term> equations;
  std::vector<Obligation> obligations;
};

TraceEncoding encode_trace(const SsaTrace& trace);

Formula encode_lazy(const SsaTrace& trace, unsigned width, ObligationSet set = ObligationSet::Real);

// A maximal run of event-bearing steps of one thread.
struct EcsBlock {
  int thread = 0;
  std::size_t first_step = 0;
  std::size_t end_step = 0;
  std::size_t first_event = 0;
  std::size_t end_event = 0;
  bool scheduled = false;  // at least two threads existed when it started
};

std::vector<EcsBlock> ecs_blocks(const SsaTrace& trace);

struct ScheduleNode {
  int parent = -1;
  int depth = 0;        // number of ts variables on the path, this one included
  int thread = 0;
  int ts_index = 0;     // 1-based, 0 when the block needs no selection
  int alternative = -1; // disambiguates siblings of the same thread, -1 if unique
  Term local;           // this node's own selection constraint
  Term guard;           // conjunction of local constraints along the path
  std::size_t trace = 0;  // first trace through this node
  std::size_t block = 0;  // block index within that trace
  std::vector<int> children;
  std::unordered_map<std::string, std::string> names;  // trace variable -> renamed
};

struct Schedule {
  std::vector<SsaTrace> traces;
  std::vector<ScheduleNode> nodes;  // nodes[0] is the root (empty block)
  int num_ts = 0;                   // B
  int num_threads = 0;
  unsigned ts_width = 2;

  static std::string ts_name(int i) { return "ts" + std::to_string(i); }
};

Schedule build_schedule(std::vector<SsaTrace> traces, unsigned width);

struct ScheduleEncoding {
  Formula formula;
  std::vector<Obligation> obligations;
};

// extra: further SCH constraints over the ts variables.
ScheduleEncoding encode_schedule(const Schedule& sched, unsigned width, ObligationSet set = ObligationSet::Real,
                                 const std::vector<Term>& extra = {});

struct ControlLiteral {
  std::string name;
  Term guard;
  int node = 0;
};

struct ControlLiteralSet {
  std::vector<ControlLiteral> literals;  // ordered by block depth
  std::vector<bool> active;

  std::size_t active_count() const;
  int find(const std::string& name) const;
};

// One literal per trie node that carries a selection guard.
ControlLiteralSet control_literals(const Schedule& sched);

Formula encode_uw(const Formula& base, const ControlLiteralSet& lits);

// The trie path a model selects, root excluded.
std::vector<int> decode_path(const Schedule& sched, const std::function<std::int64_t(const std::string&)>& value);

}  // namespace mtbmc

#endif
