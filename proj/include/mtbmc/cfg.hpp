// Per-thread control-flow graphs and bounded loop unrolling.
//
// A ThreadCfg is a goto-program: a node list in program order where control
// falls through to the next node unless a Goto node with a true condition
// jumps. Branch tests are pure; side effects inside expressions (nested
// assignments, nondet calls) are hoisted into separate nodes ahead of the
// test. After unroll() every jump is forward.

#ifndef MTBMC_CFG_HPP
#define MTBMC_CFG_HPP

#include <string>
#include <vector>

#include "mtbmc/frontend.hpp"

namespace mtbmc {

enum class PropertyKind { Assertion, Unwinding, Deadlock, BadUnlock, BadWait, DivByZero };

const char* property_tag(PropertyKind k);

enum class NodeKind { Assign, Assert, Assume, Goto, Intrinsic, Skip, End };

struct CfgNode {
  NodeKind kind = NodeKind::Skip;
  ExprPtr lhs;   // Assign: Ident or Index lvalue
  ExprPtr expr;  // Assign rhs, Assert/Assume/Goto condition (null Goto = unconditional), Intrinsic call
  int target = -1;
  PropertyKind property = PropertyKind::Assertion;
  bool loop_test = false;  // Goto leaving a loop
  SourceLoc loc;
  std::string text;
};

struct CfgEdge {
  enum class Polarity { Always, True, False };
  int from;
  int to;
  Polarity polarity;
};

struct ThreadCfg {
  std::string name;
  int def_index = -1;  // into TypedProgram::threads(), -1 for main
  std::vector<CfgNode> nodes;  // last node is End
  // Locals introduced by hoisting, numbered after the thread's own locals.
  std::vector<LocalVar> temps;

  std::vector<CfgEdge> edges() const;
  bool acyclic() const;
};

struct UnrolledCfg {
  ThreadCfg cfg;
  unsigned bound = 0;
  bool unwinding_assertions = true;
};

struct CfgSet {
  std::vector<ThreadCfg> threads;  // parallel to TypedProgram::threads()
  ThreadCfg entry;
};

struct UnrolledProgram {
  const TypedProgram* program = nullptr;
  std::vector<UnrolledCfg> threads;
  UnrolledCfg entry;

  // def_index -1 selects the entry.
  const UnrolledCfg& cfg_for(int def_index) const { return def_index < 0 ? entry : threads[def_index]; }
};

CfgSet build_cfg(const TypedProgram& p);
ThreadCfg build_thread_cfg(const TypedProgram& p, int def_index);
UnrolledCfg unroll(const ThreadCfg& cfg, unsigned k, bool unwinding_assertions);
UnrolledProgram unroll_program(const TypedProgram& p, unsigned k, bool unwinding_assertions);

std::string dump_cfg(const ThreadCfg& cfg);

}  // namespace mtbmc

#endif
