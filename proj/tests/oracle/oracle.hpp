// Explicit-state reference checker for small MTC programs.
//
// Programs are built with the structures below, printed to MTC text for the
// tool under test, and executed concretely here: every interleaving of
// single statements and every value of every nondet call is enumerated.

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Ex {
  enum class K { Const, Var, Bin, Un } k = K::Const;
  std::int64_t v = 0;
  std::string name;  // Var
  std::string op;    // Bin, Un
  std::vector<Ex> a;
};

Ex C(std::int64_t v);
Ex V(const std::string& name);
Ex B(const std::string& op, Ex l, Ex r);
Ex U(const std::string& op, Ex e);

struct St {
  enum class K {
    Assign, Nondet, Assert, Assume, If, While,
    Lock, Unlock, Wait, Signal, Broadcast, Create, Join, AtomicBegin, AtomicEnd,
  } k = K::Assign;
  std::string var;    // Assign/Nondet target, mutex, cond, or thread handle
  std::string other;  // Wait: mutex; Create: thread name
  Ex e;               // value, condition, or create argument
  bool has_arg = false;
  std::vector<St> body;
  std::vector<St> else_body;
};

St assign(const std::string& v, Ex e);
St nondet(const std::string& v);
St assert_(Ex e);
St assume(Ex e);
St if_(Ex c, std::vector<St> then, std::vector<St> otherwise = {});
St while_(Ex c, std::vector<St> body);
St lock(const std::string& m);
St unlock(const std::string& m);
St wait(const std::string& c, const std::string& m);
St signal(const std::string& c);
St broadcast(const std::string& c);
St create(const std::string& handle, const std::string& thread);
St create(const std::string& handle, const std::string& thread, Ex arg);
St join(const std::string& handle);
St atomic_begin();
St atomic_end();

struct Thread {
  std::string name;
  std::string param;  // empty for none
  std::vector<std::string> locals;
  std::vector<std::string> handles;
  std::vector<St> body;
};

struct Prog {
  std::vector<std::pair<std::string, std::int64_t>> globals;
  std::vector<std::string> mutexes;
  std::vector<std::string> conds;
  std::vector<Thread> threads;
  Thread main;
};

std::string to_mtc(const Prog& p);

struct Outcome {
  std::set<std::string> violations;  // property tags reached
  bool unwinding = false;            // some loop ran past the bound
  std::uint64_t states = 0;

  // "SAFE", "VIOLATED" or "BOUND-INSUFFICIENT".
  std::string verdict() const;
};

Outcome check(const Prog& p, unsigned width, unsigned unwind = 10, bool unwinding_assertions = true);

}  // namespace oracle
