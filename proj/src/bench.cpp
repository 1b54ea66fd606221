#include "mtbmc/bench.hpp"

#include <sstream>
#include <stdexcept>

namespace mtbmc {

std::optional<BenchFamily> bench_family_from_name(const std::string& s) {
  if (s == "philosophers") return BenchFamily::Philosophers;
  if (s == "lock-order") return BenchFamily::LockOrder;
  if (s == "signal-handshake") return BenchFamily::SignalHandshake;
  return std::nullopt;
}

std::optional<BenchVariant> bench_variant_from_name(const std::string& s) {
  if (s == "unsat") return BenchVariant::Unsat;
  if (s == "sat") return BenchVariant::Sat;
  if (s == "buggy") return BenchVariant::Buggy;
  return std::nullopt;
}

namespace {

// main: start every thread, then wait for all of them.
void spawn_and_join(std::ostringstream& os, int n, const std::string& thread, bool with_id) {
  os << "main {\n";
  for (int k = 0; k < n; ++k) os << "  thread_t h" << k << ";\n";
  for (int k = 0; k < n; ++k) {
    os << "  create(h" << k << ", " << (with_id ? thread : thread + std::to_string(k));
    if (with_id) os << ", " << k;
    os << ");\n";
  }
  for (int k = 0; k < n; ++k) os << "  join(h" << k << ");\n";
}

std::string philosophers(int n, BenchVariant v) {
  std::ostringstream os;
  os << "int forks[" << n << "];\n"
     << "int ate[" << n << "];\n"
     << "int eating;\n\n"
     << "thread phil(int id) {\n"
     << "  int left;\n"
     << "  int right;\n"
     << "  left = id;\n"
     << "  right = (id + 1) % " << n << ";\n"
     << "  atomic_begin();\n"
     << "  assume(forks[left] == 0 && forks[right] == 0);\n"
     << "  forks[left] = 1;\n"
     << "  forks[right] = 1;\n"
     << "  eating = eating + 1;\n";
  if (v == BenchVariant::Unsat) {
    if (n == 1)
      os << "  assert(eating <= 1);\n";
    else
      os << "  assert(eating != " << n << ");\n";
  }
  os << "  ate[id] = 1;\n"
     << "  eating = eating - 1;\n"
     << "  forks[left] = 0;\n"
     << "  forks[right] = 0;\n"
     << "  atomic_end();\n"
     << "}\n\n";
  spawn_and_join(os, n, "phil", true);
  if (v != BenchVariant::Unsat) {
    os << "  assert(!(";
    for (int k = 0; k < n; ++k) os << (k ? " && " : "") << "ate[" << k << "] == 1";
    os << "));\n";
  }
  os << "}\n";
  return os.str();
}

std::string lock_order(int n, BenchVariant v) {
  std::ostringstream os;
  const int locks = n < 2 ? 2 : n;
  for (int k = 0; k < locks; ++k) os << "mutex m" << k << ";\n";
  os << "int shared;\n\n";
  for (int k = 0; k < n; ++k) {
    int first = k % locks;
    int second = (k + 1) % locks;
    if (v == BenchVariant::Unsat && first > second) std::swap(first, second);
    os << "thread T" << k << "() {\n"
       << "  lock(m" << first << ");\n"
       << "  lock(m" << second << ");\n"
       << "  shared = shared + 1;\n"
       << "  unlock(m" << second << ");\n"
       << "  unlock(m" << first << ");\n"
       << "}\n\n";
  }
  spawn_and_join(os, n, "T", false);
  os << "}\n";
  return os.str();
}

std::string signal_handshake(int n, BenchVariant v) {
  std::ostringstream os;
  os << "mutex m;\n"
     << "cond c;\n"
     << "int ready;\n\n"
     << "thread waiter() {\n"
     << "  lock(m);\n"
     << "  while (ready == 0) {\n"
     << "    wait(c, m);\n"
     << "  }\n"
     << "  unlock(m);\n"
     << "}\n\n"
     << "thread notifier() {\n"
     << "  lock(m);\n"
     << "  ready = 1;\n";
  if (v != BenchVariant::Buggy) os << (n == 1 ? "  signal(c);\n" : "  broadcast(c);\n");
  os << "  unlock(m);\n"
     << "}\n\n"
     << "main {\n";
  for (int k = 0; k < n; ++k) os << "  thread_t w" << k << ";\n";
  os << "  thread_t s;\n";
  for (int k = 0; k < n; ++k) os << "  create(w" << k << ", waiter);\n";
  os << "  create(s, notifier);\n";
  for (int k = 0; k < n; ++k) os << "  join(w" << k << ");\n";
  os << "  join(s);\n";
  if (v == BenchVariant::Sat) os << "  assert(ready == 0);\n";
  os << "}\n";
  return os.str();
}

}  // namespace

std::string gen_bench(const BenchSpec& spec) {
  if (spec.size < 1) throw std::invalid_argument("benchmark size must be at least 1");
  switch (spec.family) {
    case BenchFamily::Philosophers: return philosophers(spec.size, spec.variant);
    case BenchFamily::LockOrder: return lock_order(spec.size, spec.variant);
    case BenchFamily::SignalHandshake: return signal_handshake(spec.size, spec.variant);
  }
  throw std::invalid_argument("unknown benchmark family");
}

}  // namespace mtbmc
