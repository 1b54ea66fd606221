// Acceptance gate: one PASS/FAIL line per criterion.

#include <functional>
#include <iostream>
#include <sstream>

#include "mtbmc/bench.hpp"
#include "support/testkit.hpp"

using namespace mtbmc;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      why << what;
      ok = false;
    }
  }
};

TypedProgram philosophers(int n, BenchVariant v) {
  return testkit::load_text(gen_bench({BenchFamily::Philosophers, n, v}), "phil" + std::to_string(n) + ".mtc");
}

void running_example(Outcome& o) {
  TypedProgram p = testkit::load_corpus("running_example.mtc");
  for (Strategy s : {Strategy::Lazy, Strategy::Schedule, Strategy::Uw}) {
    Report r = testkit::run(p, s);
    o.expect(r.verdict == Verdict::Violated, std::string(strategy_name(s)) + " verdict " + verdict_name(r.verdict));
    o.expect(r.counterexample && r.counterexample->property == PropertyKind::Assertion &&
                 r.counterexample->replay_valid,
             std::string(strategy_name(s)) + " counterexample");
    if (s == Strategy::Lazy)
      o.expect(r.stats.interleavings == 2 && r.stats.failed_interleavings == 1,
               "lazy #I/#IF " + std::to_string(r.stats.interleavings) + "/" +
                   std::to_string(r.stats.failed_interleavings));
    if (s == Strategy::Uw) o.expect(r.stats.iterations == 3, "uw iterations " + std::to_string(r.stats.iterations));
  }
}

void phil_unsat(Outcome& o) {
  const std::uint64_t fact[] = {0, 1, 2, 6, 24, 120};
  for (int n = 2; n <= 5; ++n) {
    TypedProgram p = philosophers(n, BenchVariant::Unsat);
    for (Strategy s : {Strategy::Lazy, Strategy::Schedule, Strategy::Uw}) {
      Report r = testkit::run(p, s);
      o.expect(r.verdict == Verdict::Safe, "n=" + std::to_string(n) + " " + strategy_name(s) + " " + verdict_name(r.verdict));
      if (s == Strategy::Lazy)
        o.expect(r.stats.interleavings == fact[n] && r.stats.failed_interleavings == 0,
                 "n=" + std::to_string(n) + " lazy #I=" + std::to_string(r.stats.interleavings));
    }
  }
}

void phil_sat(Outcome& o) {
  const std::uint64_t fact[] = {0, 1, 2, 6, 24, 120};
  for (int n = 2; n <= 5; ++n) {
    TypedProgram p = philosophers(n, BenchVariant::Sat);
    VerifyConfig cfg = testkit::config(Strategy::Lazy);
    cfg.exhaustive = true;
    Report ex = verify(p, cfg);
    o.expect(ex.verdict == Verdict::Violated && ex.stats.interleavings == fact[n] &&
                 ex.stats.failed_interleavings == fact[n],
             "n=" + std::to_string(n) + " exhaustive #I/#IF " + std::to_string(ex.stats.interleavings) + "/" +
                 std::to_string(ex.stats.failed_interleavings));
    Report early = testkit::run(p, Strategy::Lazy);
    o.expect(early.verdict == Verdict::Violated && early.stats.interleavings >= 1,
             "n=" + std::to_string(n) + " early-stop " + verdict_name(early.verdict));
  }
}

void uw_monotone(Outcome& o) {
  std::uint64_t last = 0;
  std::ostringstream counts;
  for (int n = 2; n <= 5; ++n) {
    Report r = testkit::run(philosophers(n, BenchVariant::Sat), Strategy::Uw);
    counts << (n > 2 ? "," : "") << r.stats.iterations;
    o.expect(r.verdict == Verdict::Violated, "n=" + std::to_string(n) + " " + verdict_name(r.verdict));
    o.expect(r.stats.iterations >= last, "iterations decrease at n=" + std::to_string(n));
    last = r.stats.iterations;
  }
  if (!o.ok) o.why << " (iterations " << counts.str() << ")";
}

void from_check(Outcome& o, const testkit::Check& c, const std::string& name) {
  o.expect(c.ok, name + ": " + c.detail);
}

void deadlocks(Outcome& o) { from_check(o, testkit::deadlock_suite(), "deadlock suite"); }

void properties(Outcome& o) {
  from_check(o, testkit::cross_strategy_agreement(), "cross-strategy");
  from_check(o, testkit::por_agreement(), "por");
  from_check(o, testkit::solver_soundness(400, 11), "solver soundness");
  from_check(o, testkit::smtlib_vs_z3(), "smtlib vs z3");
  from_check(o, testkit::oracle_agreement(150, 1000), "oracle");
  from_check(o, testkit::cnf_truth_table(300, 23), "truth table");
}

void determinism(Outcome& o) { from_check(o, testkit::report_determinism(), "determinism"); }

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"running example", running_example},
      {"philosophers unsat n=2..5", phil_unsat},
      {"philosophers sat n=2..5", phil_sat},
      {"uw iterations monotone", uw_monotone},
      {"deadlock suite", deadlocks},
      {"property suite", properties},
      {"deterministic reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first;
    if (!o.ok) std::cout << " -- " << o.why.str();
    std::cout << std::endl;
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
