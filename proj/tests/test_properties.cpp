#include "doctest.h"

#include "mtbmc/bench.hpp"
#include "mtbmc/encoder.hpp"
#include "support/testkit.hpp"

using namespace mtbmc;

namespace {

void require_ok(const testkit::Check& c) {
  INFO(c.cases << " cases");
  CHECK_MESSAGE(c.ok, c.detail);
}

}  // namespace

TEST_CASE("strategies agree on the corpus") { require_ok(testkit::cross_strategy_agreement()); }

TEST_CASE("reduction keeps verdicts") { require_ok(testkit::por_agreement()); }

TEST_CASE("solver models and cores are sound") { require_ok(testkit::solver_soundness(300, 101)); }

TEST_CASE("truth table agreement") { require_ok(testkit::cnf_truth_table(300, 202)); }

TEST_CASE("internal and external solver agree") {
  if (!testkit::z3_path()) {
    MESSAGE("z3 not found; skipped");
    return;
  }
  require_ok(testkit::smtlib_vs_z3());
}

TEST_CASE("explicit-state agreement on small programs") { require_ok(testkit::oracle_agreement(120, 5000)); }

TEST_CASE("deadlock suite") { require_ok(testkit::deadlock_suite()); }

TEST_CASE("machine reports are reproducible") { require_ok(testkit::report_determinism()); }

TEST_CASE("a bound beyond every loop does not change the verdict") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    oracle::Prog p = testkit::random_program(seed);
    TypedProgram tp = testkit::load_text(oracle::to_mtc(p));
    const unsigned k = 4;
    if (oracle::check(p, 3, k).unwinding) continue;  // bound k is not sufficient
    Report a = testkit::run(tp, Strategy::Lazy, 3, true, k);
    Report b = testkit::run(tp, Strategy::Lazy, 3, true, k + 1);
    CHECK_MESSAGE(a.verdict == b.verdict, oracle::to_mtc(p));
  }
}

TEST_CASE("sync fields stay in range in every model of a safe schedule formula") {
  for (const auto& src : {testkit::read_file(testkit::corpus_dir() + "/lock_order_ok.mtc"),
                          testkit::read_file(testkit::corpus_dir() + "/signal_handshake.mtc"),
                          gen_bench({BenchFamily::LockOrder, 3, BenchVariant::Unsat})}) {
    TypedProgram p = testkit::load_text(src);
    auto traces = testkit::traces(p, 8);
    Schedule sched = build_schedule(traces, 8);
    Formula f = encode_schedule(sched, 8).formula;
    f.property = mk_true();
    BlastedFormula b = bitblast(f);
    SolveResult r = solve(b.cnf);
    REQUIRE(r.status == SolveStatus::Sat);
    for (const auto& [name, lits] : b.vars) {
      const auto dot = name.find('.');
      if (dot == std::string::npos) continue;
      const std::string field = name.substr(dot + 1, name.find('#') - dot - 1);
      const std::int64_t v = b.value(r, name);
      if (field == "lock") CHECK_MESSAGE((v == 0 || v == 1), name);
      if (field == "count" || field == "nwaiters") CHECK_MESSAGE((v >= 0 && v <= sched.num_threads), name);
    }
  }
}

TEST_CASE("philosophers interleaving counts are factorials") {
  std::uint64_t fact = 1;
  for (int n = 1; n <= 5; ++n) {
    fact *= n;
    Report r = testkit::run(testkit::load_text(gen_bench({BenchFamily::Philosophers, n, BenchVariant::Unsat})),
                            Strategy::Lazy);
    CHECK(r.verdict == Verdict::Safe);
    CHECK(r.stats.interleavings == fact);
  }
}
