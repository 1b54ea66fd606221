#include "doctest.h"

#include <random>

#include "mtbmc/encoder.hpp"
#include "support/testkit.hpp"

using namespace mtbmc;

namespace {

struct Solved {
  BlastedFormula b;
  SolveResult r;
  bool sat() const { return r.status == SolveStatus::Sat; }
  std::int64_t value(const std::string& name) const { return b.value(r, name); }
};

Solved solve_formula(const Formula& f, std::vector<int> assumptions = {}) {
  Solved s{bitblast(f), {}};
  if (assumptions.empty()) assumptions = s.b.assumptions;
  s.r = solve(s.b.cnf, assumptions);
  return s;
}

std::vector<SsaTrace> example_traces() { return testkit::traces(testkit::load_corpus("running_example.mtc"), 8); }

Term ts(int i, unsigned w) { return mk_var(Schedule::ts_name(i), Sort::bv(w)); }

}  // namespace

TEST_CASE("lazy formulas of the running example") {
  auto tr = example_traces();
  REQUIRE(tr.size() == 2);
  CHECK_FALSE(solve_formula(encode_lazy(tr[0], 8)).sat());  // {Y1}
  Solved s = solve_formula(encode_lazy(tr[1], 8));         // {Y1, X0, X1}
  REQUIRE(s.sat());
  std::int64_t i = s.value("i#1");
  CHECK((i < 0 || i >= 10));
}

TEST_CASE("a trace without obligations is unsatisfiable") {
  auto tr = testkit::traces(testkit::load_text("int x; main { x = 1; }"), 8);
  REQUIRE(tr.size() == 1);
  Formula f = encode_lazy(tr[0], 8);
  CHECK(f.property.is_false());
  CHECK_FALSE(solve_formula(f).sat());
  CHECK_FALSE(solve_formula(encode_lazy(SsaTrace{}, 8)).sat());
}

TEST_CASE("obligations carry their kind and thread") {
  auto tr = example_traces();
  TraceEncoding enc = encode_trace(tr[1]);
  REQUIRE(enc.obligations.size() == 1);
  CHECK(enc.obligations[0].kind == PropertyKind::Assertion);
  CHECK(enc.obligations[0].thread == 1);
  CHECK(in_set(PropertyKind::Deadlock, ObligationSet::Real));
  CHECK_FALSE(in_set(PropertyKind::Unwinding, ObligationSet::Real));
  CHECK(in_set(PropertyKind::Unwinding, ObligationSet::Unwinding));
}

TEST_CASE("effective context switch blocks") {
  auto tr = example_traces();
  auto blocks = ecs_blocks(tr[1]);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].thread == 0);
  CHECK_FALSE(blocks[0].scheduled);  // only main existed
  CHECK(blocks[1].thread == 2);
  CHECK(blocks[1].scheduled);
  CHECK(blocks[2].thread == 1);
  CHECK(blocks[2].scheduled);
}

TEST_CASE("schedule guards of the running example") {
  Schedule sched = build_schedule(example_traces(), 8);
  CHECK(sched.num_ts == 2);
  CHECK(sched.num_threads == 3);
  CHECK(sched.ts_width >= 2);
  const unsigned w = sched.ts_width;
  const Term y_guard = mk_eq(ts(1, w), mk_bv(2, w));
  const Term x_guard = mk_and(y_guard, mk_eq(ts(2, w), mk_bv(1, w)));
  int y_node = -1, x_node = -1;
  for (std::size_t n = 0; n < sched.nodes.size(); ++n) {
    if (sched.nodes[n].thread == 2) y_node = static_cast<int>(n);
    if (sched.nodes[n].thread == 1) x_node = static_cast<int>(n);
  }
  REQUIRE(y_node > 0);
  REQUIRE(x_node > 0);
  CHECK(sched.nodes[y_node].guard == y_guard);
  CHECK(sched.nodes[x_node].guard == x_guard);
  CHECK(sched.nodes[x_node].parent == y_node);

  ScheduleEncoding enc = encode_schedule(sched, 8);
  Solved s = solve_formula(enc.formula);
  REQUIRE(s.sat());
  CHECK(s.value("ts1") == 2);
  CHECK(s.value("ts2") == 1);
  auto path = decode_path(sched, [&](const std::string& n) { return s.value(n); });
  CHECK(path.back() == x_node);
}

TEST_CASE("extra schedule constraints remove interleavings") {
  Schedule sched = build_schedule(example_traces(), 8);
  const unsigned w = sched.ts_width;
  const Term only_y = mk_and(mk_eq(ts(1, w), mk_bv(2, w)), mk_not(mk_eq(ts(2, w), mk_bv(1, w))));
  CHECK_FALSE(solve_formula(encode_schedule(sched, 8, ObligationSet::Real, {only_y}).formula).sat());
  const Term y_then_x = mk_and(mk_eq(ts(1, w), mk_bv(2, w)), mk_eq(ts(2, w), mk_bv(1, w)));
  CHECK(solve_formula(encode_schedule(sched, 8, ObligationSet::Real, {y_then_x}).formula).sat());
}

TEST_CASE("every model picks valid thread ids") {
  for (const auto& f : testkit::corpus_files()) {
    auto tr = testkit::traces(testkit::load_text(testkit::read_file(f), f), 8);
    Schedule sched = build_schedule(tr, 8);
    ScheduleEncoding enc = encode_schedule(sched, 8);
    Formula relaxed = enc.formula;
    relaxed.property = mk_true();  // any execution, failing or not
    Solved s = solve_formula(relaxed);
    if (!s.sat()) continue;
    for (int i = 1; i <= sched.num_ts; ++i) {
      std::int64_t v = s.value(Schedule::ts_name(i));
      CHECK(v >= 0);
      CHECK(v < sched.num_threads);
    }
  }
}

TEST_CASE("one thread: the schedule formula is the lazy formula") {
  auto tr = testkit::traces(testkit::load_text("int x; main { x = nondet_int(); assert(x != 3); }"), 8);
  REQUIRE(tr.size() == 1);
  Schedule sched = build_schedule(tr, 8);
  CHECK(sched.num_ts == 0);
  CHECK(solve_formula(encode_schedule(sched, 8).formula).sat() == solve_formula(encode_lazy(tr[0], 8)).sat());
}

TEST_CASE("control literals name the selection guards") {
  Schedule sched = build_schedule(example_traces(), 8);
  ControlLiteralSet lits = control_literals(sched);
  REQUIRE(lits.literals.size() == 2);
  CHECK(lits.literals[0].name == "l_Ty_2");
  CHECK(lits.literals[1].name == "l_Tx_3");
  CHECK(lits.literals[0].guard == sched.nodes[lits.literals[0].node].guard);
  CHECK(lits.active_count() == 2);
  CHECK(lits.find("l_Tx_3") == 1);
  CHECK(lits.find("l_nope") == -1);

  Formula base = encode_schedule(sched, 8).formula;
  Formula uw = encode_uw(base, lits);
  CHECK(uw.selectors.size() == 2);
  Solved all_on = solve_formula(uw);
  REQUIRE_FALSE(all_on.sat());
  CHECK_FALSE(all_on.r.core.empty());

  ControlLiteralSet none = lits;
  none.active.assign(none.active.size(), false);
  Formula plain = encode_uw(base, none);
  CHECK(plain.selectors.empty());
  CHECK(plain.constraints == base.constraints);
  CHECK(plain.property == base.property);
}

TEST_CASE("forcing guards false only removes behaviour") {
  std::mt19937_64 rng(5);
  for (const auto& f : testkit::corpus_files()) {
    auto tr = testkit::traces(testkit::load_text(testkit::read_file(f), f), 8);
    Schedule sched = build_schedule(tr, 8);
    Formula base = encode_schedule(sched, 8).formula;
    const bool base_sat = solve_formula(base).sat();
    ControlLiteralSet lits = control_literals(sched);
    for (int round = 0; round < 4; ++round) {
      for (std::size_t i = 0; i < lits.active.size(); ++i) lits.active[i] = rng() & 1;
      Formula uw = encode_uw(base, lits);
      Solved s = solve_formula(uw);
      if (!base_sat) CHECK_FALSE(s.sat());
      if (s.sat()) {
        // The model restricted to the base formula satisfies it.
        CHECK(evaluate(base.body(), s.b.valuation(s.r)) == 1);
      }
    }
  }
}

TEST_CASE("bit-blasting pins constants") {
  Formula f;
  f.width = 4;
  f.constraints = {mk_eq(mk_var("x#1", Sort::bv(4)), mk_bv(3, 4))};
  f.property = mk_true();
  Solved s = solve_formula(f);
  REQUIRE(s.sat());
  CHECK(s.value("x#1") == 3);
  REQUIRE(s.b.vars.at("x#1").size() == 4);
  for (int bit = 0; bit < 4; ++bit) CHECK(s.r.lit_true(s.b.vars.at("x#1")[bit]) == (bit < 2));
}

TEST_CASE("bit-level operators agree with integer arithmetic at width 4") {
  const unsigned w = 4;
  const Term a = mk_var("a", Sort::bv(w)), b = mk_var("b", Sort::bv(w)), c = mk_var("c", Sort::bv(w));
  for (Op op : {Op::Add, Op::Sub, Op::Mul, Op::SDiv, Op::SRem, Op::BvAnd, Op::BvOr, Op::BvXor, Op::Shl, Op::AShr}) {
    // One formula per op: c = a op b; enumerate the models by pinning a and b.
    Formula f;
    f.width = w;
    f.constraints = {mk_eq(c, mk_bvop(op, a, b))};
    f.property = mk_true();
    BlastedFormula bf = bitblast(f);
    for (std::int64_t x = -8; x < 8; ++x)
      for (std::int64_t y = -8; y < 8; ++y) {
        auto expect = eval_bvop(op, x, y, w);
        if (!expect) continue;
        std::vector<int> assume;
        for (unsigned bit = 0; bit < w; ++bit) {
          assume.push_back((x >> bit) & 1 ? bf.vars.at("a")[bit] : -bf.vars.at("a")[bit]);
          assume.push_back((y >> bit) & 1 ? bf.vars.at("b")[bit] : -bf.vars.at("b")[bit]);
        }
        SolveResult r = solve(bf.cnf, assume);
        REQUIRE(r.status == SolveStatus::Sat);
        CHECK_MESSAGE(bf.value(r, "c") == *expect, op_name(op) << ' ' << x << ' ' << y);
      }
  }
}

TEST_CASE("signed overflow wraps in every model") {
  Formula f;
  f.width = 4;
  const Term a = mk_var("a", Sort::bv(4));
  f.constraints = {mk_eq(a, mk_bv(7, 4))};
  f.property = mk_not(mk_eq(mk_bvop(Op::Add, a, mk_bv(1, 4)), mk_bv(-8, 4)));
  CHECK_FALSE(solve_formula(f).sat());
}

TEST_CASE("external solver agrees on exported formulas") {
  if (!testkit::z3_path()) {
    MESSAGE("z3 not found; skipped");
    return;
  }
  Formula taut;
  taut.property = mk_or(mk_var("p", Sort::boolean()), mk_not(mk_var("p", Sort::boolean())));
  CHECK(testkit::run_z3(to_smtlib(taut)) == "sat");

  auto tr = example_traces();
  CHECK(testkit::run_z3(to_smtlib(encode_lazy(tr[1], 8))) == "sat");
  CHECK(testkit::run_z3(to_smtlib(encode_lazy(tr[0], 8))) == "unsat");

  Schedule sched = build_schedule(tr, 8);
  Formula uw = encode_uw(encode_schedule(sched, 8).formula, control_literals(sched));
  const std::string text = to_smtlib(uw);
  CHECK(text.find("l_Ty_2") != std::string::npos);
  CHECK(testkit::run_z3(text) == "unsat");
}
