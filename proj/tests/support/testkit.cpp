#include "testkit.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "mtbmc/bench.hpp"
#include "mtbmc/encoder.hpp"
#include "mtbmc/formula.hpp"

using namespace mtbmc;

namespace testkit {

std::string corpus_dir() { return MTBMC_CORPUS_DIR; }

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".mtc") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TypedProgram load_text(const std::string& text, const std::string& origin) {
  return load(SourceProgram{text, origin});
}

TypedProgram load_corpus(const std::string& name) {
  const std::string path = corpus_dir() + "/" + name;
  return load_text(read_file(path), path);
}

VerifyConfig config(Strategy s, unsigned width, bool por, unsigned unwind) {
  VerifyConfig c;
  c.strategy = s;
  c.width = width;
  c.por = por;
  c.unwind = unwind;
  return c;
}

Report run(const TypedProgram& p, Strategy s, unsigned width, bool por, unsigned unwind) {
  return verify(p, config(s, width, por, unwind));
}

std::vector<SsaTrace> traces(const TypedProgram& p, unsigned width, bool por, unsigned unwind) {
  UnrolledProgram up = unroll_program(p, unwind, true);
  SymexOptions opts;
  opts.width = width;
  opts.por = por;
  std::vector<SsaTrace> out;
  explore(up, opts, [&](SsaTrace&& t) {
    out.push_back(std::move(t));
    return true;
  });
  return out;
}

bool satisfiable(const Formula& f) {
  BlastedFormula b = bitblast(f);
  return solve(b.cnf, b.assumptions).status == SolveStatus::Sat;
}

std::optional<std::string> z3_path() {
  std::string p = MTBMC_Z3;
  if (p.empty() || p.find("NOTFOUND") != std::string::npos) return std::nullopt;
  return p;
}

namespace {

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) out.append(buf.data(), n);
  int rc = pclose(f);
  status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::string temp_path(const std::string& stem) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() / "mtbmc-tests";
  std::filesystem::create_directories(dir);
  return (dir / (stem + "-" + std::to_string(getpid()) + "-" + std::to_string(++counter))).string();
}

}  // namespace

std::string run_z3(const std::string& smtlib) {
  auto z3 = z3_path();
  if (!z3) return "no-z3";
  const std::string path = temp_path("query") + ".smt2";
  std::ofstream(path) << smtlib;
  int status = 0;
  std::string out = capture(*z3 + " -smt2 " + path + " 2>&1", status);
  std::filesystem::remove(path);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

int run_cli(const std::string& args, std::string& out) {
  int status = 0;
  out = capture(std::string(MTBMC_CLI) + " " + args + " 2>/dev/null", status);
  return status;
}

Cnf random_cnf(std::mt19937_64& rng, int vars, int clauses, int max_len) {
  Cnf c;
  c.num_vars = vars;
  std::uniform_int_distribution<int> var(1, vars), len(1, max_len), sign(0, 1);
  for (int i = 0; i < clauses; ++i) {
    std::vector<int> cl;
    const int n = len(rng);
    for (int j = 0; j < n; ++j) cl.push_back(sign(rng) ? var(rng) : -var(rng));
    c.add(std::move(cl));
  }
  return c;
}

bool brute_force_sat(const Cnf& cnf, const std::vector<int>& assumptions) {
  const int n = cnf.num_vars;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    auto val = [&](int lit) {
      const int v = lit > 0 ? lit : -lit;
      const bool b = (m >> (v - 1)) & 1;
      return lit > 0 ? b : !b;
    };
    bool ok = std::all_of(assumptions.begin(), assumptions.end(), val);
    for (std::size_t i = 0; ok && i < cnf.clauses.size(); ++i)
      ok = std::any_of(cnf.clauses[i].begin(), cnf.clauses[i].end(), val);
    if (ok) return true;
  }
  return false;
}

// ---------------------------------------------------------------- random programs

namespace {

using namespace oracle;

class ProgGen {
 public:
  explicit ProgGen(std::uint64_t seed) : rng_(seed) {}

  Prog make() {
    Prog p;
    p.globals = {{"x", pick(-2, 2)}, {"y", pick(0, 1)}};
    const bool mutex = chance(3);
    if (mutex) p.mutexes.push_back("m");
    const int children = pick(1, 2);
    for (int k = 0; k < children; ++k) {
      Thread t;
      t.name = "T" + std::to_string(k);
      if (chance(2)) t.param = "p";
      t.locals = {"l"};
      vars_ = {"x", "y", "l"};
      if (!t.param.empty()) vars_.push_back("p");
      const int n = pick(1, 4);
      for (int i = 0; i < n; ++i) t.body.push_back(stmt(mutex));
      p.threads.push_back(std::move(t));
    }
    Thread& m = p.main;
    m.name = "main";
    vars_ = {"x", "y"};
    for (int k = 0; k < children; ++k) {
      m.handles.push_back("h" + std::to_string(k));
      if (p.threads[k].param.empty())
        m.body.push_back(create(m.handles.back(), p.threads[k].name));
      else
        m.body.push_back(create(m.handles.back(), p.threads[k].name, C(pick(-2, 2))));
    }
    while (static_cast<int>(m.body.size()) < 4 && chance(2)) {
      switch (pick(0, 2)) {
        case 0: m.body.push_back(join(m.handles[pick(0, children - 1)])); break;
        case 1: m.body.push_back(assert_(cond(1))); break;
        default: m.body.push_back(assign(chance(2) ? "x" : "y", int_expr(1))); break;
      }
    }
    return p;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(int n) { return pick(1, n) == 1; }

  Ex leaf() {
    if (chance(3)) return C(pick(-3, 3));
    return V(vars_[pick(0, static_cast<int>(vars_.size()) - 1)]);
  }

  Ex int_expr(int depth) {
    if (depth == 0 || chance(2)) return leaf();
    static const char* ops[] = {"+", "-", "*", "&", "|", "^"};
    return B(ops[pick(0, 5)], int_expr(depth - 1), int_expr(depth - 1));
  }

  Ex cond(int depth) {
    static const char* cmp[] = {"==", "!=", "<", "<=", ">", ">="};
    Ex c = B(cmp[pick(0, 5)], int_expr(1), int_expr(0));
    if (depth > 0 && chance(3)) return B(chance(2) ? "&&" : "||", c, cond(depth - 1));
    if (depth > 0 && chance(5)) return U("!", c);
    return c;
  }

  St simple_assign() {
    const char* target = chance(3) ? "l" : (chance(2) ? "x" : "y");
    return assign(target, int_expr(2));
  }

  St stmt(bool mutex) {
    for (;;) {
      switch (pick(0, 7)) {
        case 0:
        case 1: return simple_assign();
        case 2:
          if (nondets_ >= 2) continue;
          ++nondets_;
          return nondet("l");
        case 3: return if_(cond(1), {simple_assign()}, chance(2) ? std::vector<St>{simple_assign()} : std::vector<St>{});
        case 4: return assert_(cond(1));
        case 5: return assume(cond(0));
        case 6:
          if (!mutex) continue;
          return lock("m");
        default:
          if (!mutex) continue;
          return unlock("m");
      }
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
  int nondets_ = 0;
};

}  // namespace

oracle::Prog random_program(std::uint64_t seed) { return ProgGen(seed).make(); }

// ---------------------------------------------------------------- properties

namespace {

const std::array<Strategy, 3> kStrategies = {Strategy::Lazy, Strategy::Schedule, Strategy::Uw};

std::string name_of(const std::string& path) { return std::filesystem::path(path).filename().string(); }

}  // namespace

Check cross_strategy_agreement() {
  Check c;
  for (const auto& f : corpus_files()) {
    TypedProgram p = load_text(read_file(f), f);
    Verdict first = run(p, Strategy::Lazy).verdict;
    for (Strategy s : kStrategies) {
      ++c.cases;
      Verdict v = run(p, s).verdict;
      if (v != first)
        c.fail(name_of(f) + ": " + strategy_name(s) + " says " + verdict_name(v) + ", lazy says " + verdict_name(first));
    }
  }
  return c;
}

Check por_agreement() {
  Check c;
  for (const auto& f : corpus_files()) {
    TypedProgram p = load_text(read_file(f), f);
    for (Strategy s : kStrategies) {
      ++c.cases;
      Verdict on = run(p, s, 32, true).verdict;
      Verdict off = run(p, s, 32, false).verdict;
      if (on != off)
        c.fail(name_of(f) + " " + strategy_name(s) + ": por on " + verdict_name(on) + ", off " + verdict_name(off));
    }
  }
  return c;
}

Check solver_soundness(int instances, std::uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    ++c.cases;
    const int vars = std::uniform_int_distribution<int>(3, 14)(rng);
    Cnf cnf = random_cnf(rng, vars, static_cast<int>(vars * 3.5));
    std::vector<int> assumptions;
    const int na = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int k = 0; k < na; ++k) {
      int v = std::uniform_int_distribution<int>(1, vars)(rng);
      assumptions.push_back(rng() & 1 ? v : -v);
    }
    SolveResult r = solve(cnf, assumptions);
    const bool expect = brute_force_sat(cnf, assumptions);
    if ((r.status == SolveStatus::Sat) != expect) {
      c.fail("instance " + std::to_string(i) + ": verdict differs from enumeration");
      continue;
    }
    if (r.status == SolveStatus::Sat) {
      if (!satisfies(cnf, r.model)) c.fail("instance " + std::to_string(i) + ": model violates a clause");
      for (int a : assumptions)
        if (!r.lit_true(a)) c.fail("instance " + std::to_string(i) + ": model violates an assumption");
    } else {
      for (int l : r.core)
        if (std::find(assumptions.begin(), assumptions.end(), l) == assumptions.end())
          c.fail("instance " + std::to_string(i) + ": core literal is not an assumption");
      if (brute_force_sat(cnf, r.core)) c.fail("instance " + std::to_string(i) + ": core is satisfiable");
      if (solve(cnf, r.core).status != SolveStatus::Unsat)
        c.fail("instance " + std::to_string(i) + ": re-solving the core is not unsat");
    }
  }
  return c;
}

namespace {

void compare_with_z3(Check& c, const Formula& f, const std::string& what) {
  ++c.cases;
  BlastedFormula b = bitblast(f);
  SolveResult r = solve(b.cnf, b.assumptions);
  const std::string mine = r.status == SolveStatus::Sat ? "sat" : "unsat";
  const std::string theirs = run_z3(to_smtlib(f));
  if (mine != theirs) c.fail(what + ": internal " + mine + ", z3 " + theirs);
}

std::vector<std::pair<std::string, std::string>> z3_programs() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : corpus_files()) out.emplace_back(name_of(f), read_file(f));
  out.emplace_back("phil2_sat", gen_bench({BenchFamily::Philosophers, 2, BenchVariant::Sat}));
  out.emplace_back("phil3_unsat", gen_bench({BenchFamily::Philosophers, 3, BenchVariant::Unsat}));
  return out;
}

}  // namespace

Check smtlib_vs_z3() {
  Check c;
  if (!z3_path()) {
    c.fail("z3 not found");
    return c;
  }
  for (const auto& [name, text] : z3_programs()) {
    TypedProgram p = load_text(text, name);
    UnrolledProgram up = unroll_program(p, 10, true);
    SymexOptions sx;
    sx.width = 8;
    std::vector<SsaTrace> traces;
    explore(up, sx, [&](SsaTrace&& t) {
      traces.push_back(std::move(t));
      return true;
    });
    for (std::size_t i = 0; i < traces.size() && i < 6; ++i) {
      compare_with_z3(c, encode_lazy(traces[i], 8), name + " lazy #" + std::to_string(i));
      compare_with_z3(c, encode_lazy(traces[i], 8, ObligationSet::Unwinding), name + " unwinding #" + std::to_string(i));
    }
    Schedule sched = build_schedule(traces, 8);
    Formula base = encode_schedule(sched, 8).formula;
    compare_with_z3(c, base, name + " schedule");
    compare_with_z3(c, encode_uw(base, control_literals(sched)), name + " uw");
  }
  return c;
}

Check oracle_agreement(int programs, std::uint64_t seed) {
  Check c;
  for (int i = 0; i < programs; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    oracle::Prog prog = random_program(s);
    const unsigned width = 3 + static_cast<unsigned>(s % 2);
    const std::string text = oracle::to_mtc(prog);
    oracle::Outcome want = oracle::check(prog, width);
    TypedProgram p = load_text(text, "random-" + std::to_string(s) + ".mtc");
    for (Strategy st : kStrategies) {
      ++c.cases;
      Report r = run(p, st, width);
      const std::string got = verdict_name(r.verdict);
      if (got != want.verdict()) {
        c.fail("seed " + std::to_string(s) + " W=" + std::to_string(width) + " " + strategy_name(st) + ": tool " + got +
               ", oracle " + want.verdict() + "\n" + text);
        continue;
      }
      if (r.verdict == Verdict::Violated) {
        const std::string tag = property_tag(r.counterexample->property);
        if (!want.violations.count(tag))
          c.fail("seed " + std::to_string(s) + " " + strategy_name(st) + ": tag " + tag + " not reachable\n" + text);
        if (!r.counterexample->replay_valid)
          c.fail("seed " + std::to_string(s) + " " + strategy_name(st) + ": counterexample does not replay\n" + text);
      }
    }
  }
  return c;
}

Check cnf_truth_table(int instances, std::uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    ++c.cases;
    const int vars = std::uniform_int_distribution<int>(1, 20)(rng);
    const double ratio = std::uniform_real_distribution<double>(2.0, 6.0)(rng);
    Cnf cnf = random_cnf(rng, vars, std::max(1, static_cast<int>(vars * ratio)));
    Cnf back = parse_dimacs(cnf.to_dimacs());
    const bool expect = brute_force_sat(cnf);
    SolveResult r = solve(back);
    if ((r.status == SolveStatus::Sat) != expect)
      c.fail("instance " + std::to_string(i) + " (" + std::to_string(vars) + " vars): verdict differs");
    else if (r.status == SolveStatus::Sat && !satisfies(cnf, r.model))
      c.fail("instance " + std::to_string(i) + ": model violates a clause");
  }
  return c;
}

namespace {

struct DeadlockCase {
  std::string name;
  oracle::Prog prog;
  std::string verdict;
  std::string tag;  // expected violation, empty when safe
};

std::vector<DeadlockCase> deadlock_cases() {
  using namespace oracle;
  std::vector<DeadlockCase> out;
  {
    Prog p;
    p.globals = {{"shared", 0}};
    p.mutexes = {"a", "b"};
    p.threads.push_back({"T0", "", {}, {}, {lock("a"), lock("b"), assign("shared", B("+", V("shared"), C(1))), unlock("b"), unlock("a")}});
    p.threads.push_back({"T1", "", {}, {}, {lock("b"), lock("a"), assign("shared", B("+", V("shared"), C(1))), unlock("a"), unlock("b")}});
    p.main = {"main", "", {}, {"h0", "h1"}, {create("h0", "T0"), create("h1", "T1"), join("h0"), join("h1")}};
    out.push_back({"lock-order inversion", p, "VIOLATED", "deadlock"});
  }
  {
    Prog p;
    p.globals = {{"count", 0}};
    p.mutexes = {"m"};
    p.threads.push_back({"worker", "", {}, {}, {lock("m"), assign("count", B("+", V("count"), C(1))), unlock("m"), unlock("m")}});
    p.main = {"main", "", {}, {"t"}, {create("t", "worker"), join("t")}};
    out.push_back({"double unlock", p, "VIOLATED", "bad-unlock"});
  }
  {
    Prog p;
    p.globals = {{"ready", 0}};
    p.mutexes = {"m"};
    p.conds = {"c"};
    p.threads.push_back({"waiter", "", {}, {}, {lock("m"), while_(B("==", V("ready"), C(0)), {wait("c", "m")}), unlock("m")}});
    p.threads.push_back({"notifier", "", {}, {}, {lock("m"), assign("ready", C(1)), signal("c"), unlock("m")}});
    p.main = {"main", "", {}, {"w", "s"}, {create("w", "waiter"), create("s", "notifier"), join("w"), join("s")}};
    out.push_back({"signal handshake", p, "SAFE", ""});
  }
  {
    Prog p;
    p.mutexes = {"m"};
    p.conds = {"c"};
    p.threads.push_back({"sleeper", "", {}, {}, {lock("m"), wait("c", "m"), unlock("m")}});
    p.main = {"main", "", {}, {"t"}, {create("t", "sleeper"), join("t")}};
    out.push_back({"wait without signal", p, "VIOLATED", "deadlock"});
  }
  return out;
}

}  // namespace

Check deadlock_suite() {
  Check c;
  for (const auto& dc : deadlock_cases()) {
    oracle::Outcome o = oracle::check(dc.prog, 8, 3);
    if (o.verdict() != dc.verdict) c.fail(dc.name + ": oracle says " + o.verdict());
    if (!dc.tag.empty() && !o.violations.count(dc.tag)) c.fail(dc.name + ": oracle misses " + dc.tag);
    TypedProgram p = load_text(oracle::to_mtc(dc.prog), dc.name);
    for (Strategy s : kStrategies) {
      ++c.cases;
      Report r = run(p, s, 8, true, 3);
      if (verdict_name(r.verdict) != dc.verdict) {
        c.fail(dc.name + " " + strategy_name(s) + ": " + verdict_name(r.verdict));
        continue;
      }
      if (!dc.tag.empty() && property_tag(r.counterexample->property) != dc.tag)
        c.fail(dc.name + " " + strategy_name(s) + ": tag " + property_tag(r.counterexample->property));
    }
  }
  return c;
}

Check report_determinism() {
  Check c;
  auto strip = [](const std::string& s) {
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line))
      if (line.rfind("wall_time_ms=", 0) != 0) out += line + "\n";
    return out;
  };
  const std::string phil = temp_path("phil3_sat") + ".mtc";
  std::ofstream(phil) << gen_bench({BenchFamily::Philosophers, 3, BenchVariant::Sat});
  const std::vector<std::string> inputs = {corpus_dir() + "/running_example.mtc", corpus_dir() + "/lock_order.mtc", phil};
  for (const auto& in : inputs) {
    for (const char* s : {"lazy", "schedule", "uw"}) {
      ++c.cases;
      const std::string args = std::string("verify ") + in + " --strategy " + s + " --format machine --trace --seed 7";
      std::string a, b;
      int ra = run_cli(args, a), rb = run_cli(args, b);
      if (ra != rb || strip(a) != strip(b) || a.empty()) c.fail(name_of(in) + " " + s + ": reports differ");
    }
  }
  std::filesystem::remove(phil);
  return c;
}

}  // namespace testkit
