#include "mtbmc/strategies.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>

namespace mtbmc {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Lazy: return "lazy";
    case Strategy::Schedule: return "schedule";
    case Strategy::Uw: return "uw";
  }
  return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
  if (name == "lazy") return Strategy::Lazy;
  if (name == "schedule") return Strategy::Schedule;
  if (name == "uw") return Strategy::Uw;
  return std::nullopt;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "SAFE";
    case Verdict::Violated: return "VIOLATED";
    case Verdict::BoundInsufficient: return "BOUND-INSUFFICIENT";
    case Verdict::ResourceOut: return "RESOURCE-OUT";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Safe: return 0;
    case Verdict::Violated: return 10;
    case Verdict::BoundInsufficient: return 20;
    case Verdict::ResourceOut: return 30;
  }
  return 2;
}

namespace {

struct Solved {
  BlastedFormula blasted;
  SolveResult result;
};

class Run {
 public:
  Run(const TypedProgram& p, const VerifyConfig& cfg)
      : prog_(p), cfg_(cfg), up_(unroll_program(p, cfg.unwind, cfg.unwinding_assertions)),
        start_(std::chrono::steady_clock::now()) {
    sx_.width = cfg.width;
    sx_.por = cfg.por;
    sx_.div_by_zero_check = cfg.div_by_zero_check;
    report.strategy = cfg.strategy;
    report.origin = p.origin();
  }

  const VerifyConfig& cfg() const { return cfg_; }
  const UnrolledProgram& program() const { return up_; }
  const SymexOptions& symex() const { return sx_; }

  Solved solve_formula(const Formula& f) {
    const std::uint64_t n = ++report.stats.solver_calls;
    char stem[32];
    std::snprintf(stem, sizeof stem, "call-%04llu", static_cast<unsigned long long>(n));
    if (!cfg_.dump_smtlib.empty()) write_file(cfg_.dump_smtlib, std::string(stem) + ".smt2", to_smtlib(f));
    Solved s{bitblast(f), {}};
    if (!cfg_.dump_cnf.empty()) write_file(cfg_.dump_cnf, std::string(stem) + ".cnf", s.blasted.cnf.to_dimacs());
    SolverOptions opts;
    opts.seed = cfg_.seed;
    opts.conflict_limit = cfg_.conflict_limit;
    s.result = solve(s.blasted.cnf, s.blasted.assumptions, opts);
    return s;
  }

  std::vector<SsaTrace> all_traces() {
    std::vector<SsaTrace> out;
    ExploreStats st = explore(up_, sx_, [&](SsaTrace&& t) {
      out.push_back(std::move(t));
      return true;
    });
    report.stats.states = st.states;
    return out;
  }

  // Re-executes a schedule and evaluates it under concrete nondet values,
  // rendering the executed steps up to the first failing obligation.
  Counterexample replay(const std::vector<int>& schedule, std::map<std::string, std::int64_t> nondet,
                        ObligationSet set) const {
    Counterexample cex;
    cex.schedule = schedule;
    cex.nondet = std::move(nondet);
    SsaTrace tr = execute_interleaving(up_, schedule, sx_);
    std::unordered_map<std::string, std::int64_t> env(cex.nondet.begin(), cex.nondet.end());
    Valuation val = [&](const std::string& name, Sort) -> std::int64_t {
      auto it = env.find(name);
      return it == env.end() ? 0 : it->second;
    };
    for (const auto& ev : tr.events)
      if (ev.kind == Event::Kind::Assign) env[ev.lhs.name()] = evaluate(ev.rhs, val);
    std::size_t stop_event = tr.events.size();
    for (const auto& ob : encode_trace(tr).obligations) {
      if (!in_set(ob.kind, set) || evaluate(ob.term, val) == 0) continue;
      cex.replay_valid = true;
      cex.property = ob.kind;
      cex.thread = ob.thread;
      stop_event = ob.event;
      break;
    }
    int idx = 0;
    for (const auto& ex : tr.execs) {
      const bool last = ex.first_event <= stop_event && stop_event < ex.end_event;
      const CfgNode& node = up_.cfg_for(thread_def(tr, ex.thread)).cfg.nodes[ex.node];
      if (node.kind != NodeKind::Skip && node.kind != NodeKind::End && evaluate(ex.guard, val) != 0) {
        TraceLine l;
        l.index = idx++;
        l.thread = ex.thread;
        l.thread_name = tr.thread_names[ex.thread];
        l.line = node.loc.line;
        l.stmt = node.text;
        for (std::size_t e = ex.first_event; e < ex.end_event; ++e) {
          const Event& ev = tr.events[e];
          if (ev.kind == Event::Kind::Assign && evaluate(ev.guard, val) != 0)
            l.values.emplace_back(ev.location, env[ev.lhs.name()]);
        }
        cex.lines.push_back(std::move(l));
      }
      if (last) {
        cex.line = node.loc.line;
        break;
      }
    }
    return cex;
  }

  Report finish() {
    report.stats.wall_time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count());
    return report;
  }

  Report report;

 private:
  int thread_def(const SsaTrace& tr, int t) const {
    const std::string& name = tr.thread_names[t];
    if (t == 0) return -1;
    return prog_.find_thread(name);
  }

  static void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / name) << text;
  }

  const TypedProgram& prog_;
  VerifyConfig cfg_;
  UnrolledProgram up_;
  SymexOptions sx_;
  std::chrono::steady_clock::time_point start_;
};

bool is_nondet(const std::string& name) { return name.rfind("nondet#", 0) == 0; }

std::map<std::string, std::int64_t> lazy_nondets(const Solved& s) {
  std::map<std::string, std::int64_t> out;
  for (const auto& [name, bits] : s.blasted.vars)
    if (is_nondet(name)) out[name] = s.blasted.value(s.result, name);
  return out;
}

// Model-selected trie path, the trace to replay along it, and its nondets.
struct Decoded {
  std::vector<int> schedule;
  std::map<std::string, std::int64_t> nondet;
};

Decoded decode(const Schedule& sched, const Solved& s) {
  Decoded d;
  auto path = decode_path(sched, [&](const std::string& name) { return s.blasted.value(s.result, name); });
  if (path.empty()) {
    if (!sched.traces.empty()) d.schedule = sched.traces[0].schedule;
    return d;
  }
  for (int id : path)
    for (const auto& [from, to] : sched.nodes[id].names)
      if (is_nondet(from) && !d.nondet.count(from)) d.nondet[from] = s.blasted.value(s.result, to);
  d.schedule = sched.traces[sched.nodes[path.back()].trace].schedule;
  return d;
}

// Shared tail of the schedule-based strategies: the unwinding check.
void unwinding_pass(Run& run, const Schedule& sched) {
  ScheduleEncoding enc = encode_schedule(sched, run.cfg().width, ObligationSet::Unwinding);
  if (enc.formula.property.is_false()) return;
  Solved s = run.solve_formula(enc.formula);
  if (s.result.status == SolveStatus::ResourceOut) {
    run.report.verdict = Verdict::ResourceOut;
  } else if (s.result.status == SolveStatus::Sat) {
    run.report.verdict = Verdict::BoundInsufficient;
    Decoded d = decode(sched, s);
    run.report.counterexample = run.replay(d.schedule, d.nondet, ObligationSet::Unwinding);
  }
}

}  // namespace

Report verify_lazy(const TypedProgram& p, const VerifyConfig& cfg) {
  Run run(p, cfg);
  Stats& st = run.report.stats;
  bool violated = false;
  bool resource_out = false;
  std::vector<SsaTrace> unwinding;
  ExploreStats es = explore(run.program(), run.symex(), [&](SsaTrace&& t) {
    ++st.interleavings;
    Solved s = run.solve_formula(encode_lazy(t, cfg.width, ObligationSet::Real));
    if (s.result.status == SolveStatus::ResourceOut) {
      resource_out = true;
      return false;
    }
    if (s.result.status == SolveStatus::Sat) {
      ++st.failed_interleavings;
      if (!violated) run.report.counterexample = run.replay(t.schedule, lazy_nondets(s), ObligationSet::Real);
      violated = true;
      return cfg.exhaustive;
    }
    for (const auto& e : t.events)
      if (e.kind == Event::Kind::Assert && e.property == PropertyKind::Unwinding) {
        unwinding.push_back(std::move(t));
        break;
      }
    return true;
  });
  st.states = es.states;
  if (violated) {
    run.report.verdict = Verdict::Violated;
  } else if (resource_out) {
    run.report.verdict = Verdict::ResourceOut;
  } else {
    for (const auto& t : unwinding) {
      Formula f = encode_lazy(t, cfg.width, ObligationSet::Unwinding);
      if (f.property.is_false()) continue;
      Solved s = run.solve_formula(f);
      if (s.result.status == SolveStatus::ResourceOut) {
        run.report.verdict = Verdict::ResourceOut;
        break;
      }
      if (s.result.status == SolveStatus::Sat) {
        run.report.verdict = Verdict::BoundInsufficient;
        run.report.counterexample = run.replay(t.schedule, lazy_nondets(s), ObligationSet::Unwinding);
        break;
      }
    }
  }
  return run.finish();
}

Report verify_schedule(const TypedProgram& p, const VerifyConfig& cfg) {
  Run run(p, cfg);
  Schedule sched = build_schedule(run.all_traces(), cfg.width);
  run.report.stats.interleavings = sched.traces.size();
  ScheduleEncoding enc = encode_schedule(sched, cfg.width, ObligationSet::Real);
  Solved s = run.solve_formula(enc.formula);
  if (s.result.status == SolveStatus::ResourceOut) {
    run.report.verdict = Verdict::ResourceOut;
  } else if (s.result.status == SolveStatus::Sat) {
    run.report.verdict = Verdict::Violated;
    run.report.stats.failed_interleavings = 1;
    Decoded d = decode(sched, s);
    run.report.counterexample = run.replay(d.schedule, d.nondet, ObligationSet::Real);
  } else {
    unwinding_pass(run, sched);
  }
  return run.finish();
}

Report verify_uw(const TypedProgram& p, const VerifyConfig& cfg) {
  Run run(p, cfg);
  Stats& st = run.report.stats;
  Schedule sched = build_schedule(run.all_traces(), cfg.width);
  st.interleavings = sched.traces.size();
  const Formula base = encode_schedule(sched, cfg.width, ObligationSet::Real).formula;
  ControlLiteralSet lits = control_literals(sched);
  for (;;) {
    ++st.iterations;
    Solved s = run.solve_formula(encode_uw(base, lits));
    if (s.result.status == SolveStatus::ResourceOut) {
      run.report.verdict = Verdict::ResourceOut;
      return run.finish();
    }
    if (s.result.status == SolveStatus::Sat) {
      run.report.verdict = Verdict::Violated;
      st.failed_interleavings = 1;
      Decoded d = decode(sched, s);
      run.report.counterexample = run.replay(d.schedule, d.nondet, ObligationSet::Real);
      return run.finish();
    }
    if (s.result.core.empty()) break;
    if (s.result.core.size() > cfg.max_core) {
      ++st.core_fallbacks;
      std::fill(lits.active.begin(), lits.active.end(), false);
      continue;
    }
    std::unordered_map<int, std::string> by_var;
    for (const auto& [name, var] : s.blasted.selector_vars) by_var.emplace(var, name);
    bool relaxed = false;
    for (int lit : s.result.core) {
      auto it = by_var.find(lit > 0 ? lit : -lit);
      if (it == by_var.end()) continue;
      int i = lits.find(it->second);
      if (i >= 0 && lits.active[i]) {
        lits.active[i] = false;
        relaxed = true;
      }
    }
    if (!relaxed) break;
  }
  unwinding_pass(run, sched);
  return run.finish();
}

Report verify(const TypedProgram& p, const VerifyConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::Lazy: return verify_lazy(p, cfg);
    case Strategy::Schedule: return verify_schedule(p, cfg);
    case Strategy::Uw: return verify_uw(p, cfg);
  }
  return verify_lazy(p, cfg);
}

}  // namespace mtbmc
