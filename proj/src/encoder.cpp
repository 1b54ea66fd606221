#include "mtbmc/encoder.hpp"

#include <algorithm>
#include <sstream>

namespace mtbmc {

bool in_set(PropertyKind k, ObligationSet set) {
  return (k == PropertyKind::Unwinding) == (set == ObligationSet::Unwinding);
}

TraceEncoding encode_trace(const SsaTrace& trace) {
  TraceEncoding enc;
  Term assumed = mk_true();
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& e = trace.events[i];
    switch (e.kind) {
      case Event::Kind::Assign: enc.equations.push_back(mk_eq(e.lhs, e.rhs)); break;
      case Event::Kind::Assume: assumed = mk_and(assumed, mk_implies(e.guard, e.rhs)); break;
      case Event::Kind::Assert: {
        Term ob = mk_and(assumed, mk_and(e.guard, mk_not(e.rhs)));
        if (ob.is_false()) break;
        enc.obligations.push_back({ob, e.property, e.thread, e.node, i, -1});
        break;
      }
    }
  }
  return enc;
}

Formula encode_lazy(const SsaTrace& trace, unsigned width, ObligationSet set) {
  TraceEncoding enc = encode_trace(trace);
  Formula f;
  f.width = width;
  f.constraints = std::move(enc.equations);
  std::vector<Term> obs;
  for (const auto& o : enc.obligations)
    if (in_set(o.kind, set)) obs.push_back(o.term);
  f.property = mk_or(obs);
  return f;
}

std::vector<EcsBlock> ecs_blocks(const SsaTrace& trace) {
  std::vector<EcsBlock> out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& st = trace.steps[i];
    if (st.first_event == st.end_event) continue;
    if (!out.empty() && out.back().thread == st.thread) {
      out.back().end_step = i + 1;
      out.back().end_event = st.end_event;
      continue;
    }
    EcsBlock b;
    b.thread = st.thread;
    b.first_step = i;
    b.end_step = i + 1;
    b.first_event = st.first_event;
    b.end_event = st.end_event;
    b.scheduled = st.threads >= 2;
    out.push_back(b);
  }
  return out;
}

namespace {

std::string block_key(const SsaTrace& t, const EcsBlock& b) {
  std::ostringstream os;
  os << b.thread << '|';
  for (std::size_t i = b.first_event; i < b.end_event; ++i) {
    const Event& e = t.events[i];
    os << static_cast<int>(e.kind) << ',' << e.node << ',' << static_cast<int>(e.property) << ','
       << e.guard.hash() << ',' << e.rhs.hash();
    if (e.lhs) os << ',' << e.lhs.name();
    os << ';';
  }
  return os.str();
}

unsigned bits_for(int n) {
  unsigned w = 1;
  while ((1LL << (w - 1)) <= n) ++w;
  return w;
}

}  // namespace

Schedule build_schedule(std::vector<SsaTrace> traces, unsigned width) {
  (void)width;
  Schedule s;
  s.traces = std::move(traces);
  s.nodes.emplace_back();
  s.nodes[0].guard = mk_true();
  s.nodes[0].local = mk_true();
  std::vector<std::map<std::string, int>> index(1);

  for (std::size_t ti = 0; ti < s.traces.size(); ++ti) {
    const SsaTrace& tr = s.traces[ti];
    s.num_threads = std::max(s.num_threads, static_cast<int>(tr.thread_names.size()));
    auto blocks = ecs_blocks(tr);
    int cur = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      std::string key = block_key(tr, blocks[bi]);
      auto it = index[cur].find(key);
      if (it != index[cur].end()) {
        cur = it->second;
        continue;
      }
      const int id = static_cast<int>(s.nodes.size());
      ScheduleNode n;
      n.parent = cur;
      n.thread = blocks[bi].thread;
      n.trace = ti;
      n.block = bi;
      n.depth = s.nodes[cur].depth + (blocks[bi].scheduled ? 1 : 0);
      n.ts_index = blocks[bi].scheduled ? n.depth : 0;
      s.num_ts = std::max(s.num_ts, n.ts_index);
      n.names = s.nodes[cur].names;
      std::vector<Term> terms;
      for (std::size_t e = blocks[bi].first_event; e < blocks[bi].end_event; ++e) {
        const Event& ev = tr.events[e];
        terms.push_back(ev.guard);
        terms.push_back(ev.rhs);
        if (ev.lhs) terms.push_back(ev.lhs);
      }
      for (const auto& [name, sort] : free_vars(terms))
        if (!n.names.count(name)) n.names.emplace(name, name + "@" + std::to_string(id));
      s.nodes[cur].children.push_back(id);
      s.nodes.push_back(std::move(n));
      index[cur].emplace(std::move(key), id);
      index.emplace_back();
      cur = id;
    }
  }

  s.ts_width = bits_for(std::max(1, s.num_threads));
  for (std::size_t id = 1; id < s.nodes.size(); ++id) {
    ScheduleNode& n = s.nodes[id];
    n.local = n.ts_index > 0 ? mk_eq(mk_var(Schedule::ts_name(n.ts_index), Sort::bv(s.ts_width)), mk_bv(n.thread, s.ts_width))
                             : mk_true();
  }
  // Siblings selected by the same thread need an extra choice.
  for (std::size_t id = 0; id < s.nodes.size(); ++id) {
    const auto& kids = s.nodes[id].children;
    for (std::size_t a = 0; a < kids.size(); ++a) {
      int same = 0;
      for (std::size_t b = 0; b < kids.size(); ++b) same += s.nodes[kids[b]].thread == s.nodes[kids[a]].thread;
      if (same < 2) continue;
      int k = 0;
      for (std::size_t b = 0; b < a; ++b) k += s.nodes[kids[b]].thread == s.nodes[kids[a]].thread;
      ScheduleNode& n = s.nodes[kids[a]];
      n.alternative = k;
      const unsigned w = bits_for(static_cast<int>(kids.size()));
      n.local = mk_and(n.local, mk_eq(mk_var("alt@" + std::to_string(id), Sort::bv(w)), mk_bv(k, w)));
    }
  }
  for (std::size_t id = 1; id < s.nodes.size(); ++id) {
    ScheduleNode& n = s.nodes[id];
    n.guard = mk_and(s.nodes[n.parent].guard, n.local);
  }
  return s;
}

ScheduleEncoding encode_schedule(const Schedule& sched, unsigned width, ObligationSet set,
                                 const std::vector<Term>& extra) {
  ScheduleEncoding out;
  Formula& f = out.formula;
  f.width = width;
  for (int i = 1; i <= sched.num_ts; ++i) {
    Term ts = mk_var(Schedule::ts_name(i), Sort::bv(sched.ts_width));
    f.constraints.push_back(mk_sle(mk_bv(0, sched.ts_width), ts));
    f.constraints.push_back(mk_slt(ts, mk_bv(sched.num_threads, sched.ts_width)));
  }
  std::vector<Term> assumed(sched.nodes.size(), mk_true());
  std::vector<Term> obs;
  for (std::size_t id = 1; id < sched.nodes.size(); ++id) {
    const ScheduleNode& n = sched.nodes[id];
    const SsaTrace& tr = sched.traces[n.trace];
    const EcsBlock b = ecs_blocks(tr)[n.block];
    Term a = assumed[n.parent];
    for (std::size_t e = b.first_event; e < b.end_event; ++e) {
      const Event& ev = tr.events[e];
      const Term g = rename_vars(ev.guard, n.names);
      const Term c = rename_vars(ev.rhs, n.names);
      switch (ev.kind) {
        case Event::Kind::Assign:
          f.constraints.push_back(mk_implies(n.guard, mk_eq(rename_vars(ev.lhs, n.names), c)));
          break;
        case Event::Kind::Assume: a = mk_and(a, mk_implies(g, c)); break;
        case Event::Kind::Assert: {
          Term ob = mk_and(n.guard, mk_and(a, mk_and(g, mk_not(c))));
          if (ob.is_false()) break;
          Obligation o{ob, ev.property, ev.thread, ev.node, e, static_cast<int>(id)};
          if (in_set(o.kind, set)) obs.push_back(ob);
          out.obligations.push_back(std::move(o));
          break;
        }
      }
    }
    assumed[id] = a;
  }
  for (const auto& x : extra) f.constraints.push_back(x);
  f.property = mk_or(obs);
  return out;
}

std::size_t ControlLiteralSet::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

int ControlLiteralSet::find(const std::string& name) const {
  for (std::size_t i = 0; i < literals.size(); ++i)
    if (literals[i].name == name) return static_cast<int>(i);
  return -1;
}

ControlLiteralSet control_literals(const Schedule& sched) {
  std::vector<int> order;
  for (std::size_t id = 1; id < sched.nodes.size(); ++id)
    if (!sched.nodes[id].local.is_true()) order.push_back(static_cast<int>(id));
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sched.nodes[a].depth < sched.nodes[b].depth; });
  ControlLiteralSet set;
  for (int id : order) {
    const ScheduleNode& n = sched.nodes[id];
    const std::string& thread = sched.traces[n.trace].thread_names[n.thread];
    set.literals.push_back({"l_" + thread + "_" + std::to_string(id), n.guard, id});
  }
  set.active.assign(set.literals.size(), true);
  return set;
}

Formula encode_uw(const Formula& base, const ControlLiteralSet& lits) {
  Formula f = base;
  for (std::size_t i = 0; i < lits.literals.size(); ++i)
    if (lits.active[i]) f.selectors.push_back({lits.literals[i].name, mk_not(lits.literals[i].guard)});
  return f;
}

std::vector<int> decode_path(const Schedule& sched, const std::function<std::int64_t(const std::string&)>& value) {
  std::vector<int> path;
  Valuation val = [&](const std::string& name, Sort) { return value(name); };
  int cur = 0;
  for (;;) {
    int next = -1;
    for (int c : sched.nodes[cur].children) {
      if (evaluate(sched.nodes[c].local, val) != 0) {
        next = c;
        break;
      }
    }
    if (next < 0) return path;
    path.push_back(next);
    cur = next;
  }
}

}  // namespace mtbmc
