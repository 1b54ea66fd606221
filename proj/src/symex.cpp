#include "mtbmc/symex.hpp"

#include <algorithm>
#include <sstream>

#include "mtbmc/por.hpp"
#include "mtbmc/pthreads.hpp"

namespace mtbmc {

const char* status_name(ThreadStatus s) {
  switch (s) {
    case ThreadStatus::Free: return "free";
    case ThreadStatus::JoinWait: return "join-wait";
    case ThreadStatus::LockWait: return "lock-wait";
    case ThreadStatus::CondWait: return "cond-wait";
    case ThreadStatus::Exited: return "exited";
  }
  return "?";
}

std::string SsaTrace::key() const {
  std::ostringstream os;
  for (const auto& e : events) {
    os << static_cast<int>(e.kind) << ',' << e.thread << ',' << e.node << ',' << static_cast<int>(e.property) << ','
       << e.guard.hash() << ',' << e.rhs.hash();
    if (e.lhs) os << ',' << e.lhs.name();
    os << ';';
  }
  if (killed) os << 'K';
  return os.str();
}

bool SsaTrace::has_obligations() const {
  for (const auto& e : events)
    if (e.kind == Event::Kind::Assert) return true;
  return false;
}

namespace {

std::shared_ptr<const std::vector<std::vector<char>>> visibility(const UnrolledProgram& p) {
  auto v = std::make_shared<std::vector<std::vector<char>>>();
  auto add = [&](const UnrolledCfg& u) {
    std::vector<char> row;
    for (const auto& n : u.cfg.nodes) row.push_back(visible(n) ? 1 : 0);
    v->push_back(std::move(row));
  };
  add(p.entry);
  for (const auto& t : p.threads) add(t);
  return v;
}

Op arith_op(BinOp op) {
  switch (op) {
    case BinOp::Add: return Op::Add;
    case BinOp::Sub: return Op::Sub;
    case BinOp::Mul: return Op::Mul;
    case BinOp::Div: return Op::SDiv;
    case BinOp::Mod: return Op::SRem;
    case BinOp::BitAnd: return Op::BvAnd;
    case BinOp::BitOr: return Op::BvOr;
    case BinOp::BitXor: return Op::BvXor;
    case BinOp::Shl: return Op::Shl;
    case BinOp::Shr: return Op::AShr;
    default: return Op::Add;
  }
}

std::string element(const std::string& base, std::int64_t k) { return base + "[" + std::to_string(k) + "]"; }

// Location of a local or global array, without the element suffix.
std::string array_base(const SymState& s, int t, const Expr& e) {
  return e.sym.scope == SymbolRef::Scope::Global ? e.name : s.local_loc(t, e.name);
}

unsigned array_length(const SymState& s, int t, const Expr& e) {
  if (e.sym.scope == SymbolRef::Scope::Global) return s.program().program->globals()[e.sym.index].type.length;
  const ThreadState& th = s.thread(t);
  const ThreadDef& def = th.def_index < 0 ? s.program().program->entry() : s.program().program->threads()[th.def_index];
  if (e.sym.index < static_cast<int>(def.locals.size())) return def.locals[e.sym.index].type.length;
  return 0;
}

}  // namespace

SymState::SymState(const UnrolledProgram& prog, SymexOptions opts) : prog_(&prog), opts_(std::move(opts)) {
  visible_ = visibility(prog);
  for (const auto& g : prog.program->globals()) init_slots("", g.name, g.type, &g);
}

void SymState::init_slots(const std::string& prefix, const std::string& name, MtcType type, const GlobalDecl* g) {
  const std::string base = prefix + name;
  auto set = [&](const std::string& loc, Term v) { mem_[loc] = {v, v}; };
  switch (type.kind) {
    case TypeKind::Int: {
      std::int64_t v = 0;
      if (g && g->init) {
        const Expr* e = g->init.get();
        bool negated = e->kind == ExprKind::Unary;
        if (negated) e = e->args[0].get();
        v = negated ? -e->int_value : e->int_value;
      }
      set(base, bv(v));
      break;
    }
    case TypeKind::Bool: set(base, mk_bool(g && g->init && g->init->bool_value)); break;
    case TypeKind::IntArray:
      for (unsigned k = 0; k < type.length; ++k) set(element(base, k), bv(0));
      break;
    case TypeKind::Mutex:
      set(base + ".lock", bv(0));
      set(base + ".count", bv(0));
      break;
    case TypeKind::Cond:
      set(base + ".lock", bv(0));
      set(base + ".nwaiters", bv(0));
      set(base + ".bid", bv(0));
      break;
    case TypeKind::Thread: set(base, bv(-1)); break;
    case TypeKind::Void: break;
  }
}

int SymState::live_threads() const {
  int n = 0;
  for (const auto& th : threads_) n += th.status != ThreadStatus::Exited;
  return n;
}

int SymState::blocked_threads() const {
  int n = 0;
  for (const auto& th : threads_)
    n += th.status == ThreadStatus::JoinWait || th.status == ThreadStatus::LockWait ||
         th.status == ThreadStatus::CondWait;
  return n;
}

Term SymState::read(const std::string& loc, Sort sort) const {
  auto it = mem_.find(loc);
  if (it == mem_.end()) throw std::logic_error("read of unknown location " + loc);
  return it->second.value;
}

void SymState::write(int t, int node, const std::string& loc, const Term& value, const Term& guard) {
  auto it = mem_.find(loc);
  if (it == mem_.end()) throw std::logic_error("write of unknown location " + loc);
  Slot& slot = it->second;
  Term next = mk_ite(guard, value, slot.value);
  if (next == slot.value) return;
  int ver = ++versions_[loc];
  Term var = mk_var(loc + "#" + std::to_string(ver), value.sort());
  Event e;
  e.kind = Event::Kind::Assign;
  e.thread = t;
  e.node = node;
  e.guard = guard;
  e.lhs = var;
  e.rhs = next;
  e.location = loc;
  trace_.events.push_back(std::move(e));
  slot.ssa = var;
  slot.value = next.is_const() ? next : var;
}

void SymState::bind(const std::string& loc, const Term& value) { mem_[loc] = {value, value}; }

Term SymState::fresh_nondet(Sort sort) {
  std::string name = "nondet#" + std::to_string(++nondets_);
  if (auto it = opts_.nondet_values.find(name); it != opts_.nondet_values.end())
    return sort.is_bool() ? mk_bool(it->second != 0) : mk_bv(it->second, sort.width);
  return mk_var(name, sort);
}

std::string SymState::local_loc(int t, const std::string& name) const { return "t" + std::to_string(t) + ":" + name; }

std::string SymState::loc_of(int t, const Expr& ident) const {
  return ident.sym.scope == SymbolRef::Scope::Global ? ident.name : local_loc(t, ident.name);
}

Sort SymState::sort_of(MtcType type) const {
  return type.kind == TypeKind::Bool ? Sort::boolean() : Sort::bv(opts_.width);
}

void SymState::emit_assume(int t, int node, const Term& guard, const Term& cond) {
  Term c = mk_implies(guard, cond);
  if (c.is_true()) return;
  Event e;
  e.kind = Event::Kind::Assume;
  e.thread = t;
  e.node = node;
  e.guard = guard;
  e.rhs = cond;
  trace_.events.push_back(std::move(e));
  if (c.is_false()) trace_.killed = true;
}

void SymState::emit_assert(int t, int node, const Term& guard, const Term& cond, PropertyKind kind) {
  if (mk_and(guard, mk_not(cond)).is_false()) return;
  Event e;
  e.kind = Event::Kind::Assert;
  e.thread = t;
  e.node = node;
  e.guard = guard;
  e.rhs = cond;
  e.property = kind;
  trace_.events.push_back(std::move(e));
}

int SymState::add_thread(int def_index) {
  int id = static_cast<int>(threads_.size());
  ThreadState th;
  th.def_index = def_index;
  const ThreadDef& def = def_index < 0 ? prog_->program->entry() : prog_->program->threads()[def_index];
  th.name = def.name;
  threads_.push_back(th);
  trace_.thread_names.push_back(def.name);
  const std::string prefix = "t" + std::to_string(id) + ":";
  for (const auto& l : def.locals) init_slots(prefix, l.name, l.type, nullptr);
  for (const auto& l : prog_->cfg_for(def_index).cfg.temps) init_slots(prefix, l.name, l.type, nullptr);
  return id;
}

void SymState::exit_thread(int t) {
  ThreadState& th = threads_[t];
  th.status = ThreadStatus::Exited;
  th.pc = static_cast<int>(cfg_of(t).cfg.nodes.size()) - 1;
  th.pending.clear();
  th.atomic = 0;
}

bool SymState::node_visible(int t, int pc) const {
  if (!opts_.por) return true;
  return (*visible_)[threads_[t].def_index + 1][pc] != 0;
}

SymState initial_state(const UnrolledProgram& prog, const SymexOptions& opts) {
  SymState s(prog, opts);
  s.add_thread(-1);
  return s;
}

Term eval_expr(SymState& s, int t, int node, const Expr& e) {
  const unsigned w = s.width();
  switch (e.kind) {
    case ExprKind::IntLit: return mk_bv(e.int_value, w);
    case ExprKind::BoolLit: return mk_bool(e.bool_value);
    case ExprKind::Ident: return s.read(s.loc_of(t, e), s.sort_of(e.type));
    case ExprKind::Index: {
      Term idx = eval_expr(s, t, node, *e.args[0]);
      const std::string base = array_base(s, t, e);
      const unsigned n = array_length(s, t, e);
      if (idx.is_const()) {
        if (idx.value() < 0 || idx.value() >= static_cast<std::int64_t>(n)) return mk_bv(0, w);
        return s.read(element(base, idx.value()), Sort::bv(w));
      }
      Term r = mk_bv(0, w);
      for (unsigned k = n; k-- > 0;)
        r = mk_ite(mk_eq(idx, mk_bv(k, w)), s.read(element(base, k), Sort::bv(w)), r);
      return r;
    }
    case ExprKind::Unary: {
      Term a = eval_expr(s, t, node, *e.args[0]);
      switch (e.unop) {
        case UnOp::Neg: return mk_neg(a);
        case UnOp::Not: return mk_not(a);
        case UnOp::BitNot: return mk_bvnot(a);
      }
      return a;
    }
    case ExprKind::Binary: {
      Term a = eval_expr(s, t, node, *e.args[0]);
      Term b = eval_expr(s, t, node, *e.args[1]);
      switch (e.binop) {
        case BinOp::Eq: return mk_eq(a, b);
        case BinOp::Ne: return mk_not(mk_eq(a, b));
        case BinOp::Lt: return mk_slt(a, b);
        case BinOp::Le: return mk_sle(a, b);
        case BinOp::Gt: return mk_slt(b, a);
        case BinOp::Ge: return mk_sle(b, a);
        case BinOp::LAnd: return mk_and(a, b);
        case BinOp::LOr: return mk_or(a, b);
        case BinOp::Div:
        case BinOp::Mod:
          if (s.options().div_by_zero_check)
            s.emit_assert(t, node, s.thread(t).guard, mk_not(mk_eq(b, mk_bv(0, w))), PropertyKind::DivByZero);
          return mk_bvop(arith_op(e.binop), a, b);
        default: return mk_bvop(arith_op(e.binop), a, b);
      }
    }
    case ExprKind::Call:
      if (e.intrinsic == Intrinsic::NondetInt) return s.fresh_nondet(Sort::bv(w));
      if (e.intrinsic == Intrinsic::NondetBool) return s.fresh_nondet(Sort::boolean());
      throw std::logic_error("intrinsic " + e.name + " used as a value");
    case ExprKind::Assign: throw std::logic_error("assignment left in a pure expression");
  }
  return mk_false();
}

namespace {

void assign(SymState& s, int t, int node, const Expr& lhs, const Term& value) {
  const Term guard = s.thread(t).guard;
  if (lhs.kind == ExprKind::Ident) {
    s.write(t, node, s.loc_of(t, lhs), value, guard);
    return;
  }
  Term idx = eval_expr(s, t, node, *lhs.args[0]);
  const std::string base = array_base(s, t, lhs);
  const unsigned n = array_length(s, t, lhs);
  if (idx.is_const()) {
    if (idx.value() >= 0 && idx.value() < static_cast<std::int64_t>(n))
      s.write(t, node, element(base, idx.value()), value, guard);
    return;
  }
  for (unsigned k = 0; k < n; ++k)
    s.write(t, node, element(base, k), value, mk_and(guard, mk_eq(idx, mk_bv(k, s.width()))));
}

// Moves to the next reachable node, merging guards of jumps that land there.
void advance(SymState& s, int t) {
  ThreadState& th = s.thread(t);
  const int end = static_cast<int>(s.cfg_of(t).cfg.nodes.size()) - 1;
  auto merge_at = [&](int pc) {
    th.pc = pc;
    if (auto it = th.pending.find(pc); it != th.pending.end()) {
      th.guard = mk_or(th.guard, it->second);
      th.pending.erase(it);
    }
  };
  merge_at(th.pc + 1);
  while (th.guard.is_false()) {
    if (th.pending.empty()) {
      th.pc = end;
      th.guard = mk_true();
      return;
    }
    auto it = th.pending.begin();
    th.pc = it->first;
    th.guard = it->second;
    th.pending.erase(it);
  }
}

void jump(ThreadState& th, int target, const Term& taken) {
  if (taken.is_false()) return;
  auto it = th.pending.find(target);
  if (it == th.pending.end())
    th.pending.emplace(target, taken);
  else
    it->second = mk_or(it->second, taken);
}

enum class Outcome { Continue, Stop };

Outcome exec_node(SymState& s, int t) {
  ThreadState& th = s.thread(t);
  const int pc = th.pc;
  const CfgNode& n = s.cfg_of(t).cfg.nodes[pc];
  ExecRecord rec;
  rec.thread = t;
  rec.node = pc;
  rec.guard = th.guard;
  rec.first_event = s.trace().events.size();
  Outcome out = Outcome::Continue;
  switch (n.kind) {
    case NodeKind::Assign: {
      Term v = eval_expr(s, t, pc, *n.expr);
      assign(s, t, pc, *n.lhs, v);
      advance(s, t);
      break;
    }
    case NodeKind::Assert: {
      Term c = eval_expr(s, t, pc, *n.expr);
      s.emit_assert(t, pc, th.guard, c, n.property);
      // Paths that outlive the unwinding bound stop here.
      if (n.property == PropertyKind::Unwinding) s.emit_assume(t, pc, th.guard, c);
      advance(s, t);
      break;
    }
    case NodeKind::Assume:
      s.emit_assume(t, pc, th.guard, eval_expr(s, t, pc, *n.expr));
      advance(s, t);
      break;
    case NodeKind::Goto: {
      Term c = n.expr ? eval_expr(s, t, pc, *n.expr) : mk_true();
      Term g = th.guard;
      jump(th, n.target, mk_and(g, c));
      th.guard = mk_and(g, mk_not(c));
      advance(s, t);
      break;
    }
    case NodeKind::Skip: advance(s, t); break;
    case NodeKind::End:
      s.exit_thread(t);
      out = Outcome::Stop;
      break;
    case NodeKind::Intrinsic:
      switch (run_intrinsic(s, t, pc)) {
        case IntrinsicResult::Done: advance(s, t); break;
        case IntrinsicResult::Yield:
        case IntrinsicResult::Blocked:
        case IntrinsicResult::Exited: out = Outcome::Stop; break;
      }
      break;
  }
  rec.end_event = s.trace().events.size();
  s.trace().execs.push_back(rec);
  return out;
}

}  // namespace

void step(SymState& s, int t) {
  if (t < 0 || t >= static_cast<int>(s.threads().size()) || s.thread(t).status == ThreadStatus::Exited)
    throw ScheduleError("thread " + std::to_string(t) + " cannot run");
  StepRecord rec;
  rec.thread = t;
  rec.threads = static_cast<int>(s.threads().size());
  rec.first_event = s.trace().events.size();
  bool did_visible = false;
  for (;;) {
    ThreadState& th = s.thread(t);
    if (th.status == ThreadStatus::Exited || s.killed()) break;
    const bool vis = s.node_visible(t, th.pc);
    if (vis && did_visible && th.atomic == 0) break;
    did_visible = did_visible || vis;
    if (exec_node(s, t) == Outcome::Stop) break;
    if (s.thread(t).status != ThreadStatus::Free) break;
  }
  rec.end_event = s.trace().events.size();
  s.trace().steps.push_back(rec);
  s.trace().schedule.push_back(t);
}

std::vector<int> schedulable(const SymState& s) {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(s.threads().size()); ++t) {
    const ThreadState& th = s.thread(t);
    if (th.status == ThreadStatus::Exited) continue;
    if (th.status == ThreadStatus::Free || wake_possible(s, t)) out.push_back(t);
  }
  return out;
}

int deadlock_candidate(const SymState& s) {
  if (!schedulable(s).empty()) return -1;
  for (int t = 0; t < static_cast<int>(s.threads().size()); ++t)
    if (s.thread(t).status != ThreadStatus::Exited) return t;
  return -1;
}

std::vector<int> enabled(const SymState& s) {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(s.threads().size()); ++t) {
    const ThreadState& th = s.thread(t);
    if (th.status != ThreadStatus::Free || s.node_of(t).kind == NodeKind::End) continue;
    // Run the thread alone until it reaches an effective node; branch tests
    // folded by the current state may skip all of them.
    SymState trial = s;
    bool effective = false;
    std::size_t seen = trial.trace().execs.size();
    while (!effective && !trial.killed() && trial.thread(t).status == ThreadStatus::Free &&
           trial.node_of(t).kind != NodeKind::End) {
      step(trial, t);
      const auto& execs = trial.trace().execs;
      for (; seen < execs.size() && !effective; ++seen) {
        NodeKind k = trial.cfg_of(t).cfg.nodes[execs[seen].node].kind;
        effective = k == NodeKind::Assign || k == NodeKind::Assert || k == NodeKind::Assume || k == NodeKind::Intrinsic;
      }
    }
    if (effective) out.push_back(t);
  }
  return out;
}

SsaTrace execute_interleaving(const UnrolledProgram& prog, const std::vector<int>& schedule,
                              const SymexOptions& opts) {
  SymState s = initial_state(prog, opts);
  for (int t : schedule) {
    // With concrete nondet values a path can end earlier than the symbolic
    // one it was recorded from.
    if (s.killed()) break;
    step(s, t);
  }
  return s.trace();
}

}  // namespace mtbmc
