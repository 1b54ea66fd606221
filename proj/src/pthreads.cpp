#include "mtbmc/pthreads.hpp"

namespace mtbmc {

namespace {

Term field(const SymState& s, const std::string& obj, const char* f) {
  return s.read(obj + "." + f, Sort::bv(s.width()));
}

void set_field(SymState& s, int t, int node, const std::string& obj, const char* f, const Term& v, const Term& g) {
  s.write(t, node, obj + "." + f, v, g);
}

std::string object_loc(const SymState& s, int t, const Expr& e) { return s.loc_of(t, e); }

void require_unconditional(const SymState& s, int t, const char* what) {
  if (!s.thread(t).guard.is_true())
    throw VerificationError(std::string(what) + " under a branch condition is not supported (thread " +
                            s.thread(t).name + ")");
}

int blocked_including(const SymState& s, int t) {
  return s.blocked_threads() + (s.thread(t).status == ThreadStatus::Free ? 1 : 0);
}

bool all_blocked(const SymState& s, int t) { return !(blocked_including(s, t) < s.live_threads()); }

// First atomic section of a lock: take the mutex if it is free, otherwise
// register as a waiter.
IntrinsicResult lock_enter(SymState& s, int t, int node, const std::string& m, int next_phase) {
  const Term g = s.thread(t).guard;
  const Term lock = field(s, m, "lock");
  const Term u = mk_eq(lock, s.bv(0));
  set_field(s, t, node, m, "lock", mk_ite(u, s.bv(1), lock), g);
  const Term count = field(s, m, "count");
  set_field(s, t, node, m, "count", mk_bvop(Op::Add, count, s.bv(1)), mk_and(g, mk_not(u)));
  ThreadState& th = s.thread(t);
  th.unlocked = u;
  th.mutex = m;
  if (mk_implies(g, u).is_true()) {
    th.phase = 0;
    return IntrinsicResult::Done;
  }
  th.phase = next_phase;
  if (mk_and(g, u).is_false()) {
    th.status = ThreadStatus::LockWait;
    return IntrinsicResult::Blocked;
  }
  return IntrinsicResult::Yield;
}

// Second atomic section: a waiter acquires the mutex once it is released.
IntrinsicResult lock_retry(SymState& s, int t, int node) {
  const std::string m = s.thread(t).mutex;
  const Term g2 = mk_and(s.thread(t).guard, mk_not(s.thread(t).unlocked));
  const Term free = mk_eq(field(s, m, "lock"), s.bv(0));
  const Term take = mk_and(g2, free);
  set_field(s, t, node, m, "lock", s.bv(1), take);
  set_field(s, t, node, m, "count", mk_bvop(Op::Sub, field(s, m, "count"), s.bv(1)), take);
  if (all_blocked(s, t)) s.emit_assert(t, node, mk_and(g2, mk_not(free)), mk_false(), PropertyKind::Deadlock);
  s.emit_assume(t, node, g2, free);
  ThreadState& th = s.thread(t);
  th.status = ThreadStatus::Free;
  th.phase = 0;
  return IntrinsicResult::Done;
}

}  // namespace

IntrinsicResult model_create(SymState& s, int t, int node, const Expr& call) {
  require_unconditional(s, t, "create");
  std::vector<Term> args;
  for (std::size_t i = 2; i < call.args.size(); ++i) args.push_back(eval_expr(s, t, node, *call.args[i]));
  const std::string handle = s.loc_of(t, *call.args[0]);
  const int child = s.add_thread(call.thread_ref);
  s.bind(handle, s.bv(child));
  const ThreadDef& def = s.program().program->threads()[call.thread_ref];
  for (std::size_t i = 0; i < def.params.size() && i < args.size(); ++i)
    s.bind(s.local_loc(child, def.params[i].name), args[i]);
  return IntrinsicResult::Done;
}

IntrinsicResult model_join(SymState& s, int t, int node, const Expr& call) {
  ThreadState& th = s.thread(t);
  if (th.status == ThreadStatus::JoinWait) {
    if (s.thread(th.join_target).status == ThreadStatus::Exited) {
      th.status = ThreadStatus::Free;
      return IntrinsicResult::Done;
    }
    // Scheduled only as the deadlock candidate.
    if (all_blocked(s, t)) s.emit_assert(t, node, th.guard, mk_false(), PropertyKind::Deadlock);
    s.emit_assume(t, node, s.thread(t).guard, mk_false());
    s.thread(t).status = ThreadStatus::Free;
    return IntrinsicResult::Done;
  }
  require_unconditional(s, t, "join");
  Term h = eval_expr(s, t, node, *call.args[0]);
  if (!h.is_const()) throw VerificationError("join on a thread handle that is not a constant");
  const std::int64_t id = h.value();
  if (id < 0 || id >= static_cast<std::int64_t>(s.threads().size()))
    throw VerificationError("join on a thread that was never started (thread " + th.name + ")");
  if (s.thread(static_cast<int>(id)).status == ThreadStatus::Exited) return IntrinsicResult::Done;
  ThreadState& me = s.thread(t);
  me.join_target = static_cast<int>(id);
  me.status = ThreadStatus::JoinWait;
  return IntrinsicResult::Blocked;
}

IntrinsicResult model_exit(SymState& s, int t, int node) {
  (void)node;
  require_unconditional(s, t, "exit");
  s.exit_thread(t);
  return IntrinsicResult::Exited;
}

IntrinsicResult model_lock(SymState& s, int t, int node, const std::string& mutex) {
  if (s.thread(t).phase == 0) return lock_enter(s, t, node, mutex, 1);
  return lock_retry(s, t, node);
}

IntrinsicResult model_unlock(SymState& s, int t, int node, const std::string& mutex) {
  const Term g = s.thread(t).guard;
  const Term lock = field(s, mutex, "lock");
  s.emit_assert(t, node, g, mk_not(mk_eq(lock, s.bv(0))), PropertyKind::BadUnlock);
  set_field(s, t, node, mutex, "lock", s.bv(0), g);
  return IntrinsicResult::Done;
}

IntrinsicResult model_wait(SymState& s, int t, int node, const std::string& cond, const std::string& mutex) {
  switch (s.thread(t).phase) {
    case 0: {
      const Term g = s.thread(t).guard;
      set_field(s, t, node, cond, "lock", s.bv(1), g);
      s.emit_assert(t, node, g, mk_not(mk_eq(field(s, mutex, "lock"), s.bv(0))), PropertyKind::BadWait);
      set_field(s, t, node, mutex, "lock", s.bv(0), g);
      set_field(s, t, node, cond, "nwaiters", mk_bvop(Op::Add, field(s, cond, "nwaiters"), s.bv(1)), g);
      ThreadState& th = s.thread(t);
      th.wait_bid = field(s, cond, "bid");
      th.mutex = mutex;
      th.status = ThreadStatus::CondWait;
      th.phase = 1;
      return IntrinsicResult::Blocked;
    }
    case 1: {
      const Term g = s.thread(t).guard;
      const Term w = mk_or(mk_eq(field(s, cond, "lock"), s.bv(0)), mk_slt(s.thread(t).wait_bid, field(s, cond, "bid")));
      if (all_blocked(s, t)) s.emit_assert(t, node, mk_and(g, mk_not(w)), mk_false(), PropertyKind::Deadlock);
      s.emit_assume(t, node, g, w);
      s.thread(t).status = ThreadStatus::Free;
      if (s.killed()) return IntrinsicResult::Yield;
      return lock_enter(s, t, node, mutex, 2);
    }
    default: return lock_retry(s, t, node);
  }
}

IntrinsicResult model_signal(SymState& s, int t, int node, const std::string& cond) {
  const Term g = s.thread(t).guard;
  set_field(s, t, node, cond, "lock", s.bv(0), g);
  const Term nw = field(s, cond, "nwaiters");
  set_field(s, t, node, cond, "nwaiters", mk_ite(mk_slt(s.bv(0), nw), mk_bvop(Op::Sub, nw, s.bv(1)), s.bv(0)), g);
  return IntrinsicResult::Done;
}

IntrinsicResult model_broadcast(SymState& s, int t, int node, const std::string& cond) {
  const Term g = s.thread(t).guard;
  set_field(s, t, node, cond, "bid", mk_bvop(Op::Add, field(s, cond, "bid"), s.bv(1)), g);
  return IntrinsicResult::Done;
}

IntrinsicResult run_intrinsic(SymState& s, int t, int node) {
  const Expr& call = *s.cfg_of(t).cfg.nodes[node].expr;
  switch (call.intrinsic) {
    case Intrinsic::Create: return model_create(s, t, node, call);
    case Intrinsic::Join: return model_join(s, t, node, call);
    case Intrinsic::Exit: return model_exit(s, t, node);
    case Intrinsic::Lock: return model_lock(s, t, node, object_loc(s, t, *call.args[0]));
    case Intrinsic::Unlock: return model_unlock(s, t, node, object_loc(s, t, *call.args[0]));
    case Intrinsic::Wait:
      return model_wait(s, t, node, object_loc(s, t, *call.args[0]), object_loc(s, t, *call.args[1]));
    case Intrinsic::Signal: return model_signal(s, t, node, object_loc(s, t, *call.args[0]));
    case Intrinsic::Broadcast: return model_broadcast(s, t, node, object_loc(s, t, *call.args[0]));
    case Intrinsic::AtomicBegin: ++s.thread(t).atomic; return IntrinsicResult::Done;
    case Intrinsic::AtomicEnd:
      if (s.thread(t).atomic > 0) --s.thread(t).atomic;
      return IntrinsicResult::Done;
    default: throw std::logic_error("unexpected intrinsic " + call.name);
  }
}

bool wake_possible(const SymState& s, int t) {
  const ThreadState& th = s.thread(t);
  switch (th.status) {
    case ThreadStatus::JoinWait: return s.thread(th.join_target).status == ThreadStatus::Exited;
    case ThreadStatus::LockWait: return !mk_eq(field(s, th.mutex, "lock"), s.bv(0)).is_false();
    case ThreadStatus::CondWait: {
      const Expr& call = *s.node_of(t).expr;
      const std::string c = s.loc_of(t, *call.args[0]);
      return !mk_or(mk_eq(field(s, c, "lock"), s.bv(0)), mk_slt(th.wait_bid, field(s, c, "bid"))).is_false();
    }
    default: return th.status == ThreadStatus::Free;
  }
}

}  // namespace mtbmc
