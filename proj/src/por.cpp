#include "mtbmc/por.hpp"

namespace mtbmc {

namespace {

void reads_of(const Expr& e, AccessSet& out) {
  if ((e.kind == ExprKind::Ident || e.kind == ExprKind::Index) && e.sym.scope == SymbolRef::Scope::Global)
    out.reads.insert(e.name);
  for (const auto& a : e.args) reads_of(*a, out);
}

void object(const Expr& e, AccessSet& out) {
  out.reads.insert(e.name);
  out.writes.insert(e.name);
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& x : small)
    if (large.count(x)) return true;
  return false;
}

}  // namespace

void AccessSet::merge(const AccessSet& o) {
  reads.insert(o.reads.begin(), o.reads.end());
  writes.insert(o.writes.begin(), o.writes.end());
  sync = sync || o.sync;
  cuts = cuts || o.cuts;
}

AccessSet node_access(const CfgNode& n) {
  AccessSet a;
  switch (n.kind) {
    case NodeKind::Assign:
      if (n.lhs->sym.scope == SymbolRef::Scope::Global) a.writes.insert(n.lhs->name);
      for (const auto& idx : n.lhs->args) reads_of(*idx, a);
      reads_of(*n.expr, a);
      break;
    case NodeKind::Assert:
    case NodeKind::Assume:
      reads_of(*n.expr, a);
      a.cuts = n.kind == NodeKind::Assume || n.property == PropertyKind::Unwinding;
      break;
    case NodeKind::Goto:
      if (n.expr) reads_of(*n.expr, a);
      break;
    case NodeKind::Intrinsic:
      switch (n.expr->intrinsic) {
        case Intrinsic::Lock:
        case Intrinsic::Unlock:
        case Intrinsic::Signal:
        case Intrinsic::Broadcast: object(*n.expr->args[0], a); break;
        case Intrinsic::Wait:
          object(*n.expr->args[0], a);
          object(*n.expr->args[1], a);
          break;
        case Intrinsic::Create:
          for (std::size_t i = 2; i < n.expr->args.size(); ++i) reads_of(*n.expr->args[i], a);
          a.sync = true;
          break;
        default: a.sync = true; break;
      }
      break;
    case NodeKind::Skip:
    case NodeKind::End: break;
  }
  return a;
}

bool visible(const CfgNode& n) {
  AccessSet a = node_access(n);
  return a.touches_globals() || a.sync;
}

AccessClass classify_pair(const AccessSet& a, const AccessSet& b) {
  if (intersects(a.writes, b.writes) || intersects(a.writes, b.reads) || intersects(a.reads, b.writes))
    return AccessClass::NonEquivalent;
  return AccessClass::Equivalent;
}

void RwSets::add(const AccessSet& a) {
  rd.push_back(a.reads);
  wr.push_back(a.writes);
}

bool rw_independent(int j, const std::vector<int>& others, const RwSets& rw) {
  for (int k : others) {
    if (k == j) continue;
    if (intersects(rw.wr[j], rw.rd[k]) || intersects(rw.wr[j], rw.wr[k]) || intersects(rw.rd[j], rw.wr[k]))
      return false;
  }
  return true;
}

std::vector<AccessSet> suffix_access(const ThreadCfg& cfg) {
  std::vector<AccessSet> out(cfg.nodes.size() + 1);
  for (std::size_t i = cfg.nodes.size(); i-- > 0;) {
    out[i] = out[i + 1];
    out[i].merge(node_access(cfg.nodes[i]));
  }
  return out;
}

}  // namespace mtbmc
