#include "mtbmc/cfg.hpp"

#include <sstream>

namespace mtbmc {

const char* property_tag(PropertyKind k) {
  switch (k) {
    case PropertyKind::Assertion: return "assertion";
    case PropertyKind::Unwinding: return "unwinding";
    case PropertyKind::Deadlock: return "deadlock";
    case PropertyKind::BadUnlock: return "bad-unlock";
    case PropertyKind::BadWait: return "bad-wait";
    case PropertyKind::DivByZero: return "division-by-zero";
  }
  return "?";
}

namespace {

bool is_nondet(const Expr& e) {
  return e.kind == ExprKind::Call && (e.intrinsic == Intrinsic::NondetInt || e.intrinsic == Intrinsic::NondetBool);
}

bool has_effects(const Expr& e) {
  if (e.kind == ExprKind::Assign || is_nondet(e)) return true;
  for (const auto& a : e.args)
    if (has_effects(*a)) return true;
  return false;
}

ExprPtr negate(const ExprPtr& c) {
  if (c->kind == ExprKind::Unary && c->unop == UnOp::Not) return c->args[0];
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->unop = UnOp::Not;
  e->loc = c->loc;
  e->type = {TypeKind::Bool, 0};
  e->args = {c};
  return e;
}

std::string assign_text(const Expr& lhs, const Expr& rhs) { return print_expr(lhs) + " = " + print_expr(rhs); }

class Builder {
 public:
  Builder(const TypedProgram& p, int def_index)
      : def_(def_index < 0 ? p.entry() : p.threads()[def_index]) {
    out_.name = def_.name;
    out_.def_index = def_index;
  }

  ThreadCfg run() {
    for (const auto& s : def_.body) stmt(*s);
    CfgNode end;
    end.kind = NodeKind::End;
    end.loc = def_.loc;
    end.text = "end of " + def_.name;
    emit(std::move(end));
    return std::move(out_);
  }

 private:
  int emit(CfgNode n) {
    out_.nodes.push_back(std::move(n));
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  int size() const { return static_cast<int>(out_.nodes.size()); }

  void emit_assign(ExprPtr lhs, ExprPtr rhs, SourceLoc loc, std::string text) {
    CfgNode n;
    n.kind = NodeKind::Assign;
    n.text = text.empty() ? assign_text(*lhs, *rhs) : std::move(text);
    n.lhs = std::move(lhs);
    n.expr = std::move(rhs);
    n.loc = loc;
    emit(std::move(n));
  }

  ExprPtr temp(MtcType type, SourceLoc loc) {
    int idx = static_cast<int>(def_.locals.size() + out_.temps.size());
    std::string name = "__tmp" + std::to_string(out_.temps.size());
    out_.temps.push_back({name, type});
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Ident;
    e->name = name;
    e->loc = loc;
    e->type = type;
    e->sym = {SymbolRef::Scope::Local, idx};
    return e;
  }

  // Hoists nested assignments and nondet calls into preceding nodes and
  // returns the remaining side-effect-free expression.
  ExprPtr pure(const ExprPtr& e) {
    if (!has_effects(*e)) return e;
    if (is_nondet(*e)) {
      ExprPtr t = temp(e->type, e->loc);
      emit_assign(t, e, e->loc, "");
      return t;
    }
    if (e->kind == ExprKind::Assign) {
      ExprPtr lhs = lvalue(e->args[0]);
      ExprPtr rhs = pure(e->args[1]);
      emit_assign(lhs, rhs, e->loc, "");
      return lhs;
    }
    auto copy = std::make_shared<Expr>(*e);
    for (auto& a : copy->args) a = pure(a);
    return copy;
  }

  ExprPtr lvalue(const ExprPtr& e) {
    if (e->kind != ExprKind::Index || !has_effects(*e->args[0])) return e;
    auto copy = std::make_shared<Expr>(*e);
    copy->args[0] = pure(e->args[0]);
    return copy;
  }

  // A direct "x = nondet_int()" keeps its call; anything else is made pure.
  ExprPtr value(const ExprPtr& e) { return is_nondet(*e) ? e : pure(e); }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl: {
        if (!s.expr) return;
        auto lhs = std::make_shared<Expr>();
        lhs->kind = ExprKind::Ident;
        lhs->name = s.decl_name;
        lhs->loc = s.loc;
        lhs->type = s.decl_type;
        lhs->sym = s.sym;
        ExprPtr rhs = value(s.expr);
        emit_assign(lhs, rhs, s.loc, print_stmt_head(s));
        return;
      }
      case StmtKind::Expr: {
        const Expr& e = *s.expr;
        if (e.kind == ExprKind::Assign) {
          ExprPtr lhs = lvalue(e.args[0]);
          ExprPtr rhs = value(e.args[1]);
          bool hoisted = lhs != e.args[0] || rhs != e.args[1];
          emit_assign(lhs, rhs, s.loc, hoisted ? "" : print_stmt_head(s));
          return;
        }
        if (is_nondet(e)) return;
        auto call = std::make_shared<Expr>(e);
        for (auto& a : call->args) a = pure(a);
        CfgNode n;
        n.kind = NodeKind::Intrinsic;
        n.expr = call;
        n.loc = s.loc;
        n.text = print_expr(*call);
        emit(std::move(n));
        return;
      }
      case StmtKind::Assert:
      case StmtKind::Assume: {
        CfgNode n;
        n.kind = s.kind == StmtKind::Assert ? NodeKind::Assert : NodeKind::Assume;
        n.expr = pure(s.expr);
        n.loc = s.loc;
        n.text = print_stmt_head(s);
        emit(std::move(n));
        return;
      }
      case StmtKind::Skip: {
        CfgNode n;
        n.kind = NodeKind::Skip;
        n.loc = s.loc;
        n.text = "skip";
        emit(std::move(n));
        return;
      }
      case StmtKind::Block:
        for (const auto& b : s.body) stmt(*b);
        return;
      case StmtKind::If: {
        CfgNode test;
        test.kind = NodeKind::Goto;
        test.expr = negate(pure(s.expr));
        test.loc = s.loc;
        test.text = print_stmt_head(s);
        int t = emit(std::move(test));
        for (const auto& b : s.body) stmt(*b);
        if (s.has_else) {
          CfgNode skip_else;
          skip_else.kind = NodeKind::Goto;
          skip_else.loc = s.loc;
          skip_else.text = "else";
          int j = emit(std::move(skip_else));
          out_.nodes[t].target = size();
          for (const auto& b : s.else_body) stmt(*b);
          out_.nodes[j].target = size();
        } else {
          out_.nodes[t].target = size();
        }
        return;
      }
      case StmtKind::While: {
        int head = size();
        CfgNode test;
        test.kind = NodeKind::Goto;
        test.expr = negate(pure(s.expr));
        test.loc = s.loc;
        test.text = print_stmt_head(s);
        test.loop_test = true;
        int t = emit(std::move(test));
        for (const auto& b : s.body) stmt(*b);
        CfgNode back;
        back.kind = NodeKind::Goto;
        back.target = head;
        back.loc = s.loc;
        back.text = "end of loop";
        emit(std::move(back));
        out_.nodes[t].target = size();
        return;
      }
    }
  }

  const ThreadDef& def_;
  ThreadCfg out_;
};

bool is_back_edge(const std::vector<CfgNode>& nodes, int i) {
  return nodes[i].kind == NodeKind::Goto && !nodes[i].expr && nodes[i].target <= i;
}

// Unrolls the loop closed by back edge b: the body [h, b) is copied k times,
// followed by the loop's pre-test nodes and the unwinding check.
void unroll_loop(std::vector<CfgNode>& nodes, int b, unsigned k, bool unwinding_assertions) {
  const int h = nodes[b].target;
  const int exit = b + 1;
  int t = h;
  while (!(nodes[t].loop_test && nodes[t].target == exit)) ++t;
  const int len = b - h;
  const int check_len = t - h + 1;
  const int copies_len = static_cast<int>(k) * len;
  const int delta = copies_len + check_len - (len + 1);

  auto remap = [&](int target, int copy) {
    if (target < h) return target;
    if (target < b) return h + copy * len + (target - h);
    if (target == b) return h + (copy + 1) * len;
    return target + delta;
  };

  std::vector<CfgNode> seg;
  seg.reserve(copies_len + check_len);
  for (unsigned c = 0; c < k; ++c) {
    for (int i = h; i < b; ++i) {
      CfgNode n = nodes[i];
      if (n.kind == NodeKind::Goto) n.target = remap(n.target, static_cast<int>(c));
      seg.push_back(std::move(n));
    }
  }
  for (int i = h; i < t; ++i) seg.push_back(nodes[i]);
  CfgNode check;
  check.kind = unwinding_assertions ? NodeKind::Assert : NodeKind::Assume;
  check.property = PropertyKind::Unwinding;
  check.expr = nodes[t].expr;
  check.loc = nodes[t].loc;
  check.text = "unwinding assertion of " + nodes[t].text;
  seg.push_back(std::move(check));

  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (i >= h && i <= b) continue;
    if (nodes[i].kind == NodeKind::Goto && nodes[i].target > b) nodes[i].target += delta;
  }
  nodes.erase(nodes.begin() + h, nodes.begin() + b + 1);
  nodes.insert(nodes.begin() + h, seg.begin(), seg.end());
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Assign: return "assign";
    case NodeKind::Assert: return "assert";
    case NodeKind::Assume: return "assume";
    case NodeKind::Goto: return "goto";
    case NodeKind::Intrinsic: return "call";
    case NodeKind::Skip: return "skip";
    case NodeKind::End: return "end";
  }
  return "?";
}

}  // namespace

std::vector<CfgEdge> ThreadCfg::edges() const {
  std::vector<CfgEdge> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const CfgNode& n = nodes[i];
    if (n.kind == NodeKind::End) continue;
    if (n.kind != NodeKind::Goto) {
      out.push_back({i, i + 1, CfgEdge::Polarity::Always});
    } else if (!n.expr) {
      out.push_back({i, n.target, CfgEdge::Polarity::Always});
    } else {
      out.push_back({i, n.target, CfgEdge::Polarity::True});
      out.push_back({i, i + 1, CfgEdge::Polarity::False});
    }
  }
  return out;
}

bool ThreadCfg::acyclic() const {
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].kind == NodeKind::Goto && nodes[i].target <= i) return false;
  return true;
}

ThreadCfg build_thread_cfg(const TypedProgram& p, int def_index) { return Builder(p, def_index).run(); }

CfgSet build_cfg(const TypedProgram& p) {
  CfgSet s;
  for (int i = 0; i < static_cast<int>(p.threads().size()); ++i) s.threads.push_back(build_thread_cfg(p, i));
  s.entry = build_thread_cfg(p, -1);
  return s;
}

UnrolledCfg unroll(const ThreadCfg& cfg, unsigned k, bool unwinding_assertions) {
  UnrolledCfg u;
  u.cfg = cfg;
  u.bound = k;
  u.unwinding_assertions = unwinding_assertions;
  auto& nodes = u.cfg.nodes;
  for (;;) {
    // Innermost first: a back edge with no other back edge inside its body.
    int pick = -1;
    for (int b = 0; b < static_cast<int>(nodes.size()) && pick < 0; ++b) {
      if (!is_back_edge(nodes, b)) continue;
      bool inner = true;
      for (int j = nodes[b].target; j < b; ++j)
        if (is_back_edge(nodes, j)) inner = false;
      if (inner) pick = b;
    }
    if (pick < 0) break;
    unroll_loop(nodes, pick, k, unwinding_assertions);
  }
  return u;
}

UnrolledProgram unroll_program(const TypedProgram& p, unsigned k, bool unwinding_assertions) {
  CfgSet s = build_cfg(p);
  UnrolledProgram u;
  u.program = &p;
  for (const auto& t : s.threads) u.threads.push_back(unroll(t, k, unwinding_assertions));
  u.entry = unroll(s.entry, k, unwinding_assertions);
  return u;
}

std::string dump_cfg(const ThreadCfg& cfg) {
  std::ostringstream os;
  os << cfg.name << ":\n";
  for (int i = 0; i < static_cast<int>(cfg.nodes.size()); ++i) {
    const CfgNode& n = cfg.nodes[i];
    os << "  " << i << ": " << kind_name(n.kind);
    if (n.kind == NodeKind::Goto) {
      os << ' ' << n.target;
      if (n.expr) os << " if " << print_expr(*n.expr);
    } else if (n.kind == NodeKind::Assign) {
      os << ' ' << print_expr(*n.lhs) << " = " << print_expr(*n.expr);
    } else if (n.expr) {
      os << ' ' << print_expr(*n.expr);
    }
    if (n.property != PropertyKind::Assertion) os << " [" << property_tag(n.property) << ']';
    os << '\n';
  }
  return os.str();
}

}  // namespace mtbmc
