#include <map>
#include <set>

#include "mtbmc/frontend.hpp"

namespace mtbmc {

std::string type_name(MtcType t) {
  switch (t.kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::IntArray: return "int[" + std::to_string(t.length) + "]";
    case TypeKind::Mutex: return "mutex";
    case TypeKind::Cond: return "cond";
    case TypeKind::Thread: return "thread_t";
  }
  return "?";
}

const char* intrinsic_name(Intrinsic i) {
  switch (i) {
    case Intrinsic::None: return "";
    case Intrinsic::Create: return "create";
    case Intrinsic::Join: return "join";
    case Intrinsic::Exit: return "exit";
    case Intrinsic::Lock: return "lock";
    case Intrinsic::Unlock: return "unlock";
    case Intrinsic::Wait: return "wait";
    case Intrinsic::Signal: return "signal";
    case Intrinsic::Broadcast: return "broadcast";
    case Intrinsic::AtomicBegin: return "atomic_begin";
    case Intrinsic::AtomicEnd: return "atomic_end";
    case Intrinsic::NondetInt: return "nondet_int";
    case Intrinsic::NondetBool: return "nondet_bool";
  }
  return "";
}

Intrinsic intrinsic_from_name(const std::string& name) {
  static const std::map<std::string, Intrinsic> table = {
      {"create", Intrinsic::Create},       {"join", Intrinsic::Join},
      {"exit", Intrinsic::Exit},           {"lock", Intrinsic::Lock},
      {"unlock", Intrinsic::Unlock},       {"wait", Intrinsic::Wait},
      {"signal", Intrinsic::Signal},       {"broadcast", Intrinsic::Broadcast},
      {"atomic_begin", Intrinsic::AtomicBegin}, {"atomic_end", Intrinsic::AtomicEnd},
      {"nondet_int", Intrinsic::NondetInt}, {"nondet_bool", Intrinsic::NondetBool},
  };
  auto it = table.find(name);
  return it == table.end() ? Intrinsic::None : it->second;
}

int TypedProgram::find_global(const std::string& name) const {
  for (std::size_t i = 0; i < program.globals.size(); ++i)
    if (program.globals[i].name == name) return static_cast<int>(i);
  return -1;
}

int TypedProgram::find_thread(const std::string& name) const {
  for (std::size_t i = 0; i < program.threads.size(); ++i)
    if (program.threads[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

const MtcType kInt{TypeKind::Int, 0};
const MtcType kBool{TypeKind::Bool, 0};
const MtcType kVoid{TypeKind::Void, 0};

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  std::vector<std::string> run() {
    for (std::size_t i = 0; i < p_.globals.size(); ++i) {
      auto& g = p_.globals[i];
      if (globals_.count(g.name)) error(g.loc, "redeclaration of global '" + g.name + "'");
      if (g.type.kind == TypeKind::IntArray && g.type.length == 0) error(g.loc, "array length must be positive");
      globals_[g.name] = static_cast<int>(i);
      if (g.init) check_global_init(g);
    }
    for (std::size_t i = 0; i < p_.threads.size(); ++i) {
      auto& t = p_.threads[i];
      if (threads_.count(t.name) || t.name == "main") error(t.loc, "redefinition of thread '" + t.name + "'");
      if (globals_.count(t.name)) error(t.loc, "thread '" + t.name + "' shadows a global");
      threads_[t.name] = static_cast<int>(i);
    }
    for (auto& t : p_.threads) check_thread(t);
    check_thread(p_.entry);
    return warnings_;
  }

 private:
  [[noreturn]] void error(SourceLoc loc, const std::string& msg) const { throw TypeError(p_.origin, loc, msg); }

  void check_global_init(const GlobalDecl& g) {
    const Expr* e = g.init.get();
    bool negated = false;
    if (e->kind == ExprKind::Unary && e->unop == UnOp::Neg) {
      negated = true;
      e = e->args[0].get();
    }
    if (g.type.kind == TypeKind::Int && e->kind == ExprKind::IntLit) return;
    if (g.type.kind == TypeKind::Bool && e->kind == ExprKind::BoolLit && !negated) return;
    error(g.init->loc, "initializer of '" + g.name + "' must be a " + type_name(g.type) + " literal");
  }

  void check_thread(ThreadDef& t) {
    scope_.clear();
    cur_ = &t;
    t.locals.clear();
    for (const auto& prm : t.params) {
      if (!prm.type.scalar()) error(prm.loc, "thread parameters must be int or bool");
      declare_local(prm.name, prm.type, prm.loc);
    }
    for (auto& s : t.body) check_stmt(*s);
  }

  int declare_local(const std::string& name, MtcType type, SourceLoc loc) {
    if (scope_.count(name)) error(loc, "redeclaration of '" + name + "'");
    if (threads_.count(name)) error(loc, "'" + name + "' names a thread");
    int idx = static_cast<int>(cur_->locals.size());
    cur_->locals.push_back({name, type});
    scope_[name] = idx;
    return idx;
  }

  void check_stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl: {
        if (s.decl_type.kind == TypeKind::Mutex || s.decl_type.kind == TypeKind::Cond)
          error(s.loc, type_name(s.decl_type) + " objects must be global");
        if (s.decl_type.kind == TypeKind::IntArray && s.decl_type.length == 0)
          error(s.loc, "array length must be positive");
        if (s.expr) {
          if (!s.decl_type.scalar()) error(s.loc, "only int and bool locals take initializers");
          MtcType t = check_value(*s.expr);
          if (!(t == s.decl_type))
            error(s.expr->loc, "cannot initialize " + type_name(s.decl_type) + " with " + type_name(t));
        }
        // Declared after the initializer so that "int x = x;" does not see itself.
        s.sym = {SymbolRef::Scope::Local, declare_local(s.decl_name, s.decl_type, s.loc)};
        if (s.expr) note_globals(s, *s.expr);
        return;
      }
      case StmtKind::Expr: {
        Expr& e = *s.expr;
        if (e.kind == ExprKind::Assign) {
          check_value(e);
        } else if (e.kind == ExprKind::Call) {
          MtcType t = check_call(e);
          if (!(t == kVoid) && e.intrinsic != Intrinsic::NondetInt && e.intrinsic != Intrinsic::NondetBool)
            error(e.loc, "expression statement has no effect");
        } else {
          error(e.loc, "expression statement must be an assignment or an intrinsic call");
        }
        note_globals(s, e);
        return;
      }
      case StmtKind::If:
      case StmtKind::While:
        require_bool(*s.expr, s.kind == StmtKind::If ? "if condition" : "while condition");
        note_globals(s, *s.expr);
        for (auto& b : s.body) check_stmt(*b);
        for (auto& b : s.else_body) check_stmt(*b);
        return;
      case StmtKind::Block:
        for (auto& b : s.body) check_stmt(*b);
        return;
      case StmtKind::Assert:
      case StmtKind::Assume:
        require_bool(*s.expr, s.kind == StmtKind::Assert ? "assert" : "assume");
        note_globals(s, *s.expr);
        return;
      case StmtKind::Skip: return;
    }
  }

  void require_bool(Expr& e, const char* what) {
    MtcType t = check_value(e);
    if (!(t == kBool)) error(e.loc, std::string(what) + " requires bool, found " + type_name(t));
  }

  void collect_globals(const Expr& e, std::set<std::string>& out) const {
    if ((e.kind == ExprKind::Ident || e.kind == ExprKind::Index) && e.sym.scope == SymbolRef::Scope::Global)
      out.insert(e.name);
    for (const auto& a : e.args) collect_globals(*a, out);
  }

  // Statements are executed without intermediate context switches; a
  // statement touching several shared variables is therefore more atomic than
  // the original program would be.
  void note_globals(const Stmt& s, const Expr& e) {
    if (e.kind == ExprKind::Call && e.intrinsic != Intrinsic::NondetInt && e.intrinsic != Intrinsic::NondetBool)
      return;
    std::set<std::string> gs;
    collect_globals(e, gs);
    if (gs.size() > 1) {
      std::string list;
      for (const auto& g : gs) list += (list.empty() ? "" : ", ") + g;
      warnings_.push_back(p_.origin + ":" + std::to_string(s.loc.line) + ":" + std::to_string(s.loc.column) +
                          ": statement accesses several shared variables (" + list + ") and executes atomically");
    }
  }

  // Resolves a plain identifier into e.sym/e.type.
  MtcType resolve(Expr& e) {
    if (auto it = scope_.find(e.name); it != scope_.end()) {
      e.sym = {SymbolRef::Scope::Local, it->second};
      e.type = cur_->locals[it->second].type;
      return e.type;
    }
    if (auto it = globals_.find(e.name); it != globals_.end()) {
      e.sym = {SymbolRef::Scope::Global, it->second};
      e.type = p_.globals[it->second].type;
      return e.type;
    }
    error(e.loc, "undeclared identifier '" + e.name + "'");
  }

  MtcType check_value(Expr& e, bool under_logical = false) {
    switch (e.kind) {
      case ExprKind::IntLit: return e.type = kInt;
      case ExprKind::BoolLit: return e.type = kBool;
      case ExprKind::Ident: {
        MtcType t = resolve(e);
        if (!t.scalar()) error(e.loc, "'" + e.name + "' of type " + type_name(t) + " cannot be used as a value");
        return t;
      }
      case ExprKind::Index: {
        MtcType t = resolve(e);
        if (t.kind != TypeKind::IntArray) error(e.loc, "'" + e.name + "' is not an array");
        MtcType it = check_value(*e.args[0], under_logical);
        if (!(it == kInt)) error(e.args[0]->loc, "array index must be int");
        return e.type = kInt;
      }
      case ExprKind::Unary: {
        MtcType t = check_value(*e.args[0], under_logical);
        MtcType want = e.unop == UnOp::Not ? kBool : kInt;
        if (!(t == want))
          error(e.loc, std::string("operator ") + unop_spelling(e.unop) + " expects " + type_name(want) +
                           ", found " + type_name(t));
        return e.type = want;
      }
      case ExprKind::Binary: {
        bool logical = e.binop == BinOp::LAnd || e.binop == BinOp::LOr;
        MtcType l = check_value(*e.args[0], under_logical || logical);
        MtcType r = check_value(*e.args[1], under_logical || logical);
        auto need = [&](MtcType want) {
          if (!(l == want) || !(r == want))
            error(e.loc, std::string("operator ") + binop_spelling(e.binop) + " expects " + type_name(want) +
                             " operands, found " + type_name(l) + " and " + type_name(r));
        };
        switch (e.binop) {
          case BinOp::LAnd:
          case BinOp::LOr: need(kBool); return e.type = kBool;
          case BinOp::Eq:
          case BinOp::Ne:
            if (!(l == r)) error(e.loc, "cannot compare " + type_name(l) + " with " + type_name(r));
            return e.type = kBool;
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge: need(kInt); return e.type = kBool;
          default: need(kInt); return e.type = kInt;
        }
      }
      case ExprKind::Assign: {
        if (under_logical) error(e.loc, "assignment inside && or || is not supported");
        Expr& lhs = *e.args[0];
        if (lhs.kind != ExprKind::Ident && lhs.kind != ExprKind::Index)
          error(lhs.loc, "left-hand side of assignment is not assignable");
        MtcType lt = check_value(lhs, under_logical);
        MtcType rt = check_value(*e.args[1], under_logical);
        if (!(lt == rt)) error(e.loc, "cannot assign " + type_name(rt) + " to " + type_name(lt));
        return e.type = lt;
      }
      case ExprKind::Call: {
        MtcType t = check_call(e);
        if (t == kVoid) error(e.loc, std::string(intrinsic_name(e.intrinsic)) + "() does not produce a value");
        return t;
      }
    }
    return kVoid;
  }

  void arity(const Expr& e, std::size_t n) const {
    if (e.args.size() != n)
      error(e.loc, e.name + "() takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                       std::to_string(e.args.size()));
  }

  void object_arg(Expr& e, std::size_t i, TypeKind want) {
    Expr& a = *e.args[i];
    MtcType need{want, 0};
    if (a.kind != ExprKind::Ident)
      error(a.loc, e.name + "() expects a " + type_name(need) + " variable");
    MtcType t = resolve(a);
    if (t.kind != want)
      error(a.loc, e.name + "() expects a " + type_name(need) + ", '" + a.name + "' is " + type_name(t));
  }

  MtcType check_call(Expr& e) {
    e.intrinsic = intrinsic_from_name(e.name);
    switch (e.intrinsic) {
      case Intrinsic::None: error(e.loc, "unknown function '" + e.name + "'");
      case Intrinsic::NondetInt: arity(e, 0); return e.type = kInt;
      case Intrinsic::NondetBool: arity(e, 0); return e.type = kBool;
      case Intrinsic::Exit:
      case Intrinsic::AtomicBegin:
      case Intrinsic::AtomicEnd: arity(e, 0); return e.type = kVoid;
      case Intrinsic::Lock:
      case Intrinsic::Unlock: arity(e, 1); object_arg(e, 0, TypeKind::Mutex); return e.type = kVoid;
      case Intrinsic::Signal:
      case Intrinsic::Broadcast: arity(e, 1); object_arg(e, 0, TypeKind::Cond); return e.type = kVoid;
      case Intrinsic::Wait:
        arity(e, 2);
        object_arg(e, 0, TypeKind::Cond);
        object_arg(e, 1, TypeKind::Mutex);
        return e.type = kVoid;
      case Intrinsic::Join: arity(e, 1); object_arg(e, 0, TypeKind::Thread); return e.type = kVoid;
      case Intrinsic::Create: {
        if (e.args.size() < 2) error(e.loc, "create() takes a handle, a thread name and its arguments");
        object_arg(e, 0, TypeKind::Thread);
        Expr& target = *e.args[1];
        auto it = target.kind == ExprKind::Ident ? threads_.find(target.name) : threads_.end();
        if (it == threads_.end()) error(target.loc, "create() expects the name of a declared thread");
        e.thread_ref = it->second;
        const ThreadDef& td = p_.threads[it->second];
        if (e.args.size() - 2 != td.params.size())
          error(e.loc, "thread '" + td.name + "' takes " + std::to_string(td.params.size()) + " argument(s), got " +
                           std::to_string(e.args.size() - 2));
        for (std::size_t i = 0; i < td.params.size(); ++i) {
          MtcType t = check_value(*e.args[i + 2]);
          if (!(t == td.params[i].type))
            error(e.args[i + 2]->loc, "argument '" + td.params[i].name + "' of '" + td.name + "' expects " +
                                          type_name(td.params[i].type) + ", found " + type_name(t));
        }
        return e.type = kVoid;
      }
    }
    return kVoid;
  }

  Program& p_;
  std::map<std::string, int> globals_;
  std::map<std::string, int> threads_;
  std::map<std::string, int> scope_;
  ThreadDef* cur_ = nullptr;
  std::vector<std::string> warnings_;
};

}  // namespace

TypedProgram typecheck(Program ast) {
  TypedProgram tp;
  tp.program = std::move(ast);
  tp.warnings = Checker(tp.program).run();
  return tp;
}

}  // namespace mtbmc
