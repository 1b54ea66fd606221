#include <sstream>

#include "mtbmc/frontend.hpp"

namespace mtbmc {

namespace {

std::string decl_type_prefix(MtcType t) {
  return t.kind == TypeKind::IntArray ? "int" : type_name(t);
}

std::string decl_suffix(MtcType t) {
  return t.kind == TypeKind::IntArray ? "[" + std::to_string(t.length) + "]" : "";
}

void print_expr_to(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case ExprKind::IntLit: os << e.int_value; return;
    case ExprKind::BoolLit: os << (e.bool_value ? "true" : "false"); return;
    case ExprKind::Ident: os << e.name; return;
    case ExprKind::Index:
      os << e.name << '[';
      print_expr_to(*e.args[0], os);
      os << ']';
      return;
    case ExprKind::Unary:
      os << unop_spelling(e.unop) << '(';
      print_expr_to(*e.args[0], os);
      os << ')';
      return;
    case ExprKind::Binary:
      os << '(';
      print_expr_to(*e.args[0], os);
      os << ' ' << binop_spelling(e.binop) << ' ';
      print_expr_to(*e.args[1], os);
      os << ')';
      return;
    case ExprKind::Assign:
      os << '(';
      print_expr_to(*e.args[0], os);
      os << " = ";
      print_expr_to(*e.args[1], os);
      os << ')';
      return;
    case ExprKind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr_to(*e.args[i], os);
      }
      os << ')';
      return;
  }
}

// Top-level assignments print without the outer parentheses.
std::string stmt_expr(const Expr& e) {
  if (e.kind == ExprKind::Assign) return print_expr(*e.args[0]) + " = " + print_expr(*e.args[1]);
  return print_expr(e);
}

// A block that is the sole body of if/while prints as the body itself, so a
// one-element Block and its contents compare equal.
const std::vector<StmtPtr>& flatten(const std::vector<StmtPtr>& v) {
  if (v.size() == 1 && v[0]->kind == StmtKind::Block) return flatten(v[0]->body);
  return v;
}

void print_stmts(const std::vector<StmtPtr>& body, int indent, std::ostream& os);

void print_stmt(const Stmt& s, int indent, std::ostream& os) {
  std::string pad(indent * 2, ' ');
  switch (s.kind) {
    case StmtKind::Decl:
      os << pad << decl_type_prefix(s.decl_type) << ' ' << s.decl_name << decl_suffix(s.decl_type);
      if (s.expr) os << " = " << stmt_expr(*s.expr);
      os << ";\n";
      return;
    case StmtKind::Expr: os << pad << stmt_expr(*s.expr) << ";\n"; return;
    case StmtKind::Assert: os << pad << "assert(" << print_expr(*s.expr) << ");\n"; return;
    case StmtKind::Assume: os << pad << "assume(" << print_expr(*s.expr) << ");\n"; return;
    case StmtKind::Skip: os << pad << "skip;\n"; return;
    case StmtKind::Block:
      os << pad << "{\n";
      print_stmts(s.body, indent + 1, os);
      os << pad << "}\n";
      return;
    case StmtKind::If:
      os << pad << "if (" << print_expr(*s.expr) << ") {\n";
      print_stmts(flatten(s.body), indent + 1, os);
      os << pad << "}";
      if (s.has_else) {
        os << " else {\n";
        print_stmts(flatten(s.else_body), indent + 1, os);
        os << pad << "}";
      }
      os << "\n";
      return;
    case StmtKind::While:
      os << pad << "while (" << print_expr(*s.expr) << ") {\n";
      print_stmts(flatten(s.body), indent + 1, os);
      os << pad << "}\n";
      return;
  }
}

void print_stmts(const std::vector<StmtPtr>& body, int indent, std::ostream& os) {
  for (const auto& s : body) print_stmt(*s, indent, os);
}

bool same_expr(const ExprPtr& a, const ExprPtr& b);

bool same_exprs(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_expr(a[i], b[i])) return false;
  return true;
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->name != b->name || !same_exprs(a->args, b->args)) return false;
  switch (a->kind) {
    case ExprKind::IntLit: return a->int_value == b->int_value;
    case ExprKind::BoolLit: return a->bool_value == b->bool_value;
    case ExprKind::Unary: return a->unop == b->unop;
    case ExprKind::Binary: return a->binop == b->binop;
    default: return true;
  }
}

bool same_stmts(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b);

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || !same_expr(a.expr, b.expr)) return false;
  switch (a.kind) {
    case StmtKind::Decl: return a.decl_name == b.decl_name && a.decl_type == b.decl_type;
    case StmtKind::If:
      return a.has_else == b.has_else && same_stmts(flatten(a.body), flatten(b.body)) &&
             same_stmts(flatten(a.else_body), flatten(b.else_body));
    case StmtKind::While: return same_stmts(flatten(a.body), flatten(b.body));
    case StmtKind::Block: return same_stmts(a.body, b.body);
    default: return true;
  }
}

bool same_stmts(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_stmt(*a[i], *b[i])) return false;
  return true;
}

bool same_thread(const ThreadDef& a, const ThreadDef& b) {
  if (a.name != b.name || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].name != b.params[i].name || !(a.params[i].type == b.params[i].type)) return false;
  return same_stmts(a.body, b.body);
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_to(e, os);
  return os.str();
}

std::string print_stmt_head(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Decl:
      return decl_type_prefix(s.decl_type) + " " + s.decl_name + decl_suffix(s.decl_type) +
             (s.expr ? " = " + stmt_expr(*s.expr) : "");
    case StmtKind::Expr: return stmt_expr(*s.expr);
    case StmtKind::Assert: return "assert(" + print_expr(*s.expr) + ")";
    case StmtKind::Assume: return "assume(" + print_expr(*s.expr) + ")";
    case StmtKind::If: return "if (" + print_expr(*s.expr) + ")";
    case StmtKind::While: return "while (" + print_expr(*s.expr) + ")";
    case StmtKind::Block: return "{...}";
    case StmtKind::Skip: return "skip";
  }
  return "";
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& g : p.globals) {
    os << decl_type_prefix(g.type) << ' ' << g.name << decl_suffix(g.type);
    if (g.init) os << " = " << print_expr(*g.init);
    os << ";\n";
  }
  for (const auto& t : p.threads) {
    os << "\nthread " << t.name << '(';
    for (std::size_t i = 0; i < t.params.size(); ++i)
      os << (i ? ", " : "") << type_name(t.params[i].type) << ' ' << t.params[i].name;
    os << ") {\n";
    print_stmts(t.body, 1, os);
    os << "}\n";
  }
  os << "\nmain {\n";
  print_stmts(p.entry.body, 1, os);
  os << "}\n";
  return os.str();
}

bool same_ast(const Program& a, const Program& b) {
  if (a.globals.size() != b.globals.size() || a.threads.size() != b.threads.size()) return false;
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    const auto& x = a.globals[i];
    const auto& y = b.globals[i];
    if (x.name != y.name || !(x.type == y.type) || !same_expr(x.init, y.init)) return false;
  }
  for (std::size_t i = 0; i < a.threads.size(); ++i)
    if (!same_thread(a.threads[i], b.threads[i])) return false;
  return same_stmts(a.entry.body, b.entry.body);
}

}  // namespace mtbmc
