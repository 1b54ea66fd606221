#include <map>

#include "frontend_lexer.hpp"
#include "mtbmc/frontend.hpp"

namespace mtbmc {

using detail::Tok;
using detail::Token;

const char* binop_spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::LAnd: return "&&";
    case BinOp::LOr: return "||";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
  }
  return "?";
}

const char* unop_spelling(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "!";
    case UnOp::BitNot: return "~";
  }
  return "?";
}

namespace {

// Binary operators by precedence level, loosest first.
const std::vector<std::vector<std::pair<const char*, BinOp>>>& precedence_table() {
  static const std::vector<std::vector<std::pair<const char*, BinOp>>> t = {
      {{"||", BinOp::LOr}},
      {{"&&", BinOp::LAnd}},
      {{"|", BinOp::BitOr}},
      {{"^", BinOp::BitXor}},
      {{"&", BinOp::BitAnd}},
      {{"==", BinOp::Eq}, {"!=", BinOp::Ne}},
      {{"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}},
      {{"<<", BinOp::Shl}, {">>", BinOp::Shr}},
      {{"+", BinOp::Add}, {"-", BinOp::Sub}},
      {{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Mod}},
  };
  return t;
}

class Parser {
 public:
  explicit Parser(const SourceProgram& src) : origin_(src.origin), toks_(detail::lex(src)) {}

  Program program() {
    Program p;
    p.origin = origin_;
    bool have_main = false;
    while (!at_end()) {
      if (is_kw("thread")) {
        p.threads.push_back(thread_def());
      } else if (is_kw("main")) {
        if (have_main) fail({"end of input"});
        SourceLoc loc = peek().loc;
        next();
        p.entry.name = "main";
        p.entry.loc = loc;
        p.entry.body = block();
        have_main = true;
      } else if (is_type_kw()) {
        if (have_main) fail({"end of input"});
        global_decls(p.globals);
      } else {
        fail(have_main ? std::vector<std::string>{"end of input"}
                       : std::vector<std::string>{"a declaration", "'thread'", "'main'"});
      }
    }
    if (!have_main) fail({"'main'"});
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_kw(const char* k) const { return peek().kind == Tok::Keyword && peek().text == k; }
  bool is_type_kw() const {
    return is_kw("int") || is_kw("bool") || is_kw("mutex") || is_kw("cond") || is_kw("thread_t");
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(origin_, peek().loc, peek().text, std::move(expected));
  }

  const Token& expect_punct(const char* p) {
    if (!is_punct(p)) fail({std::string("'") + p + "'"});
    return next();
  }
  const Token& expect_kw(const char* k) {
    if (!is_kw(k)) fail({std::string("'") + k + "'"});
    return next();
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail({"an identifier"});
    return next().text;
  }

  MtcType base_type() {
    if (!is_type_kw()) fail({"a type"});
    const std::string t = next().text;
    if (t == "int") return {TypeKind::Int, 0};
    if (t == "bool") return {TypeKind::Bool, 0};
    if (t == "mutex") return {TypeKind::Mutex, 0};
    if (t == "cond") return {TypeKind::Cond, 0};
    return {TypeKind::Thread, 0};
  }

  // Optional "[N]" suffix turning int into an int array.
  MtcType array_suffix(MtcType base) {
    if (!is_punct("[")) return base;
    next();
    if (peek().kind != Tok::Int) fail({"an array length"});
    std::int64_t n = next().value;
    expect_punct("]");
    return {TypeKind::IntArray, static_cast<unsigned>(n)};
  }

  void global_decls(std::vector<GlobalDecl>& out) {
    MtcType base = base_type();
    for (;;) {
      GlobalDecl d;
      d.loc = peek().loc;
      d.name = expect_ident();
      d.type = array_suffix(base);
      if (is_punct("=")) {
        next();
        d.init = expr();
      }
      out.push_back(std::move(d));
      if (is_punct(",")) {
        next();
        continue;
      }
      expect_punct(";");
      return;
    }
  }

  ThreadDef thread_def() {
    ThreadDef t;
    t.loc = peek().loc;
    expect_kw("thread");
    t.name = expect_ident();
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        Param p;
        p.loc = peek().loc;
        p.type = base_type();
        p.name = expect_ident();
        t.params.push_back(std::move(p));
        if (!is_punct(",")) break;
        next();
      }
    }
    expect_punct(")");
    t.body = block();
    return t;
  }

  std::vector<StmtPtr> block() {
    expect_punct("{");
    std::vector<StmtPtr> body;
    while (!is_punct("}")) {
      if (at_end()) fail({"'}'"});
      for (auto& s : statement()) body.push_back(std::move(s));
    }
    next();
    return body;
  }

  // A local declaration with several declarators yields several statements.
  std::vector<StmtPtr> statement() {
    auto s = std::make_shared<Stmt>();
    s->loc = peek().loc;
    if (is_type_kw()) {
      std::vector<StmtPtr> decls;
      MtcType base = base_type();
      for (;;) {
        auto d = std::make_shared<Stmt>();
        d->kind = StmtKind::Decl;
        d->loc = peek().loc;
        d->decl_name = expect_ident();
        d->decl_type = array_suffix(base);
        if (is_punct("=")) {
          next();
          d->expr = expr();
        }
        decls.push_back(d);
        if (!is_punct(",")) break;
        next();
      }
      expect_punct(";");
      return decls;
    }
    if (is_punct("{")) {
      s->kind = StmtKind::Block;
      s->body = block();
      return {s};
    }
    if (is_punct(";")) {
      next();
      s->kind = StmtKind::Skip;
      return {s};
    }
    if (is_kw("skip")) {
      next();
      expect_punct(";");
      s->kind = StmtKind::Skip;
      return {s};
    }
    if (is_kw("if")) {
      next();
      s->kind = StmtKind::If;
      expect_punct("(");
      s->expr = expr();
      expect_punct(")");
      s->body = statement();
      if (is_kw("else")) {
        next();
        s->has_else = true;
        s->else_body = statement();
      }
      return {s};
    }
    if (is_kw("while")) {
      next();
      s->kind = StmtKind::While;
      expect_punct("(");
      s->expr = expr();
      expect_punct(")");
      s->body = statement();
      return {s};
    }
    if (is_kw("assert") || is_kw("assume")) {
      s->kind = is_kw("assert") ? StmtKind::Assert : StmtKind::Assume;
      next();
      expect_punct("(");
      s->expr = expr();
      expect_punct(")");
      expect_punct(";");
      return {s};
    }
    s->kind = StmtKind::Expr;
    s->expr = expr();
    expect_punct(";");
    return {s};
  }

  ExprPtr expr() { return assignment(); }

  ExprPtr assignment() {
    ExprPtr lhs = binary(0);
    if (is_punct("=")) {
      SourceLoc loc = peek().loc;
      next();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Assign;
      e->loc = loc;
      e->args = {lhs, assignment()};
      return e;
    }
    return lhs;
  }

  ExprPtr binary(std::size_t level) {
    const auto& table = precedence_table();
    if (level == table.size()) return unary();
    ExprPtr lhs = binary(level + 1);
    for (;;) {
      const BinOp* matched = nullptr;
      for (const auto& [spelling, op] : table[level])
        if (is_punct(spelling)) matched = &op;
      if (!matched) return lhs;
      SourceLoc loc = peek().loc;
      next();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Binary;
      e->binop = *matched;
      e->loc = loc;
      e->args = {lhs, binary(level + 1)};
      lhs = e;
    }
  }

  ExprPtr unary() {
    SourceLoc loc = peek().loc;
    UnOp op;
    if (is_punct("-"))
      op = UnOp::Neg;
    else if (is_punct("!"))
      op = UnOp::Not;
    else if (is_punct("~"))
      op = UnOp::BitNot;
    else
      return primary();
    next();
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Unary;
    e->unop = op;
    e->loc = loc;
    e->args = {unary()};
    return e;
  }

  ExprPtr primary() {
    auto e = std::make_shared<Expr>();
    e->loc = peek().loc;
    if (peek().kind == Tok::Int) {
      e->kind = ExprKind::IntLit;
      e->int_value = next().value;
      return e;
    }
    if (is_kw("true") || is_kw("false")) {
      e->kind = ExprKind::BoolLit;
      e->bool_value = next().text == "true";
      return e;
    }
    if (is_punct("(")) {
      next();
      ExprPtr inner = expr();
      expect_punct(")");
      return inner;
    }
    if (peek().kind == Tok::Ident) {
      e->name = next().text;
      if (is_punct("(")) {
        next();
        e->kind = ExprKind::Call;
        if (!is_punct(")")) {
          for (;;) {
            e->args.push_back(expr());
            if (!is_punct(",")) break;
            next();
          }
        }
        expect_punct(")");
        return e;
      }
      if (is_punct("[")) {
        next();
        e->kind = ExprKind::Index;
        e->args = {expr()};
        expect_punct("]");
        return e;
      }
      e->kind = ExprKind::Ident;
      return e;
    }
    fail({"an expression"});
  }

  std::string origin_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse(const SourceProgram& src) { return Parser(src).program(); }

TypedProgram load(const SourceProgram& src) { return typecheck(parse(src)); }

}  // namespace mtbmc
