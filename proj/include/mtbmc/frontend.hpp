// MTC: a small C-like language with threads, mutexes and condition variables.
//
//   program := (decl | thread)* "main" block
//   decl    := type declarator ("," declarator)* ";"
//   thread  := "thread" ident "(" params? ")" block
//
// Types are int (W-bit signed), bool, int arrays, mutex, cond and thread_t.
// There are no pointers and no user-defined function calls; the only calls are
// the intrinsics listed in intrinsic_name().

#ifndef MTBMC_FRONTEND_HPP
#define MTBMC_FRONTEND_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtbmc {

struct SourceLoc {
  std::size_t offset = 0;
  int line = 0;
  int column = 0;
};

struct SourceProgram {
  std::string text;
  std::string origin = "<inline>";
};

// Base of all diagnostics that point into a source file.
class SourceError : public std::runtime_error {
 public:
  SourceError(const std::string& origin, SourceLoc loc, const std::string& msg);
  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return msg_; }

 private:
  SourceLoc loc_;
  std::string msg_;
};

class SyntaxError : public SourceError {
 public:
  SyntaxError(const std::string& origin, SourceLoc loc, const std::string& found,
              std::vector<std::string> expected);
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class TypeError : public SourceError {
  using SourceError::SourceError;
};

enum class TypeKind { Void, Int, Bool, IntArray, Mutex, Cond, Thread };

struct MtcType {
  TypeKind kind = TypeKind::Void;
  unsigned length = 0;  // arrays only

  bool operator==(const MtcType&) const = default;
  bool scalar() const { return kind == TypeKind::Int || kind == TypeKind::Bool; }
};

std::string type_name(MtcType t);

enum class Intrinsic {
  None,
  Create, Join, Exit,
  Lock, Unlock,
  Wait, Signal, Broadcast,
  AtomicBegin, AtomicEnd,
  NondetInt, NondetBool,
};

const char* intrinsic_name(Intrinsic i);
Intrinsic intrinsic_from_name(const std::string& name);

enum class ExprKind { IntLit, BoolLit, Ident, Index, Unary, Binary, Assign, Call };
enum class UnOp { Neg, Not, BitNot };
enum class BinOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge,
  LAnd, LOr,
  BitAnd, BitOr, BitXor, Shl, Shr,
};

const char* binop_spelling(BinOp op);
const char* unop_spelling(UnOp op);

// Where a resolved identifier lives. Locals and parameters are numbered
// within their thread (or within main).
struct SymbolRef {
  enum class Scope { Unresolved, Global, Local } scope = Scope::Unresolved;
  int index = -1;
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceLoc loc;
  std::int64_t int_value = 0;
  bool bool_value = false;
  std::string name;  // Ident, Index (array name), Call (callee)
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  // Unary: [operand]; Binary: [lhs, rhs]; Index: [index];
  // Assign: [lvalue, value]; Call: arguments.
  std::vector<ExprPtr> args;

  // Filled in by typecheck.
  MtcType type;
  SymbolRef sym;
  Intrinsic intrinsic = Intrinsic::None;
  int thread_ref = -1;  // create(): index of the started thread definition
};

enum class StmtKind { Decl, Expr, If, While, Block, Assert, Assume, Skip };

struct Stmt;
using StmtPtr = std::shared_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Skip;
  SourceLoc loc;
  ExprPtr expr;  // condition, expression statement, or Decl initializer
  std::vector<StmtPtr> body;       // Block / then-branch / loop body
  std::vector<StmtPtr> else_body;  // If only
  bool has_else = false;
  // Decl
  std::string decl_name;
  MtcType decl_type;
  SymbolRef sym;
};

struct GlobalDecl {
  std::string name;
  MtcType type;
  ExprPtr init;  // literal, or null
  SourceLoc loc;
};

struct Param {
  std::string name;
  MtcType type;
  SourceLoc loc;
};

struct LocalVar {
  std::string name;
  MtcType type;
};

struct ThreadDef {
  std::string name;
  std::vector<Param> params;
  std::vector<StmtPtr> body;
  SourceLoc loc;
  // Filled in by typecheck: params first, then declared locals.
  std::vector<LocalVar> locals;
};

struct Program {
  std::string origin = "<inline>";
  std::vector<GlobalDecl> globals;
  std::vector<ThreadDef> threads;
  ThreadDef entry;  // the main block, named "main"
};

// A program whose identifiers are resolved and whose expressions are typed.
struct TypedProgram {
  Program program;
  std::vector<std::string> warnings;

  const std::vector<GlobalDecl>& globals() const { return program.globals; }
  const std::vector<ThreadDef>& threads() const { return program.threads; }
  const ThreadDef& entry() const { return program.entry; }
  const std::string& origin() const { return program.origin; }
  int find_global(const std::string& name) const;
  int find_thread(const std::string& name) const;
};

Program parse(const SourceProgram& src);
TypedProgram typecheck(Program ast);
TypedProgram load(const SourceProgram& src);  // parse + typecheck

std::string print_program(const Program& p);
std::string print_expr(const Expr& e);
std::string print_stmt_head(const Stmt& s);  // one-line rendering for traces

// Structural equality ignoring source locations and type annotations.
bool same_ast(const Program& a, const Program& b);

}  // namespace mtbmc

#endif
