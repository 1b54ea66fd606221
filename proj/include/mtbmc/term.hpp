// Immutable bit-vector/boolean terms with simplifying constructors.
//
// Terms are shared, structurally compared DAG nodes. Every constructor folds
// constants and applies a handful of local rewrites, so a term built from
// constant operands is itself a constant. Bit-vector values use W-bit two's
// complement and are stored sign-extended in an int64_t.

#ifndef MTBMC_TERM_HPP
#define MTBMC_TERM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mtbmc {

enum class SortKind : std::uint8_t { Bool, BitVec };

struct Sort {
  SortKind kind = SortKind::Bool;
  unsigned width = 0;

  static Sort boolean() { return {SortKind::Bool, 0}; }
  static Sort bv(unsigned w) { return {SortKind::BitVec, w}; }
  bool is_bool() const { return kind == SortKind::Bool; }
  bool is_bv() const { return kind == SortKind::BitVec; }
  bool operator==(const Sort&) const = default;
};

enum class Op : std::uint8_t {
  Const, Var,
  Not, And, Or, Implies, Ite, Eq,
  Slt, Sle,
  Neg, Add, Sub, Mul, SDiv, SRem,
  BvNot, BvAnd, BvOr, BvXor, Shl, AShr,
};

const char* op_name(Op op);

class Term {
 public:
  struct Node {
    Op op;
    Sort sort;
    std::int64_t value = 0;  // constants only; booleans are 0/1
    std::string name;        // variables only
    std::vector<Term> args;
    std::size_t hash = 0;
  };

  Term() = default;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  explicit operator bool() const { return static_cast<bool>(node_); }
  Op op() const { return node_->op; }
  Sort sort() const { return node_->sort; }
  const std::vector<Term>& args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args[i]; }
  const std::string& name() const { return node_->name; }
  std::int64_t value() const { return node_->value; }
  std::size_t hash() const { return node_->hash; }
  const Node* raw() const { return node_.get(); }

  bool is_const() const { return node_->op == Op::Const; }
  bool is_var() const { return node_->op == Op::Var; }
  bool is_true() const { return is_const() && sort().is_bool() && value() != 0; }
  bool is_false() const { return is_const() && sort().is_bool() && value() == 0; }

  // Structural equality.
  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

 private:
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Value helpers for W-bit two's complement arithmetic.
std::int64_t normalize(std::int64_t v, unsigned width);
std::uint64_t width_mask(unsigned width);

Term mk_bool(bool b);
inline Term mk_true() { return mk_bool(true); }
inline Term mk_false() { return mk_bool(false); }
Term mk_bv(std::int64_t v, unsigned width);
Term mk_var(std::string name, Sort sort);

Term mk_not(const Term& a);
Term mk_and(const Term& a, const Term& b);
Term mk_and(const std::vector<Term>& ts);
Term mk_or(const Term& a, const Term& b);
Term mk_or(const std::vector<Term>& ts);
Term mk_implies(const Term& a, const Term& b);
Term mk_ite(const Term& c, const Term& t, const Term& e);
Term mk_eq(const Term& a, const Term& b);
Term mk_slt(const Term& a, const Term& b);
Term mk_sle(const Term& a, const Term& b);
Term mk_neg(const Term& a);
Term mk_bvnot(const Term& a);
// Any binary bit-vector operator (Add..AShr).
Term mk_bvop(Op op, const Term& a, const Term& b);

// Concrete semantics shared by folding and model evaluation. Returns nullopt
// for division or remainder by zero, whose result is unconstrained.
std::optional<std::int64_t> eval_bvop(Op op, std::int64_t a, std::int64_t b, unsigned width);

// The free variable standing for the result of a division or remainder node
// when its divisor is zero.
std::string div_zero_name(const Term& t);

// Evaluates a term under an assignment of its free variables, including the
// div_zero_name() variables of divisions by zero.
using Valuation = std::function<std::int64_t(const std::string& name, Sort sort)>;
std::int64_t evaluate(const Term& t, const Valuation& val);

std::vector<std::pair<std::string, Sort>> free_vars(const std::vector<Term>& ts);

// Renames free variables; names missing from the map are kept.
Term rename_vars(const Term& t, const std::unordered_map<std::string, std::string>& names);

// Canonical s-expression rendering, used for trace keys and diagnostics.
std::string to_string(const Term& t);

}  // namespace mtbmc

#endif
