#include "mtbmc/term.hpp"

#include <cassert>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mtbmc {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Term make(Op op, Sort sort, std::int64_t value, std::string name, std::vector<Term> args) {
  auto n = std::make_shared<Term::Node>();
  n->op = op;
  n->sort = sort;
  n->value = value;
  n->name = std::move(name);
  n->args = std::move(args);
  std::size_t h = mix(static_cast<std::size_t>(op), sort.width * 2 + (sort.is_bool() ? 1 : 0));
  h = mix(h, static_cast<std::size_t>(value));
  h = mix(h, std::hash<std::string>{}(n->name));
  for (const auto& a : n->args) h = mix(h, a.hash());
  n->hash = h;
  return Term(std::move(n));
}

bool is_bool(const Term& t) { return t.sort().is_bool(); }

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Ite: return "ite";
    case Op::Eq: return "=";
    case Op::Slt: return "bvslt";
    case Op::Sle: return "bvsle";
    case Op::Neg: return "bvneg";
    case Op::Add: return "bvadd";
    case Op::Sub: return "bvsub";
    case Op::Mul: return "bvmul";
    case Op::SDiv: return "bvsdiv";
    case Op::SRem: return "bvsrem";
    case Op::BvNot: return "bvnot";
    case Op::BvAnd: return "bvand";
    case Op::BvOr: return "bvor";
    case Op::BvXor: return "bvxor";
    case Op::Shl: return "bvshl";
    case Op::AShr: return "bvashr";
  }
  return "?";
}

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.hash != b.hash || a.op != b.op || !(a.sort == b.sort) || a.value != b.value ||
      a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (a.args[i] != b.args[i]) return false;
  return true;
}

std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~0ULL : ((1ULL << width) - 1);
}

std::int64_t normalize(std::int64_t v, unsigned width) {
  if (width >= 64) return v;
  std::uint64_t u = static_cast<std::uint64_t>(v) & width_mask(width);
  if (u & (1ULL << (width - 1))) u |= ~width_mask(width);
  return static_cast<std::int64_t>(u);
}

Term mk_bool(bool b) {
  static const Term t = make(Op::Const, Sort::boolean(), 1, {}, {});
  static const Term f = make(Op::Const, Sort::boolean(), 0, {}, {});
  return b ? t : f;
}

Term mk_bv(std::int64_t v, unsigned width) {
  if (width == 0) throw std::logic_error("zero-width bit-vector");
  return make(Op::Const, Sort::bv(width), normalize(v, width), {}, {});
}

Term mk_var(std::string name, Sort sort) {
  return make(Op::Var, sort, 0, std::move(name), {});
}

Term mk_not(const Term& a) {
  assert(is_bool(a));
  if (a.is_const()) return mk_bool(a.value() == 0);
  if (a.op() == Op::Not) return a.arg(0);
  return make(Op::Not, Sort::boolean(), 0, {}, {a});
}

Term mk_and(const Term& a, const Term& b) {
  if (a.is_false() || b.is_false()) return mk_false();
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a == b) return a;
  if ((a.op() == Op::Not && a.arg(0) == b) || (b.op() == Op::Not && b.arg(0) == a)) return mk_false();
  return make(Op::And, Sort::boolean(), 0, {}, {a, b});
}

Term mk_and(const std::vector<Term>& ts) {
  Term r = mk_true();
  for (const auto& t : ts) r = mk_and(r, t);
  return r;
}

Term mk_or(const Term& a, const Term& b) {
  if (a.is_true() || b.is_true()) return mk_true();
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a == b) return a;
  if ((a.op() == Op::Not && a.arg(0) == b) || (b.op() == Op::Not && b.arg(0) == a)) return mk_true();
  return make(Op::Or, Sort::boolean(), 0, {}, {a, b});
}

Term mk_or(const std::vector<Term>& ts) {
  Term r = mk_false();
  for (const auto& t : ts) r = mk_or(r, t);
  return r;
}

Term mk_implies(const Term& a, const Term& b) {
  if (a.is_false() || b.is_true()) return mk_true();
  if (a.is_true()) return b;
  if (b.is_false()) return mk_not(a);
  if (a == b) return mk_true();
  return make(Op::Implies, Sort::boolean(), 0, {}, {a, b});
}

Term mk_ite(const Term& c, const Term& t, const Term& e) {
  assert(is_bool(c) && t.sort() == e.sort());
  if (c.is_true()) return t;
  if (c.is_false()) return e;
  if (t == e) return t;
  if (is_bool(t)) {
    if (t.is_true() && e.is_false()) return c;
    if (t.is_false() && e.is_true()) return mk_not(c);
    if (t.is_false()) return mk_and(mk_not(c), e);
    if (t.is_true()) return mk_or(c, e);
    if (e.is_false()) return mk_and(c, t);
    if (e.is_true()) return mk_implies(c, t);
  }
  if (c.op() == Op::Not) return mk_ite(c.arg(0), e, t);
  return make(Op::Ite, t.sort(), 0, {}, {c, t, e});
}

Term mk_eq(const Term& a, const Term& b) {
  assert(a.sort() == b.sort());
  if (a == b) return mk_true();
  if (a.is_const() && b.is_const()) return mk_bool(a.value() == b.value());
  if (is_bool(a)) {
    if (a.is_true()) return b;
    if (b.is_true()) return a;
    if (a.is_false()) return mk_not(b);
    if (b.is_false()) return mk_not(a);
  }
  // Canonical operand order keeps structurally equal equations identical.
  if (b.hash() < a.hash()) return make(Op::Eq, Sort::boolean(), 0, {}, {b, a});
  return make(Op::Eq, Sort::boolean(), 0, {}, {a, b});
}

Term mk_slt(const Term& a, const Term& b) {
  if (a.is_const() && b.is_const()) return mk_bool(a.value() < b.value());
  if (a == b) return mk_false();
  return make(Op::Slt, Sort::boolean(), 0, {}, {a, b});
}

Term mk_sle(const Term& a, const Term& b) {
  if (a.is_const() && b.is_const()) return mk_bool(a.value() <= b.value());
  if (a == b) return mk_true();
  return make(Op::Sle, Sort::boolean(), 0, {}, {a, b});
}

Term mk_neg(const Term& a) {
  if (a.is_const()) return mk_bv(-static_cast<std::uint64_t>(a.value()), a.sort().width);
  if (a.op() == Op::Neg) return a.arg(0);
  return make(Op::Neg, a.sort(), 0, {}, {a});
}

Term mk_bvnot(const Term& a) {
  if (a.is_const()) return mk_bv(~a.value(), a.sort().width);
  if (a.op() == Op::BvNot) return a.arg(0);
  return make(Op::BvNot, a.sort(), 0, {}, {a});
}

std::optional<std::int64_t> eval_bvop(Op op, std::int64_t a, std::int64_t b, unsigned w) {
  const std::uint64_t ua = static_cast<std::uint64_t>(a) & width_mask(w);
  const std::uint64_t ub = static_cast<std::uint64_t>(b) & width_mask(w);
  switch (op) {
    case Op::Add: return normalize(static_cast<std::int64_t>(ua + ub), w);
    case Op::Sub: return normalize(static_cast<std::int64_t>(ua - ub), w);
    case Op::Mul: return normalize(static_cast<std::int64_t>(ua * ub), w);
    case Op::SDiv:
    case Op::SRem: {
      if (b == 0) return std::nullopt;
      // Magnitudes as unsigned so that MIN / -1 wraps like bvsdiv.
      std::uint64_t ma = a < 0 ? -static_cast<std::uint64_t>(a) : static_cast<std::uint64_t>(a);
      std::uint64_t mb = b < 0 ? -static_cast<std::uint64_t>(b) : static_cast<std::uint64_t>(b);
      if (op == Op::SDiv) {
        std::uint64_t q = ma / mb;
        bool negative = (a < 0) != (b < 0);
        return normalize(static_cast<std::int64_t>(negative ? -q : q), w);
      }
      std::uint64_t r = ma % mb;
      return normalize(static_cast<std::int64_t>(a < 0 ? -r : r), w);
    }
    case Op::BvAnd: return normalize(a & b, w);
    case Op::BvOr: return normalize(a | b, w);
    case Op::BvXor: return normalize(a ^ b, w);
    case Op::Shl:
      if (ub >= w) return 0;
      return normalize(static_cast<std::int64_t>(ua << ub), w);
    case Op::AShr:
      if (ub >= w) return a < 0 ? -1 : 0;
      return normalize(a >> ub, w);
    default: throw std::logic_error("eval_bvop: not a binary bit-vector operator");
  }
}

Term mk_bvop(Op op, const Term& a, const Term& b) {
  assert(a.sort() == b.sort() && a.sort().is_bv());
  const unsigned w = a.sort().width;
  if (a.is_const() && b.is_const()) {
    if (auto v = eval_bvop(op, a.value(), b.value(), w)) return mk_bv(*v, w);
  }
  auto zero = [](const Term& t) { return t.is_const() && t.value() == 0; };
  auto one = [](const Term& t) { return t.is_const() && t.value() == 1; };
  switch (op) {
    case Op::Add:
      if (zero(a)) return b;
      if (zero(b)) return a;
      break;
    case Op::Sub:
      if (zero(b)) return a;
      if (a == b) return mk_bv(0, w);
      break;
    case Op::Mul:
      if (zero(a) || zero(b)) return mk_bv(0, w);
      if (one(a)) return b;
      if (one(b)) return a;
      break;
    case Op::SDiv:
      if (one(b)) return a;
      break;
    case Op::BvAnd:
      if (zero(a) || zero(b)) return mk_bv(0, w);
      if (a == b) return a;
      break;
    case Op::BvOr:
    case Op::BvXor:
      if (zero(a)) return b;
      if (zero(b)) return a;
      break;
    case Op::Shl:
    case Op::AShr:
      if (zero(b)) return a;
      break;
    default: break;
  }
  return make(op, a.sort(), 0, {}, {a, b});
}

std::string div_zero_name(const Term& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "divz!%016zx", t.hash());
  return buf;
}

std::int64_t evaluate(const Term& root, const Valuation& val) {
  std::unordered_map<const Term::Node*, std::int64_t> memo;
  std::function<std::int64_t(const Term&)> go = [&](const Term& t) -> std::int64_t {
    if (t.is_const()) return t.value();
    if (t.is_var()) {
      std::int64_t v = val(t.name(), t.sort());
      return t.sort().is_bool() ? (v != 0) : normalize(v, t.sort().width);
    }
    if (auto it = memo.find(t.raw()); it != memo.end()) return it->second;
    std::int64_t r = 0;
    const unsigned w = t.sort().width;
    switch (t.op()) {
      case Op::Not: r = !go(t.arg(0)); break;
      case Op::And: r = go(t.arg(0)) && go(t.arg(1)); break;
      case Op::Or: r = go(t.arg(0)) || go(t.arg(1)); break;
      case Op::Implies: r = !go(t.arg(0)) || go(t.arg(1)); break;
      case Op::Ite: r = go(t.arg(0)) ? go(t.arg(1)) : go(t.arg(2)); break;
      case Op::Eq: r = go(t.arg(0)) == go(t.arg(1)); break;
      case Op::Slt: r = go(t.arg(0)) < go(t.arg(1)); break;
      case Op::Sle: r = go(t.arg(0)) <= go(t.arg(1)); break;
      case Op::Neg: r = normalize(-static_cast<std::uint64_t>(go(t.arg(0))), w); break;
      case Op::BvNot: r = normalize(~go(t.arg(0)), w); break;
      default: {
        auto v = eval_bvop(t.op(), go(t.arg(0)), go(t.arg(1)), w);
        r = v ? *v : normalize(val(div_zero_name(t), t.sort()), w);
        break;
      }
    }
    memo.emplace(t.raw(), r);
    return r;
  };
  return go(root);
}

std::vector<std::pair<std::string, Sort>> free_vars(const std::vector<Term>& ts) {
  std::map<std::string, Sort> found;
  std::unordered_map<const Term::Node*, bool> seen;
  std::vector<Term> stack(ts.begin(), ts.end());
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!seen.emplace(t.raw(), true).second) continue;
    if (t.is_var()) found.emplace(t.name(), t.sort());
    for (const auto& a : t.args()) stack.push_back(a);
  }
  return {found.begin(), found.end()};
}

Term rename_vars(const Term& root, const std::unordered_map<std::string, std::string>& names) {
  std::unordered_map<const Term::Node*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    if (t.is_const()) return t;
    if (t.is_var()) {
      auto it = names.find(t.name());
      return it == names.end() ? t : mk_var(it->second, t.sort());
    }
    if (auto it = memo.find(t.raw()); it != memo.end()) return it->second;
    std::vector<Term> args;
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(go(a));
      changed = changed || args.back().raw() != a.raw();
    }
    Term r = changed ? make(t.op(), t.sort(), t.value(), t.name(), std::move(args)) : t;
    memo.emplace(t.raw(), r);
    return r;
  };
  return go(root);
}

namespace {

void render(const Term& t, std::ostream& os) {
  switch (t.op()) {
    case Op::Const:
      if (t.sort().is_bool())
        os << (t.value() ? "true" : "false");
      else
        os << t.value();
      return;
    case Op::Var: os << t.name(); return;
    default:
      os << '(' << op_name(t.op());
      for (const auto& a : t.args()) {
        os << ' ';
        render(a, os);
      }
      os << ')';
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  render(t, os);
  return os.str();
}

}  // namespace mtbmc
