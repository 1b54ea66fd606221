#include <stdexcept>
#include <unordered_map>

#include "mtbmc/formula.hpp"

namespace mtbmc {

using Bits = std::vector<int>;

struct Blaster::Impl {
  BlastedFormula f;
  int T = 0;
  std::unordered_map<const Term::Node*, int> bool_cache;
  std::unordered_map<const Term::Node*, Bits> bv_cache;
  std::vector<Term> keep;  // cache keys stay valid while these live

  Impl() {
    T = f.cnf.new_var();
    f.cnf.add({T});
  }

  int fresh() { return f.cnf.new_var(); }
  int F() const { return -T; }

  int and2(int a, int b) {
    if (a == F() || b == F() || a == -b) return F();
    if (a == T) return b;
    if (b == T || a == b) return a;
    int o = fresh();
    f.cnf.add({-o, a});
    f.cnf.add({-o, b});
    f.cnf.add({o, -a, -b});
    return o;
  }
  int or2(int a, int b) { return -and2(-a, -b); }
  int xor2(int a, int b) {
    if (a == F()) return b;
    if (b == F()) return a;
    if (a == T) return -b;
    if (b == T) return -a;
    if (a == b) return F();
    if (a == -b) return T;
    int o = fresh();
    f.cnf.add({-o, a, b});
    f.cnf.add({-o, -a, -b});
    f.cnf.add({o, -a, b});
    f.cnf.add({o, a, -b});
    return o;
  }
  int mux(int c, int t, int e) {
    if (c == T || t == e) return t;
    if (c == F()) return e;
    if (t == T && e == F()) return c;
    if (t == F() && e == T) return -c;
    int o = fresh();
    f.cnf.add({-c, -t, o});
    f.cnf.add({-c, t, -o});
    f.cnf.add({c, -e, o});
    f.cnf.add({c, e, -o});
    f.cnf.add({-t, -e, o});
    f.cnf.add({t, e, -o});
    return o;
  }
  int and_all(const Bits& xs) {
    if (xs.empty()) return T;
    int acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = and2(acc, xs[i]);
    return acc;
  }
  int or_all(const Bits& xs) {
    int acc = F();
    for (int x : xs) acc = or2(acc, x);
    return acc;
  }

  Bits constant(std::int64_t v, unsigned w) const {
    Bits b(w);
    for (unsigned i = 0; i < w; ++i) b[i] = ((static_cast<std::uint64_t>(v) >> i) & 1) ? T : F();
    return b;
  }

  Bits add(const Bits& a, const Bits& b, int carry) {
    Bits s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      int ab = xor2(a[i], b[i]);
      s[i] = xor2(ab, carry);
      carry = or2(and2(a[i], b[i]), and2(carry, ab));
    }
    return s;
  }
  Bits invert(const Bits& a) const {
    Bits r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
  }
  Bits neg(const Bits& a) { return add(invert(a), constant(0, a.size()), T); }
  Bits sub(const Bits& a, const Bits& b) { return add(a, invert(b), T); }
  Bits mux_bits(int c, const Bits& t, const Bits& e) {
    Bits r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = mux(c, t[i], e[i]);
    return r;
  }

  // Unsigned a < b: no carry out of a + ~b + 1.
  int ult(const Bits& a, const Bits& b) {
    int carry = T;
    for (std::size_t i = 0; i < a.size(); ++i) {
      int nb = -b[i];
      int ab = xor2(a[i], nb);
      carry = or2(and2(a[i], nb), and2(carry, ab));
    }
    return -carry;
  }
  int slt(Bits a, Bits b) {
    a.back() = -a.back();
    b.back() = -b.back();
    return ult(a, b);
  }
  int eq_bits(const Bits& a, const Bits& b) {
    Bits xs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) xs[i] = -xor2(a[i], b[i]);
    return and_all(xs);
  }

  Bits mul(const Bits& a, const Bits& b) {
    const std::size_t w = a.size();
    Bits acc = constant(0, w);
    for (std::size_t i = 0; i < w; ++i) {
      if (b[i] == F()) continue;
      Bits partial(w, F());
      for (std::size_t j = 0; i + j < w; ++j) partial[i + j] = and2(a[j], b[i]);
      acc = add(acc, partial, F());
    }
    return acc;
  }

  // Restoring unsigned division.
  void udivrem(const Bits& a, const Bits& b, Bits& q, Bits& r) {
    const std::size_t w = a.size();
    Bits bx = b;
    bx.push_back(F());
    Bits rem = constant(0, w + 1);
    q.assign(w, F());
    for (std::size_t k = w; k-- > 0;) {
      Bits shifted(w + 1);
      shifted[0] = a[k];
      for (std::size_t i = 1; i <= w; ++i) shifted[i] = rem[i - 1];
      int ge = -ult(shifted, bx);
      q[k] = ge;
      rem = mux_bits(ge, sub(shifted, bx), shifted);
    }
    r.assign(rem.begin(), rem.begin() + w);
  }

  Bits sdivrem(const Term& t, const Bits& a, const Bits& b, bool want_rem) {
    int sa = a.back();
    int sb = b.back();
    Bits ua = mux_bits(sa, neg(a), a);
    Bits ub = mux_bits(sb, neg(b), b);
    Bits q, r;
    udivrem(ua, ub, q, r);
    Bits res = want_rem ? mux_bits(sa, neg(r), r) : mux_bits(xor2(sa, sb), neg(q), q);
    int zero = -or_all(b);
    if (zero == F()) return res;
    Bits any = var_bits(div_zero_name(t), t.sort());
    return mux_bits(zero, any, res);
  }

  Bits shift(const Bits& a, const Bits& s, bool left) {
    const std::size_t w = a.size();
    const int fill = left ? F() : a.back();
    Bits cur = a;
    Bits overflow;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k >= 63 || (std::uint64_t{1} << k) >= w) {
        overflow.push_back(s[k]);
        continue;
      }
      const std::size_t d = std::size_t{1} << k;
      Bits moved(w);
      for (std::size_t i = 0; i < w; ++i) {
        if (left)
          moved[i] = i >= d ? cur[i - d] : fill;
        else
          moved[i] = i + d < w ? cur[i + d] : fill;
      }
      cur = mux_bits(s[k], moved, cur);
    }
    int big = or_all(overflow);
    return mux_bits(big, Bits(w, fill), cur);
  }

  Bits var_bits(const std::string& name, Sort sort) {
    auto it = f.vars.find(name);
    if (it != f.vars.end()) return it->second;
    unsigned w = sort.is_bool() ? 1 : sort.width;
    Bits b(w);
    for (auto& x : b) x = fresh();
    f.vars.emplace(name, b);
    f.sorts.emplace(name, sort);
    return b;
  }

  int lit(const Term& t) {
    if (!t.sort().is_bool()) throw std::logic_error("bitblast: expected a boolean term");
    if (t.is_const()) return t.value() ? T : F();
    if (t.is_var()) return var_bits(t.name(), t.sort())[0];
    if (auto it = bool_cache.find(t.raw()); it != bool_cache.end()) return it->second;
    int r = 0;
    switch (t.op()) {
      case Op::Not: r = -lit(t.arg(0)); break;
      case Op::And: {
        Bits xs;
        for (const auto& a : t.args()) xs.push_back(lit(a));
        r = and_all(xs);
        break;
      }
      case Op::Or: {
        Bits xs;
        for (const auto& a : t.args()) xs.push_back(lit(a));
        r = or_all(xs);
        break;
      }
      case Op::Implies: r = or2(-lit(t.arg(0)), lit(t.arg(1))); break;
      case Op::Ite: r = mux(lit(t.arg(0)), lit(t.arg(1)), lit(t.arg(2))); break;
      case Op::Eq:
        if (t.arg(0).sort().is_bool())
          r = -xor2(lit(t.arg(0)), lit(t.arg(1)));
        else
          r = eq_bits(bits(t.arg(0)), bits(t.arg(1)));
        break;
      case Op::Slt: r = slt(bits(t.arg(0)), bits(t.arg(1))); break;
      case Op::Sle: r = -slt(bits(t.arg(1)), bits(t.arg(0))); break;
      default: throw std::logic_error(std::string("bitblast: unsupported boolean op ") + op_name(t.op()));
    }
    keep.push_back(t);
    bool_cache.emplace(t.raw(), r);
    return r;
  }

  Bits bits(const Term& t) {
    if (!t.sort().is_bv() || t.sort().width == 0) throw std::logic_error("bitblast: expected a bit-vector term");
    const unsigned w = t.sort().width;
    if (t.is_const()) return constant(t.value(), w);
    if (t.is_var()) return var_bits(t.name(), t.sort());
    if (auto it = bv_cache.find(t.raw()); it != bv_cache.end()) return it->second;
    Bits r;
    switch (t.op()) {
      case Op::Ite: r = mux_bits(lit(t.arg(0)), bits(t.arg(1)), bits(t.arg(2))); break;
      case Op::Neg: r = neg(bits(t.arg(0))); break;
      case Op::BvNot: r = invert(bits(t.arg(0))); break;
      case Op::Add: r = add(bits(t.arg(0)), bits(t.arg(1)), F()); break;
      case Op::Sub: r = sub(bits(t.arg(0)), bits(t.arg(1))); break;
      case Op::Mul: r = mul(bits(t.arg(0)), bits(t.arg(1))); break;
      case Op::SDiv: r = sdivrem(t, bits(t.arg(0)), bits(t.arg(1)), false); break;
      case Op::SRem: r = sdivrem(t, bits(t.arg(0)), bits(t.arg(1)), true); break;
      case Op::BvAnd:
      case Op::BvOr:
      case Op::BvXor: {
        Bits a = bits(t.arg(0)), b = bits(t.arg(1));
        r.resize(w);
        for (unsigned i = 0; i < w; ++i)
          r[i] = t.op() == Op::BvAnd ? and2(a[i], b[i]) : t.op() == Op::BvOr ? or2(a[i], b[i]) : xor2(a[i], b[i]);
        break;
      }
      case Op::Shl: r = shift(bits(t.arg(0)), bits(t.arg(1)), true); break;
      case Op::AShr: r = shift(bits(t.arg(0)), bits(t.arg(1)), false); break;
      default: throw std::logic_error(std::string("bitblast: unsupported bit-vector op ") + op_name(t.op()));
    }
    keep.push_back(t);
    bv_cache.emplace(t.raw(), r);
    return r;
  }
};

Blaster::Blaster() : impl_(std::make_unique<Impl>()) {}
Blaster::~Blaster() = default;

int Blaster::lit(const Term& boolean) { return impl_->lit(boolean); }
std::vector<int> Blaster::bits(const Term& bv) { return impl_->bits(bv); }
void Blaster::assert_true(const Term& boolean) { impl_->f.cnf.add({impl_->lit(boolean)}); }

int Blaster::add_selector(const std::string& name, const Term& boolean) {
  int body = impl_->lit(boolean);
  int s = impl_->fresh();
  impl_->f.cnf.add({-s, body});
  impl_->f.cnf.selectors.push_back(s);
  impl_->f.selector_vars[name] = s;
  impl_->f.assumptions.push_back(s);
  return s;
}

BlastedFormula& Blaster::out() { return impl_->f; }

std::int64_t BlastedFormula::value(const SolveResult& r, const std::string& name) const {
  auto it = vars.find(name);
  if (it == vars.end()) return 0;
  const auto& b = it->second;
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (r.lit_true(b[i])) v |= std::uint64_t{1} << i;
  if (auto s = sorts.find(name); s != sorts.end() && s->second.is_bool()) return static_cast<std::int64_t>(v);
  return normalize(static_cast<std::int64_t>(v), static_cast<unsigned>(b.size()));
}

Valuation BlastedFormula::valuation(const SolveResult& r) const {
  return [this, &r](const std::string& name, Sort) { return value(r, name); };
}

Term Formula::body() const {
  std::vector<Term> all = constraints;
  all.push_back(property);
  return mk_and(all);
}

BlastedFormula bitblast(const Formula& f) {
  Blaster b;
  for (const auto& c : f.constraints) b.assert_true(c);
  b.assert_true(f.property);
  for (const auto& s : f.selectors) b.add_selector(s.name, s.term);
  return std::move(b.out());
}

}  // namespace mtbmc
