#include <set>
#include <sstream>
#include <unordered_map>

#include "mtbmc/formula.hpp"

namespace mtbmc {

namespace {

std::string quote(const std::string& s) { return "|" + s + "|"; }

std::string sort_text(Sort s) {
  return s.is_bool() ? "Bool" : "(_ BitVec " + std::to_string(s.width) + ")";
}

std::string const_text(const Term& t) {
  if (t.sort().is_bool()) return t.value() ? "true" : "false";
  std::uint64_t u = static_cast<std::uint64_t>(t.value()) & width_mask(t.sort().width);
  return "(_ bv" + std::to_string(u) + " " + std::to_string(t.sort().width) + ")";
}

// Writes every compound node once as a define-fun so shared subterms stay shared.
class Emitter {
 public:
  explicit Emitter(std::ostringstream& defs) : defs_(defs) {}

  std::string ref(const Term& t) {
    if (t.is_const()) return const_text(t);
    if (t.is_var()) {
      declare(t.name(), t.sort());
      return quote(t.name());
    }
    if (auto it = names_.find(t.raw()); it != names_.end()) return it->second;
    std::vector<std::string> a;
    for (const auto& x : t.args()) a.push_back(ref(x));
    std::string body;
    switch (t.op()) {
      case Op::SDiv:
      case Op::SRem: {
        std::string z = div_zero_name(t);
        declare(z, t.sort());
        body = "(ite (= " + a[1] + " (_ bv0 " + std::to_string(t.sort().width) + ")) " + quote(z) + " (" +
               op_name(t.op()) + " " + a[0] + " " + a[1] + "))";
        break;
      }
      default: {
        body = std::string("(") + op_name(t.op());
        for (const auto& s : a) body += " " + s;
        body += ")";
      }
    }
    std::string name = "|.t" + std::to_string(names_.size()) + "|";
    defs_ << "(define-fun " << name << " () " << sort_text(t.sort()) << " " << body << ")\n";
    keep_.push_back(t);
    names_.emplace(t.raw(), name);
    return name;
  }

  const std::vector<std::pair<std::string, Sort>>& decls() const { return decls_; }

 private:
  void declare(const std::string& name, Sort s) {
    if (declared_.insert(name).second) decls_.push_back({name, s});
  }

  std::ostringstream& defs_;
  std::unordered_map<const Term::Node*, std::string> names_;
  std::vector<Term> keep_;
  std::set<std::string> declared_;
  std::vector<std::pair<std::string, Sort>> decls_;
};

}  // namespace

std::string to_smtlib(const Formula& f) {
  std::ostringstream defs;
  std::ostringstream asserts;
  Emitter em(defs);
  for (const auto& c : f.constraints) asserts << "(assert " << em.ref(c) << ")\n";
  asserts << "(assert " << em.ref(f.property) << ")\n";
  for (const auto& s : f.selectors) asserts << "(assert (! " << em.ref(s.term) << " :named " << quote(s.name) << "))\n";

  std::ostringstream os;
  os << "(set-option :produce-unsat-cores true)\n";
  os << "(set-logic QF_BV)\n";
  for (const auto& [name, sort] : em.decls()) os << "(declare-fun " << quote(name) << " () " << sort_text(sort) << ")\n";
  os << defs.str() << asserts.str();
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace mtbmc
