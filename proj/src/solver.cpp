#include "mtbmc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mtbmc {

namespace {

// Internal literal: 2 * var + sign, variables numbered from 0.
using Lit = int;
constexpr Lit kNoLit = -1;
constexpr int kNoReason = -1;

inline Lit make_lit(int v, bool negative) { return 2 * v + (negative ? 1 : 0); }
inline int var_of(Lit l) { return l >> 1; }
inline Lit negate(Lit l) { return l ^ 1; }
inline Lit from_dimacs(int d) { return make_lit(std::abs(d) - 1, d < 0); }
inline int to_dimacs(Lit l) { return (l & 1) ? -(var_of(l) + 1) : var_of(l) + 1; }

enum : signed char { kFalse = -1, kUndef = 0, kTrue = 1 };

struct Clause {
  std::vector<Lit> lits;
  bool learnt = false;
  bool deleted = false;
  double activity = 0;
};

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

// Max-heap of variables ordered by activity.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}

  bool empty() const { return heap_.empty(); }
  bool contains(int v) const { return v < static_cast<int>(pos_.size()) && pos_[v] >= 0; }

  void grow(int n) { pos_.resize(n, -1); }

  void insert(int v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }

  void increased(int v) {
    if (contains(v)) up(pos_[v]);
  }

  int pop() {
    int top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool before(int a, int b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }

  void up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  void down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<int> heap_;
  std::vector<int> pos_;
};

class Cdcl {
 public:
  Cdcl(int nvars, const SolverOptions& opts) : opts_(opts), heap_(activity_) {
    assigns_.assign(nvars, kUndef);
    level_.assign(nvars, 0);
    reason_.assign(nvars, kNoReason);
    polarity_.assign(nvars, true);
    seen_.assign(nvars, 0);
    activity_.assign(nvars, 0.0);
    watches_.resize(2 * static_cast<std::size_t>(nvars));
    heap_.grow(nvars);
    if (opts.seed != 0) {
      std::mt19937_64 rng(opts.seed);
      std::uniform_real_distribution<double> jitter(0.0, 1e-5);
      for (auto& a : activity_) a = jitter(rng);
    }
    for (int v = 0; v < nvars; ++v) heap_.insert(v);
  }

  bool add_clause(std::vector<Lit> lits) {
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return true;  // tautology
      if (!out.empty() && out.back() == lits[i]) continue;
      if (value(lits[i]) == kTrue) return true;
      if (value(lits[i]) == kFalse) continue;  // false at level 0
      out.push_back(lits[i]);
    }
    if (out.empty()) return ok_ = false;
    if (out.size() == 1) {
      enqueue(out[0], kNoReason);
      return ok_ = propagate() == kNoReason;
    }
    attach(std::move(out), false);
    return true;
  }

  SolveStatus solve(const std::vector<Lit>& assumptions) {
    assumptions_ = assumptions;
    if (!ok_) return SolveStatus::Unsat;
    max_learnts_ = std::max(1000.0, static_cast<double>(clauses_.size()) / 3.0);
    for (int restart = 0;; ++restart) {
      double budget = 100 * luby(2, restart);
      SolveStatus st;
      if (search(static_cast<std::int64_t>(budget), st)) {
        if (st == SolveStatus::Sat) {
          model_.assign(assigns_.size(), false);
          for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
        }
        backtrack(0);
        return st;
      }
      ++stats_.restarts;
      max_learnts_ *= 1.1;
    }
  }

  const std::vector<bool>& model() const { return model_; }
  const std::vector<Lit>& core() const { return core_; }
  const SolveStats& stats() const { return stats_; }

 private:
  signed char value(Lit l) const {
    signed char a = assigns_[var_of(l)];
    return (l & 1) ? static_cast<signed char>(-a) : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, int reason) {
    int v = var_of(l);
    assigns_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int attach(std::vector<Lit> lits, bool learnt) {
    int ci = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(ci);
    watches_[lits[1]].push_back(ci);
    clauses_.push_back({std::move(lits), learnt, false, 0});
    if (learnt) {
      learnts_.push_back(ci);
      bump_clause(clauses_[ci]);
    }
    return ci;
  }

  // Returns the index of a conflicting clause, or kNoReason.
  int propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit false_lit = negate(p);
      auto& ws = watches_[false_lit];
      ++stats_.propagations;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        Clause& c = clauses_[ci];
        if (c.deleted) continue;
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        if (value(c.lits[0]) == kTrue) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != kFalse) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[c.lits[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c.lits[0]) == kFalse) {
          conflict = ci;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(c.lits[0], ci);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void bump_var(int v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_.increased(v);
  }

  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (int ci : learnts_) clauses_[ci].activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // First-UIP conflict analysis.
  void analyze(int conflict, std::vector<Lit>& learnt, int& bt_level) {
    int path = 0;
    Lit p = kNoLit;
    learnt.assign(1, kNoLit);
    std::size_t idx = trail_.size();
    do {
      Clause& c = clauses_[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = (p == kNoLit ? 0 : 1); k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[var_of(trail_[--idx])]) {
      }
      p = trail_[idx];
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = negate(p);

    // Drop literals implied by the rest of the clause.
    std::vector<Lit> to_clear(learnt.begin(), learnt.end());
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      int r = reason_[var_of(learnt[i])];
      bool redundant = r != kNoReason;
      if (redundant) {
        const auto& rl = clauses_[r].lits;
        for (std::size_t k = 1; k < rl.size(); ++k) {
          int v = var_of(rl[k]);
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (Lit l : to_clear) seen_[var_of(l)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[var_of(learnt[1])];
    }
  }

  // Collects the assumptions responsible for assumption `a` being false.
  void analyze_final(Lit a) {
    core_.assign(1, a);
    int va = var_of(a);
    if (level_[va] == 0) return;
    seen_[va] = 1;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
      int v = var_of(trail_[i]);
      if (!seen_[v]) continue;
      if (reason_[v] == kNoReason) {
        core_.push_back(trail_[i]);
      } else {
        const auto& rl = clauses_[reason_[v]].lits;
        for (std::size_t k = 1; k < rl.size(); ++k)
          if (level_[var_of(rl[k])] > 0) seen_[var_of(rl[k])] = 1;
      }
      seen_[v] = 0;
    }
    seen_[va] = 0;
  }

  void backtrack(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[lvl]);) {
      int v = var_of(trail_[i]);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      polarity_[v] = trail_[i] & 1;
      heap_.insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  Lit pick_branch() {
    while (!heap_.empty()) {
      int v = heap_.pop();
      if (assigns_[v] == kUndef) return make_lit(v, polarity_[v]);
    }
    return kNoLit;
  }

  bool locked(int ci) const {
    const Clause& c = clauses_[ci];
    int v = var_of(c.lits[0]);
    return reason_[v] == ci && value(c.lits[0]) == kTrue;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [&](int a, int b) {
      const Clause& x = clauses_[a];
      const Clause& y = clauses_[b];
      if (x.activity != y.activity) return x.activity < y.activity;
      return a < b;
    });
    std::vector<int> keep;
    const std::size_t half = learnts_.size() / 2;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      int ci = learnts_[i];
      Clause& c = clauses_[ci];
      if (i < half && c.lits.size() > 2 && !locked(ci)) {
        c.deleted = true;
        std::vector<Lit>().swap(c.lits);
      } else {
        keep.push_back(ci);
      }
    }
    learnts_ = std::move(keep);
    std::sort(learnts_.begin(), learnts_.end());
  }

  // Returns true when finished, with the outcome in `st`; false asks for a restart.
  bool search(std::int64_t budget, SolveStatus& st) {
    std::int64_t local_conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
      int conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++local_conflicts;
        if (decision_level() == 0) {
          core_.clear();
          st = SolveStatus::Unsat;
          return true;
        }
        int bt = 0;
        analyze(conflict, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          int ci = attach(learnt, true);
          ++stats_.learnts;
          enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if (opts_.conflict_limit >= 0 && static_cast<std::int64_t>(stats_.conflicts) >= opts_.conflict_limit) {
          st = SolveStatus::ResourceOut;
          return true;
        }
        continue;
      }
      if (local_conflicts >= budget) {
        backtrack(0);
        return false;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) reduce_db();

      Lit next = kNoLit;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        Lit a = assumptions_[decision_level()];
        if (value(a) == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) == kFalse) {
          analyze_final(a);
          st = SolveStatus::Unsat;
          return true;
        } else {
          next = a;
          break;
        }
      }
      if (next == kNoLit) {
        ++stats_.decisions;
        next = pick_branch();
        if (next == kNoLit) {
          st = SolveStatus::Sat;
          return true;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
  }

  SolverOptions opts_;
  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<int> learnts_;
  std::vector<std::vector<int>> watches_;
  std::vector<signed char> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<bool> polarity_;  // true: branch negative
  std::vector<char> seen_;
  std::vector<double> activity_;
  VarHeap heap_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1;
  double cla_inc_ = 1;
  double max_learnts_ = 0;
  std::vector<Lit> assumptions_;
  std::vector<bool> model_;
  std::vector<Lit> core_;
  SolveStats stats_;
};

}  // namespace

SolveResult solve(const Cnf& cnf, const std::vector<int>& assumptions, const SolverOptions& opts) {
  int nvars = cnf.num_vars;
  for (int a : assumptions) nvars = std::max(nvars, std::abs(a));
  for (const auto& c : cnf.clauses)
    for (int l : c)
      if (l == 0 || std::abs(l) > nvars) throw std::invalid_argument("literal out of range in CNF");
  for (int a : assumptions)
    if (a == 0) throw std::invalid_argument("zero assumption literal");

  Cdcl s(nvars, opts);
  for (const auto& c : cnf.clauses) {
    std::vector<Lit> lits;
    lits.reserve(c.size());
    for (int l : c) lits.push_back(from_dimacs(l));
    if (!s.add_clause(std::move(lits))) break;
  }
  std::vector<Lit> as;
  for (int a : assumptions) as.push_back(from_dimacs(a));

  SolveResult r;
  r.status = s.solve(as);
  r.stats = s.stats();
  if (r.status == SolveStatus::Sat) {
    r.model.assign(nvars + 1, false);
    for (int v = 0; v < nvars; ++v) r.model[v + 1] = s.model()[v];
  } else if (r.status == SolveStatus::Unsat) {
    std::vector<char> in_core(2 * static_cast<std::size_t>(nvars), 0);
    for (Lit l : s.core()) in_core[l] = 1;
    for (int a : assumptions) {
      Lit l = from_dimacs(a);
      if (in_core[l]) {
        r.core.push_back(a);
        in_core[l] = 0;
      }
    }
  }
  return r;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& model) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int l : c) {
      int v = std::abs(l);
      bool val = v < static_cast<int>(model.size()) && model[v];
      if ((l > 0) == val) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::string Cnf::to_dimacs() const {
  std::ostringstream os;
  if (!selectors.empty()) {
    os << "c selectors";
    for (int s : selectors) os << ' ' << s;
    os << '\n';
  }
  os << "p cnf " << num_vars << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string tok;
  std::vector<int> cur;
  while (in >> tok) {
    if (tok == "c") {
      std::string rest;
      std::getline(in, rest);
      std::istringstream rs(rest);
      std::string word;
      if (rs >> word && word == "selectors") {
        int s;
        while (rs >> s) cnf.selectors.push_back(s);
      }
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      std::size_t nclauses = 0;
      in >> fmt >> cnf.num_vars >> nclauses;
      if (fmt != "cnf") throw std::invalid_argument("not a cnf header");
      continue;
    }
    int l = std::stoi(tok);
    if (l == 0) {
      cnf.clauses.push_back(std::move(cur));
      cur.clear();
    } else {
      cnf.num_vars = std::max(cnf.num_vars, std::abs(l));
      cur.push_back(l);
    }
  }
  if (!cur.empty()) cnf.clauses.push_back(std::move(cur));
  return cnf;
}

}  // namespace mtbmc
