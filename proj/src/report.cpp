#include <sstream>

#include "mtbmc/strategies.hpp"

namespace mtbmc {

std::string format_trace_line(const TraceLine& l, const std::string& origin) {
  std::ostringstream os;
  os << '#' << l.index << " T" << l.thread << ' ' << origin << ':' << l.line << ' ' << l.stmt << " {";
  for (std::size_t i = 0; i < l.values.size(); ++i) {
    if (i) os << ',';
    os << l.values[i].first << '=' << l.values[i].second;
  }
  os << '}';
  return os.str();
}

namespace {

std::string schedule_text(const std::vector<int>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

}  // namespace

std::string format_machine(const Report& r, bool trace) {
  std::ostringstream os;
  os << "file=" << r.origin << '\n';
  os << "verdict=" << verdict_name(r.verdict) << '\n';
  os << "violation=" << (r.counterexample ? property_tag(r.counterexample->property) : "none") << '\n';
  os << "strategy=" << strategy_name(r.strategy) << '\n';
  os << "interleavings=" << r.stats.interleavings << '\n';
  os << "failed_interleavings=" << r.stats.failed_interleavings << '\n';
  os << "iterations=" << r.stats.iterations << '\n';
  os << "solver_calls=" << r.stats.solver_calls << '\n';
  os << "core_fallbacks=" << r.stats.core_fallbacks << '\n';
  if (r.counterexample) {
    const Counterexample& c = *r.counterexample;
    os << "violation_line=" << c.line << '\n';
    os << "schedule=" << schedule_text(c.schedule) << '\n';
    for (const auto& [name, v] : c.nondet) os << "nondet." << name << '=' << v << '\n';
    if (trace)
      for (const auto& l : c.lines) os << "trace=" << format_trace_line(l, r.origin) << '\n';
  }
  os << "wall_time_ms=" << r.stats.wall_time_ms << '\n';
  return os.str();
}

std::string format_human(const Report& r, bool trace) {
  std::ostringstream os;
  os << r.origin << ": " << verdict_name(r.verdict);
  if (r.counterexample) {
    const Counterexample& c = *r.counterexample;
    os << " (" << property_tag(c.property) << " at " << r.origin << ':' << c.line << ", thread T" << c.thread << ')';
  }
  os << '\n';
  os << "  strategy " << strategy_name(r.strategy) << ": " << r.stats.interleavings << " interleavings, "
     << r.stats.failed_interleavings << " failed, " << r.stats.solver_calls << " solver calls";
  if (r.strategy == Strategy::Uw) os << ", " << r.stats.iterations << " iterations";
  os << ", " << r.stats.wall_time_ms << " ms\n";
  if (r.counterexample && (trace || r.verdict != Verdict::Safe)) {
    const Counterexample& c = *r.counterexample;
    os << "  schedule: " << schedule_text(c.schedule) << '\n';
    if (trace || r.verdict == Verdict::Violated)
      for (const auto& l : c.lines) os << "  " << format_trace_line(l, r.origin) << '\n';
  }
  return os.str();
}

}  // namespace mtbmc
