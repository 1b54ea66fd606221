#include <unordered_set>

#include "mtbmc/por.hpp"
#include "mtbmc/symex.hpp"

namespace mtbmc {

ExploreStats explore(const UnrolledProgram& prog, const SymexOptions& opts,
                     const std::function<bool(SsaTrace&&)>& on_trace) {
  ExploreStats stats;
  std::vector<std::vector<AccessSet>> suffix;
  suffix.push_back(suffix_access(prog.entry.cfg));
  for (const auto& t : prog.threads) suffix.push_back(suffix_access(t.cfg));
  std::unordered_set<std::string> seen;
  bool stop = false;

  std::function<void(SymState&)> dfs = [&](SymState& s) {
    if (stop) return;
    ++stats.states;
    std::vector<int> cand;
    if (!s.killed() && !s.all_exited()) {
      cand = schedulable(s);
      if (cand.empty()) {
        int d = deadlock_candidate(s);
        if (d >= 0) cand.push_back(d);
      } else if (opts.por && cand.size() > 1) {
        RwSets rw;
        std::vector<int> live;
        for (int t = 0; t < static_cast<int>(s.threads().size()); ++t) {
          const ThreadState& th = s.thread(t);
          rw.add(suffix[th.def_index + 1][th.pc]);
          if (th.status != ThreadStatus::Exited) live.push_back(t);
        }
        for (int j : cand) {
          // Running a thread alone first is only safe if it cannot cut the
          // path short of the others' obligations.
          const ThreadState& th = s.thread(j);
          if (suffix[th.def_index + 1][th.pc].cuts) continue;
          if (rw_independent(j, live, rw)) {
            cand = {j};
            break;
          }
        }
      }
    }
    if (cand.empty()) {
      ++stats.leaves;
      if (seen.insert(s.trace().key()).second) {
        ++stats.distinct;
        if (!on_trace(std::move(s.trace()))) stop = true;
      }
      return;
    }
    for (std::size_t i = 0; i < cand.size() && !stop; ++i) {
      if (i + 1 == cand.size()) {
        step(s, cand[i]);
        dfs(s);
      } else {
        SymState child = s;
        step(child, cand[i]);
        dfs(child);
      }
    }
  };
  SymState s0 = initial_state(prog, opts);
  dfs(s0);
  return stats;
}

}  // namespace mtbmc
