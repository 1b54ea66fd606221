// Operational models of the threading and synchronization intrinsics.
//
// Mutex m lives in locations m.lock (0/1) and m.count (threads blocked on
// it); condition variable c in c.lock, c.nwaiters and c.bid (broadcasts so
// far). Lock and wait run in two atomic sections with a context-switch
// opportunity in between; a thread that is still blocked in the second
// section checks for global deadlock (blocked threads == running threads)
// and the path is then cut by an assumption.

#ifndef MTBMC_PTHREADS_HPP
#define MTBMC_PTHREADS_HPP

#include <string>

#include "mtbmc/symex.hpp"

namespace mtbmc {

enum class IntrinsicResult {
  Done,     // completed, advance the pc
  Yield,    // section boundary: end the step, resume later at the same pc
  Blocked,  // thread now blocked at the same pc
  Exited,
};

IntrinsicResult model_create(SymState& s, int t, int node, const Expr& call);
IntrinsicResult model_join(SymState& s, int t, int node, const Expr& call);
IntrinsicResult model_exit(SymState& s, int t, int node);
IntrinsicResult model_lock(SymState& s, int t, int node, const std::string& mutex);
IntrinsicResult model_unlock(SymState& s, int t, int node, const std::string& mutex);
IntrinsicResult model_wait(SymState& s, int t, int node, const std::string& cond, const std::string& mutex);
IntrinsicResult model_signal(SymState& s, int t, int node, const std::string& cond);
IntrinsicResult model_broadcast(SymState& s, int t, int node, const std::string& cond);

IntrinsicResult run_intrinsic(SymState& s, int t, int node);

// False when a blocked thread certainly cannot resume yet.
bool wake_possible(const SymState& s, int t);

}  // namespace mtbmc

#endif
