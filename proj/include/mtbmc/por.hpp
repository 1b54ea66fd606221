// Partial-order reduction: instruction visibility and read/write independence.
//
// Accesses are tracked per global name. An array access a[e] counts as an
// access to all of a; a mutex or condition variable counts as one shared
// object that its intrinsics both read and write.

#ifndef MTBMC_POR_HPP
#define MTBMC_POR_HPP

#include <set>
#include <string>
#include <vector>

#include "mtbmc/cfg.hpp"

namespace mtbmc {

struct AccessSet {
  std::set<std::string> reads;
  std::set<std::string> writes;
  bool sync = false;  // thread-management or atomicity intrinsic
  bool cuts = false;  // an assumption that can end the path

  void merge(const AccessSet& o);
  bool touches_globals() const { return !reads.empty() || !writes.empty(); }
};

AccessSet node_access(const CfgNode& n);

bool visible(const CfgNode& n);

enum class AccessClass { Equivalent, NonEquivalent };

AccessClass classify_pair(const AccessSet& a, const AccessSet& b);

struct RwSets {
  std::vector<std::set<std::string>> rd;
  std::vector<std::set<std::string>> wr;

  void add(const AccessSet& a);
};

// WR_j disjoint from every other thread's reads and writes, and RD_j disjoint
// from every other thread's writes.
bool rw_independent(int j, const std::vector<int>& others, const RwSets& rw);

// Accesses of the remaining instructions from each node to the end.
std::vector<AccessSet> suffix_access(const ThreadCfg& cfg);

}  // namespace mtbmc

#endif
