#include "doctest.h"

#include "mtbmc/bench.hpp"
#include "mtbmc/por.hpp"
#include "support/testkit.hpp"

using namespace mtbmc;

namespace {

// First node of main in a program with the given globals and statement.
CfgNode first_node(const std::string& decls, const std::string& stmt) {
  static std::vector<TypedProgram> keep;  // nodes point into the program's AST
  keep.push_back(testkit::load_text(decls + " main { int l; " + stmt + " }"));
  return build_cfg(keep.back()).entry.nodes.at(0);
}

AccessSet reads(std::set<std::string> r) { return {std::move(r), {}, false}; }
AccessSet writes(std::set<std::string> w) { return {{}, std::move(w), false}; }

}  // namespace

TEST_CASE("visibility") {
  CHECK(visible(first_node("int x;", "x = 3;")));
  CHECK_FALSE(visible(first_node("int x;", "l = l + 1;")));
  CHECK(visible(first_node("int i;", "assert(i >= 0 && i < 10);")));
  CHECK(visible(first_node("int a[3];", "l = a[1];")));
  CHECK(visible(first_node("mutex m;", "lock(m);")));
  CHECK_FALSE(visible(first_node("int x;", "assume(l == 0);")));
}

TEST_CASE("accesses of an array element count as the whole array") {
  AccessSet a = node_access(first_node("int a[4], i;", "a[i] = l;"));
  CHECK(a.writes == std::set<std::string>{"a"});
  CHECK(a.reads == std::set<std::string>{"i"});
}

TEST_CASE("pair classification") {
  CHECK(classify_pair(reads({"x"}), reads({"x"})) == AccessClass::Equivalent);
  CHECK(classify_pair(reads({"x"}), writes({"x"})) == AccessClass::NonEquivalent);
  CHECK(classify_pair(writes({"x"}), writes({"y"})) == AccessClass::Equivalent);
  CHECK(classify_pair(writes({"x"}), writes({"x"})) == AccessClass::NonEquivalent);
  CHECK(classify_pair(reads({"x"}), writes({"y"})) == AccessClass::Equivalent);
}

TEST_CASE("pair classification is symmetric") {
  const std::vector<std::string> vars = {"x", "y"};
  std::vector<AccessSet> sets;
  for (int mask = 0; mask < 16; ++mask) {
    AccessSet s;
    for (int v = 0; v < 2; ++v) {
      if (mask & (1 << v)) s.reads.insert(vars[v]);
      if (mask & (4 << v)) s.writes.insert(vars[v]);
    }
    sets.push_back(s);
  }
  for (const auto& a : sets)
    for (const auto& b : sets) CHECK(classify_pair(a, b) == classify_pair(b, a));
}

TEST_CASE("read/write independence") {
  RwSets rw;
  rw.add(writes({"x"}));
  rw.add(writes({"y"}));
  CHECK(rw_independent(0, {1}, rw));
  CHECK(rw_independent(1, {0}, rw));

  RwSets locals_only;
  locals_only.add(AccessSet{});
  locals_only.add(writes({"x"}));
  locals_only.add(reads({"x"}));
  CHECK(rw_independent(0, {1, 2}, locals_only));
  CHECK_FALSE(rw_independent(1, {0, 2}, locals_only));
  CHECK_FALSE(rw_independent(2, {0, 1}, locals_only));

  RwSets readers;
  readers.add(reads({"x"}));
  readers.add(reads({"x"}));
  CHECK(rw_independent(0, {1}, readers));
}

TEST_CASE("philosophers share forks with their neighbours") {
  TypedProgram p = testkit::load_text(gen_bench({BenchFamily::Philosophers, 3, BenchVariant::Unsat}));
  REQUIRE(p.threads().size() == 1);  // one definition, started n times
  AccessSet whole = suffix_access(build_thread_cfg(p, 0)).at(0);
  CHECK(whole.writes.count("forks"));
  RwSets rw;
  for (int k = 0; k < 3; ++k) rw.add(whole);
  CHECK_FALSE(rw_independent(0, {1}, rw));
  CHECK_FALSE(rw_independent(2, {0, 1}, rw));
}

TEST_CASE("suffix accesses shrink along the thread") {
  TypedProgram p = testkit::load_text("int x, y; thread T() { x = 1; y = 2; } main { }");
  ThreadCfg t = build_thread_cfg(p, 0);
  auto suf = suffix_access(t);
  REQUIRE(suf.size() == t.nodes.size() + 1);  // one past the end
  CHECK(suf[0].writes == std::set<std::string>{"x", "y"});
  CHECK(suf[1].writes == std::set<std::string>{"y"});
  CHECK(suf.back().writes.empty());
}

TEST_CASE("reduction never adds interleavings") {
  for (const auto& f : testkit::corpus_files()) {
    TypedProgram p = testkit::load_text(testkit::read_file(f), f);
    VerifyConfig on = testkit::config(Strategy::Lazy, 8, true);
    VerifyConfig off = testkit::config(Strategy::Lazy, 8, false);
    on.exhaustive = off.exhaustive = true;
    Report a = verify(p, on), b = verify(p, off);
    CHECK_MESSAGE(a.verdict == b.verdict, f);
    CHECK_MESSAGE(a.stats.interleavings <= b.stats.interleavings, f);
  }
}
