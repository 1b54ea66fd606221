#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mtbmc/bench.hpp"
#include "mtbmc/encoder.hpp"
#include "mtbmc/strategies.hpp"

using namespace mtbmc;

namespace {

constexpr int kUsage = 2;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// Loads a program, printing diagnostics; nullopt on failure.
std::optional<TypedProgram> load_file(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  try {
    TypedProgram p = load(SourceProgram{text, path});
    for (const auto& w : p.warnings) std::cerr << w << '\n';
    return p;
  } catch (const SourceError& e) {
    std::cerr << e.what() << '\n';
    return std::nullopt;
  }
}

struct Options {
  std::vector<std::string> files;
  std::string strategy = "lazy";
  unsigned unwind = 10;
  bool no_unwinding_assertions = false;
  unsigned width = 32;
  std::string por = "on";
  std::uint64_t seed = 0;
  std::int64_t conflict_limit = -1;
  bool exhaustive = false;
  std::size_t max_core = 500;
  bool div_check = false;
  std::string format = "human";
  bool trace = false;
  std::string dump_smtlib;
  std::string dump_cnf;

  VerifyConfig config() const {
    VerifyConfig c;
    c.strategy = *strategy_from_name(strategy);
    c.unwind = unwind;
    c.unwinding_assertions = !no_unwinding_assertions;
    c.width = width;
    c.por = por == "on";
    c.seed = seed;
    c.conflict_limit = conflict_limit;
    c.exhaustive = exhaustive;
    c.max_core = max_core;
    c.div_by_zero_check = div_check;
    c.dump_smtlib = dump_smtlib;
    c.dump_cnf = dump_cnf;
    return c;
  }
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--unwind", o.unwind, "loop unwinding bound")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-unwinding-assertions", o.no_unwinding_assertions,
                "assume instead of assert that loops exit within the bound");
  cmd->add_option("--bitwidth", o.width, "bit width of int")->check(CLI::Range(1, 64));
  cmd->add_option("--por", o.por, "partial-order reduction")->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--div-by-zero-check", o.div_check, "check divisors for zero");
}

int run_verify(const Options& o) {
  const VerifyConfig cfg = o.config();
  int worst = 0;
  for (const auto& path : o.files) {
    auto prog = load_file(path);
    if (!prog) {
      worst = std::max(worst, kUsage);
      continue;
    }
    try {
      Report r = verify(*prog, cfg);
      std::cout << (o.format == "machine" ? format_machine(r, o.trace) : format_human(r, o.trace));
      worst = std::max(worst, exit_code(r.verdict));
    } catch (const VerificationError& e) {
      std::cerr << path << ": error: " << e.what() << '\n';
      worst = std::max(worst, kUsage);
    }
  }
  return worst;
}

int run_dump(const Options& o, const std::string& kind) {
  auto prog = load_file(o.files.front());
  if (!prog) return kUsage;
  try {
    const VerifyConfig cfg = o.config();
    if (kind == "ast") {
      std::cout << print_program(prog->program);
      return 0;
    }
    UnrolledProgram up = unroll_program(*prog, cfg.unwind, cfg.unwinding_assertions);
    if (kind == "cfg") {
      std::cout << dump_cfg(up.entry.cfg);
      for (const auto& t : up.threads) std::cout << '\n' << dump_cfg(t.cfg);
      return 0;
    }
    SymexOptions sx;
    sx.width = cfg.width;
    sx.por = cfg.por;
    sx.div_by_zero_check = cfg.div_by_zero_check;
    std::vector<SsaTrace> traces;
    explore(up, sx, [&](SsaTrace&& t) {
      traces.push_back(std::move(t));
      return true;
    });
    Formula f = encode_schedule(build_schedule(std::move(traces), cfg.width), cfg.width).formula;
    if (kind == "smtlib")
      std::cout << to_smtlib(f);
    else
      std::cout << bitblast(f).cnf.to_dimacs();
    return 0;
  } catch (const VerificationError& e) {
    std::cerr << o.files.front() << ": error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded model checker for multi-threaded MTC programs"};
  app.require_subcommand(1);
  Options o;

  auto* verify_cmd = app.add_subcommand("verify", "verify programs");
  verify_cmd->add_option("files", o.files, "MTC source files")->required();
  verify_cmd->add_option("--strategy", o.strategy)->check(CLI::IsMember({"lazy", "schedule", "uw"}));
  add_common(verify_cmd, o);
  verify_cmd->add_option("--seed", o.seed, "solver seed")->envname("MTBMC_SEED");
  verify_cmd->add_option("--conflict-limit", o.conflict_limit, "give up after N conflicts per solver call");
  verify_cmd->add_flag("--exhaustive", o.exhaustive, "lazy: solve every interleaving");
  verify_cmd->add_option("--max-core", o.max_core, "uw: core size above which every literal is relaxed")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--format", o.format)->check(CLI::IsMember({"human", "machine"}));
  verify_cmd->add_flag("--trace", o.trace, "print the counterexample trace");
  verify_cmd->add_option("--dump-smtlib", o.dump_smtlib, "write each solver query as SMT-LIB2 into DIR");
  verify_cmd->add_option("--dump-cnf", o.dump_cnf, "write each solver query as DIMACS into DIR");

  std::string family = "philosophers", variant = "unsat";
  int size = 2;
  auto* gen_cmd = app.add_subcommand("gen", "print a generated benchmark program");
  gen_cmd->add_option("--family", family)->check(CLI::IsMember({"philosophers", "lock-order", "signal-handshake"}));
  gen_cmd->add_option("--size", size)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--variant", variant)->check(CLI::IsMember({"unsat", "sat", "buggy"}));

  std::string kind = "smtlib";
  auto* dump_cmd = app.add_subcommand("dump", "print the parsed program, its CFGs, or its schedule formula");
  dump_cmd->add_option("file", o.files, "MTC source file")->required()->expected(1);
  dump_cmd->add_option("--kind", kind)->check(CLI::IsMember({"ast", "cfg", "smtlib", "cnf"}));
  add_common(dump_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (*verify_cmd) return run_verify(o);
  if (*dump_cmd) return run_dump(o, kind);
  BenchSpec spec;
  spec.family = *bench_family_from_name(family);
  spec.variant = *bench_variant_from_name(variant);
  spec.size = size;
  std::cout << gen_bench(spec);
  return 0;
}
