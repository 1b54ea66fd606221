// Generators for scalable benchmark programs.

#ifndef MTBMC_BENCH_HPP
#define MTBMC_BENCH_HPP

#include <optional>
#include <string>

namespace mtbmc {

enum class BenchFamily { Philosophers, LockOrder, SignalHandshake };
enum class BenchVariant { Unsat, Sat, Buggy };

struct BenchSpec {
  BenchFamily family = BenchFamily::Philosophers;
  int size = 2;
  BenchVariant variant = BenchVariant::Unsat;
};

std::optional<BenchFamily> bench_family_from_name(const std::string& s);
std::optional<BenchVariant> bench_variant_from_name(const std::string& s);

// Throws std::invalid_argument for sizes below 1.
std::string gen_bench(const BenchSpec& spec);

}  // namespace mtbmc

#endif
