#pragma once

// Repeated independent SMC runs over a grid of particle counts and strip widths,
// scored against a reference capacity.
//
// Bench config files use the model spec syntax (see model_spec.hpp) plus:
//
//   particles    = 1250 2500 5000 10000 20000   # required
//   runs         = 10                           # R >= 2, default 10
//   strip_widths = 1 3                          # default 1
//   reference    = oracle                       # or: fixed 0.5879 | smc 200000 10
//   seed         = 1                            # base seed, default 1
//
// `strip_width` is not accepted in bench configs; use `strip_widths`.
//
// CSV output (UTF-8), one header line then record rows then summary rows:
//
//   kind,N,W,run,seed,capacity,log2_Z,wall_clock_s
//   record,<N>,<W>,<run>,<seed>,<capacity>,<log2_Z>,<wall_clock_s>
//   summary,<N>,<W>,<runs>,<mean>,<stderr>,<mse>,<mean_wall_clock_s>

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rllcap/model_spec.hpp"
#include "rllcap/smc.hpp"

namespace rllcap {

enum class ReferenceMode { oracle, fixed, long_run };

struct ReferenceSpec {
  ReferenceMode mode = ReferenceMode::oracle;
  double fixed_value = 0.0;
  std::size_t n_ref = 0;
  std::size_t runs_ref = 0;
};

ReferenceSpec parse_reference(const std::string& text);

struct BenchConfig {
  ModelSpec model;
  std::vector<std::size_t> particles;
  std::size_t runs = 10;
  std::vector<unsigned> strip_widths{1};
  ReferenceSpec reference;
  std::uint64_t seed = 1;

  /// Throws ConfigError on R < 2, empty or zero particle counts, bad widths.
  void validate() const;
};

BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::string& path);

struct BenchRecord {
  std::size_t n_particles = 0;
  unsigned strip_width = 1;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double capacity = 0.0;
  double log2_Z = 0.0;
  double wall_clock_seconds = 0.0;
};

struct BenchSummary {
  std::size_t n_particles = 0;
  unsigned strip_width = 1;
  std::size_t runs = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double mse = 0.0;
  double mean_wall_clock_seconds = 0.0;
};

struct BenchResult {
  double reference = 0.0;
  std::vector<BenchRecord> records;
  std::vector<BenchSummary> summaries;
};

/// Seed of run `run` at grid point `point` (grid order: particles outer, widths inner).
std::uint64_t bench_seed(std::uint64_t base, std::size_t point, std::size_t runs, std::size_t run);

/// Exact capacity (oracle), the supplied value (fixed), or the mean capacity of
/// runs_ref SMC runs with n_ref particles (long_run).
double reference_value(const BenchConfig& config, std::size_t threads = 1);

/// Runs every (N, W, run) job. Independent runs are spread over `threads` workers;
/// records are ordered by (N, W, run) regardless.
BenchResult run_bench(const BenchConfig& config, std::size_t threads = 1);

/// Mean, standard error, MSE against `reference` and mean wall clock of a group of
/// records sharing N and W.
BenchSummary summarize(std::span<const BenchRecord> records, double reference);

enum class OutputFormat { csv, json_lines };

struct OutputOptions {
  OutputFormat format = OutputFormat::csv;
  /// Write 0 for wall-clock fields so that output is reproducible byte for byte.
  bool timing = true;
};

inline constexpr const char* kRecordHeader = "kind,N,W,run,seed,capacity,log2_Z,wall_clock_s";
inline constexpr const char* kSummaryColumns = "summary,N,W,runs,mean,stderr,mse,mean_wall_clock_s";

void write_bench(std::ostream& out, const BenchResult& result, const OutputOptions& options);

/// Rows of kind `estimate` in the record layout, one per run.
void write_estimates(std::ostream& out, std::span<const CapacityEstimate> estimates,
                     const OutputOptions& options);

/// Round-trip decimal text for a double.
std::string format_double(double x);

}  // namespace rllcap
