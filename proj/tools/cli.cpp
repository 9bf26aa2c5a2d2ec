#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rllcap/bench.hpp"
#include "rllcap/model_spec.hpp"
#include "rllcap/oracle.hpp"
#include "rllcap/smc.hpp"

namespace rllcap::cli {

namespace {

// Raised for invocations that are well-formed for CLI11 but semantically invalid.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::string model_path;
  std::optional<std::size_t> rows, cols;
  std::optional<std::string> potential, h_potential, v_potential;
  std::optional<unsigned> strip_width;

  void add_to(CLI::App& app, bool with_strip) {
    app.add_option("--model", model_path, "Model spec file (key = value lines)");
    app.add_option("--rows", rows, "Lattice rows M")->check(CLI::PositiveNumber);
    app.add_option("--cols", cols, "Lattice columns K")->check(CLI::PositiveNumber);
    app.add_option("--potential", potential, "`rll` or four weights \"w00 w01 w10 w11\" for both orientations");
    app.add_option("--h-potential", h_potential, "Horizontal edge potential");
    app.add_option("--v-potential", v_potential, "Vertical edge potential");
    if (with_strip) app.add_option("--strip-width", strip_width, "Columns per SMC step W")->check(CLI::PositiveNumber);
  }

  ModelSpec resolve() const {
    ModelSpec spec;
    const bool inline_flags = rows || cols || potential || h_potential || v_potential;
    if (!model_path.empty()) {
      if (inline_flags) throw UsageError("--model cannot be combined with inline model flags");
      spec = load_model_spec(model_path);
    } else {
      if (!rows || !cols) throw UsageError("give --model or both --rows and --cols");
      spec.rows = rows;
      spec.cols = cols;
      if (potential && (h_potential || v_potential)) {
        throw UsageError("--potential cannot be combined with --h-potential/--v-potential");
      }
      if (potential) spec.h_potential = spec.v_potential = parse_potential(*potential);
      if (h_potential) spec.h_potential = parse_potential(*h_potential);
      if (v_potential) spec.v_potential = parse_potential(*v_potential);
    }
    if (strip_width) spec.strip_width = *strip_width;
    if (spec.strip_width > *spec.cols || spec.strip_width > StripView::kMaxWidth) {
      throw UsageError("--strip-width must be in [1, min(cols, 12)]");
    }
    return spec;
  }
};

struct OutputFlags {
  std::string output;
  std::string format = "csv";
  bool no_timing = false;

  void add_to(CLI::App& app, bool with_timing) {
    app.add_option("--output", output, "Write results to this file instead of standard output");
    app.add_option("--format", format, "csv or json-lines")
        ->check(CLI::IsMember({"csv", "json-lines", "jsonl"}));
    if (with_timing) app.add_flag("--no-timing", no_timing, "Write 0 for wall-clock fields (reproducible output)");
  }

  OutputOptions options() const {
    return {format == "csv" ? OutputFormat::csv : OutputFormat::json_lines, !no_timing};
  }
};

// Results are buffered and only written once the command has succeeded, so a failed
// run never leaves a partial file behind.
void emit(const OutputFlags& flags, const std::string& text, std::ostream& out) {
  if (flags.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(flags.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + flags.output + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + flags.output + "'");
}

const char* method_name(ExactMethod m) {
  switch (m) {
    case ExactMethod::transfer:
      return "transfer";
    case ExactMethod::brute:
      return "brute";
    case ExactMethod::automatic:
      break;
  }
  return "auto";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity of 2-D constrained channels via fully adapted SMC", "rllcap"};
  app.require_subcommand(1);

  auto* estimate = app.add_subcommand("estimate", "Estimate capacity with the SMC sampler");
  ModelFlags est_model;
  OutputFlags est_out;
  std::size_t particles = 0;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::size_t threads = 1;
  est_model.add_to(*estimate, true);
  est_out.add_to(*estimate, true);
  estimate->add_option("--particles", particles, "Number of particles N")->required()->check(CLI::PositiveNumber);
  estimate->add_option("--seed", seed, "Base seed; run r uses seed + r");
  estimate->add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber);
  estimate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* exact = app.add_subcommand("exact", "Exact log2 Z and capacity");
  ModelFlags ex_model;
  OutputFlags ex_out;
  std::string method = "auto";
  ex_model.add_to(*exact, false);
  ex_out.add_to(*exact, false);
  exact->add_option("--method", method, "auto, transfer or brute")
      ->check(CLI::IsMember({"auto", "transfer", "brute"}));

  auto* bench = app.add_subcommand("bench", "Repeated runs over a particle grid, scored by MSE");
  OutputFlags bench_out;
  std::string config_path;
  std::size_t bench_threads = 1;
  bench_out.add_to(*bench, true);
  bench->add_option("--config", config_path, "Bench config file")->required();
  bench->add_option("--threads", bench_threads, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Validation: everything below may only fail with kExitRuntime once computing starts.
  ModelSpec spec;
  BenchConfig bench_cfg;
  try {
    if (*estimate) spec = est_model.resolve();
    if (*exact) spec = ex_model.resolve();
    if (*bench) bench_cfg = load_bench_config(config_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::ostringstream text;
    if (*estimate) {
      const StripView view = spec.view();
      std::vector<CapacityEstimate> results;
      for (std::size_t r = 0; r < runs; ++r) {
        results.push_back(smc_run(view, particles, RngSpec{seed + r}, SmcOptions{threads, false}));
      }
      write_estimates(text, results, est_out.options());
      emit(est_out, text.str(), out);
    } else if (*exact) {
      const LatticeModel model = spec.model();
      ExactMethod m = method == "transfer" ? ExactMethod::transfer
                      : method == "brute"  ? ExactMethod::brute
                                           : resolve_method(model);
      const double log2_Z = exact_log2_Z(model, m);
      const double cap = capacity_from_log2Z(log2_Z, model.rows(), model.cols());
      if (ex_out.options().format == OutputFormat::csv) {
        text << "kind,rows,cols,method,log2_Z,capacity\n"
             << "exact," << model.rows() << ',' << model.cols() << ',' << method_name(m) << ','
             << format_double(log2_Z) << ',' << format_double(cap) << '\n';
      } else {
        nlohmann::ordered_json j{{"kind", "exact"},      {"rows", model.rows()}, {"cols", model.cols()},
                                 {"method", method_name(m)}, {"log2_Z", log2_Z}, {"capacity", cap}};
        text << j.dump() << '\n';
      }
      emit(ex_out, text.str(), out);
    } else if (*bench) {
      const auto result = run_bench(bench_cfg, bench_threads);
      write_bench(text, result, bench_out.options());
      emit(bench_out, text.str(), out);
      if (!bench_out.output.empty()) {
        out << "reference capacity " << format_double(result.reference) << "\n" << kSummaryColumns << "\n";
        for (const auto& s : result.summaries) {
          out << "summary," << s.n_particles << ',' << s.strip_width << ',' << s.runs << ','
              << format_double(s.mean) << ',' << format_double(s.std_error) << ',' << format_double(s.mse)
              << ',' << format_double(bench_out.no_timing ? 0.0 : s.mean_wall_clock_seconds) << "\n";
        }
      }
    }
  } catch (const ConfigError& e) {
    // Raised by reference resolution (e.g. oracle too large) before any run.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace rllcap::cli
