#include "rllcap/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "rllcap/oracle.hpp"

namespace rllcap {

namespace {

std::vector<std::string> tokens(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::size_t to_size(const std::string& s, const char* what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.front() == '-') throw ConfigError(std::string("bad ") + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

double wall(double seconds, const OutputOptions& o) { return o.timing ? seconds : 0.0; }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ReferenceSpec parse_reference(const std::string& text) {
  const auto t = tokens(text);
  ReferenceSpec r;
  if (t.size() == 1 && t[0] == "oracle") {
    r.mode = ReferenceMode::oracle;
  } else if (t.size() == 2 && t[0] == "fixed") {
    std::size_t used = 0;
    try {
      r.fixed_value = std::stod(t[1], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t[1].size() || !std::isfinite(r.fixed_value)) {
      throw ConfigError("bad fixed reference value '" + t[1] + "'");
    }
    r.mode = ReferenceMode::fixed;
  } else if (t.size() == 3 && t[0] == "smc") {
    r.mode = ReferenceMode::long_run;
    r.n_ref = to_size(t[1], "reference particle count");
    r.runs_ref = to_size(t[2], "reference run count");
    if (r.n_ref == 0 || r.runs_ref == 0) throw ConfigError("smc reference needs N_ref >= 1 and runs_ref >= 1");
  } else {
    throw ConfigError("reference must be `oracle`, `fixed <value>` or `smc <N_ref> <runs_ref>`, got '" +
                      text + "'");
  }
  return r;
}

void BenchConfig::validate() const {
  if (!model.rows || !model.cols) throw ConfigError("bench config needs rows and cols");
  if (runs < 2) throw ConfigError("runs must be >= 2 to estimate a standard error (got " + std::to_string(runs) + ")");
  if (particles.empty()) throw ConfigError("bench config needs at least one particle count");
  for (auto n : particles) {
    if (n == 0) throw ConfigError("particle counts must be >= 1");
  }
  if (strip_widths.empty()) throw ConfigError("bench config needs at least one strip width");
  for (auto w : strip_widths) {
    if (w == 0 || w > *model.cols || w > StripView::kMaxWidth) {
      throw ConfigError("strip width " + std::to_string(w) + " out of range [1, min(cols, 12)]");
    }
  }
}

BenchConfig parse_bench_config(std::istream& in) {
  BenchConfig cfg;
  std::set<std::string> seen;
  bool have_particles = false;
  for (const auto& kv : read_key_values(in)) {
    const auto where = [&](const std::string& msg) {
      return ConfigError("line " + std::to_string(kv.line) + " (" + kv.key + "): " + msg);
    };
    if (kv.key == "strip_width") throw where("use strip_widths in bench configs");
    if (apply_model_key(cfg.model, kv, seen)) continue;
    if (kv.key == "particles") {
      cfg.particles = parse_size_list(kv);
      have_particles = true;
    } else if (kv.key == "runs") {
      cfg.runs = parse_size(kv);
    } else if (kv.key == "strip_widths") {
      cfg.strip_widths.clear();
      for (auto w : parse_size_list(kv)) cfg.strip_widths.push_back(static_cast<unsigned>(w));
    } else if (kv.key == "reference") {
      try {
        cfg.reference = parse_reference(kv.value);
      } catch (const ConfigError& e) {
        throw where(e.what());
      }
    } else if (kv.key == "seed") {
      cfg.seed = parse_size(kv);
    } else {
      throw where("unknown key");
    }
  }
  if (!have_particles) throw ConfigError("bench config needs `particles`");
  cfg.validate();
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bench config '" + path + "'");
  return parse_bench_config(in);
}

std::uint64_t bench_seed(std::uint64_t base, std::size_t point, std::size_t runs, std::size_t run) {
  return base + point * runs + run;
}

double reference_value(const BenchConfig& config, std::size_t threads) {
  switch (config.reference.mode) {
    case ReferenceMode::fixed:
      return config.reference.fixed_value;
    case ReferenceMode::oracle:
      try {
        return exact_capacity(config.model.model());
      } catch (const CapacityLimitError& e) {
        throw ConfigError(std::string("oracle reference unavailable: ") + e.what() +
                          "; use `reference = fixed <value>` or `reference = smc <N_ref> <runs_ref>`");
      }
    case ReferenceMode::long_run: {
      const StripView view(config.model.model(), 1);
      std::vector<double> caps(config.reference.runs_ref);
      // Reference runs draw from seeds disjoint from the bench grid.
      const std::uint64_t base = config.seed ^ 0x7265666572656e63ULL;
      detail::parallel_for(caps.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          caps[r] = smc_run(view, config.reference.n_ref, RngSpec{base + r}).capacity;
        }
      });
      double sum = 0.0;
      for (double c : caps) sum += c;
      return sum / static_cast<double>(caps.size());
    }
  }
  throw std::logic_error("unhandled reference mode");
}

BenchSummary summarize(std::span<const BenchRecord> records, double reference) {
  if (records.empty()) throw ParameterError("cannot summarize zero records");
  BenchSummary s;
  s.n_particles = records.front().n_particles;
  s.strip_width = records.front().strip_width;
  s.runs = records.size();
  const double R = static_cast<double>(records.size());
  double sum = 0.0, sq_err = 0.0, clock = 0.0;
  for (const auto& r : records) {
    sum += r.capacity;
    sq_err += (r.capacity - reference) * (r.capacity - reference);
    clock += r.wall_clock_seconds;
  }
  s.mean = sum / R;
  s.mse = sq_err / R;
  s.mean_wall_clock_seconds = clock / R;
  if (records.size() > 1) {
    double ss = 0.0;
    for (const auto& r : records) ss += (r.capacity - s.mean) * (r.capacity - s.mean);
    s.std_error = std::sqrt(ss / (R - 1.0) / R);
  }
  return s;
}

BenchResult run_bench(const BenchConfig& config, std::size_t threads) {
  config.validate();
  BenchResult result;
  result.reference = reference_value(config, threads);

  const LatticeModel model = config.model.model();
  std::vector<StripView> views;
  for (auto w : config.strip_widths) views.emplace_back(model, w);

  const std::size_t R = config.runs;
  const std::size_t points = config.particles.size() * views.size();
  result.records.resize(points * R);
  detail::parallel_for(result.records.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t job = begin; job < end; ++job) {
      const std::size_t point = job / R, run = job % R;
      const std::size_t n = config.particles[point / views.size()];
      const StripView& view = views[point % views.size()];
      const std::uint64_t seed = bench_seed(config.seed, point, R, run);
      const auto est = smc_run(view, n, RngSpec{seed});
      result.records[job] = BenchRecord{n, view.width(), run, seed, est.capacity, est.log2_Z,
                                        est.wall_clock_seconds};
    }
  });
  for (std::size_t p = 0; p < points; ++p) {
    result.summaries.push_back(
        summarize(std::span<const BenchRecord>(result.records).subspan(p * R, R), result.reference));
  }
  return result;
}

void write_bench(std::ostream& out, const BenchResult& result, const OutputOptions& options) {
  if (options.format == OutputFormat::csv) {
    out << kRecordHeader << '\n';
    for (const auto& r : result.records) {
      out << "record," << r.n_particles << ',' << r.strip_width << ',' << r.run << ',' << r.seed << ','
          << format_double(r.capacity) << ',' << format_double(r.log2_Z) << ','
          << format_double(wall(r.wall_clock_seconds, options)) << '\n';
    }
    for (const auto& s : result.summaries) {
      out << "summary," << s.n_particles << ',' << s.strip_width << ',' << s.runs << ','
          << format_double(s.mean) << ',' << format_double(s.std_error) << ',' << format_double(s.mse) << ','
          << format_double(wall(s.mean_wall_clock_seconds, options)) << '\n';
    }
    return;
  }
  for (const auto& r : result.records) {
    nlohmann::ordered_json j{{"kind", "record"},          {"N", r.n_particles},   {"W", r.strip_width},
                             {"run", r.run},              {"seed", r.seed},       {"capacity", r.capacity},
                             {"log2_Z", r.log2_Z},        {"wall_clock_s", wall(r.wall_clock_seconds, options)}};
    out << j.dump() << '\n';
  }
  for (const auto& s : result.summaries) {
    nlohmann::ordered_json j{{"kind", "summary"}, {"N", s.n_particles}, {"W", s.strip_width},
                             {"runs", s.runs},    {"mean", s.mean},     {"stderr", s.std_error},
                             {"mse", s.mse},      {"mean_wall_clock_s", wall(s.mean_wall_clock_seconds, options)}};
    out << j.dump() << '\n';
  }
}

void write_estimates(std::ostream& out, std::span<const CapacityEstimate> estimates,
                     const OutputOptions& options) {
  if (options.format == OutputFormat::csv) out << kRecordHeader << '\n';
  for (std::size_t run = 0; run < estimates.size(); ++run) {
    const auto& e = estimates[run];
    if (options.format == OutputFormat::csv) {
      out << "estimate," << e.n_particles << ',' << e.strip_width << ',' << run << ',' << e.seed << ','
          << format_double(e.capacity) << ',' << format_double(e.log2_Z) << ','
          << format_double(wall(e.wall_clock_seconds, options)) << '\n';
    } else {
      nlohmann::ordered_json j{{"kind", "estimate"},   {"N", e.n_particles}, {"W", e.strip_width},
                               {"run", run},           {"seed", e.seed},     {"capacity", e.capacity},
                               {"log2_Z", e.log2_Z},   {"wall_clock_s", wall(e.wall_clock_seconds, options)}};
      out << j.dump() << '\n';
    }
  }
}

}  // namespace rllcap
