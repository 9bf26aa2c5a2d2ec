#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rllcap/bench.hpp"
#include "rllcap/ffbs.hpp"
#include "rllcap/model.hpp"
#include "rllcap/oracle.hpp"
#include "rllcap/smc.hpp"

namespace py = pybind11;
using namespace rllcap;

namespace {

ColumnState to_column(const std::vector<std::uint32_t>& bits) {
  for (auto b : bits) {
    if (b > 1) throw py::value_error("column bits must be 0 or 1");
  }
  return ColumnState{1, bits};
}

ExactMethod to_method(const std::string& name) {
  if (name == "auto") return ExactMethod::automatic;
  if (name == "transfer") return ExactMethod::transfer;
  if (name == "brute") return ExactMethod::brute;
  throw py::value_error("method must be 'auto', 'transfer' or 'brute'");
}

py::dict bench_to_dict(const BenchResult& r) {
  py::list records, summaries;
  for (const auto& x : r.records) {
    py::dict d;
    d["N"] = x.n_particles;
    d["W"] = x.strip_width;
    d["run"] = x.run;
    d["seed"] = x.seed;
    d["capacity"] = x.capacity;
    d["log2_Z"] = x.log2_Z;
    d["wall_clock_s"] = x.wall_clock_seconds;
    records.append(d);
  }
  for (const auto& s : r.summaries) {
    py::dict d;
    d["N"] = s.n_particles;
    d["W"] = s.strip_width;
    d["runs"] = s.runs;
    d["mean"] = s.mean;
    d["stderr"] = s.std_error;
    d["mse"] = s.mse;
    d["mean_wall_clock_s"] = s.mean_wall_clock_seconds;
    summaries.append(d);
  }
  py::dict out;
  out["reference"] = r.reference;
  out["records"] = records;
  out["summaries"] = summaries;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Partition function and capacity estimation for 2-D constrained channels.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapacityLimitError>(m, "CapacityLimitError", PyExc_RuntimeError);
  py::register_exception<SupportCollapseError>(m, "SupportCollapseError", PyExc_RuntimeError);

  py::class_<PairwisePotential>(m, "PairwisePotential")
      .def(py::init<double, double, double, double>(), py::arg("w00"), py::arg("w01"), py::arg("w10"),
           py::arg("w11"))
      .def("__call__", [](const PairwisePotential& p, unsigned a, unsigned b) { return p(a, b); })
      .def_property_readonly("weights", &PairwisePotential::weights)
      .def("is_rll", &PairwisePotential::is_rll)
      .def("__repr__", [](const PairwisePotential& p) {
        const auto& w = p.weights();
        return "PairwisePotential(" + format_double(w[0]) + ", " + format_double(w[1]) + ", " +
               format_double(w[2]) + ", " + format_double(w[3]) + ")";
      });
  m.def("rll_potential", &rll_potential);

  py::class_<LatticeModel>(m, "LatticeModel")
      .def(py::init<std::size_t, std::size_t, PairwisePotential, PairwisePotential>(), py::arg("rows"),
           py::arg("cols"), py::arg("h_potential"), py::arg("v_potential"))
      .def_static("rll", &LatticeModel::rll, py::arg("rows"), py::arg("cols"))
      .def_property_readonly("rows", &LatticeModel::rows)
      .def_property_readonly("cols", &LatticeModel::cols)
      .def_property_readonly("h_potential", &LatticeModel::h_potential)
      .def_property_readonly("v_potential", &LatticeModel::v_potential)
      .def("__repr__", [](const LatticeModel& lm) {
        return "LatticeModel(rows=" + std::to_string(lm.rows()) + ", cols=" + std::to_string(lm.cols()) + ")";
      });

  m.def(
      "column_phi", [](const LatticeModel& lm, const std::vector<std::uint32_t>& s) {
        return column_phi(lm, to_column(s));
      },
      py::arg("model"), py::arg("state"));
  m.def(
      "between_psi",
      [](const LatticeModel& lm, const std::vector<std::uint32_t>& s, const std::vector<std::uint32_t>& prev) {
        return between_psi(lm, to_column(s), to_column(prev));
      },
      py::arg("model"), py::arg("state"), py::arg("prev"));

  m.def(
      "exact_log2_Z", [](const LatticeModel& lm, const std::string& method) {
        return exact_log2_Z(lm, to_method(method));
      },
      py::arg("model"), py::arg("method") = "auto");
  m.def(
      "exact_capacity", [](const LatticeModel& lm, const std::string& method) {
        return exact_capacity(lm, to_method(method));
      },
      py::arg("model"), py::arg("method") = "auto");
  m.def("valid_column_count", &valid_column_count, py::arg("rows"));
  m.def(
      "conditional_normalizer",
      [](const LatticeModel& lm, const std::vector<std::uint32_t>& prev) {
        return conditional_normalizer(lm, to_column(prev));
      },
      py::arg("model"), py::arg("prev"));
  m.def("capacity_from_log2Z", &capacity_from_log2Z, py::arg("log2_Z"), py::arg("rows"), py::arg("cols"));

  m.def(
      "resampling_weight",
      [](const LatticeModel& lm, std::optional<std::vector<std::uint32_t>> prev) {
        const StripView view(lm, 1);
        if (!prev) return resampling_weight(forward_messages(view, 0, nullptr));
        if (lm.cols() < 2) throw py::value_error("a previous column needs cols >= 2");
        const ColumnState p = to_column(*prev);
        return resampling_weight(forward_messages(view, 1, &p));
      },
      py::arg("model"), py::arg("prev") = py::none(),
      "log2 of sum_x phi(x) psi(x, prev) for one column; first column when prev is None.");
  m.def(
      "sample_column",
      [](const LatticeModel& lm, std::optional<std::vector<std::uint32_t>> prev, std::uint64_t seed) {
        const StripView view(lm, 1);
        StreamRng rng(seed);
        MessageStack stack;
        if (prev) {
          if (lm.cols() < 2) throw py::value_error("a previous column needs cols >= 2");
          const ColumnState p = to_column(*prev);
          stack = forward_messages(view, 1, &p);
        } else {
          stack = forward_messages(view, 0, nullptr);
        }
        return backward_sample(stack, view, rng).state.cells;
      },
      py::arg("model"), py::arg("prev") = py::none(), py::arg("seed") = 0,
      "One exact draw of a column given its left neighbour (or of the first column).");

  py::class_<CapacityEstimate>(m, "CapacityEstimate")
      .def_readonly("log2_Z", &CapacityEstimate::log2_Z)
      .def_readonly("capacity", &CapacityEstimate::capacity)
      .def_readonly("rows", &CapacityEstimate::rows)
      .def_readonly("cols", &CapacityEstimate::cols)
      .def_readonly("strip_width", &CapacityEstimate::strip_width)
      .def_readonly("n_particles", &CapacityEstimate::n_particles)
      .def_readonly("seed", &CapacityEstimate::seed)
      .def_readonly("wall_clock_seconds", &CapacityEstimate::wall_clock_seconds)
      .def("__repr__", [](const CapacityEstimate& e) {
        return "CapacityEstimate(capacity=" + format_double(e.capacity) + ", log2_Z=" + format_double(e.log2_Z) +
               ", N=" + std::to_string(e.n_particles) + ")";
      });

  m.def(
      "estimate",
      [](const LatticeModel& lm, std::size_t particles, std::uint64_t seed, unsigned strip_width,
         std::size_t threads) {
        return smc_run(StripView(lm, strip_width), particles, RngSpec{seed}, SmcOptions{threads, false});
      },
      py::arg("model"), py::arg("particles"), py::arg("seed") = 1, py::arg("strip_width") = 1,
      py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_bench",
      [](const LatticeModel& lm, std::vector<std::size_t> particles, std::size_t runs,
         std::vector<unsigned> strip_widths, const std::string& reference, std::uint64_t seed,
         std::size_t threads) {
        BenchConfig cfg;
        cfg.model.rows = lm.rows();
        cfg.model.cols = lm.cols();
        cfg.model.h_potential = lm.h_potential();
        cfg.model.v_potential = lm.v_potential();
        cfg.particles = std::move(particles);
        cfg.runs = runs;
        cfg.strip_widths = std::move(strip_widths);
        cfg.reference = parse_reference(reference);
        cfg.seed = seed;
        BenchResult result;
        {
          py::gil_scoped_release release;
          result = run_bench(cfg, threads);
        }
        return bench_to_dict(result);
      },
      py::arg("model"), py::arg("particles"), py::arg("runs") = 10, py::arg("strip_widths") = std::vector<unsigned>{1},
      py::arg("reference") = "oracle", py::arg("seed") = 1, py::arg("threads") = 1);
}
