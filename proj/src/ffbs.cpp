#include "rllcap/ffbs.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rllcap {

void forward_messages(const StripView& view, std::size_t t, std::span<const std::uint32_t> prev_cells,
                      unsigned prev_width, MessageStack& out) {
  if (t >= view.super_cols()) {
    throw ParameterError("super-column index " + std::to_string(t) + " out of range");
  }
  const std::size_t rows = view.rows();
  if (t == 0 && !prev_cells.empty()) throw ParameterError("super-column 0 takes no previous column");
  if (t > 0 && (prev_cells.size() != rows || prev_width != view.width_of(t - 1))) {
    throw DimensionError("previous column must have " + std::to_string(rows) + " rows of width " +
                         std::to_string(view.width_of(t - 1)));
  }

  const StripFactors& f = view.factors(t);
  const std::uint32_t S = f.n_states;
  out.column = t;
  out.rows = rows;
  out.n_states = S;
  out.width = f.width;
  out.mu.resize(rows * S);
  out.unary.resize(rows * S);
  out.log2_c.resize(rows);
  out.zero_support = false;

  const unsigned last = prev_width ? prev_width - 1 : 0;
  for (std::size_t j = 0; j < rows; ++j) {
    double* u = out.unary.data() + j * S;
    if (t == 0) {
      for (std::uint32_t s = 0; s < S; ++s) u[s] = f.inner[s];
    } else {
      const unsigned pb = (prev_cells[j] >> last) & 1u;
      for (std::uint32_t s = 0; s < S; ++s) u[s] = f.inner[s] * f.enter(s, pb);
    }
  }

  double* mu0 = out.mu.data();
  for (std::uint32_t s = 0; s < S; ++s) mu0[s] = 1.0 / S;
  out.log2_c[0] = std::log2(static_cast<double>(S));

  for (std::size_t j = 0; j + 1 < rows; ++j) {
    const double* mu = out.mu.data() + j * S;
    const double* u = out.unary.data() + j * S;
    double* next = out.mu.data() + (j + 1) * S;
    double c = 0.0;
    for (std::uint32_t lo = 0; lo < S; ++lo) {
      const double* vrow = f.vertical.data() + static_cast<std::size_t>(lo) * S;
      double acc = 0.0;
      for (std::uint32_t up = 0; up < S; ++up) acc += vrow[up] * u[up] * mu[up];
      next[lo] = acc;
      c += acc;
    }
    if (!(c > 0.0)) {
      out.zero_support = true;
      out.log2_c[j + 1] = -std::numeric_limits<double>::infinity();
      out.log2_terminal = -std::numeric_limits<double>::infinity();
      return;
    }
    for (std::uint32_t s = 0; s < S; ++s) next[s] /= c;
    out.log2_c[j + 1] = std::log2(c);
  }

  const double* mu = out.mu.data() + (rows - 1) * S;
  const double* u = out.unary.data() + (rows - 1) * S;
  double terminal = 0.0;
  for (std::uint32_t s = 0; s < S; ++s) terminal += u[s] * mu[s];
  if (!(terminal > 0.0)) {
    out.zero_support = true;
    out.log2_terminal = -std::numeric_limits<double>::infinity();
    return;
  }
  out.log2_terminal = std::log2(terminal);
}

MessageStack forward_messages(const StripView& view, std::size_t t, const ColumnState* prev) {
  if ((t == 0) != (prev == nullptr)) {
    throw ParameterError("a previous column is required exactly when t > 0");
  }
  MessageStack out;
  if (prev) {
    forward_messages(view, t, prev->cells, prev->width, out);
  } else {
    forward_messages(view, t, {}, 0, out);
  }
  return out;
}

double resampling_weight(const MessageStack& stack) {
  if (stack.zero_support) return -std::numeric_limits<double>::infinity();
  double total = stack.log2_terminal;
  for (double lc : stack.log2_c) total += lc;
  return total;
}

std::size_t sample_categorical(std::span<const double> weights, double total, double u) {
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  // Rounding can leave target just above the accumulated sum.
  if (last_positive == weights.size()) throw std::logic_error("categorical with no positive weight");
  return last_positive;
}

namespace {

// Unnormalized weights of row j's conditional into `w`; returns their sum.
double conditional_weights(const MessageStack& stack, const StripFactors& f, std::size_t row,
                           std::optional<std::uint32_t> below, double* w) {
  const std::uint32_t S = stack.n_states;
  const double* mu = stack.mu.data() + row * S;
  const double* u = stack.unary.data() + row * S;
  double total = 0.0;
  if (below) {
    const double* vrow = f.vertical.data() + static_cast<std::size_t>(*below) * S;
    for (std::uint32_t s = 0; s < S; ++s) total += (w[s] = vrow[s] * u[s] * mu[s]);
  } else {
    for (std::uint32_t s = 0; s < S; ++s) total += (w[s] = u[s] * mu[s]);
  }
  return total;
}

const StripFactors& factors_for(const MessageStack& stack, const StripView& view) {
  if (stack.zero_support) throw std::domain_error("cannot sample: column has zero conditional support");
  if (stack.column >= view.super_cols() || stack.rows != view.rows() ||
      stack.width != view.width_of(stack.column)) {
    throw DimensionError("message stack does not belong to this view");
  }
  return view.factors(stack.column);
}

}  // namespace

std::vector<double> row_conditional(const MessageStack& stack, const StripView& view, std::size_t row,
                                    std::optional<std::uint32_t> below) {
  const StripFactors& f = factors_for(stack, view);
  if (row >= stack.rows) throw DimensionError("row out of range");
  std::vector<double> w(stack.n_states);
  const double total = conditional_weights(stack, f, row, below, w.data());
  if (!(total > 0.0)) throw std::domain_error("row conditional has no support");
  for (double& x : w) x /= total;
  return w;
}

void backward_sample(const MessageStack& stack, const StripView& view, StreamRng& rng,
                     std::span<std::uint32_t> out) {
  const StripFactors& f = factors_for(stack, view);
  if (out.size() != stack.rows) throw DimensionError("output span must have one entry per row");
  double w[1u << StripView::kMaxWidth];
  const std::span<const double> ws(w, stack.n_states);
  std::optional<std::uint32_t> below;
  for (std::size_t j = stack.rows; j-- > 0;) {
    const double total = conditional_weights(stack, f, j, below, w);
    // Positive by construction when the forward pass found support.
    assert(total > 0.0);
    out[j] = static_cast<std::uint32_t>(sample_categorical(ws, total, rng.uniform()));
    below = out[j];
  }
}

ProposalDraw backward_sample(const MessageStack& stack, const StripView& view, StreamRng& rng) {
  ProposalDraw draw;
  draw.state.width = stack.width;
  draw.state.cells.resize(stack.rows);
  backward_sample(stack, view, rng, draw.state.cells);
  draw.log2_weight_contribution = resampling_weight(stack);
  return draw;
}

}  // namespace rllcap
