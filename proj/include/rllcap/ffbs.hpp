#pragma once

// Exact inference on one super-column conditioned on its left neighbour:
// normalized forward messages down the rows, the conditional normalizer
//   nu(prev) = sum_x phi(x) psi(x, prev)
// as a byproduct, and backward sampling of x from phi(x) psi(x, prev) / nu(prev).
//
// Super-column indices are 0-based. Super-column 0 has no left neighbour.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rllcap/model.hpp"
#include "rllcap/rng.hpp"

namespace rllcap {

/// Forward messages for one (super-)column pass.
///
/// mu row j is the normalized message arriving at row j from the rows above it
/// (row 0 receives the uniform message). log2_c[j] is the log2 normalizer of the
/// message into row j; log2_c[0] = log2(n_states) normalizes the all-ones message
/// at the top. `unary` caches the per-row local weight (inner strip potentials times
/// the horizontal potential to the previous column) so that backward sampling needs
/// only the view's vertical coupling.
struct MessageStack {
  std::size_t column = 0;
  std::size_t rows = 0;
  std::uint32_t n_states = 2;
  unsigned width = 1;
  std::vector<double> mu;     // rows * n_states
  std::vector<double> unary;  // rows * n_states
  std::vector<double> log2_c;
  double log2_terminal = 0.0;
  bool zero_support = false;

  std::span<const double> mu_row(std::size_t j) const {
    return {mu.data() + j * n_states, n_states};
  }
  std::span<const double> unary_row(std::size_t j) const {
    return {unary.data() + j * n_states, n_states};
  }
};

/// Runs the forward pass for super-column t. `prev` must be null iff t == 0.
MessageStack forward_messages(const StripView& view, std::size_t t, const ColumnState* prev);

/// Allocation-free variant used by the sampler; `prev_cells` is empty iff t == 0 and
/// `prev_width` is the width of super-column t-1.
void forward_messages(const StripView& view, std::size_t t, std::span<const std::uint32_t> prev_cells,
                      unsigned prev_width, MessageStack& out);

/// log2 nu: sum of log2_c plus log2 of the terminal sum. -inf when the conditioning
/// column admits no valid extension.
double resampling_weight(const MessageStack& stack);

struct ProposalDraw {
  ColumnState state;
  /// log2 nu of the conditioning column; the draw itself carries no weight.
  double log2_weight_contribution = 0.0;
};

/// One exact draw from the optimal proposal, sampled bottom row first.
ProposalDraw backward_sample(const MessageStack& stack, const StripView& view, StreamRng& rng);

/// Allocation-free variant writing row states into `out` (size stack.rows).
void backward_sample(const MessageStack& stack, const StripView& view, StreamRng& rng,
                     std::span<std::uint32_t> out);

/// Conditional distribution of row j given the sampled state of row j+1 (`below`,
/// absent for the bottom row), normalized to sum to 1.
std::vector<double> row_conditional(const MessageStack& stack, const StripView& view, std::size_t row,
                                    std::optional<std::uint32_t> below);

/// Inverse-CDF draw from unnormalized nonnegative weights with a single uniform.
std::size_t sample_categorical(std::span<const double> weights, double total, double u);

}  // namespace rllcap
