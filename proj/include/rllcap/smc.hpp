#pragma once

// Fully adapted sequential Monte Carlo over the columns of a lattice.
//
// Particles are (super-)column states. At each step every particle gets the
// resampling weight nu = sum_x phi(x) psi(x, particle) from a forward pass,
// ancestors are drawn multinomially in proportion to nu, and each new particle is
// an exact draw from phi(x) psi(x, ancestor) / nu(ancestor). Post-step particles
// are equally weighted, and
//   log2 Z_hat += log2(sum_i 2^(log2 nu_i - c)) - log2 N + c,   c = max_i log2 nu_i
// gives an unbiased estimate of Z on the linear scale.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rllcap/model.hpp"
#include "rllcap/rng.hpp"

namespace rllcap {

/// All particles lost support (every resampling weight is zero).
class SupportCollapseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SmcOptions {
  /// Worker threads for the per-particle passes. Results do not depend on it.
  std::size_t threads = 1;
  /// Keep every particle's full path; only needed to audit sampled lattices.
  bool store_trajectories = false;
};

struct CapacityEstimate {
  double log2_Z = 0.0;
  double capacity = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  unsigned strip_width = 1;
  std::size_t n_particles = 0;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
};

/// log2_Z / (rows * cols), in bits per site.
double capacity_from_log2Z(double log2_Z, std::size_t rows, std::size_t cols);

class ParticleSystem {
 public:
  /// Particles at super-column `step` with the given states and accumulator.
  ParticleSystem(const StripView& view, std::size_t step, const std::vector<ColumnState>& states,
                 double log2_Z_hat);

  std::size_t n_particles() const { return n_; }
  std::size_t rows() const { return rows_; }
  /// Index of the latest super-column (0-based).
  std::size_t step() const { return step_; }
  unsigned width() const { return width_; }
  double log2_Z_hat() const { return log2_Z_hat_; }

  std::span<const std::uint32_t> cells(std::size_t i) const { return {cells_.data() + i * rows_, rows_}; }
  ColumnState state(std::size_t i) const;

  /// log2 nu of every particle from the most recent step (empty after init).
  const std::vector<double>& last_log2_weights() const { return last_log2_nu_; }
  /// Ancestor indices drawn in the most recent step (empty after init).
  const std::vector<std::size_t>& last_ancestors() const { return last_ancestors_; }

  bool has_trajectories() const { return !paths_.empty(); }
  /// Full path of particle i as width-1 columns, left to right.
  std::vector<ColumnState> trajectory(std::size_t i) const;

 private:
  ParticleSystem() = default;
  friend ParticleSystem smc_init(const StripView&, std::size_t, const RngSpec&, const SmcOptions&);
  friend void smc_step(ParticleSystem&, const StripView&, const RngSpec&, const SmcOptions&);

  std::size_t n_ = 0;
  std::size_t rows_ = 0;
  std::size_t step_ = 0;
  unsigned width_ = 1;
  double log2_Z_hat_ = 0.0;
  std::vector<std::uint32_t> cells_;  // n_ * rows_
  std::vector<double> last_log2_nu_;
  std::vector<std::size_t> last_ancestors_;
  // Per particle: the super-column states of steps 0..step_, each rows_ cells.
  std::vector<std::vector<std::uint32_t>> paths_;
  std::vector<unsigned> path_widths_;
};

/// N exact draws from the first super-column's distribution; log2_Z_hat is set to
/// the exact log2 Z_1 from the forward pass.
ParticleSystem smc_init(const StripView& view, std::size_t n_particles, const RngSpec& rng,
                        const SmcOptions& options = {});

/// Advances the system by one super-column.
void smc_step(ParticleSystem& system, const StripView& view, const RngSpec& rng,
              const SmcOptions& options = {});

/// init followed by steps over every super-column.
CapacityEstimate smc_run(const StripView& view, std::size_t n_particles, const RngSpec& rng,
                         const SmcOptions& options = {});

// Building blocks of the resampling step.

/// Largest finite entry; throws SupportCollapseError if none is finite.
double max_log2_weight(std::span<const double> log2_nu);

/// log2 of the mean of 2^log2_nu, computed as
/// log2(sum 2^(log2_nu - shift)) - log2 N + shift.
double log2_mean_weight(std::span<const double> log2_nu, double shift);

/// Normalized resampling probabilities from shifted weights 2^(log2_nu - shift).
std::vector<double> resampling_probabilities(std::span<const double> log2_nu, double shift);

/// N i.i.d. multinomial ancestor draws from nonnegative `weights` (need not be
/// normalized), returned in nondecreasing order. Uses N sorted uniforms generated
/// from exponential spacings and a single pass over the cumulative weights.
std::vector<std::size_t> draw_ancestors(std::span<const double> weights, std::size_t n, StreamRng& rng);

}  // namespace rllcap
