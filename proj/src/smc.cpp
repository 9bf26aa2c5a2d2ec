#include "rllcap/smc.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"
#include "rllcap/ffbs.hpp"

namespace rllcap {

namespace {

// Substream for the ancestor draws of a step; particle streams use indices < N.
constexpr std::uint64_t kAncestorStream = ~std::uint64_t{0};

}  // namespace

double capacity_from_log2Z(double log2_Z, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw ParameterError("capacity needs rows, cols >= 1");
  return log2_Z / (static_cast<double>(rows) * static_cast<double>(cols));
}

ParticleSystem::ParticleSystem(const StripView& view, std::size_t step,
                               const std::vector<ColumnState>& states, double log2_Z_hat)
    : n_(states.size()), rows_(view.rows()), step_(step), log2_Z_hat_(log2_Z_hat) {
  if (states.empty()) throw ParameterError("particle system needs at least one particle");
  if (step >= view.super_cols()) throw ParameterError("step beyond the last super-column");
  width_ = view.width_of(step);
  cells_.reserve(n_ * rows_);
  for (const auto& s : states) {
    if (s.rows() != rows_ || s.width != width_) throw DimensionError("particle state has the wrong shape");
    cells_.insert(cells_.end(), s.cells.begin(), s.cells.end());
  }
}

ColumnState ParticleSystem::state(std::size_t i) const {
  if (i >= n_) throw ParameterError("particle index out of range");
  const auto c = cells(i);
  return ColumnState{width_, {c.begin(), c.end()}};
}

std::vector<ColumnState> ParticleSystem::trajectory(std::size_t i) const {
  if (!has_trajectories()) throw std::logic_error("trajectory store is off");
  if (i >= n_) throw ParameterError("particle index out of range");
  std::vector<ColumnState> out;
  const auto& path = paths_[i];
  for (std::size_t t = 0; t < path_widths_.size(); ++t) {
    ColumnState s{path_widths_[t], {path.begin() + t * rows_, path.begin() + (t + 1) * rows_}};
    for (auto& col : StripView::split(s)) out.push_back(std::move(col));
  }
  return out;
}

double max_log2_weight(std::span<const double> log2_nu) {
  double c = -std::numeric_limits<double>::infinity();
  for (double l : log2_nu) {
    if (std::isnan(l)) throw std::domain_error("NaN resampling weight");
    if (l > c) c = l;
  }
  if (!std::isfinite(c)) {
    throw SupportCollapseError("every particle has zero resampling weight; the model admits no "
                               "continuation of the sampled columns");
  }
  return c;
}

double log2_mean_weight(std::span<const double> log2_nu, double shift) {
  double total = 0.0;
  for (double l : log2_nu) total += std::exp2(l - shift);
  return std::log2(total) - std::log2(static_cast<double>(log2_nu.size())) + shift;
}

std::vector<double> resampling_probabilities(std::span<const double> log2_nu, double shift) {
  std::vector<double> p(log2_nu.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += (p[i] = std::exp2(log2_nu[i] - shift));
  for (double& x : p) x /= total;
  return p;
}

std::vector<std::size_t> draw_ancestors(std::span<const double> weights, std::size_t n, StreamRng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw SupportCollapseError("ancestor weights sum to zero");

  // Sorted uniforms: normalized partial sums of n+1 standard exponentials.
  std::vector<double> u(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc -= std::log1p(-rng.uniform());
    u[i] = acc;
  }
  acc -= std::log1p(-rng.uniform());

  std::size_t last_positive = weights.size() - 1;
  while (weights[last_positive] <= 0.0) --last_positive;

  std::vector<std::size_t> out(n);
  std::size_t j = 0;
  double cum = weights[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double target = u[i] / acc * total;
    while (target >= cum && j < last_positive) cum += weights[++j];
    out[i] = j;
  }
  return out;
}

ParticleSystem smc_init(const StripView& view, std::size_t n_particles, const RngSpec& rng,
                        const SmcOptions& options) {
  if (n_particles == 0) throw ParameterError("need at least one particle");
  MessageStack stack;
  forward_messages(view, 0, {}, 0, stack);
  if (stack.zero_support) throw SupportCollapseError("the first column has no configuration of positive weight");

  ParticleSystem sys;
  sys.n_ = n_particles;
  sys.rows_ = view.rows();
  sys.step_ = 0;
  sys.width_ = view.width_of(0);
  sys.log2_Z_hat_ = resampling_weight(stack);
  sys.cells_.resize(n_particles * sys.rows_);
  detail::parallel_for(n_particles, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      StreamRng r(rng.seed, i, 0);
      backward_sample(stack, view, r, std::span<std::uint32_t>(sys.cells_.data() + i * sys.rows_, sys.rows_));
    }
  });
  if (options.store_trajectories) {
    sys.path_widths_.push_back(sys.width_);
    sys.paths_.resize(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) {
      sys.paths_[i].assign(sys.cells_.begin() + i * sys.rows_, sys.cells_.begin() + (i + 1) * sys.rows_);
    }
  }
  return sys;
}

void smc_step(ParticleSystem& sys, const StripView& view, const RngSpec& rng, const SmcOptions& options) {
  const std::size_t t = sys.step_ + 1;
  if (t >= view.super_cols()) throw ParameterError("no super-column left to add");
  if (view.rows() != sys.rows_ || view.width_of(sys.step_) != sys.width_) {
    throw DimensionError("particle system does not match the view");
  }
  const std::size_t N = sys.n_, M = sys.rows_;
  const unsigned prev_width = sys.width_;

  std::vector<double> log2_nu(N);
  detail::parallel_for(N, options.threads, [&](std::size_t begin, std::size_t end) {
    MessageStack stack;
    for (std::size_t i = begin; i < end; ++i) {
      forward_messages(view, t, sys.cells(i), prev_width, stack);
      log2_nu[i] = resampling_weight(stack);
    }
  });

  const double c = max_log2_weight(log2_nu);
  std::vector<double> shifted(N);
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i) total += (shifted[i] = std::exp2(log2_nu[i] - c));

  StreamRng anc_rng(rng.seed, kAncestorStream, t);
  auto ancestors = draw_ancestors(shifted, N, anc_rng);

  std::vector<std::uint32_t> next(N * M);
  detail::parallel_for(N, options.threads, [&](std::size_t begin, std::size_t end) {
    MessageStack stack;
    std::size_t cached = N;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t a = ancestors[i];
      // Ancestors are sorted, so each distinct one is filtered once per chunk.
      if (a != cached) {
        forward_messages(view, t, sys.cells(a), prev_width, stack);
        cached = a;
      }
      StreamRng r(rng.seed, i, t);
      backward_sample(stack, view, r, std::span<std::uint32_t>(next.data() + i * M, M));
    }
  });

  if (sys.has_trajectories()) {
    std::vector<std::vector<std::uint32_t>> paths(N);
    for (std::size_t i = 0; i < N; ++i) {
      paths[i] = sys.paths_[ancestors[i]];
      paths[i].insert(paths[i].end(), next.begin() + i * M, next.begin() + (i + 1) * M);
    }
    sys.paths_.swap(paths);
    sys.path_widths_.push_back(view.width_of(t));
  }

  sys.log2_Z_hat_ += std::log2(total) - std::log2(static_cast<double>(N)) + c;
  sys.cells_.swap(next);
  sys.step_ = t;
  sys.width_ = view.width_of(t);
  sys.last_log2_nu_ = std::move(log2_nu);
  sys.last_ancestors_ = std::move(ancestors);
}

CapacityEstimate smc_run(const StripView& view, std::size_t n_particles, const RngSpec& rng,
                         const SmcOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  auto sys = smc_init(view, n_particles, rng, options);
  while (sys.step() + 1 < view.super_cols()) smc_step(sys, view, rng, options);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  CapacityEstimate est;
  est.log2_Z = sys.log2_Z_hat();
  est.rows = view.base().rows();
  est.cols = view.base().cols();
  est.capacity = capacity_from_log2Z(est.log2_Z, est.rows, est.cols);
  est.strip_width = view.width();
  est.n_particles = n_particles;
  est.seed = rng.seed;
  est.wall_clock_seconds = elapsed.count();
  return est;
}

}  // namespace rllcap
