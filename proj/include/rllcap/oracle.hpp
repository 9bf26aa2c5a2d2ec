#pragma once

// Exact partition functions. Used as ground truth for every statistical check.
//
//  - brute:    direct sum over all 2^(rows*cols) configurations (rows*cols <= 24).
//  - transfer: site-by-site transfer matrix sweep over the columns, working in the
//              log domain with per-column renormalization. When both potentials
//              forbid adjacent 1s the frontier is restricted to strings without
//              adjacent 1s (min(rows, cols) <= 33); otherwise the full 2^rows basis
//              is used (min(rows, cols) <= 20).

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rllcap/model.hpp"

namespace rllcap {

/// Raised when a problem exceeds an exact method's size limit. The message states
/// the limit.
class CapacityLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExactMethod { automatic, transfer, brute };

inline constexpr std::size_t kBruteMaxSites = 24;
inline constexpr std::size_t kTransferMaxRowsGeneral = 20;
inline constexpr std::size_t kTransferMaxRowsHardCore = 33;
inline constexpr std::size_t kConditionalMaxRows = 20;

/// Method `automatic` picks for this model: transfer when it fits, else brute force.
/// Throws CapacityLimitError when neither fits.
ExactMethod resolve_method(const LatticeModel& model);

double exact_log2_Z(const LatticeModel& model, ExactMethod method = ExactMethod::automatic);
double exact_capacity(const LatticeModel& model, ExactMethod method = ExactMethod::automatic);

/// Number of length-M binary strings without two adjacent 1s: F(M+2).
std::uint64_t valid_column_count(std::size_t rows);

/// Brute-force sum over all width-1 columns x of phi(x) * psi(x, prev).
double conditional_normalizer(const LatticeModel& model, const ColumnState& prev);

/// Column-to-column transfer operator. Its states are all width-1 columns with
/// phi > 0 (for the RLL model, the F(M+2) strings without "11"); weight(s, s') is
/// phi(s') * psi(s', s).
class TransferOperator {
 public:
  static constexpr std::size_t kMaxRows = 16;

  explicit TransferOperator(const LatticeModel& model);

  const std::vector<std::uint32_t>& states() const { return states_; }
  double weight(std::size_t from, std::size_t to) const;
  /// Initial vector: phi(s) for every state.
  std::vector<double> initial() const;
  /// out[s'] = sum_s in[s] * weight(s, s').
  std::vector<double> apply(const std::vector<double>& in) const;
  /// log2 Z from K-1 applications to the initial vector, renormalizing each time.
  double log2_Z() const;

 private:
  LatticeModel model_;
  std::vector<std::uint32_t> states_;
  std::vector<double> phi_;
};

}  // namespace rllcap
