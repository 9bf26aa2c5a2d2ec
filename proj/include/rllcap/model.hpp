#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rllcap {

/// Thrown when a state or message has the wrong length for the model.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown for out-of-range construction parameters (sizes, strip widths, weights).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2x2 table of nonnegative weights for one lattice edge; entry (a, b) is psi(a, b).
///
/// Argument order follows the chain factorization: for a vertical edge `a` is the
/// lower cell (row j+1) and `b` the upper cell (row j); for a horizontal edge `a`
/// is the right cell (column k) and `b` the left cell (column k-1).
class PairwisePotential {
 public:
  /// Builds a table from w00, w01, w10, w11. Throws ParameterError if any weight is
  /// negative or non-finite, or if all four are zero.
  PairwisePotential(double w00, double w01, double w10, double w11);

  double operator()(unsigned a, unsigned b) const { return table_[(a & 1u) * 2 + (b & 1u)]; }
  double at(unsigned a, unsigned b) const { return (*this)(a, b); }

  const std::array<double, 4>& weights() const { return table_; }

  /// True when psi(1,1) = 0, i.e. two adjacent 1s are forbidden.
  bool forbids_adjacent_ones() const { return table_[3] == 0.0; }
  /// True for the 0/1 table of the (1,inf) run-length-limited constraint.
  bool is_rll() const;

  bool operator==(const PairwisePotential&) const = default;

 private:
  std::array<double, 4> table_;
};

/// The (1,inf) RLL potential: [[1,1],[1,0]].
PairwisePotential rll_potential();

/// One (super-)column of the lattice. `cells[j]` is the state of row j; for width-1
/// columns that is the bit itself, for a strip of width W bit c of `cells[j]` is the
/// value of the c-th column in the strip.
struct ColumnState {
  unsigned width = 1;
  std::vector<std::uint32_t> cells;

  std::size_t rows() const { return cells.size(); }
  unsigned bit(std::size_t row, unsigned col) const { return (cells[row] >> col) & 1u; }

  /// Width-1 column from a bit string like "0101" (row 0 first).
  static ColumnState from_string(const std::string& bits);
  std::string to_string() const;

  bool operator==(const ColumnState&) const = default;
};

/// M x K binary lattice with one potential for all horizontal edges and one for all
/// vertical edges.
class LatticeModel {
 public:
  LatticeModel(std::size_t rows, std::size_t cols, PairwisePotential h_potential,
               PairwisePotential v_potential);

  /// RLL lattice of the given size.
  static LatticeModel rll(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t sites() const { return rows_ * cols_; }
  const PairwisePotential& h_potential() const { return h_; }
  const PairwisePotential& v_potential() const { return v_; }
  bool is_rll() const { return h_.is_rll() && v_.is_rll(); }

  /// Same lattice with rows and columns exchanged. Vertical edges become horizontal
  /// ones, so the potentials swap roles; the partition function is unchanged.
  LatticeModel transposed() const { return LatticeModel(cols_, rows_, v_, h_); }

  bool operator==(const LatticeModel&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  PairwisePotential h_;
  PairwisePotential v_;
};

/// Product of vertical potentials down a width-1 column.
double column_phi(const LatticeModel& model, const ColumnState& state);

/// Product of horizontal potentials between aligned rows of `state` and the column
/// to its left, `prev`.
double between_psi(const LatticeModel& model, const ColumnState& state, const ColumnState& prev);

/// Factor tables for one super-column width. Row super-nodes have 2^width states.
struct StripFactors {
  unsigned width = 1;
  std::uint32_t n_states = 2;
  /// Horizontal potentials internal to one strip-row: prod_c h(bit c+1, bit c).
  std::vector<double> inner;
  /// Vertical coupling between consecutive row super-nodes, indexed
  /// [lower * n_states + upper]: prod_c v(lower bit c, upper bit c).
  std::vector<double> vertical;
  /// Horizontal potential from the previous strip's last column into the first
  /// column of this strip, indexed [state * 2 + prev_bit].
  std::vector<double> entry;

  double vert(std::uint32_t lower, std::uint32_t upper) const {
    return vertical[static_cast<std::size_t>(lower) * n_states + upper];
  }
  double enter(std::uint32_t state, unsigned prev_bit) const {
    return entry[static_cast<std::size_t>(state) * 2 + prev_bit];
  }
};

/// Groups every `width` consecutive columns of a model into one super-column; the
/// sampler then advances one super-column per step. The last super-column is
/// narrower when cols is not a multiple of width.
///
/// Every original edge is counted once: vertical edges inside a strip live in
/// `StripFactors::vertical`, horizontal edges inside a strip-row in
/// `StripFactors::inner`, and horizontal edges crossing into the strip from the left
/// in `StripFactors::entry`.
class StripView {
 public:
  static constexpr unsigned kMaxWidth = 12;

  StripView(LatticeModel model, unsigned width);
  /// Width-1 view of the model.
  explicit StripView(LatticeModel model) : StripView(std::move(model), 1) {}

  const LatticeModel& base() const { return model_; }
  unsigned width() const { return width_; }
  std::size_t rows() const { return model_.rows(); }
  std::size_t super_cols() const { return widths_.size(); }
  /// Width of super-column t (0-based).
  unsigned width_of(std::size_t t) const { return widths_.at(t); }
  /// First original column covered by super-column t.
  std::size_t first_col(std::size_t t) const { return t * width_; }
  const StripFactors& factors(std::size_t t) const;

  /// In-strip weight: inner horizontal and vertical potentials of super-column t.
  double phi(std::size_t t, const ColumnState& state) const;
  /// Weight of the horizontal edges between `prev` (super-column t-1) and `state`.
  double psi(std::size_t t, const ColumnState& state, const ColumnState& prev) const;

  /// Splits a super-column state into its width-1 columns, left to right.
  static std::vector<ColumnState> split(const ColumnState& state);

 private:
  void check_state(std::size_t t, const ColumnState& state) const;

  LatticeModel model_;
  unsigned width_;
  std::vector<unsigned> widths_;
  StripFactors full_;
  StripFactors last_;
};

/// Validates 1 <= width <= cols and returns the strip view.
StripView strip_view(const LatticeModel& model, unsigned width);

/// Number of RLL violations (adjacent 1s, either orientation) in a lattice given as
/// its width-1 columns, left to right.
std::size_t count_rll_violations(const std::vector<ColumnState>& columns);

}  // namespace rllcap
