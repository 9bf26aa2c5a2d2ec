#include "rllcap/model.hpp"

#include <cmath>

namespace rllcap {

PairwisePotential::PairwisePotential(double w00, double w01, double w10, double w11)
    : table_{w00, w01, w10, w11} {
  bool any_positive = false;
  for (double w : table_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ParameterError("potential weights must be finite and nonnegative");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw ParameterError("potential has no positive weight");
}

bool PairwisePotential::is_rll() const {
  return table_[0] == 1.0 && table_[1] == 1.0 && table_[2] == 1.0 && table_[3] == 0.0;
}

PairwisePotential rll_potential() { return PairwisePotential(1.0, 1.0, 1.0, 0.0); }

ColumnState ColumnState::from_string(const std::string& bits) {
  ColumnState s;
  s.cells.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParameterError("column string must contain only 0 and 1");
    s.cells.push_back(c == '1' ? 1u : 0u);
  }
  return s;
}

std::string ColumnState::to_string() const {
  std::string out;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) out += width > 1 ? "," : "";
    if (width == 1) {
      out += cells[j] ? '1' : '0';
    } else {
      for (unsigned c = 0; c < width; ++c) out += bit(j, c) ? '1' : '0';
    }
  }
  return out;
}

LatticeModel::LatticeModel(std::size_t rows, std::size_t cols, PairwisePotential h_potential,
                           PairwisePotential v_potential)
    : rows_(rows), cols_(cols), h_(h_potential), v_(v_potential) {
  if (rows == 0 || cols == 0) throw ParameterError("lattice needs rows >= 1 and cols >= 1");
}

LatticeModel LatticeModel::rll(std::size_t rows, std::size_t cols) {
  return LatticeModel(rows, cols, rll_potential(), rll_potential());
}

namespace {

void check_column(const LatticeModel& model, const ColumnState& s, const char* what) {
  if (s.width != 1 || s.rows() != model.rows()) {
    throw DimensionError(std::string(what) + ": expected a width-1 column of " +
                         std::to_string(model.rows()) + " rows, got " + std::to_string(s.rows()) +
                         " rows of width " + std::to_string(s.width));
  }
}

StripFactors make_factors(const LatticeModel& model, unsigned width) {
  StripFactors f;
  f.width = width;
  f.n_states = 1u << width;
  const auto& h = model.h_potential();
  const auto& v = model.v_potential();
  f.inner.assign(f.n_states, 1.0);
  f.entry.assign(static_cast<std::size_t>(f.n_states) * 2, 0.0);
  f.vertical.assign(static_cast<std::size_t>(f.n_states) * f.n_states, 1.0);
  for (std::uint32_t s = 0; s < f.n_states; ++s) {
    for (unsigned c = 0; c + 1 < width; ++c) f.inner[s] *= h((s >> (c + 1)) & 1u, (s >> c) & 1u);
    f.entry[s * 2 + 0] = h(s & 1u, 0);
    f.entry[s * 2 + 1] = h(s & 1u, 1);
    for (std::uint32_t up = 0; up < f.n_states; ++up) {
      double w = 1.0;
      for (unsigned c = 0; c < width; ++c) w *= v((s >> c) & 1u, (up >> c) & 1u);
      f.vertical[static_cast<std::size_t>(s) * f.n_states + up] = w;
    }
  }
  return f;
}

}  // namespace

double column_phi(const LatticeModel& model, const ColumnState& state) {
  check_column(model, state, "column_phi");
  double w = 1.0;
  for (std::size_t j = 0; j + 1 < state.rows(); ++j) {
    w *= model.v_potential()(state.cells[j + 1], state.cells[j]);
  }
  return w;
}

double between_psi(const LatticeModel& model, const ColumnState& state, const ColumnState& prev) {
  check_column(model, state, "between_psi");
  check_column(model, prev, "between_psi (prev)");
  double w = 1.0;
  for (std::size_t j = 0; j < state.rows(); ++j) {
    w *= model.h_potential()(state.cells[j], prev.cells[j]);
  }
  return w;
}

StripView::StripView(LatticeModel model, unsigned width) : model_(std::move(model)), width_(width) {
  if (width < 1 || width > model_.cols()) {
    throw ParameterError("strip width must satisfy 1 <= W <= cols (W=" + std::to_string(width) +
                         ", cols=" + std::to_string(model_.cols()) + ")");
  }
  if (width > kMaxWidth) {
    throw ParameterError("strip width above " + std::to_string(kMaxWidth) + " is not supported");
  }
  const std::size_t full = model_.cols() / width;
  const auto rest = static_cast<unsigned>(model_.cols() % width);
  widths_.assign(full, width);
  if (rest) widths_.push_back(rest);
  full_ = make_factors(model_, width);
  if (rest) last_ = make_factors(model_, rest);
}

const StripFactors& StripView::factors(std::size_t t) const {
  return width_of(t) == width_ ? full_ : last_;
}

void StripView::check_state(std::size_t t, const ColumnState& state) const {
  if (state.rows() != rows() || state.width != width_of(t)) {
    throw DimensionError("super-column " + std::to_string(t) + " expects " +
                         std::to_string(rows()) + " rows of width " +
                         std::to_string(width_of(t)));
  }
}

double StripView::phi(std::size_t t, const ColumnState& state) const {
  check_state(t, state);
  const auto& f = factors(t);
  double w = 1.0;
  for (std::size_t j = 0; j < state.rows(); ++j) {
    w *= f.inner[state.cells[j]];
    if (j + 1 < state.rows()) w *= f.vert(state.cells[j + 1], state.cells[j]);
  }
  return w;
}

double StripView::psi(std::size_t t, const ColumnState& state, const ColumnState& prev) const {
  if (t == 0) throw ParameterError("super-column 0 has no left neighbour");
  check_state(t, state);
  check_state(t - 1, prev);
  const auto& f = factors(t);
  const unsigned last = prev.width - 1;
  double w = 1.0;
  for (std::size_t j = 0; j < state.rows(); ++j) w *= f.enter(state.cells[j], prev.bit(j, last));
  return w;
}

std::vector<ColumnState> StripView::split(const ColumnState& state) {
  std::vector<ColumnState> cols(state.width);
  for (unsigned c = 0; c < state.width; ++c) {
    cols[c].cells.resize(state.rows());
    for (std::size_t j = 0; j < state.rows(); ++j) cols[c].cells[j] = state.bit(j, c);
  }
  return cols;
}

StripView strip_view(const LatticeModel& model, unsigned width) { return StripView(model, width); }

std::size_t count_rll_violations(const std::vector<ColumnState>& columns) {
  std::size_t bad = 0;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto& col = columns[k].cells;
    for (std::size_t j = 0; j + 1 < col.size(); ++j) bad += (col[j] & col[j + 1] & 1u);
    if (k > 0) {
      const auto& left = columns[k - 1].cells;
      for (std::size_t j = 0; j < col.size() && j < left.size(); ++j) bad += (col[j] & left[j] & 1u);
    }
  }
  return bad;
}

}  // namespace rllcap
