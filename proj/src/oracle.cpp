#include "rllcap/oracle.hpp"

#include <cmath>
#include <string>

namespace rllcap {

namespace {

// Counts of strings without adjacent 1s: fib_count(n) = F(n+2).
std::vector<std::uint64_t> fib_counts(std::size_t max_len) {
  std::vector<std::uint64_t> f(max_len + 2);
  f[0] = 1;
  f[1] = 2;
  for (std::size_t n = 2; n < f.size(); ++n) f[n] = f[n - 1] + f[n - 2];
  return f;
}

double brute_log2_Z(const LatticeModel& model) {
  const std::size_t M = model.rows(), K = model.cols(), n = M * K;
  if (n > kBruteMaxSites) {
    throw CapacityLimitError("brute-force enumeration is limited to rows*cols <= " +
                             std::to_string(kBruteMaxSites) + " (got " + std::to_string(n) + ")");
  }
  const auto& h = model.h_potential();
  const auto& v = model.v_potential();
  // Site (j, k) is bit k*M + j.
  double Z = 0.0;
  for (std::uint64_t cfg = 0; cfg < (std::uint64_t{1} << n); ++cfg) {
    double w = 1.0;
    for (std::size_t k = 0; k < K && w != 0.0; ++k) {
      for (std::size_t j = 0; j < M; ++j) {
        const unsigned x = (cfg >> (k * M + j)) & 1u;
        if (j > 0) w *= v(x, (cfg >> (k * M + j - 1)) & 1u);
        if (k > 0) w *= h(x, (cfg >> ((k - 1) * M + j)) & 1u);
      }
    }
    Z += w;
  }
  return std::log2(Z);
}

// Frontier over the full 2^M basis. Bit j of a profile holds row j of the current
// column for rows already swept, of the previous column otherwise.
double transfer_general(const LatticeModel& model) {
  const std::size_t M = model.rows(), K = model.cols();
  if (M > kTransferMaxRowsGeneral) {
    throw CapacityLimitError("transfer matrix with general potentials is limited to min(rows, cols) <= " +
                             std::to_string(kTransferMaxRowsGeneral));
  }
  const auto& h = model.h_potential();
  const auto& v = model.v_potential();
  std::vector<double> vec(std::size_t{1} << M, 0.0);
  vec[0] = 1.0;
  double log2_scale = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < M; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      for (std::uint64_t p = 0; p < vec.size(); ++p) {
        if (p & bit) continue;
        const double old0 = vec[p], old1 = vec[p | bit];
        for (unsigned b = 0; b < 2; ++b) {
          double w0 = k > 0 ? h(b, 0) : 1.0;
          double w1 = k > 0 ? h(b, 1) : 1.0;
          if (j > 0) {
            const double vf = v(b, (p >> (j - 1)) & 1u);
            w0 *= vf;
            w1 *= vf;
          }
          (b ? vec[p | bit] : vec[p]) = w0 * old0 + w1 * old1;
        }
      }
    }
    double total = 0.0;
    for (double x : vec) total += x;
    if (!(total > 0.0)) return -INFINITY;
    for (double& x : vec) x /= total;
    log2_scale += std::log2(total);
  }
  return log2_scale;
}

// Frontier restricted to strings without adjacent 1s. At break j (rows < j already
// in the current column) a profile is (U, E): U holds rows 0..j-1 with row i at
// position i, E holds rows M-1..j with row M-1-i at position i. A string s has rank
// sum_{s_i = 1} f(i) among the valid strings of its length, so appending row j to U
// adds b*f(j) and dropping row j from E subtracts a*f(M-j-1).
double transfer_hard_core(const LatticeModel& model) {
  const std::size_t M = model.rows(), K = model.cols();
  if (M > kTransferMaxRowsHardCore) {
    throw CapacityLimitError("transfer matrix is limited to min(rows, cols) <= " +
                             std::to_string(kTransferMaxRowsHardCore));
  }
  const auto f = fib_counts(M);
  const auto& h = model.h_potential();
  const auto& v = model.v_potential();

  // Re-indexing a finished column (all rows in U) as the next column's E.
  std::vector<std::size_t> u_to_e(f[M]);
  {
    // Valid strings of length n: those of length n-1, plus those of length n-2
    // with bit n-1 set.
    std::vector<std::uint64_t> shorter{0}, masks{0, 1};
    for (std::size_t n = 2; n <= M; ++n) {
      std::vector<std::uint64_t> longer = masks;
      for (std::uint64_t s : shorter) longer.push_back(s | (std::uint64_t{1} << (n - 1)));
      shorter.swap(masks);
      masks.swap(longer);
    }
    for (std::uint64_t s : masks) {
      std::size_t ru = 0, re = 0;
      for (std::size_t r = 0; r < M; ++r) {
        if ((s >> r) & 1u) {
          ru += f[r];
          re += f[M - 1 - r];
        }
      }
      u_to_e[ru] = re;
    }
  }

  std::vector<double> cur(f[M], 0.0), next;
  cur[0] = 1.0;  // Column -1 is all zeros.
  double log2_scale = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    // Profile at break 0: U empty, index = e.
    {
      std::vector<double> e_vec(f[M], 0.0);
      for (std::size_t ru = 0; ru < f[M]; ++ru) e_vec[u_to_e[ru]] = cur[ru];
      cur.swap(e_vec);
    }
    for (std::size_t j = 0; j < M; ++j) {
      const std::size_t L = M - j;  // length of E before the step
      const std::size_t fu = f[j], fu_next = f[j + 1];
      const std::size_t e_top = f[L - 1];
      next.assign(fu_next * f[L - 1], 0.0);
      for (std::size_t e = 0; e < f[L]; ++e) {
        const unsigned a = e >= e_top ? 1u : 0u;
        const std::size_t e_next = e - a * e_top;
        for (std::size_t u = 0; u < fu; ++u) {
          const double val = cur[e * fu + u];
          if (val == 0.0) continue;
          const unsigned above = (j > 0 && u >= f[j - 1]) ? 1u : 0u;
          for (unsigned b = 0; b < 2; ++b) {
            if (b && above) continue;  // not a valid U string
            double w = k > 0 ? h(b, a) : (a ? 0.0 : 1.0);
            if (j > 0) w *= v(b, above);
            if (w == 0.0) continue;
            next[e_next * fu_next + u + b * f[j]] += w * val;
          }
        }
      }
      cur.swap(next);
    }
    double total = 0.0;
    for (double x : cur) total += x;
    if (!(total > 0.0)) return -INFINITY;
    for (double& x : cur) x /= total;
    log2_scale += std::log2(total);
  }
  return log2_scale;
}

double transfer_log2_Z(const LatticeModel& model) {
  // Sweep along the longer dimension.
  const LatticeModel m = model.rows() > model.cols() ? model.transposed() : model;
  const bool hard_core = m.h_potential().forbids_adjacent_ones() && m.v_potential().forbids_adjacent_ones();
  return hard_core ? transfer_hard_core(m) : transfer_general(m);
}

bool transfer_fits(const LatticeModel& model) {
  const std::size_t m = std::min(model.rows(), model.cols());
  const bool hard_core =
      model.h_potential().forbids_adjacent_ones() && model.v_potential().forbids_adjacent_ones();
  return m <= (hard_core ? kTransferMaxRowsHardCore : kTransferMaxRowsGeneral);
}

}  // namespace

ExactMethod resolve_method(const LatticeModel& model) {
  if (transfer_fits(model)) return ExactMethod::transfer;
  if (model.sites() <= kBruteMaxSites) return ExactMethod::brute;
  throw CapacityLimitError("lattice too large for exact computation: need min(rows, cols) <= " +
                           std::to_string(kTransferMaxRowsHardCore) + " (RLL-type potentials) or <= " +
                           std::to_string(kTransferMaxRowsGeneral) + " (general potentials)");
}

double exact_log2_Z(const LatticeModel& model, ExactMethod method) {
  if (method == ExactMethod::automatic) method = resolve_method(model);
  return method == ExactMethod::brute ? brute_log2_Z(model) : transfer_log2_Z(model);
}

double exact_capacity(const LatticeModel& model, ExactMethod method) {
  return exact_log2_Z(model, method) / static_cast<double>(model.sites());
}

std::uint64_t valid_column_count(std::size_t rows) {
  if (rows == 0) throw ParameterError("valid_column_count needs rows >= 1");
  if (rows > 90) throw ParameterError("valid_column_count overflows 64 bits above 90 rows");
  return fib_counts(rows)[rows];
}

double conditional_normalizer(const LatticeModel& model, const ColumnState& prev) {
  const std::size_t M = model.rows();
  if (M > kConditionalMaxRows) {
    throw CapacityLimitError("conditional_normalizer enumerates 2^rows columns; limited to rows <= " +
                             std::to_string(kConditionalMaxRows));
  }
  if (prev.width != 1 || prev.rows() != M) throw DimensionError("prev must be a width-1 column of model.rows()");
  ColumnState x;
  x.cells.resize(M);
  double total = 0.0;
  for (std::uint32_t s = 0; s < (1u << M); ++s) {
    for (std::size_t j = 0; j < M; ++j) x.cells[j] = (s >> j) & 1u;
    total += column_phi(model, x) * between_psi(model, x, prev);
  }
  return total;
}

TransferOperator::TransferOperator(const LatticeModel& model) : model_(model) {
  const std::size_t M = model.rows();
  if (M > kMaxRows) {
    throw CapacityLimitError("TransferOperator is limited to rows <= " + std::to_string(kMaxRows));
  }
  ColumnState x;
  x.cells.resize(M);
  for (std::uint32_t s = 0; s < (1u << M); ++s) {
    for (std::size_t j = 0; j < M; ++j) x.cells[j] = (s >> j) & 1u;
    const double p = column_phi(model, x);
    if (p > 0.0) {
      states_.push_back(s);
      phi_.push_back(p);
    }
  }
}

double TransferOperator::weight(std::size_t from, std::size_t to) const {
  const auto& h = model_.h_potential();
  const std::uint32_t a = states_.at(from), b = states_.at(to);
  double w = phi_[to];
  for (std::size_t j = 0; j < model_.rows(); ++j) w *= h((b >> j) & 1u, (a >> j) & 1u);
  return w;
}

std::vector<double> TransferOperator::initial() const { return phi_; }

std::vector<double> TransferOperator::apply(const std::vector<double>& in) const {
  if (in.size() != states_.size()) throw DimensionError("vector size does not match operator");
  std::vector<double> out(states_.size(), 0.0);
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (in[s] == 0.0) continue;
    for (std::size_t t = 0; t < states_.size(); ++t) out[t] += in[s] * weight(s, t);
  }
  return out;
}

double TransferOperator::log2_Z() const {
  auto vec = initial();
  double log2_scale = 0.0;
  for (std::size_t k = 0;; ++k) {
    double total = 0.0;
    for (double x : vec) total += x;
    if (!(total > 0.0)) return -INFINITY;
    if (k + 1 == model_.cols()) return log2_scale + std::log2(total);
    for (double& x : vec) x /= total;
    log2_scale += std::log2(total);
    vec = apply(vec);
  }
}

}  // namespace rllcap
