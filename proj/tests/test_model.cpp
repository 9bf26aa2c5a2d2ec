#include <cmath>

#include "doctest.h"
#include "enumerate.hpp"
#include "rllcap/model.hpp"
#include "rllcap/oracle.hpp"

using namespace rllcap;
using namespace rllcap::testing;

namespace {

ColumnState column_from_mask(std::uint32_t mask, std::size_t rows) {
  ColumnState s;
  for (std::size_t j = 0; j < rows; ++j) s.cells.push_back((mask >> j) & 1u);
  return s;
}

// Z over a strip view, by dynamic programming over super-column states with phi > 0.
double strip_Z(const StripView& view) {
  std::vector<std::vector<ColumnState>> states(view.super_cols());
  std::vector<std::vector<double>> phis(view.super_cols());
  for (std::size_t t = 0; t < view.super_cols(); ++t) {
    const unsigned w = view.width_of(t);
    const std::size_t bits = view.rows() * w;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      ColumnState s{w, std::vector<std::uint32_t>(view.rows())};
      for (std::size_t j = 0; j < view.rows(); ++j) s.cells[j] = (code >> (j * w)) & ((1u << w) - 1);
      const double p = view.phi(t, s);
      if (p > 0.0) {
        states[t].push_back(std::move(s));
        phis[t].push_back(p);
      }
    }
  }
  std::vector<double> alpha = phis[0];
  for (std::size_t t = 1; t < view.super_cols(); ++t) {
    std::vector<double> next(states[t].size(), 0.0);
    for (std::size_t b = 0; b < states[t].size(); ++b) {
      for (std::size_t a = 0; a < states[t - 1].size(); ++a) {
        next[b] += alpha[a] * view.psi(t, states[t][b], states[t - 1][a]);
      }
      next[b] *= phis[t][b];
    }
    alpha.swap(next);
  }
  double Z = 0.0;
  for (double x : alpha) Z += x;
  return Z;
}

}  // namespace

TEST_CASE("rll potential table") {
  const auto p = rll_potential();
  CHECK(p(0, 0) == 1.0);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 0) == 1.0);
  CHECK(p(1, 1) == 0.0);
  CHECK(p.is_rll());
  CHECK(p.forbids_adjacent_ones());
}

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(PairwisePotential(1, -1, 1, 1), ParameterError);
  CHECK_THROWS_AS(PairwisePotential(0, 0, 0, 0), ParameterError);
  CHECK_THROWS_AS(PairwisePotential(1, NAN, 1, 1), ParameterError);
  CHECK_THROWS_AS(PairwisePotential(1, INFINITY, 1, 1), ParameterError);
  CHECK_NOTHROW(PairwisePotential(0, 0, 0, 2.5));
  CHECK_FALSE(PairwisePotential(1, 2, 3, 4).forbids_adjacent_ones());
}

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(LatticeModel::rll(0, 3), ParameterError);
  CHECK_THROWS_AS(LatticeModel::rll(3, 0), ParameterError);
  const LatticeModel m(2, 3, PairwisePotential(1, 2, 3, 4), rll_potential());
  const auto t = m.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.cols() == 2);
  CHECK(t.h_potential() == rll_potential());
  CHECK(t.v_potential() == PairwisePotential(1, 2, 3, 4));
}

TEST_CASE("column_phi examples") {
  const auto m3 = LatticeModel::rll(3, 4);
  CHECK(column_phi(m3, ColumnState::from_string("010")) == 1.0);
  CHECK(column_phi(m3, ColumnState::from_string("110")) == 0.0);
  CHECK(column_phi(LatticeModel::rll(1, 1), ColumnState::from_string("1")) == 1.0);
  CHECK_THROWS_AS(column_phi(m3, ColumnState::from_string("01")), DimensionError);
}

TEST_CASE("between_psi examples") {
  const auto m3 = LatticeModel::rll(3, 4);
  CHECK(between_psi(m3, ColumnState::from_string("010"), ColumnState::from_string("101")) == 1.0);
  CHECK(between_psi(m3, ColumnState::from_string("010"), ColumnState::from_string("010")) == 0.0);
  CHECK(between_psi(LatticeModel::rll(2, 2), ColumnState::from_string("00"), ColumnState::from_string("11")) == 1.0);
  CHECK_THROWS_AS(between_psi(m3, ColumnState::from_string("010"), ColumnState::from_string("0101")), DimensionError);
}

TEST_CASE("column_phi is the indicator of no adjacent ones; counts are Fibonacci") {
  for (std::size_t M = 1; M <= 20; ++M) {
    const auto m = LatticeModel::rll(M, 1);
    std::uint64_t count = 0;
    ColumnState s;
    s.cells.resize(M);
    for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
      for (std::size_t j = 0; j < M; ++j) s.cells[j] = (mask >> j) & 1u;
      const double p = column_phi(m, s);
      const bool ok = (mask & (mask >> 1)) == 0;
      REQUIRE(p == (ok ? 1.0 : 0.0));
      count += ok;
    }
    CHECK(count == fibonacci(M + 2));
  }
}

TEST_CASE("between_psi against the all-zeros column is 1") {
  for (std::size_t M = 1; M <= 10; ++M) {
    const auto m = LatticeModel::rll(M, 2);
    const auto zeros = column_from_mask(0, M);
    for (std::uint32_t mask = 0; mask < (1u << M); ++mask) {
      REQUIRE(between_psi(m, column_from_mask(mask, M), zeros) == 1.0);
    }
  }
}

TEST_CASE("strip view widths and range") {
  const auto m = LatticeModel::rll(3, 5);
  const auto v = strip_view(m, 2);
  REQUIRE(v.super_cols() == 3);
  CHECK(v.width_of(0) == 2);
  CHECK(v.width_of(1) == 2);
  CHECK(v.width_of(2) == 1);
  CHECK(v.first_col(2) == 4);
  CHECK_THROWS_AS(strip_view(m, 0), ParameterError);
  CHECK_THROWS_AS(strip_view(m, 6), ParameterError);
  CHECK(strip_view(m, 5).super_cols() == 1);
}

TEST_CASE("width-1 strip view matches the base model bit for bit") {
  const LatticeModel models[] = {LatticeModel::rll(5, 4),
                                 LatticeModel(4, 3, PairwisePotential(0.5, 1.5, 2.0, 0.25),
                                              PairwisePotential(1.0, 0.3, 0.7, 2.0))};
  for (const auto& m : models) {
    const StripView v(m, 1);
    REQUIRE(v.super_cols() == m.cols());
    const std::size_t M = m.rows();
    for (std::uint32_t a = 0; a < (1u << M); ++a) {
      const auto sa = column_from_mask(a, M);
      REQUIRE(v.phi(0, sa) == column_phi(m, sa));
      for (std::uint32_t b = 0; b < (1u << M); ++b) {
        const auto sb = column_from_mask(b, M);
        REQUIRE(v.psi(1, sa, sb) == between_psi(m, sa, sb));
      }
    }
  }
}

TEST_CASE("2x2 lattice as a single strip has Z = 7") {
  const StripView v(LatticeModel::rll(2, 2), 2);
  REQUIRE(v.super_cols() == 1);
  double Z = 0.0;
  for (std::uint32_t top = 0; top < 4; ++top) {
    for (std::uint32_t bottom = 0; bottom < 4; ++bottom) Z += v.phi(0, ColumnState{2, {top, bottom}});
  }
  CHECK(Z == 7.0);
}

TEST_CASE("strip grouping preserves the partition function") {
  for (std::size_t M = 1; M <= 6; ++M) {
    for (std::size_t K = 1; K <= 6; ++K) {
      const auto m = LatticeModel::rll(M, K);
      const double Z = std::exp2(exact_log2_Z(m));
      for (unsigned W = 1; W <= 3 && W <= K; ++W) {
        CAPTURE(M);
        CAPTURE(K);
        CAPTURE(W);
        CHECK(strip_Z(StripView(m, W)) == doctest::Approx(Z).epsilon(1e-12));
      }
    }
  }
  // Non-RLL potentials, small enough for full enumeration.
  const LatticeModel g(3, 4, PairwisePotential(0.5, 1.5, 2.0, 0.25), PairwisePotential(1.0, 0.3, 0.7, 2.0));
  const double Zg = enum_Z(g);
  for (unsigned W = 1; W <= 4; ++W) CHECK(strip_Z(StripView(g, W)) == doctest::Approx(Zg).epsilon(1e-12));
}

TEST_CASE("strip split and violation counter") {
  const ColumnState s{3, {0b001, 0b100, 0b010}};
  const auto cols = StripView::split(s);
  REQUIRE(cols.size() == 3);
  CHECK(cols[0].to_string() == "100");
  CHECK(cols[1].to_string() == "001");
  CHECK(cols[2].to_string() == "010");
  CHECK(count_rll_violations(cols) == 0);
  CHECK(count_rll_violations({ColumnState::from_string("110"), ColumnState::from_string("100")}) == 2);
}
