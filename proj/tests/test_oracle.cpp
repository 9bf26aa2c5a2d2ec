#include <chrono>
#include <cmath>

#include "doctest.h"
#include "enumerate.hpp"
#include "rllcap/oracle.hpp"

using namespace rllcap;
using namespace rllcap::testing;

TEST_CASE("n x n RLL partition functions") {
  const double expected[] = {2, 7, 63, 1234, 55447};
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto m = LatticeModel::rll(n, n);
    CAPTURE(n);
    CHECK(exact_log2_Z(m, ExactMethod::transfer) == doctest::Approx(std::log2(expected[n - 1])).epsilon(1e-12));
    if (n * n <= kBruteMaxSites) {
      CHECK(exact_log2_Z(m, ExactMethod::brute) == doctest::Approx(std::log2(expected[n - 1])).epsilon(1e-12));
    }
    CHECK(enum_rll_count(n, n) == expected[n - 1]);
  }
}

TEST_CASE("transfer matrix agrees with brute force") {
  for (std::size_t M = 1; M <= 20; ++M) {
    for (std::size_t K = 1; M * K <= 20; ++K) {
      const auto m = LatticeModel::rll(M, K);
      CAPTURE(M);
      CAPTURE(K);
      REQUIRE(exact_log2_Z(m, ExactMethod::transfer) ==
              doctest::Approx(exact_log2_Z(m, ExactMethod::brute)).epsilon(1e-12));
    }
  }
  const std::pair<std::size_t, std::size_t> shapes[] = {{4, 6}, {3, 8}, {2, 12}, {1, 24}, {6, 4}, {24, 1}};
  for (auto [M, K] : shapes) {
    const auto m = LatticeModel::rll(M, K);
    const double b = exact_log2_Z(m, ExactMethod::brute);
    CHECK(exact_log2_Z(m, ExactMethod::transfer) == doctest::Approx(b).epsilon(1e-12));
    CHECK(b == doctest::Approx(std::log2(enum_rll_count(M, K))).epsilon(1e-12));
  }
}

TEST_CASE("general potentials: transfer, brute force and enumeration agree") {
  const PairwisePotential potentials[] = {PairwisePotential(0.5, 1.5, 2.0, 0.25), PairwisePotential(1.0, 0.3, 0.7, 2.0),
                                          PairwisePotential(1, 1, 1, 0), PairwisePotential(0, 1, 1, 1)};
  for (const auto& h : potentials) {
    for (const auto& v : potentials) {
      for (auto [M, K] : {std::pair<std::size_t, std::size_t>{3, 4}, {4, 3}, {2, 5}, {5, 2}, {1, 6}}) {
        const LatticeModel m(M, K, h, v);
        const double e = std::log2(enum_Z(m));
        CHECK(exact_log2_Z(m, ExactMethod::transfer) == doctest::Approx(e).epsilon(1e-12));
        CHECK(exact_log2_Z(m, ExactMethod::brute) == doctest::Approx(e).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("transpose symmetry") {
  for (std::size_t M = 1; M <= 8; ++M) {
    for (std::size_t K = 1; K <= 8; ++K) {
      CHECK(exact_log2_Z(LatticeModel::rll(M, K)) ==
            doctest::Approx(exact_log2_Z(LatticeModel::rll(K, M))).epsilon(1e-12));
    }
  }
  const LatticeModel g(5, 7, PairwisePotential(0.5, 1.5, 2.0, 0.25), PairwisePotential(1.0, 0.3, 0.7, 2.0));
  CHECK(exact_log2_Z(g) == doctest::Approx(exact_log2_Z(g.transposed())).epsilon(1e-12));
}

TEST_CASE("single row is a Fibonacci count") {
  for (std::size_t K = 1; K <= 60; ++K) {
    CAPTURE(K);
    CHECK(exact_log2_Z(LatticeModel::rll(1, K)) ==
          doctest::Approx(std::log2(static_cast<double>(fibonacci(K + 2)))).epsilon(1e-12));
  }
}

TEST_CASE("column transfer operator") {
  for (std::size_t M = 1; M <= 10; ++M) {
    const TransferOperator op(LatticeModel::rll(M, 7));
    REQUIRE(op.states().size() == valid_column_count(M));
    for (double x : op.initial()) CHECK(x == 1.0);
    for (std::size_t a = 0; a < op.states().size(); ++a) {
      for (std::size_t b = 0; b < op.states().size(); ++b) {
        REQUIRE(op.weight(a, b) == ((op.states()[a] & op.states()[b]) ? 0.0 : 1.0));
      }
    }
    CHECK(op.log2_Z() == doctest::Approx(exact_log2_Z(LatticeModel::rll(M, 7))).epsilon(1e-12));
  }
  const LatticeModel g(4, 5, PairwisePotential(0.5, 1.5, 2.0, 0.25), PairwisePotential(1.0, 0.3, 0.7, 2.0));
  const TransferOperator op(g);
  CHECK(op.states().size() == 16);
  CHECK(op.log2_Z() == doctest::Approx(std::log2(enum_Z(g))).epsilon(1e-12));
  const auto once = op.apply(op.initial());
  double Z2 = 0.0;
  for (double x : once) Z2 += x;
  CHECK(Z2 == doctest::Approx(enum_Z(LatticeModel(4, 2, g.h_potential(), g.v_potential()))).epsilon(1e-12));
  CHECK_THROWS_AS(TransferOperator(LatticeModel::rll(17, 2)), CapacityLimitError);
}

TEST_CASE("valid column counts") {
  CHECK(valid_column_count(1) == 2);
  CHECK(valid_column_count(5) == 13);
  CHECK(valid_column_count(10) == 144);
  for (std::size_t M = 1; M <= 20; ++M) CHECK(valid_column_count(M) == fibonacci(M + 2));
}

TEST_CASE("conditional normalizer examples") {
  CHECK(conditional_normalizer(LatticeModel::rll(1, 2), ColumnState::from_string("0")) == 2.0);
  CHECK(conditional_normalizer(LatticeModel::rll(1, 2), ColumnState::from_string("1")) == 1.0);
  CHECK(conditional_normalizer(LatticeModel::rll(2, 2), ColumnState::from_string("10")) == 2.0);
  CHECK(conditional_normalizer(LatticeModel::rll(3, 2), ColumnState::from_string("000")) == 5.0);
  CHECK_THROWS_AS(conditional_normalizer(LatticeModel::rll(21, 2), ColumnState{1, std::vector<std::uint32_t>(21)}),
                  CapacityLimitError);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(exact_log2_Z(LatticeModel::rll(5, 5), ExactMethod::brute), CapacityLimitError);
  CHECK_THROWS_AS(exact_log2_Z(LatticeModel::rll(34, 34)), CapacityLimitError);
  CHECK_NOTHROW(exact_log2_Z(LatticeModel::rll(33, 2)));
  const LatticeModel g(21, 21, PairwisePotential(1, 2, 3, 4), PairwisePotential(1, 2, 3, 4));
  CHECK_THROWS_AS(exact_log2_Z(g), CapacityLimitError);
  CHECK(resolve_method(LatticeModel::rll(30, 200)) == ExactMethod::transfer);
  CHECK(resolve_method(LatticeModel(21, 1, PairwisePotential(1, 2, 3, 4), PairwisePotential(1, 2, 3, 4))) ==
        ExactMethod::transfer);
  try {
    exact_log2_Z(LatticeModel::rll(40, 40));
    FAIL("expected CapacityLimitError");
  } catch (const CapacityLimitError& e) {
    CHECK(std::string(e.what()).find("33") != std::string::npos);
  }
}

TEST_CASE("small capacities") {
  CHECK(exact_capacity(LatticeModel::rll(2, 2)) == doctest::Approx(std::log2(7.0) / 4).epsilon(1e-12));
  CHECK(std::abs(exact_capacity(LatticeModel::rll(2, 2)) - 0.70184) < 5e-6);
  CHECK(std::abs(exact_capacity(LatticeModel::rll(3, 3)) - 0.664142) < 5e-7);
}

TEST_CASE("10 x 10 capacity") {
  const auto t0 = std::chrono::steady_clock::now();
  const double c = exact_capacity(LatticeModel::rll(10, 10));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(std::round(c * 1e4) / 1e4 == doctest::Approx(0.6082).epsilon(1e-12));
  CHECK(secs < 10.0);
  // Independent check by the column-mask dynamic program.
  CHECK(c == doctest::Approx(std::log2(enum_rll_count(10, 10)) / 100).epsilon(1e-12));
}

TEST_CASE("large hard-core sweep approaches the infinite-lattice value") {
  const double c = exact_capacity(LatticeModel::rll(25, 25));
  CHECK(c > 0.5879);
  CHECK(c < 0.6082);
}
