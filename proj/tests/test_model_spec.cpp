#include <sstream>

#include "doctest.h"
#include "rllcap/model_spec.hpp"

using namespace rllcap;

namespace {
ModelSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_model_spec(in);
}
}  // namespace

TEST_CASE("model spec: defaults and comments") {
  const auto spec = parse("# a 10x10 channel\nrows = 10\n\ncols=10   # trailing comment\n");
  CHECK(*spec.rows == 10);
  CHECK(*spec.cols == 10);
  CHECK(spec.strip_width == 1);
  CHECK(spec.model().is_rll());
}

TEST_CASE("model spec: explicit potentials") {
  auto spec = parse("rows = 3\ncols = 6\npotential = 1 1 1 0.5\nstrip_width = 3\n");
  CHECK(spec.h_potential == PairwisePotential(1, 1, 1, 0.5));
  CHECK(spec.v_potential == PairwisePotential(1, 1, 1, 0.5));
  CHECK(spec.view().super_cols() == 2);

  spec = parse("rows = 3\ncols = 6\nh_potential = rll\nv_potential = 1,2,3,4\n");
  CHECK(spec.h_potential.is_rll());
  CHECK(spec.v_potential == PairwisePotential(1, 2, 3, 4));
}

TEST_CASE("model spec: errors") {
  CHECK_THROWS_AS(parse("rows = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\nrows = 4\ncols = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\npotential = rll\nh_potential = rll\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\nh_potential = rll\npotential = rll\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\npotential = 1 1 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\npotential = 1 1 1 -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\npotential = 1 1 x 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = -3\ncols = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 0\ncols = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows 3\ncols = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("rows = 3\ncols = 3\nstrip_width = 4\n"), ConfigError);
  CHECK_THROWS_AS(load_model_spec("/nonexistent/model.txt"), ConfigError);
}

TEST_CASE("potential parser") {
  CHECK(parse_potential("rll").is_rll());
  CHECK(parse_potential(" 1, 1 ,1, 0 ").is_rll());
  CHECK_THROWS_AS(parse_potential("RLL"), ConfigError);
  CHECK_THROWS_AS(parse_potential("0 0 0 0"), ConfigError);
}
