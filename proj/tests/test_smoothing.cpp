#include <doctest.h>

#include "helpers.hpp"
#include "supergrid/error.hpp"
#include "supergrid/smoothing.hpp"

using namespace supergrid;

TEST_CASE("median follows the usual even-count rule") {
  CHECK(median({3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median({5.0, 1.0, 3.0}) == 3.0);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("one cluster per axis on a 2x2 matrix") {
  const auto m = LabeledMatrix::dense(2, 2, {1, 2, 3, 4});
  const auto s = smooth_by_cluster(m, Membership::single_cluster(2), Membership::single_cluster(2));
  CHECK(s.k_rows == 1);
  CHECK(s.k_cols == 1);
  CHECK(s.block(0, 0) == 2.5);
  const auto mean = smooth_by_cluster(m, Membership::single_cluster(2), Membership::single_cluster(2), SmoothStat::mean);
  CHECK(mean.block(0, 0) == 2.5);
}

TEST_CASE("blocks gather scattered members and ignore missing cells") {
  // Rows {0, 2} / {1}; columns {0} / {1, 2}.
  const LabeledMatrix m(3, 3, {1, 10, 20, 100, 200, 300, 3, std::nullopt, 40}, {}, {});
  const Membership rows({0, 1, 0}, 2);
  const Membership cols({0, 1, 1}, 2);
  const auto s = smooth_by_cluster(m, rows, cols);
  CHECK(s.block(0, 0) == 2.0);   // {1, 3}
  CHECK(s.block(0, 1) == 20.0);  // {10, 20, 40}
  CHECK(s.block(1, 0) == 100.0);
  CHECK(s.block(1, 1) == 250.0);
  const auto e = s.expanded(m.row_names(), m.col_names());
  CHECK(e.at(2, 1) == 20.0);
  CHECK(e.at(1, 2) == 250.0);
  CHECK(s.value_range() == std::make_pair(2.0, 250.0));
}

TEST_CASE("all-missing blocks stay missing") {
  const LabeledMatrix m(2, 2, {std::nullopt, 1, std::nullopt, 2}, {}, {});
  const auto s = smooth_by_cluster(m, Membership::single_cluster(2), Membership::singletons(2));
  CHECK_FALSE(s.block(0, 0).has_value());
  CHECK(s.block(0, 1) == 1.5);
  CHECK(matrix_to_csv(s.as_matrix()) == "\"\",1,2\n1,NA,1.5\n");
}

TEST_CASE("identity memberships reproduce the matrix exactly") {
  Rng rng(2);
  std::vector<std::optional<double>> cells;
  for (int i = 0; i < 20; ++i) cells.emplace_back(rng.normal() * 1e3);
  cells[7] = std::nullopt;
  const LabeledMatrix m(4, 5, cells, {}, {});
  const auto s = smooth_by_cluster(m, Membership::singletons(4), Membership::singletons(5));
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 5; ++c) CHECK(s.block(r, c) == m.at(r, c));
}

TEST_CASE("membership sizes must match") {
  const auto m = LabeledMatrix::dense(2, 2, {1, 2, 3, 4});
  CHECK_THROWS_AS(smooth_by_cluster(m, Membership::singletons(3), Membership::singletons(2)), Error);
}

TEST_CASE("cluster label names become block names") {
  const auto m = LabeledMatrix::dense(2, 1, {1, 2});
  const auto rows = Membership({0, 1}, 2).with_label_names({"low", "high"});
  const auto s = smooth_by_cluster(m, rows, Membership::single_cluster(1));
  CHECK(s.as_matrix().row_names() == std::vector<std::string>{"low", "high"});
}
