#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "supergrid/error.hpp"

using namespace supergrid;
using testing::contains;
using testing::error_message;

TEST_CASE("membership validation and accessors") {
  CHECK_THROWS_AS(Membership({0, 2}, 2), Error);       // label out of range
  CHECK_THROWS_AS(Membership({0, 0}, 2), Error);       // empty cluster
  CHECK_THROWS_AS(Membership({0, 1}, 2, std::vector<std::size_t>{0}), Error);  // medoid count
  const Membership m({1, 0, 1, 2}, 3);
  CHECK(m.cluster_sizes() == std::vector<std::size_t>{1, 2, 1});
  CHECK(m.members()[1] == std::vector<std::size_t>{0, 2});
  CHECK(m.display_name(0) == "1");
  CHECK(m.canonical().labels() == std::vector<std::size_t>{0, 1, 0, 2});
  CHECK(Membership::from_labels({0, 3, 1, 2}).k() == 4);
  CHECK(Membership::singletons(3).k() == 3);
  CHECK(Membership::single_cluster(3).k() == 1);
  const auto named = m.with_label_names({"a", "b", "c"});
  CHECK(named.display_name(2) == "c");
  CHECK(named.canonical().display_name(0) == "b");
  CHECK(m.reordered(Ordering(Axis::row, {3, 2, 1, 0})).labels() == std::vector<std::size_t>{2, 1, 0, 1});
}

TEST_CASE("membership csv with header and string labels") {
  const auto m = parse_membership_csv("object_name,cluster_label\nw1,sport\nw2,news\nw3,sport\n");
  CHECK(m.labels() == std::vector<std::size_t>{0, 1, 0});
  CHECK(m.display_name(1) == "news");
  CHECK(membership_to_csv(m, {"w1", "w2", "w3"}) == "object_name,cluster_label\nw1,sport\nw2,news\nw3,sport\n");
  CHECK(contains(error_message([] { parse_membership_csv("a,1,2\n"); }), "expected 2 fields"));
}

TEST_CASE("distance matrix validation") {
  CHECK_THROWS_AS(DistanceMatrix(2, {0.0, 1.0, 2.0, 0.0}), Error);   // asymmetric
  CHECK_THROWS_AS(DistanceMatrix(2, {1.0, 1.0, 1.0, 0.0}), Error);   // diagonal
  CHECK_THROWS_AS(DistanceMatrix(2, {0.0, -1.0, -1.0, 0.0}), Error); // negative
  const DistanceMatrix d(3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
  const auto s = d.subset({2, 0});
  CHECK(s.size() == 2);
  CHECK(s(0, 1) == 2.0);
}

TEST_CASE("cosine distance is arccos over pi") {
  CHECK(cosine_distance(1.0) == 0.0);
  CHECK(cosine_distance(0.0) == 0.5);
  CHECK(cosine_distance(-1.0) == 1.0);
  CHECK(cosine_distance(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Round-off just past +-1 is clamped.
  CHECK(cosine_distance(1.0 + 1e-15) == 0.0);
}

TEST_CASE("cosine similarity of rows") {
  const auto m = LabeledMatrix::dense(3, 2, {1, 0, 0, 2, 1, 1});
  const auto s = cosine_similarity(m);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(0, 1) == 0.0);
  CHECK(s(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  const auto d = cosine_distance_matrix(s);
  CHECK(d(0, 1) == 0.5);
  CHECK(d(0, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(cosine_similarity(LabeledMatrix::dense(1, 2, {0, 0})), Error);
}

TEST_CASE("distances from a similarity matrix") {
  const auto m = LabeledMatrix::dense(2, 2, {1, 0, 0, 1});
  CHECK(distances_from_similarity(m)(0, 1) == 0.5);
  CHECK_THROWS_AS(distances_from_similarity(LabeledMatrix::dense(1, 2, {1, 0})), Error);
}

TEST_CASE("euclidean distances match the oracle") {
  Rng rng(3);
  std::vector<double> coords(6 * 3);
  for (auto& x : coords) x = rng.normal();
  const auto ref = oracle::random_euclidean(6, 3, coords);
  const auto d = euclidean_distance_matrix(LabeledMatrix::dense(6, 3, coords));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) CHECK(d(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-14));
}

TEST_CASE("hierarchical clustering on a line: heights per linkage") {
  // Points 0, 1, 3, 7.
  const auto d = euclidean_distance_matrix(LabeledMatrix::dense(4, 1, {0, 1, 3, 7}));
  auto heights = [&](Linkage l) {
    std::vector<double> h;
    for (const auto& m : hcluster(d, l).merges()) h.push_back(m.height);
    return h;
  };
  CHECK(heights(Linkage::single) == std::vector<double>{1, 2, 4});
  CHECK(heights(Linkage::complete) == std::vector<double>{1, 3, 7});
  const auto avg = heights(Linkage::average);
  CHECK(avg[0] == 1.0);
  CHECK(avg[1] == 2.5);
  CHECK(avg[2] == doctest::Approx(17.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("merge node ids and leaf order") {
  const auto d = euclidean_distance_matrix(LabeledMatrix::dense(4, 1, {7, 0, 3, 1}));
  const auto tree = hcluster(d, Linkage::single);
  const auto& m = tree.merges();
  CHECK(m[0].left == 1);
  CHECK(m[0].right == 3);
  CHECK(m[0].size == 2);
  CHECK(m[1].left == 4);  // node 4 = {1, 3} vs leaf 2: smaller minimum leaf goes left
  CHECK(m[1].right == 2);
  CHECK(m[2].left == 0);
  CHECK(m[2].right == 5);
  CHECK(tree.leaf_order() == std::vector<std::size_t>{0, 1, 3, 2});
}

TEST_CASE("single linkage heights equal minimum spanning tree edges") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(9));
    const auto ref = testing::random_dissimilarity(n, rng);
    const auto tree = hcluster(testing::to_matrix(ref), Linkage::single);
    const auto mst = oracle::mst_edge_weights(ref);
    REQUIRE(tree.merges().size() == n - 1);
    for (std::size_t t = 0; t + 1 < n; ++t) CHECK(tree.merges()[t].height == mst[t]);
  }
}

TEST_CASE("dendrogram validation and relabeling") {
  CHECK_THROWS_AS(Dendrogram(3, {{0, 1, 1.0, 2}}), Error);                 // too few merges
  CHECK_THROWS_AS(Dendrogram(3, {{0, 1, 1.0, 2}, {0, 2, 2.0, 2}}), Error); // reused node
  CHECK_THROWS_AS(Dendrogram(3, {{0, 1, 2.0, 2}, {3, 2, 1.0, 3}}), Error); // decreasing
  const Dendrogram t(3, {{0, 2, 1.0, 2}, {1, 3, 2.0, 3}});
  CHECK(t.leaf_order() == std::vector<std::size_t>{0, 2, 1});
  const auto r = t.relabeled(Ordering(Axis::row, t.leaf_order()));
  CHECK(r.leaf_order() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("cutting a dendrogram") {
  const auto d = euclidean_distance_matrix(LabeledMatrix::dense(5, 1, {0, 10, 1, 11, 30}));
  const auto tree = hcluster(d, Linkage::complete);
  CHECK(cut_dendrogram(tree, 1).labels() == std::vector<std::size_t>{0, 0, 0, 0, 0});
  CHECK(cut_dendrogram(tree, 3).labels() == std::vector<std::size_t>{0, 1, 0, 1, 2});
  CHECK(cut_dendrogram(tree, 5).k() == 5);
  CHECK_THROWS_AS(cut_dendrogram(tree, 6), Error);
}

TEST_CASE("k-means separates clear groups and is deterministic") {
  const auto m = LabeledMatrix::dense(6, 2, {0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1});
  KMeansOptions o;
  o.seed = 42;
  const auto r = kmeans_detailed(m, 2, o);
  CHECK(r.membership.labels() == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(r.centers[0] == doctest::Approx(0.1 / 3));
  CHECK(r.centers[3] == doctest::Approx(5.0 + 0.1 / 3));
  CHECK(r.wcss == doctest::Approx(2.0 * 4.0 * 0.01 / 3.0));
  const auto again = kmeans_detailed(m, 2, o);
  CHECK(again.membership == r.membership);
  CHECK(again.wcss == r.wcss);
  for (std::size_t i = 1; i < r.wcss_history.size(); ++i) CHECK(r.wcss_history[i] <= r.wcss_history[i - 1]);
  CHECK_THROWS_AS(kmeans(m, 7, o), Error);
  CHECK_THROWS_AS(kmeans(m, 0, o), Error);
}

TEST_CASE("k-means never beats the best two-way split, and reaches it on small inputs") {
  Rng rng(23);
  int optimal = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(rng.below(6));
    std::vector<double> flat;
    std::vector<std::vector<double>> pts;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back({rng.normal(), rng.normal()});
      flat.insert(flat.end(), pts.back().begin(), pts.back().end());
    }
    KMeansOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    const auto r = kmeans_detailed(LabeledMatrix::dense(n, 2, flat), 2, o);
    const double best = oracle::best_two_partition_wcss(pts);
    CHECK(r.wcss >= best - 1e-9);
    CHECK(r.wcss == doctest::Approx(oracle::wcss(pts, r.membership.labels(), 2)));
    if (r.wcss <= best + 1e-9) ++optimal;
  }
  CHECK(optimal >= 36);
}

TEST_CASE("PAM ends in a swap-local optimum with consistent cost and labels") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.below(6));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(std::min<std::size_t>(3, n - 1)));
    std::vector<double> coords(n * 2);
    for (auto& x : coords) x = rng.normal();
    const auto ref = oracle::random_euclidean(n, 2, coords);
    const auto d = testing::to_matrix(ref);
    const auto r = pam_detailed(d, k);
    REQUIRE(r.membership.medoids().has_value());
    const auto& med = *r.membership.medoids();
    CHECK(med.size() == k);
    CHECK(r.cost == doctest::Approx(oracle::medoid_cost(ref, med)).epsilon(1e-12));
    CHECK(r.cost <= r.build_cost);
    CHECK(r.cost >= oracle::exhaustive_pam(ref, k) - 1e-12);
    // No single medoid/non-medoid exchange lowers the cost.
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t o = 0; o < n; ++o) {
        if (std::find(med.begin(), med.end(), o) != med.end()) continue;
        auto swapped = med;
        swapped[s] = o;
        CHECK(oracle::medoid_cost(ref, swapped) >= r.cost - 1e-12);
      }
    for (std::size_t c = 0; c < k; ++c) CHECK(r.membership[med[c]] == c);
    for (std::size_t i = 0; i < n; ++i) {
      double nearest = ref[i][med[0]];
      for (std::size_t m : med) nearest = std::min(nearest, ref[i][m]);
      CHECK(ref[i][med[r.membership[i]]] == nearest);
    }
  }
}

TEST_CASE("PAM assigns each object to its nearest medoid") {
  const auto d = euclidean_distance_matrix(LabeledMatrix::dense(6, 1, {0, 1, 2, 10, 11, 12}));
  const auto r = pam_detailed(d, 2);
  CHECK(r.membership.labels() == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
  CHECK(*r.membership.medoids() == std::vector<std::size_t>{1, 4});
  CHECK(r.cost == 4.0);
  CHECK(pam(d, 2, 1) == pam(d, 2, 99));
  CHECK_THROWS_AS(pam(d, 7), Error);
}

TEST_CASE("PAM small exact cases") {
  const auto line = euclidean_distance_matrix(LabeledMatrix::dense(3, 1, {0, 1, 10}));
  const auto one = pam_detailed(line, 1);
  CHECK(*one.membership.medoids() == std::vector<std::size_t>{1});
  CHECK(one.cost == 10.0);
  const auto all = pam_detailed(line, 3);
  CHECK(all.cost == 0.0);
  CHECK(all.membership.labels() == std::vector<std::size_t>{0, 1, 2});
}
