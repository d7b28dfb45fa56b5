#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "ssfs/eval.hpp"
#include "ssfs/rng.hpp"
#include "test_util.hpp"

using namespace ssfs;

namespace {

// Two tight clusters at +/-5 in every coordinate.
LabeledDataset two_blobs(int n, int p, double spread, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset ds;
    ds.data.values.resize(n, p);
    ds.labels.resize(static_cast<std::size_t>(n));
    ds.num_classes = 2;
    for (int i = 0; i < n; ++i) {
        const int c = i < n / 2 ? 0 : 1;
        ds.labels[static_cast<std::size_t>(i)] = c;
        for (int j = 0; j < p; ++j)
            ds.data.values(i, j) = (c == 0 ? -5.0 : 5.0) + spread * rng.normal();
    }
    for (int j = 0; j < p; ++j) ds.data.feature_names.push_back("f" + std::to_string(j));
    return ds;
}

std::vector<int> random_partition(Rng& rng, int n, int classes) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int& v : out) v = static_cast<int>(rng.below(classes));
    return out;
}

// Max mean agreement over every permutation of cluster labels.
double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    int classes = 1;
    for (int v : pred) classes = std::max(classes, v + 1);
    for (int v : truth) classes = std::max(classes, v + 1);
    std::vector<int> perm(static_cast<std::size_t>(classes));
    std::iota(perm.begin(), perm.end(), 0);
    int best = 0;
    do {
        int hits = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            hits += perm[static_cast<std::size_t>(pred[i])] == truth[i] ? 1 : 0;
        best = std::max(best, hits);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

} // namespace

TEST_CASE("kmeans recovers well-separated blobs") {
    const LabeledDataset ds = two_blobs(40, 3, 0.2, 5);
    const ClusteringResult r = kmeans(ds.data, 2, 20, 300, 7);
    REQUIRE(r.assignments.size() == 40);
    for (int a : r.assignments) {
        CHECK(a >= 0);
        CHECK(a < 2);
    }
    CHECK(r.inertia >= 0.0);
    CHECK(r.restarts_used == 20);
    CHECK(clustering_accuracy(r.assignments, ds.labels) == doctest::Approx(1.0));
}

TEST_CASE("kmeans with k=n reaches zero inertia") {
    const LabeledDataset ds = two_blobs(12, 2, 0.5, 9);
    const ClusteringResult r = kmeans(ds.data, 12, 5, 300, 11);
    CHECK(r.inertia == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<int> sorted = r.assignments;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 12; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("kmeans rejects more clusters than points") {
    const LabeledDataset ds = two_blobs(10, 2, 0.5, 13);
    CHECK_THROWS_AS(kmeans(ds.data, 11, 1, 300, 1), std::runtime_error);
}

TEST_CASE("kmeans is deterministic and more restarts never hurt") {
    const LabeledDataset ds = two_blobs(60, 4, 2.5, 17);
    const ClusteringResult a = kmeans(ds.data, 4, 3, 300, 23);
    const ClusteringResult b = kmeans(ds.data, 4, 3, 300, 23);
    CHECK(a.assignments == b.assignments);
    CHECK(a.inertia == b.inertia);
    // restart r draws its own seed from (seed, r), so best-of-10 includes best-of-1
    const ClusteringResult one = kmeans(ds.data, 4, 1, 300, 23);
    const ClusteringResult ten = kmeans(ds.data, 4, 10, 300, 23);
    CHECK(ten.inertia <= one.inertia);
}

TEST_CASE("clustering accuracy is relabel invariant") {
    CHECK(clustering_accuracy({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
    CHECK(clustering_accuracy({0, 1, 1}, {0, 0, 1}) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(clustering_accuracy({0, 1}, {0}), std::runtime_error);
}

TEST_CASE("assignment-based accuracy matches factorial brute force") {
    Rng rng(29);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + static_cast<int>(rng.below(30));
        const int ca = 1 + static_cast<int>(rng.below(4));
        const int cb = 1 + static_cast<int>(rng.below(4));
        const std::vector<int> pred = random_partition(rng, n, ca);
        const std::vector<int> truth = random_partition(rng, n, cb);
        CHECK(clustering_accuracy(pred, truth) == brute_force_accuracy(pred, truth));
    }
}

TEST_CASE("accuracy handles unequal cluster counts via padding") {
    // three predicted clusters vs two classes: only two can match
    CHECK(clustering_accuracy({0, 1, 2, 2}, {0, 0, 1, 1}) == doctest::Approx(0.75));
    // constant prediction picks the majority class
    CHECK(clustering_accuracy({0, 0, 0, 0}, {0, 1, 1, 1}) == doctest::Approx(0.75));
}

TEST_CASE("variation of information on hand-checked partitions") {
    CHECK(variation_of_information({0, 0, 1, 1}, {0, 0, 1, 1}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(variation_of_information({1, 1, 0, 0}, {0, 0, 1, 1}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // crossing bipartitions of 4 points share no information: VI = 2 ln 2
    CHECK(variation_of_information({0, 0, 1, 1}, {0, 1, 0, 1}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(variation_of_information({0, 1}, {0}), std::runtime_error);
}

TEST_CASE("variation of information is a bounded metric") {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng.below(40));
        const std::vector<int> a = random_partition(rng, n, 4);
        const std::vector<int> b = random_partition(rng, n, 4);
        const std::vector<int> c = random_partition(rng, n, 4);
        const double ab = variation_of_information(a, b);
        const double bc = variation_of_information(b, c);
        const double ac = variation_of_information(a, c);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(variation_of_information(b, a)).epsilon(1e-14));
        CHECK(ab <= std::log(static_cast<double>(n)) + 1e-12);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("stability analysis separates clean structure from noise") {
    const LabeledDataset blobs = two_blobs(40, 3, 0.2, 37);
    const StabilitySummary clean = stability_analysis(blobs.data, 2, 20, 41);
    REQUIRE(clean.vi_values.size() == 20 * 19 / 2);
    CHECK(clean.mean_vi < 0.05);

    DataMatrix noise;
    Rng rng(43);
    noise.values.resize(40, 3);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 3; ++j) noise.values(i, j) = rng.normal();
    const StabilitySummary messy = stability_analysis(noise, 2, 20, 41);
    CHECK(messy.mean_vi > clean.mean_vi);

    for (double v : clean.vi_values) CHECK(v >= 0.0);
    CHECK_THROWS_AS(stability_analysis(blobs.data, 2, 1, 1), std::runtime_error);
}

TEST_CASE("two stability runs give one pair and zero spread") {
    const LabeledDataset blobs = two_blobs(20, 2, 0.3, 47);
    const StabilitySummary s = stability_analysis(blobs.data, 2, 2, 53);
    REQUIRE(s.vi_values.size() == 1);
    CHECK(s.mean_vi == doctest::Approx(s.vi_values[0]).epsilon(1e-15));
    CHECK(s.std_vi == 0.0);
}

TEST_CASE("accuracy curves evaluate the requested counts in range") {
    const LabeledDataset ds = two_blobs(40, 6, 0.2, 59);
    FeatureRanking ranking;
    ranking.scores = Eigen::VectorXd::LinSpaced(6, 0.6, 0.1);
    ranking.order = {0, 1, 2, 3, 4, 5};
    const AccuracyCurve curve = accuracy_curve(ds, ranking, {2, 6, 50}, 2, 5, 61);
    CHECK(curve.feature_counts == std::vector<int>{2, 6});
    CHECK(curve.skipped_counts == std::vector<int>{50});
    REQUIRE(curve.mean_acc.size() == 2);
    REQUIRE(curve.std_acc.size() == 2);
    for (double m : curve.mean_acc) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
    }
    // every feature separates the blobs, so both counts nail the labels
    CHECK(curve.mean_acc[0] >= 0.95);
    CHECK(curve.mean_acc[1] >= 0.95);
    CHECK(curve.std_acc[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("accuracy curves depend on which features rank first") {
    // only features 0 and 1 separate the clusters; the rest is noise
    LabeledDataset ds = two_blobs(40, 2, 0.2, 67);
    Rng rng(71);
    DataMatrix wide;
    wide.values.resize(40, 6);
    wide.values.leftCols(2) = ds.data.values;
    for (int i = 0; i < 40; ++i)
        for (int j = 2; j < 6; ++j) wide.values(i, j) = 5.0 * rng.normal();
    for (int j = 0; j < 6; ++j) wide.feature_names.push_back("f" + std::to_string(j));
    ds.data = wide;

    FeatureRanking good;
    good.scores = Eigen::VectorXd::LinSpaced(6, 0.6, 0.1);
    good.order = {0, 1, 2, 3, 4, 5};
    FeatureRanking bad = good;
    bad.order = {5, 4, 3, 2, 1, 0};
    const AccuracyCurve gc = accuracy_curve(ds, good, {2}, 2, 10, 73);
    const AccuracyCurve bc = accuracy_curve(ds, bad, {2}, 2, 10, 73);
    CHECK(gc.mean_acc[0] >= 0.95);
    CHECK(bc.mean_acc[0] < gc.mean_acc[0]);
}
