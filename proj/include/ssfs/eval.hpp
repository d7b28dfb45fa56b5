#pragma once
#include <cstdint>
#include <vector>

#include "ssfs/dataio.hpp"
#include "ssfs/pipeline.hpp"

namespace ssfs {

struct ClusteringResult {
    std::vector<int> assignments;  // values in [0, k)
    double inertia = 0.0;
    int restarts_used = 0;
};

struct AccuracyCurve {
    std::vector<int> feature_counts;  // counts actually evaluated
    std::vector<double> mean_acc;
    std::vector<double> std_acc;
    std::vector<int> skipped_counts;  // requested counts exceeding p
};

struct StabilitySummary {
    std::vector<double> vi_values;  // one per clustering pair
    double mean_vi = 0.0;
    double std_vi = 0.0;
};

// Lloyd's algorithm from k-means++ starts; the best-inertia restart wins.
// Empty clusters are re-seeded from the point farthest from its centroid.
// Stops when assignments stop changing or after max_iter sweeps.
ClusteringResult kmeans(const DataMatrix& x, int k, int restarts, int max_iter,
                        std::uint64_t rng_seed);

// Fraction of points whose predicted cluster matches the true class under the
// best cluster-to-class assignment (optimal matching on the zero-padded
// square confusion matrix).
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// Variation of information H(c1) + H(c2) - 2 I(c1;c2) in nats.
double variation_of_information(const std::vector<int>& c1, const std::vector<int>& c2);

// Reruns single-start k-means `runs` times with distinct seeds and collects
// the VI between every pair of runs. std is the population standard
// deviation, so a single pair reports 0.
StabilitySummary stability_analysis(const DataMatrix& x_selected, int k, int runs,
                                    std::uint64_t rng_seed);

// For each requested count, clusters on the top-ranked features that many
// times and records mean/std accuracy against the true labels. Counts larger
// than p are skipped and reported in skipped_counts.
AccuracyCurve accuracy_curve(const LabeledDataset& ds, const FeatureRanking& ranking,
                             const std::vector<int>& counts, int k, int kmeans_runs,
                             std::uint64_t rng_seed);

} // namespace ssfs
