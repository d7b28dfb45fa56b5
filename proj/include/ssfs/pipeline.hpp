#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ssfs/dataio.hpp"
#include "ssfs/eigenselect.hpp"
#include "ssfs/graph.hpp"
#include "ssfs/surrogate.hpp"

namespace ssfs {

// Pipeline variants: the ablations swap out stages of the full method.
//   full                    stability selection + boosted-tree scorer
//   no_selection            leading k pseudo-labels, boosted-tree scorer
//   no_gbt                  stability selection + logistic scorer
//   regression              continuous eigenvector targets, ridge selection,
//                           boosted-tree regression scorer
//   no_selection_regression leading k eigenvectors, boosted-tree regression
enum class SsfsVariant { full, no_selection, no_gbt, regression, no_selection_regression };

struct SsfsConfig {
    int num_select_k = 2;   // eigenvectors to select (k)
    int num_compute_d = 0;  // candidate eigenvectors; 0 means 2k
    SurrogateSpec selector_spec;
    SurrogateSpec scorer_spec;
    int resamples = 500;
    double subsample_fraction = 0.95;
    LaplacianVariant laplacian_variant = LaplacianVariant::symmetric_normalized;
    BandwidthMode bandwidth_mode = BandwidthMode::adaptive;
    int neighbor_k = 2;       // adaptive kernel neighbor
    double fixed_sigma = 1.0; // used when bandwidth_mode == fixed
    std::uint64_t seed = 0;
    SsfsVariant variant = SsfsVariant::full;
    int threads = 0;  // 0: resolve from SSFS_THREADS, default 1

    int effective_d() const { return num_compute_d > 0 ? num_compute_d : 2 * num_select_k; }
    void validate() const;
};

// Final per-feature result. order sorts scores descending with ties broken
// by ascending feature index; scores[m] equals the column maximum of
// per_eigenvector_scores.
struct FeatureRanking {
    Eigen::VectorXd scores;
    std::vector<int> order;
    Eigen::MatrixXd per_eigenvector_scores;  // |I| x p, rows sum to 1
    std::vector<int> selected_eigenvectors;  // positions among the candidates
    std::vector<double> stability_scores;    // variance sums per candidate; empty
                                             // for variants without selection
    std::vector<std::string> feature_names;
};

// Consistent defaults for a variant with k selected eigenvectors.
SsfsConfig make_config(SsfsVariant variant, int k);

// End-to-end ranking: similarity graph, Laplacian basis (the leading
// eigenvector is dropped as trivial), pseudo-label binarization, stability
// selection, surrogate scoring on the full data, and max aggregation.
// Expects x to be normalized already.
FeatureRanking ssfs_rank(const DataMatrix& x, const SsfsConfig& cfg);

// Column-wise maximum of per-eigenvector score rows (each summing to 1).
Eigen::VectorXd aggregate_max(const Eigen::MatrixXd& per_vector_scores);

// First l entries of the ranking order.
std::vector<int> top_features(const FeatureRanking& r, int l);

// Parses/prints the variant names used by the CLI:
// full, no-selection, no-gbt, regression, no-selection-regression.
SsfsVariant parse_variant(const std::string& name);
std::string variant_name(SsfsVariant v);

} // namespace ssfs
