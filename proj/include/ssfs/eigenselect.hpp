#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssfs/pseudolabel.hpp"
#include "ssfs/surrogate.hpp"

namespace ssfs {

// Outcome of stability selection over pseudo-label vectors.
struct StabilityReport {
    Eigen::VectorXd per_vector_variance_sum;  // S, length d
    std::vector<int> selected;                // k positions, ascending
    Eigen::MatrixXd per_feature_variances;    // d x p
    int resample_count = 0;
    double subsample_fraction = 1.0;
};

// ceil(fraction * n) distinct indices drawn uniformly without replacement,
// deterministic for a given seed.
std::vector<int> subsample_indices(int n, double fraction, std::uint64_t rng_seed);

// Resampling variance of the surrogate's per-feature importance scores for a
// single target vector: fits b models on b subsamples and returns the sample
// variance (b-1 denominator) per feature. For binary targets, subsamples that
// lose a class are redrawn up to 100 times, then the call fails.
Eigen::VectorXd score_variances(const DataMatrix& x, const Eigen::VectorXd& y,
                                const SurrogateSpec& spec, int b, double fraction,
                                std::uint64_t rng_seed);

// Stability selection: S_i is the summed importance variance of pseudo-label
// vector i across b subsample refits; the k smallest S are selected, ties
// broken by smaller source eigenvalue, then lower position. Each
// (source eigenvector, resample) pair draws from its own hashed seed, so the
// result is independent of evaluation order and thread count.
StabilityReport select_eigenvectors(const DataMatrix& x, const PseudoLabelSet& pl, int k,
                                    const SurrogateSpec& spec, int b, double fraction,
                                    std::uint64_t rng_seed, int threads = 1);

// Same selection over arbitrary real-valued target vectors (used when the
// targets are eigenvectors themselves rather than binarized labels).
// stream_ids names the seed stream of each target.
StabilityReport select_targets(const DataMatrix& x,
                               const std::vector<Eigen::VectorXd>& targets,
                               const std::vector<double>& tie_break_values,
                               const std::vector<int>& stream_ids, int k,
                               const SurrogateSpec& spec, int b, double fraction,
                               std::uint64_t rng_seed, int threads = 1);

} // namespace ssfs
