#pragma once
#include <Eigen/Dense>

#include "ssfs/dataio.hpp"

namespace ssfs {

enum class BandwidthMode { fixed, adaptive };
enum class LaplacianVariant { unnormalized, symmetric_normalized };

// Gaussian similarity graph over the samples.
// weights is symmetric with unit diagonal and entries in [0,1];
// degrees are the row sums and are strictly positive.
struct AffinityGraph {
    Eigen::MatrixXd weights;
    Eigen::VectorXd degrees;
    BandwidthMode bandwidth_mode = BandwidthMode::fixed;
};

// The d algebraically smallest eigenpairs of a Laplacian.
// Eigenvalues ascend; eigenvector columns are unit-norm with a deterministic
// sign (largest-magnitude entry positive, earliest index on ties).
// degenerate_gap records that the next eigenvalue beyond the basis coincides
// with the last kept one within 1e-10.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    LaplacianVariant laplacian_variant = LaplacianVariant::unnormalized;
    bool degenerate_gap = false;
};

// Squared Euclidean distances between all sample pairs: symmetric,
// zero diagonal, nonnegative.
Eigen::MatrixXd pairwise_sq_distances(const DataMatrix& x);

// Per-point bandwidth: sigma_i is the distance from point i to its
// neighbor_k-th nearest distinct neighbor (self excluded). If duplicates make
// that distance zero, sigma_i falls back to the smallest positive neighbor
// distance; if all points coincide the metric is degenerate and this throws.
Eigen::VectorXd adaptive_bandwidths(const Eigen::MatrixXd& d2, int neighbor_k);

// W_ij = exp(-d2_ij / (2 sigma_i sigma_j)); the fixed overload uses a single
// sigma for all points. The diagonal is exactly 1.
AffinityGraph gaussian_affinity(const Eigen::MatrixXd& d2, const Eigen::VectorXd& bandwidths);
AffinityGraph gaussian_affinity(const Eigen::MatrixXd& d2, double sigma);

// Unnormalized L = D - W or symmetric-normalized L = I - D^{-1/2} W D^{-1/2}.
Eigen::MatrixXd laplacian(const AffinityGraph& g, LaplacianVariant variant);

// The d smallest eigenpairs of a symmetric matrix. Dense decomposition up to
// n <= 4000; shift-invert Lanczos above that. Residuals satisfy
// ||L v - lambda v|| <= 1e-6 per pair.
SpectralBasis smallest_eigenpairs(const Eigen::MatrixXd& l, int d,
                                  LaplacianVariant variant = LaplacianVariant::unnormalized);

// The two paths behind smallest_eigenpairs, callable directly.
// The iterative path stops at residual tolerance `tol` or 10n iterations.
SpectralBasis smallest_eigenpairs_dense(const Eigen::MatrixXd& l, int d,
                                        LaplacianVariant variant);
SpectralBasis smallest_eigenpairs_iterative(const Eigen::MatrixXd& l, int d,
                                            LaplacianVariant variant, double tol = 1e-8);

// Per-feature smoothness f~' L f~ with f~ the column centered to zero mean
// and scaled to unit norm. Lower is smoother; constant columns score +inf.
Eigen::VectorXd laplacian_score(const DataMatrix& x, const Eigen::MatrixXd& l);

} // namespace ssfs
