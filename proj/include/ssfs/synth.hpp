#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ssfs/dataio.hpp"
#include "ssfs/graph.hpp"
#include "ssfs/pipeline.hpp"

namespace ssfs {

enum class NuisanceKind { gaussian_blocks, laplace_copula };

// Two-cluster dataset: 5 informative features plus correlated nuisance.
struct SyntheticDataset {
    DataMatrix data;
    std::vector<int> true_labels;            // balanced 0/1
    std::vector<int> informative_features;   // always {0..4}
    NuisanceKind nuisance = NuisanceKind::gaussian_blocks;
    int num_nuisance = 0;
    int num_blocks = 0;
    std::uint64_t seed = 0;
};

// Samples over independent latent variables; each feature is a polynomial of
// exactly one latent, centered with unit empirical (root-mean-square) norm.
struct ManifoldSample {
    DataMatrix data;
    Eigen::MatrixXd latents;         // n x h, iid uniform [0,1]
    std::vector<int> feature_owner;  // length p, values in [0,h)
};

// Two isotropic Gaussian clusters (unit std, centers uniform in [-10,10]^5,
// balanced halves) in the first five features; nuisance features follow a
// block covariance (1.0 diagonal, 0.5 within blocks, 0.01 across) either as
// correlated Gaussians or pushed through unit-scale Laplace marginals.
// The informative block is drawn before the nuisance block, so a fixed seed
// yields the same clusters for any nuisance count. num_nuisance must split
// evenly into num_blocks.
SyntheticDataset gen_blobs_with_nuisance(int n, NuisanceKind nuisance, int num_nuisance,
                                         std::uint64_t rng_seed, int num_blocks = 3);

// n iid uniform samples on [0,1] as a single-column matrix.
DataMatrix gen_interval_samples(int n, std::uint64_t rng_seed);

// |Pearson correlation| between an eigenvector and cos(k*pi*x) at the sample
// positions; sign-free alignment in [0,1].
double interval_eigenfunction_alignment(const Eigen::VectorXd& v, const Eigen::VectorXd& x,
                                        int k);

// h latents, features_per_latent polynomial features per latent. Degrees
// cycle through poly_degrees in feature order; coefficients are uniform in
// [-1,1]; numerically constant polynomials are redrawn (up to 100 times).
ManifoldSample gen_product_manifold(int n, int h, int features_per_latent,
                                    const std::vector<int>& poly_degrees,
                                    std::uint64_t rng_seed);

// p x d matrix of |f~' v|: every feature column recentered and scaled to a
// unit vector against every eigenvector of the basis.
Eigen::MatrixXd eigenfunction_inner_products(const ManifoldSample& ms,
                                             const SpectralBasis& basis);

// |top-k of the ranking intersected with truth| / min(k, |truth|).
double recall_at_k(const FeatureRanking& r, const std::vector<int>& truth, int k);

NuisanceKind parse_nuisance(const std::string& name);
std::string nuisance_name(NuisanceKind k);

} // namespace ssfs
