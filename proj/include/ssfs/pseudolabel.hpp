#pragma once
#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ssfs/graph.hpp"

namespace ssfs {

// Globally optimal 2-medoid split of a 1-D vector.
// labels are canonical: class 1 is the class of the larger medoid; points
// equidistant from both medoids go to the lower one.
struct KMedoidsResult {
    std::vector<int> labels;  // length n, values 0/1, both classes present
    double medoid_low = 0.0;  // strictly less than medoid_high
    double medoid_high = 0.0;
    double cost = 0.0;  // sum of absolute deviations from assigned medoids
};

// Binary pseudo-labels derived from eigenvector binarization.
struct PseudoLabelSet {
    std::vector<std::vector<int>> labels;
    std::vector<std::pair<double, double>> medoids;  // (low, high) per vector
    std::vector<double> source_eigenvalues;
    std::vector<int> source_indices;    // column in the originating basis
    std::vector<int> excluded_indices;  // constant eigenvectors skipped
};

// Exact 1-D 2-medoids: sorts the values, scans the contiguous split points,
// takes the (lower) median of each run as its medoid. O(n log n).
// Throws "constant eigenvector" when all values are identical.
KMedoidsResult kmedoids_1d(const Eigen::VectorXd& v);

// Applies kmedoids_1d to every eigenvector column. When skip_trivial, a
// near-constant leading column (value range < 1e-6 at unit norm) is dropped
// first. Constant columns are excluded and their indices recorded.
// Throws when no usable eigenvector remains.
PseudoLabelSet binarize_basis(const SpectralBasis& basis, bool skip_trivial);

} // namespace ssfs
