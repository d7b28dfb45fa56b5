#include "ssfs/pseudolabel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssfs {

namespace {

// Cost of serving sorted[lo..hi] (inclusive) by its lower-median element,
// via the prefix sums pre[i] = sum of sorted[0..i-1].
// Returns {cost, medoid value}.
std::pair<double, double> run_cost(const std::vector<double>& sorted,
                                   const std::vector<double>& pre, int lo, int hi) {
    const int len = hi - lo + 1;
    const int m = lo + (len - 1) / 2;  // lower median
    const double med = sorted[static_cast<std::size_t>(m)];
    const double left = med * (m - lo + 1) - (pre[static_cast<std::size_t>(m + 1)] -
                                              pre[static_cast<std::size_t>(lo)]);
    const double right = (pre[static_cast<std::size_t>(hi + 1)] -
                          pre[static_cast<std::size_t>(m + 1)]) -
                         med * (hi - m);
    return {left + right, med};
}

} // namespace

KMedoidsResult kmedoids_1d(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    if (n < 2) throw std::runtime_error("need at least 2 values");

    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw std::runtime_error("constant eigenvector");

    std::vector<double> pre(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i)
        pre[static_cast<std::size_t>(i + 1)] = pre[static_cast<std::size_t>(i)] +
                                               sorted[static_cast<std::size_t>(i)];

    double best_cost = std::numeric_limits<double>::infinity();
    double best_m0 = 0.0, best_m1 = 0.0;
    for (int t = 1; t < n; ++t) {  // right run starts at sorted[t]
        const auto [cl, ml] = run_cost(sorted, pre, 0, t - 1);
        const auto [cr, mr] = run_cost(sorted, pre, t, n - 1);
        if (cl + cr < best_cost) {
            best_cost = cl + cr;
            best_m0 = ml;
            best_m1 = mr;
        }
    }

    KMedoidsResult res;
    res.medoid_low = best_m0;
    res.medoid_high = best_m1;
    res.labels.resize(static_cast<std::size_t>(n));
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d0 = std::abs(v(i) - best_m0);
        const double d1 = std::abs(v(i) - best_m1);
        const int lab = d1 < d0 ? 1 : 0;  // ties go to the lower medoid
        res.labels[static_cast<std::size_t>(i)] = lab;
        cost += lab ? d1 : d0;
    }
    res.cost = cost;
    return res;
}

PseudoLabelSet binarize_basis(const SpectralBasis& basis, bool skip_trivial) {
    const int d = static_cast<int>(basis.eigenvectors.cols());
    if (d < 1) throw std::runtime_error("basis has no eigenvectors");

    int start = 0;
    if (skip_trivial) {
        Eigen::VectorXd lead = basis.eigenvectors.col(0);
        const double norm = lead.norm();
        if (norm > 0.0) lead /= norm;
        if (lead.maxCoeff() - lead.minCoeff() < 1e-6) start = 1;
    }

    PseudoLabelSet out;
    for (int j = start; j < d; ++j) {
        try {
            KMedoidsResult r = kmedoids_1d(basis.eigenvectors.col(j));
            out.labels.push_back(std::move(r.labels));
            out.medoids.emplace_back(r.medoid_low, r.medoid_high);
            out.source_eigenvalues.push_back(basis.eigenvalues(j));
            out.source_indices.push_back(j);
        } catch (const std::runtime_error&) {
            out.excluded_indices.push_back(j);
        }
    }
    if (out.labels.empty()) throw std::runtime_error("no usable eigenvectors");
    return out;
}

} // namespace ssfs
