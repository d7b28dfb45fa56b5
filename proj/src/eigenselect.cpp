#include "ssfs/eigenselect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssfs/parallel.hpp"
#include "ssfs/rng.hpp"

namespace ssfs {

namespace {

int subsample_size(int n, double fraction) {
    if (fraction <= 0.0 || fraction > 1.0) throw std::runtime_error("fraction out of range");
    // ceil(fraction*n), robust to fraction*n landing a hair above an integer
    const int m = static_cast<int>(std::ceil(fraction * n - 1e-9));
    if (m < 2) throw std::runtime_error("subsample smaller than 2 samples");
    return std::min(m, n);
}

bool needs_both_classes(const SurrogateSpec& spec) {
    return spec.kind == SurrogateKind::logistic || spec.kind == SurrogateKind::gbt_classifier;
}

// One resample draw for stream (seed, stream_id, b): indices plus the redraw
// rule that keeps binary targets two-class.
std::vector<int> draw_indices(const Eigen::VectorXd& y, bool binary, int n, int m,
                              std::uint64_t master, int stream_id, int b) {
    Rng rng(hash_seed(master, static_cast<std::uint64_t>(stream_id),
                      static_cast<std::uint64_t>(b)));
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<int> idx = rng.sample_without_replacement(n, m);
        if (!binary) return idx;
        bool has0 = false, has1 = false;
        for (int i : idx) {
            if (y(i) == 0.0)
                has0 = true;
            else
                has1 = true;
        }
        if (has0 && has1) return idx;
    }
    throw std::runtime_error("eigenvector stream " + std::to_string(stream_id) +
                             ": subsample lost a class in 100 redraws");
}

// Raw importance rows for all b resamples of one target vector.
Eigen::MatrixXd importance_rows(const DataMatrix& x, const Eigen::VectorXd& y,
                                const SurrogateSpec& spec, int b, int m,
                                std::uint64_t master, int stream_id) {
    const int n = x.n(), p = x.p();
    const bool binary = needs_both_classes(spec);
    Eigen::MatrixXd rows(b, p);
    for (int rb = 0; rb < b; ++rb) {
        const std::vector<int> idx = draw_indices(y, binary, n, m, master, stream_id, rb);
        DataMatrix sub;
        sub.values.resize(m, p);
        Eigen::VectorXd ysub(m);
        for (int i = 0; i < m; ++i) {
            sub.values.row(i) = x.values.row(idx[static_cast<std::size_t>(i)]);
            ysub(i) = y(idx[static_cast<std::size_t>(i)]);
        }
        rows.row(rb) = fit_surrogate(sub, ysub, spec).raw_importances.transpose();
    }
    return rows;
}

// Two-pass per-column sample variance with (b-1) denominator.
Eigen::VectorXd column_variances(const Eigen::MatrixXd& rows) {
    const int b = static_cast<int>(rows.rows());
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    return (rows.rowwise() - mean).array().square().colwise().sum().transpose() / (b - 1);
}

} // namespace

std::vector<int> subsample_indices(int n, double fraction, std::uint64_t rng_seed) {
    const int m = subsample_size(n, fraction);
    Rng rng(rng_seed);
    return rng.sample_without_replacement(n, m);
}

Eigen::VectorXd score_variances(const DataMatrix& x, const Eigen::VectorXd& y,
                                const SurrogateSpec& spec, int b, double fraction,
                                std::uint64_t rng_seed) {
    if (b < 2) throw std::runtime_error("need at least 2 resamples");
    const int m = subsample_size(x.n(), fraction);
    return column_variances(importance_rows(x, y, spec, b, m, rng_seed, 0));
}

StabilityReport select_targets(const DataMatrix& x,
                               const std::vector<Eigen::VectorXd>& targets,
                               const std::vector<double>& tie_break_values,
                               const std::vector<int>& stream_ids, int k,
                               const SurrogateSpec& spec, int b, double fraction,
                               std::uint64_t rng_seed, int threads) {
    const int d = static_cast<int>(targets.size());
    if (k < 1 || k > d) throw std::runtime_error("k must lie in [1, number of targets]");
    if (b < 2) throw std::runtime_error("need at least 2 resamples");
    const int n = x.n(), p = x.p();
    const int m = subsample_size(n, fraction);

    // all (target, resample) fits are independent; flatten and parallelize
    Eigen::MatrixXd raw(d * b, p);
    const bool binary = needs_both_classes(spec);
    parallel_for(d * b, resolve_threads(threads), [&](int task) {
        const int t = task / b, rb = task % b;
        const Eigen::VectorXd& y = targets[static_cast<std::size_t>(t)];
        const std::vector<int> idx =
            draw_indices(y, binary, n, m, rng_seed, stream_ids[static_cast<std::size_t>(t)], rb);
        DataMatrix sub;
        sub.values.resize(m, p);
        Eigen::VectorXd ysub(m);
        for (int i = 0; i < m; ++i) {
            sub.values.row(i) = x.values.row(idx[static_cast<std::size_t>(i)]);
            ysub(i) = y(idx[static_cast<std::size_t>(i)]);
        }
        raw.row(task) = fit_surrogate(sub, ysub, spec).raw_importances.transpose();
    });

    StabilityReport rep;
    rep.resample_count = b;
    rep.subsample_fraction = fraction;
    rep.per_feature_variances.resize(d, p);
    rep.per_vector_variance_sum.resize(d);
    for (int t = 0; t < d; ++t) {
        rep.per_feature_variances.row(t) = column_variances(raw.middleRows(t * b, b)).transpose();
        rep.per_vector_variance_sum(t) = rep.per_feature_variances.row(t).sum();
    }

    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int c) {
        const double sa = rep.per_vector_variance_sum(a), sc = rep.per_vector_variance_sum(c);
        if (sa != sc) return sa < sc;
        const double ta = tie_break_values[static_cast<std::size_t>(a)];
        const double tc = tie_break_values[static_cast<std::size_t>(c)];
        if (ta != tc) return ta < tc;
        return a < c;
    });
    rep.selected.assign(order.begin(), order.begin() + k);
    std::sort(rep.selected.begin(), rep.selected.end());
    return rep;
}

StabilityReport select_eigenvectors(const DataMatrix& x, const PseudoLabelSet& pl, int k,
                                    const SurrogateSpec& spec, int b, double fraction,
                                    std::uint64_t rng_seed, int threads) {
    const int d = static_cast<int>(pl.labels.size());
    std::vector<Eigen::VectorXd> targets;
    targets.reserve(static_cast<std::size_t>(d));
    for (const auto& lab : pl.labels) {
        Eigen::VectorXd y(static_cast<int>(lab.size()));
        for (int i = 0; i < y.size(); ++i) y(i) = static_cast<double>(lab[static_cast<std::size_t>(i)]);
        targets.push_back(std::move(y));
    }
    return select_targets(x, targets, pl.source_eigenvalues, pl.source_indices, k, spec, b,
                          fraction, rng_seed, threads);
}

} // namespace ssfs
