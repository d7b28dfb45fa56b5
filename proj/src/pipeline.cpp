#include "ssfs/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ssfs/parallel.hpp"
#include "ssfs/pseudolabel.hpp"

namespace ssfs {

namespace {

bool is_regression(SsfsVariant v) {
    return v == SsfsVariant::regression || v == SsfsVariant::no_selection_regression;
}

bool uses_selection(SsfsVariant v) {
    return v == SsfsVariant::full || v == SsfsVariant::no_gbt || v == SsfsVariant::regression;
}

} // namespace

void SsfsConfig::validate() const {
    const int d = effective_d();
    if (num_select_k < 1) throw std::runtime_error("k must be at least 1");
    if (num_select_k > d) throw std::runtime_error("k exceeds the number of candidate eigenvectors");
    if (resamples < 2) throw std::runtime_error("need at least 2 resamples");
    if (subsample_fraction <= 0.0 || subsample_fraction > 1.0)
        throw std::runtime_error("fraction out of range");
    if (neighbor_k < 1) throw std::runtime_error("neighbor_k must be at least 1");
    if (bandwidth_mode == BandwidthMode::fixed && fixed_sigma <= 0.0)
        throw std::runtime_error("nonpositive bandwidth");
    selector_spec.validate();
    scorer_spec.validate();
    const bool reg = is_regression(variant);
    const bool scorer_reg = scorer_spec.kind == SurrogateKind::ridge ||
                            scorer_spec.kind == SurrogateKind::gbt_regressor;
    if (reg != scorer_reg)
        throw std::runtime_error("scorer kind incompatible with the variant");
    if (uses_selection(variant)) {
        const bool selector_reg = selector_spec.kind == SurrogateKind::ridge ||
                                  selector_spec.kind == SurrogateKind::gbt_regressor;
        if (reg != selector_reg)
            throw std::runtime_error("selector kind incompatible with the variant");
    }
}

SsfsConfig make_config(SsfsVariant variant, int k) {
    SsfsConfig cfg;
    cfg.variant = variant;
    cfg.num_select_k = k;
    cfg.selector_spec.kind =
        is_regression(variant) ? SurrogateKind::ridge : SurrogateKind::logistic;
    if (variant == SsfsVariant::no_gbt)
        cfg.scorer_spec.kind = SurrogateKind::logistic;
    else
        cfg.scorer_spec.kind = is_regression(variant) ? SurrogateKind::gbt_regressor
                                                      : SurrogateKind::gbt_classifier;
    return cfg;
}

Eigen::VectorXd aggregate_max(const Eigen::MatrixXd& per_vector_scores) {
    if (per_vector_scores.rows() == 0 || per_vector_scores.cols() == 0)
        throw std::runtime_error("empty score matrix");
    for (int r = 0; r < per_vector_scores.rows(); ++r)
        if (std::abs(per_vector_scores.row(r).sum() - 1.0) > 1e-6)
            throw std::runtime_error("score row " + std::to_string(r) + " does not sum to 1");
    return per_vector_scores.colwise().maxCoeff().transpose();
}

std::vector<int> top_features(const FeatureRanking& r, int l) {
    const int p = static_cast<int>(r.order.size());
    if (l < 1 || l > p) throw std::runtime_error("requested feature count out of range");
    return {r.order.begin(), r.order.begin() + l};
}

FeatureRanking ssfs_rank(const DataMatrix& x, const SsfsConfig& cfg) {
    cfg.validate();
    const int n = x.n(), p = x.p();
    const int d = cfg.effective_d();
    if (d + 1 > n) throw std::runtime_error("too few samples for the requested eigenvectors");
    const int threads = resolve_threads(cfg.threads);

    // spectral basis; one extra pair so the trivial leading eigenvector can
    // be dropped and d candidates remain
    const Eigen::MatrixXd d2 = pairwise_sq_distances(x);
    const AffinityGraph g = cfg.bandwidth_mode == BandwidthMode::adaptive
                                ? gaussian_affinity(d2, adaptive_bandwidths(d2, cfg.neighbor_k))
                                : gaussian_affinity(d2, cfg.fixed_sigma);
    const Eigen::MatrixXd l = laplacian(g, cfg.laplacian_variant);
    const SpectralBasis basis = smallest_eigenpairs(l, d + 1, cfg.laplacian_variant);

    SpectralBasis nontrivial;
    nontrivial.laplacian_variant = basis.laplacian_variant;
    nontrivial.degenerate_gap = basis.degenerate_gap;
    nontrivial.eigenvalues = basis.eigenvalues.tail(d);
    nontrivial.eigenvectors = basis.eigenvectors.rightCols(d);

    // targets: binarized pseudo-labels, or the eigenvectors themselves
    std::vector<Eigen::VectorXd> targets;
    std::vector<double> tie_break;
    std::vector<int> stream_ids;
    if (is_regression(cfg.variant)) {
        for (int j = 0; j < d; ++j) {
            targets.emplace_back(nontrivial.eigenvectors.col(j));
            tie_break.push_back(nontrivial.eigenvalues(j));
            stream_ids.push_back(j + 1);  // position in the full basis
        }
    } else {
        const PseudoLabelSet pl = binarize_basis(nontrivial, false);
        if (static_cast<int>(pl.labels.size()) < cfg.num_select_k)
            throw std::runtime_error("fewer usable pseudo-labels than k");
        for (std::size_t j = 0; j < pl.labels.size(); ++j) {
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i)
                y(i) = static_cast<double>(pl.labels[j][static_cast<std::size_t>(i)]);
            targets.push_back(std::move(y));
            tie_break.push_back(pl.source_eigenvalues[j]);
            stream_ids.push_back(pl.source_indices[j] + 1);  // position in the full basis
        }
    }

    // eigenvector selection
    std::vector<int> selected;
    std::vector<double> stability;
    if (uses_selection(cfg.variant)) {
        const StabilityReport rep =
            select_targets(x, targets, tie_break, stream_ids, cfg.num_select_k,
                           cfg.selector_spec, cfg.resamples, cfg.subsample_fraction,
                           cfg.seed, threads);
        selected = rep.selected;
        stability.assign(rep.per_vector_variance_sum.data(),
                         rep.per_vector_variance_sum.data() + rep.per_vector_variance_sum.size());
    } else {
        selected.resize(static_cast<std::size_t>(cfg.num_select_k));
        std::iota(selected.begin(), selected.end(), 0);
    }

    // score every selected target's surrogate on the full data
    FeatureRanking out;
    out.selected_eigenvectors = selected;
    out.stability_scores = std::move(stability);
    out.feature_names = x.feature_names;
    out.per_eigenvector_scores.resize(static_cast<int>(selected.size()), p);
    parallel_for(static_cast<int>(selected.size()), threads, [&](int r) {
        const Eigen::VectorXd& y = targets[static_cast<std::size_t>(selected[static_cast<std::size_t>(r)])];
        const TrainedModel model = fit_surrogate(x, y, cfg.scorer_spec);
        out.per_eigenvector_scores.row(r) = feature_scores(model).transpose();
    });

    out.scores = aggregate_max(out.per_eigenvector_scores);
    out.order.resize(static_cast<std::size_t>(p));
    std::iota(out.order.begin(), out.order.end(), 0);
    std::sort(out.order.begin(), out.order.end(), [&](int a, int b) {
        if (out.scores(a) != out.scores(b)) return out.scores(a) > out.scores(b);
        return a < b;
    });
    return out;
}

SsfsVariant parse_variant(const std::string& name) {
    if (name == "full") return SsfsVariant::full;
    if (name == "no-selection") return SsfsVariant::no_selection;
    if (name == "no-gbt") return SsfsVariant::no_gbt;
    if (name == "regression") return SsfsVariant::regression;
    if (name == "no-selection-regression") return SsfsVariant::no_selection_regression;
    throw std::runtime_error(
        "unknown variant '" + name +
        "' (expected full, no-selection, no-gbt, regression, no-selection-regression)");
}

std::string variant_name(SsfsVariant v) {
    switch (v) {
        case SsfsVariant::full: return "full";
        case SsfsVariant::no_selection: return "no-selection";
        case SsfsVariant::no_gbt: return "no-gbt";
        case SsfsVariant::regression: return "regression";
        case SsfsVariant::no_selection_regression: return "no-selection-regression";
    }
    return "full";
}

} // namespace ssfs
