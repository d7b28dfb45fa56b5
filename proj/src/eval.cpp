#include "ssfs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "ssfs/rng.hpp"

namespace ssfs {

namespace {

// Remaps arbitrary integer ids to 0..c-1 by first appearance.
std::vector<int> compress_ids(const std::vector<int>& v, int& count) {
    std::unordered_map<int, int> ids;
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto [it, inserted] = ids.emplace(v[i], static_cast<int>(ids.size()));
        out[i] = it->second;
    }
    count = static_cast<int>(ids.size());
    return out;
}

// Maximum-total assignment on a square nonnegative matrix via the Hungarian
// algorithm with potentials (minimizes the negated matrix), O(K^3).
double max_assignment(const Eigen::MatrixXd& score) {
    const int k = static_cast<int>(score.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(k) + 1, 0);  // column -> row
    for (int i = 1; i <= k; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(k) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(k) + 1, false);
        std::vector<int> way(static_cast<std::size_t>(k) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (int j = 1; j <= k; ++j)
        if (match[static_cast<std::size_t>(j)] > 0)
            total += score(match[static_cast<std::size_t>(j)] - 1, j - 1);
    return total;
}

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // population standard deviation
};

Summary summarize(const std::vector<double>& v) {
    Summary s;
    if (v.empty()) return s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size()));
    return s;
}

} // namespace

ClusteringResult kmeans(const DataMatrix& x, int k, int restarts, int max_iter,
                        std::uint64_t rng_seed) {
    const int n = x.n(), p = x.p();
    if (k < 1 || k > n) throw std::runtime_error("k must lie in [1, n]");
    if (restarts < 1) throw std::runtime_error("need at least 1 restart");

    ClusteringResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    best.restarts_used = restarts;

    for (int r = 0; r < restarts; ++r) {
        Rng rng(hash_seed(rng_seed, static_cast<std::uint64_t>(r), 0x6b6dULL));

        // k-means++ seeding
        Eigen::MatrixXd centers(k, p);
        centers.row(0) = x.values.row(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
        Eigen::VectorXd d2 = (x.values.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = d2.sum();
            int pick;
            if (total <= 0.0) {
                pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            } else {
                const double target = rng.uniform() * total;
                double cum = 0.0;
                pick = n - 1;
                for (int i = 0; i < n; ++i) {
                    cum += d2(i);
                    if (cum > target) {
                        pick = i;
                        break;
                    }
                }
            }
            centers.row(c) = x.values.row(pick);
            d2 = d2.cwiseMin((x.values.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        // Lloyd sweeps
        std::vector<int> assign(static_cast<std::size_t>(n), -1);
        for (int it = 0; it < max_iter; ++it) {
            bool changed = false;
            for (int i = 0; i < n; ++i) {
                int arg = 0;
                double bestd = (x.values.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double dd = (x.values.row(i) - centers.row(c)).squaredNorm();
                    if (dd < bestd) {
                        bestd = dd;
                        arg = c;
                    }
                }
                if (assign[static_cast<std::size_t>(i)] != arg) {
                    assign[static_cast<std::size_t>(i)] = arg;
                    changed = true;
                }
            }
            if (!changed) break;

            centers.setZero();
            std::vector<int> size(static_cast<std::size_t>(k), 0);
            for (int i = 0; i < n; ++i) {
                centers.row(assign[static_cast<std::size_t>(i)]) += x.values.row(i);
                ++size[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
            }
            for (int c = 0; c < k; ++c)
                if (size[static_cast<std::size_t>(c)] > 0)
                    centers.row(c) /= static_cast<double>(size[static_cast<std::size_t>(c)]);

            // re-seed empties from the farthest point still in a full cluster
            for (int c = 0; c < k; ++c) {
                if (size[static_cast<std::size_t>(c)] > 0) continue;
                int far = -1;
                double fard = -1.0;
                for (int i = 0; i < n; ++i) {
                    const int a = assign[static_cast<std::size_t>(i)];
                    if (size[static_cast<std::size_t>(a)] <= 1) continue;
                    const double dd = (x.values.row(i) - centers.row(a)).squaredNorm();
                    if (dd > fard) {
                        fard = dd;
                        far = i;
                    }
                }
                if (far < 0) continue;
                const int old = assign[static_cast<std::size_t>(far)];
                centers.row(c) = x.values.row(far);
                assign[static_cast<std::size_t>(far)] = c;
                --size[static_cast<std::size_t>(old)];
                size[static_cast<std::size_t>(c)] = 1;
            }
        }

        double inertia = 0.0;
        for (int i = 0; i < n; ++i)
            inertia += (x.values.row(i) - centers.row(assign[static_cast<std::size_t>(i)]))
                           .squaredNorm();
        if (inertia < best.inertia) {
            best.inertia = inertia;
            best.assignments = assign;
        }
    }
    return best;
}

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw std::runtime_error("length mismatch");
    const int n = static_cast<int>(pred.size());
    if (n == 0) throw std::runtime_error("empty partitions");
    int kp = 0, kt = 0;
    const std::vector<int> a = compress_ids(pred, kp);
    const std::vector<int> b = compress_ids(truth, kt);
    const int k = std::max(kp, kt);
    Eigen::MatrixXd confusion = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < n; ++i)
        confusion(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]) += 1.0;
    return max_assignment(confusion) / static_cast<double>(n);
}

double variation_of_information(const std::vector<int>& c1, const std::vector<int>& c2) {
    if (c1.size() != c2.size()) throw std::runtime_error("length mismatch");
    const int n = static_cast<int>(c1.size());
    if (n == 0) throw std::runtime_error("empty partitions");
    int k1 = 0, k2 = 0;
    const std::vector<int> a = compress_ids(c1, k1);
    const std::vector<int> b = compress_ids(c2, k2);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(k1, k2);
    for (int i = 0; i < n; ++i)
        joint(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]) += 1.0;
    joint /= static_cast<double>(n);
    const Eigen::VectorXd p1 = joint.rowwise().sum();
    const Eigen::VectorXd p2 = joint.colwise().sum();
    double h1 = 0.0, h2 = 0.0, mi = 0.0;
    for (int i = 0; i < k1; ++i)
        if (p1(i) > 0.0) h1 -= p1(i) * std::log(p1(i));
    for (int j = 0; j < k2; ++j)
        if (p2(j) > 0.0) h2 -= p2(j) * std::log(p2(j));
    for (int i = 0; i < k1; ++i)
        for (int j = 0; j < k2; ++j)
            if (joint(i, j) > 0.0) mi += joint(i, j) * std::log(joint(i, j) / (p1(i) * p2(j)));
    return std::max(0.0, h1 + h2 - 2.0 * mi);
}

StabilitySummary stability_analysis(const DataMatrix& x_selected, int k, int runs,
                                    std::uint64_t rng_seed) {
    if (runs < 2) throw std::runtime_error("need at least 2 runs");
    std::vector<std::vector<int>> parts;
    parts.reserve(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r)
        parts.push_back(
            kmeans(x_selected, k, 1, 300, hash_seed(rng_seed, static_cast<std::uint64_t>(r), 1))
                .assignments);
    StabilitySummary s;
    for (int i = 0; i < runs; ++i)
        for (int j = i + 1; j < runs; ++j)
            s.vi_values.push_back(variation_of_information(parts[static_cast<std::size_t>(i)],
                                                           parts[static_cast<std::size_t>(j)]));
    const Summary sum = summarize(s.vi_values);
    s.mean_vi = sum.mean;
    s.std_vi = sum.sd;
    return s;
}

AccuracyCurve accuracy_curve(const LabeledDataset& ds, const FeatureRanking& ranking,
                             const std::vector<int>& counts, int k, int kmeans_runs,
                             std::uint64_t rng_seed) {
    if (kmeans_runs < 1) throw std::runtime_error("need at least 1 run");
    const int p = ds.data.p();
    const int rank_len = static_cast<int>(ranking.order.size());
    AccuracyCurve curve;
    for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        const int c = counts[ci];
        if (c < 1 || c > p || c > rank_len) {
            curve.skipped_counts.push_back(c);
            continue;
        }
        DataMatrix sub;
        sub.values.resize(ds.data.n(), c);
        for (int j = 0; j < c; ++j)
            sub.values.col(j) = ds.data.values.col(ranking.order[static_cast<std::size_t>(j)]);
        std::vector<double> accs;
        accs.reserve(static_cast<std::size_t>(kmeans_runs));
        for (int r = 0; r < kmeans_runs; ++r) {
            const ClusteringResult cl =
                kmeans(sub, k, 1, 300,
                       hash_seed(rng_seed, static_cast<std::uint64_t>(ci),
                                 static_cast<std::uint64_t>(r)));
            accs.push_back(clustering_accuracy(cl.assignments, ds.labels));
        }
        const Summary s = summarize(accs);
        curve.feature_counts.push_back(c);
        curve.mean_acc.push_back(s.mean);
        curve.std_acc.push_back(s.sd);
    }
    return curve;
}

} // namespace ssfs
