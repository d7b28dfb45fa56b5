#include "ssfs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ssfs/rng.hpp"

namespace ssfs {

namespace {

// Flips each column so its largest-magnitude entry (earliest index on ties)
// is positive. Makes eigenvector output deterministic.
void canonicalize_signs(Eigen::MatrixXd& v) {
    for (int j = 0; j < v.cols(); ++j) {
        int arg = 0;
        double best = std::abs(v(0, j));
        for (int i = 1; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
    }
}

bool gap_degenerate(double kept, double next) { return std::abs(next - kept) < 1e-10; }

} // namespace

Eigen::MatrixXd pairwise_sq_distances(const DataMatrix& x) {
    const int n = x.n();
    Eigen::MatrixXd d2(n, n);
    for (int i = 0; i < n; ++i) {
        d2(i, i) = 0.0;
        for (int j = i + 1; j < n; ++j) {
            const double v = (x.values.row(i) - x.values.row(j)).squaredNorm();
            d2(i, j) = v;
            d2(j, i) = v;
        }
    }
    return d2;
}

Eigen::VectorXd adaptive_bandwidths(const Eigen::MatrixXd& d2, int neighbor_k) {
    const int n = static_cast<int>(d2.rows());
    if (neighbor_k < 1 || neighbor_k >= n)
        throw std::runtime_error("neighbor_k must be in [1, n-1]");
    Eigen::VectorXd sigma(n);
    std::vector<double> dist(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        int c = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) dist[static_cast<std::size_t>(c++)] = std::sqrt(d2(i, j));
        std::sort(dist.begin(), dist.end());
        double s = dist[static_cast<std::size_t>(neighbor_k - 1)];
        if (s <= 0.0) {
            // duplicates of point i: fall back to its nearest positive distance
            s = 0.0;
            for (double d : dist)
                if (d > 0.0) {
                    s = d;
                    break;
                }
            if (s <= 0.0) throw std::runtime_error("degenerate metric");
        }
        sigma(i) = s;
    }
    return sigma;
}

AffinityGraph gaussian_affinity(const Eigen::MatrixXd& d2, const Eigen::VectorXd& bandwidths) {
    const int n = static_cast<int>(d2.rows());
    if (bandwidths.size() != n) throw std::runtime_error("bandwidth vector length mismatch");
    if ((bandwidths.array() <= 0.0).any()) throw std::runtime_error("nonpositive bandwidth");
    AffinityGraph g;
    g.bandwidth_mode = BandwidthMode::adaptive;
    g.weights.resize(n, n);
    for (int i = 0; i < n; ++i) {
        g.weights(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double w = std::exp(-d2(i, j) / (2.0 * bandwidths(i) * bandwidths(j)));
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }
    g.degrees = g.weights.rowwise().sum();
    return g;
}

AffinityGraph gaussian_affinity(const Eigen::MatrixXd& d2, double sigma) {
    if (sigma <= 0.0) throw std::runtime_error("nonpositive bandwidth");
    AffinityGraph g = gaussian_affinity(d2, Eigen::VectorXd::Constant(d2.rows(), sigma));
    g.bandwidth_mode = BandwidthMode::fixed;
    return g;
}

Eigen::MatrixXd laplacian(const AffinityGraph& g, LaplacianVariant variant) {
    const int n = static_cast<int>(g.weights.rows());
    if ((g.degrees.array() <= 0.0).any()) throw std::runtime_error("zero-degree node");
    Eigen::MatrixXd l;
    if (variant == LaplacianVariant::unnormalized) {
        l = -g.weights;
        l.diagonal() += g.degrees;
    } else {
        const Eigen::VectorXd inv_sqrt = g.degrees.array().rsqrt();
        l = -(inv_sqrt * inv_sqrt.transpose()).cwiseProduct(g.weights);
        l.diagonal().array() += 1.0;
        l = ((l + l.transpose()) * 0.5).eval();  // enforce exact symmetry
    }
    (void)n;
    return l;
}

SpectralBasis smallest_eigenpairs_dense(const Eigen::MatrixXd& l, int d,
                                        LaplacianVariant variant) {
    const int n = static_cast<int>(l.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    SpectralBasis b;
    b.laplacian_variant = variant;
    b.eigenvalues = es.eigenvalues().head(d);
    b.eigenvectors = es.eigenvectors().leftCols(d);
    if (d < n) b.degenerate_gap = gap_degenerate(es.eigenvalues()(d - 1), es.eigenvalues()(d));
    canonicalize_signs(b.eigenvectors);
    return b;
}

SpectralBasis smallest_eigenpairs_iterative(const Eigen::MatrixXd& l, int d,
                                            LaplacianVariant variant, double tol) {
    const int n = static_cast<int>(l.rows());
    const int want = std::min(d + 1, n);  // one extra pair for the gap flag

    // Shift-invert: factor A = L + eps*I once, run Lanczos on A^{-1} whose
    // dominant eigenvalues map to the smallest eigenvalues of L.
    double eps = 1e-3;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0;; ++attempt) {
        Eigen::MatrixXd a = l;
        a.diagonal().array() += eps;
        llt.compute(a);
        if (llt.info() == Eigen::Success) break;
        if (attempt >= 6) throw std::runtime_error("shift-invert factorization failed");
        eps *= 10.0;
    }

    const int max_steps = std::min(n, 10 * n);
    Eigen::MatrixXd v(n, std::min(max_steps, n));
    std::vector<double> alpha, beta;

    // deterministic pseudo-random start vector
    Rng rng(hash_seed(0x5eed5eedULL, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)));
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.normal();
    w /= w.norm();
    v.col(0) = w;

    SpectralBasis b;
    b.laplacian_variant = variant;

    int j = 0;
    while (true) {
        Eigen::VectorXd u = llt.solve(v.col(j));
        const double a = v.col(j).dot(u);
        alpha.push_back(a);
        u -= a * v.col(j);
        if (j > 0) u -= beta.back() * v.col(j - 1);
        // full reorthogonalization, twice for numerical safety
        for (int pass = 0; pass < 2; ++pass)
            u -= v.leftCols(j + 1) * (v.leftCols(j + 1).transpose() * u);
        const double bnorm = u.norm();
        const int m = j + 1;

        // Ritz extraction from the tridiagonal section
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
        for (int i = 0; i + 1 < m; ++i)
            t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(t);

        bool converged = m >= want;
        if (converged) {
            for (int r = 0; r < want; ++r) {
                const int col = m - 1 - r;  // largest Ritz values of A^{-1}
                const double bound = bnorm * std::abs(tes.eigenvectors()(m - 1, col));
                if (bound > tol * std::max(1.0, std::abs(tes.eigenvalues()(col)))) {
                    converged = false;
                    break;
                }
            }
        }
        if ((converged || bnorm < 1e-14 || m >= max_steps || m == n) && m >= want) {
            Eigen::VectorXd vals(want);
            Eigen::MatrixXd vecs(n, want);
            for (int r = 0; r < want; ++r) {
                const int col = m - 1 - r;  // descending Ritz value = ascending eigenvalue
                vals(r) = 1.0 / tes.eigenvalues()(col) - eps;
                vecs.col(r) = v.leftCols(m) * tes.eigenvectors().col(col);
            }
            for (int c = 0; c < want; ++c) vecs.col(c) /= vecs.col(c).norm();
            // explicit residual check on L itself
            double worst = 0.0;
            for (int c = 0; c < want; ++c)
                worst = std::max(worst, (l * vecs.col(c) - vals(c) * vecs.col(c)).norm());
            if (worst <= 1e-6 || m >= max_steps || m == n) {
                if (worst > 1e-6)
                    throw std::runtime_error("iterative eigensolver failed to converge");
                b.eigenvalues = vals.head(d);
                b.eigenvectors = vecs.leftCols(d);
                if (want > d) b.degenerate_gap = gap_degenerate(vals(d - 1), vals(d));
                canonicalize_signs(b.eigenvectors);
                return b;
            }
        }
        if (bnorm < 1e-14 || m == n || m >= max_steps) {
            // invariant subspace hit before convergence; restart not implemented
            throw std::runtime_error("iterative eigensolver failed to converge");
        }
        beta.push_back(bnorm);
        v.col(m) = u / bnorm;
        j = m;
    }
}

SpectralBasis smallest_eigenpairs(const Eigen::MatrixXd& l, int d, LaplacianVariant variant) {
    const int n = static_cast<int>(l.rows());
    if (d < 1) throw std::runtime_error("d must be at least 1");
    if (d > n) throw std::runtime_error("d exceeds matrix size");
    if (n <= 4000) return smallest_eigenpairs_dense(l, d, variant);
    return smallest_eigenpairs_iterative(l, d, variant);
}

Eigen::VectorXd laplacian_score(const DataMatrix& x, const Eigen::MatrixXd& l) {
    const int n = x.n(), p = x.p();
    if (static_cast<int>(l.rows()) != n) throw std::runtime_error("matrix size mismatch");
    Eigen::VectorXd scores(p);
    for (int j = 0; j < p; ++j) {
        Eigen::VectorXd f = x.values.col(j);
        f.array() -= f.mean();
        const double norm = f.norm();
        if (norm < 1e-12) {
            scores(j) = std::numeric_limits<double>::infinity();
            continue;
        }
        f /= norm;
        scores(j) = f.dot(l * f);
    }
    return scores;
}

} // namespace ssfs
