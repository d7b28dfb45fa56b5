#include "ssfs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ssfs/rng.hpp"

namespace ssfs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double laplace_inverse_cdf(double u) {
    u = std::clamp(u, 1e-300, 1.0 - 1e-16);
    return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

// Block covariance: unit diagonal, 0.5 within a block, 0.01 across blocks.
Eigen::MatrixXd block_covariance(int p, int num_blocks) {
    const int block = p / num_blocks;
    Eigen::MatrixXd sigma(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            if (i == j)
                sigma(i, j) = 1.0;
            else
                sigma(i, j) = (i / block == j / block) ? 0.5 : 0.01;
        }
    return sigma;
}

} // namespace

SyntheticDataset gen_blobs_with_nuisance(int n, NuisanceKind nuisance, int num_nuisance,
                                         std::uint64_t rng_seed, int num_blocks) {
    if (n < 10) throw std::runtime_error("need at least 10 samples");
    if (num_nuisance < 0) throw std::runtime_error("negative nuisance count");
    if (num_nuisance > 0) {
        if (num_blocks < 1 || num_nuisance % num_blocks != 0)
            throw std::runtime_error("invalid block partition: " + std::to_string(num_nuisance) +
                                     " nuisance features into " + std::to_string(num_blocks) +
                                     " blocks");
    }

    const int informative = 5;
    const int p = informative + num_nuisance;
    Rng rng(rng_seed);

    SyntheticDataset ds;
    ds.nuisance = nuisance;
    ds.num_nuisance = num_nuisance;
    ds.num_blocks = num_nuisance > 0 ? num_blocks : 0;
    ds.seed = rng_seed;
    ds.informative_features = {0, 1, 2, 3, 4};
    ds.data.values.resize(n, p);
    for (int j = 0; j < p; ++j) ds.data.feature_names.push_back("f" + std::to_string(j));

    // balanced halves
    const int n0 = n / 2;
    ds.true_labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ds.true_labels[static_cast<std::size_t>(i)] = i < n0 ? 0 : 1;

    // cluster centers, then the informative block (drawn before any nuisance
    // so the clusters are identical across nuisance counts at a fixed seed)
    Eigen::MatrixXd centers(2, informative);
    for (int c = 0; c < 2; ++c)
        for (int j = 0; j < informative; ++j) centers(c, j) = rng.uniform(-10.0, 10.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < informative; ++j)
            ds.data.values(i, j) =
                centers(ds.true_labels[static_cast<std::size_t>(i)], j) + rng.normal();

    if (num_nuisance > 0) {
        const Eigen::MatrixXd sigma = block_covariance(num_nuisance, num_blocks);
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("nuisance covariance not positive definite");
        const Eigen::MatrixXd chol = llt.matrixL();
        Eigen::VectorXd z(num_nuisance);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < num_nuisance; ++j) z(j) = rng.normal();
            Eigen::VectorXd g = chol * z;  // unit marginal variance
            if (nuisance == NuisanceKind::laplace_copula)
                for (int j = 0; j < num_nuisance; ++j)
                    g(j) = laplace_inverse_cdf(normal_cdf(g(j)));
            ds.data.values.row(i).tail(num_nuisance) = g.transpose();
        }
    }
    return ds;
}

DataMatrix gen_interval_samples(int n, std::uint64_t rng_seed) {
    if (n < 10) throw std::runtime_error("need at least 10 samples");
    Rng rng(rng_seed);
    DataMatrix m;
    m.values.resize(n, 1);
    for (int i = 0; i < n; ++i) m.values(i, 0) = rng.uniform();
    m.feature_names = {"x"};
    return m;
}

double interval_eigenfunction_alignment(const Eigen::VectorXd& v, const Eigen::VectorXd& x,
                                        int k) {
    if (v.size() != x.size()) throw std::runtime_error("length mismatch");
    const int n = static_cast<int>(v.size());
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g(i) = std::cos(k * kPi * x(i));
    const Eigen::VectorXd vc = v.array() - v.mean();
    const Eigen::VectorXd gc = g.array() - g.mean();
    const double denom = vc.norm() * gc.norm();
    if (denom < 1e-300) throw std::runtime_error("constant input");
    return std::abs(vc.dot(gc)) / denom;
}

ManifoldSample gen_product_manifold(int n, int h, int features_per_latent,
                                    const std::vector<int>& poly_degrees,
                                    std::uint64_t rng_seed) {
    if (n < 10) throw std::runtime_error("need at least 10 samples");
    if (h < 2) throw std::runtime_error("need at least 2 latents");
    if (features_per_latent < 1) throw std::runtime_error("need at least 1 feature per latent");
    if (poly_degrees.empty()) throw std::runtime_error("empty degree list");
    for (int deg : poly_degrees)
        if (deg < 1) throw std::runtime_error("polynomial degree must be at least 1");

    Rng rng(rng_seed);
    ManifoldSample ms;
    ms.latents.resize(n, h);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < h; ++j) ms.latents(i, j) = rng.uniform();

    const int p = h * features_per_latent;
    ms.data.values.resize(n, p);
    for (int f = 0; f < p; ++f) {
        const int owner = f / features_per_latent;
        const int degree = poly_degrees[static_cast<std::size_t>(f) % poly_degrees.size()];
        ms.feature_owner.push_back(owner);
        ms.data.feature_names.push_back("f" + std::to_string(f));

        Eigen::VectorXd col(n);
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            std::vector<double> coeff(static_cast<std::size_t>(degree) + 1);
            for (auto& c : coeff) c = rng.uniform(-1.0, 1.0);
            for (int i = 0; i < n; ++i) {
                const double t = ms.latents(i, owner);
                double v = 0.0;  // Horner evaluation, highest degree first
                for (double c : coeff) v = v * t + c;
                col(i) = v;
            }
            col.array() -= col.mean();
            const double rms = std::sqrt(col.squaredNorm() / n);
            if (rms > 1e-10) {
                col /= rms;
                ok = true;
            }
        }
        if (!ok) throw std::runtime_error("degenerate polynomial for feature " + std::to_string(f));
        ms.data.values.col(f) = col;
    }
    return ms;
}

Eigen::MatrixXd eigenfunction_inner_products(const ManifoldSample& ms,
                                             const SpectralBasis& basis) {
    const int n = ms.data.n(), p = ms.data.p();
    const int d = static_cast<int>(basis.eigenvectors.cols());
    if (static_cast<int>(basis.eigenvectors.rows()) != n)
        throw std::runtime_error("dimension mismatch");
    Eigen::MatrixXd out(p, d);
    for (int f = 0; f < p; ++f) {
        Eigen::VectorXd col = ms.data.values.col(f);
        col.array() -= col.mean();
        const double norm = col.norm();
        if (norm < 1e-300) throw std::runtime_error("constant feature");
        col /= norm;
        for (int b = 0; b < d; ++b) out(f, b) = std::abs(col.dot(basis.eigenvectors.col(b)));
    }
    return out;
}

double recall_at_k(const FeatureRanking& r, const std::vector<int>& truth, int k) {
    if (k < 1) throw std::runtime_error("k must be at least 1");
    if (truth.empty()) throw std::runtime_error("empty truth set");
    const std::set<int> truth_set(truth.begin(), truth.end());
    const int take = std::min<int>(k, static_cast<int>(r.order.size()));
    int hits = 0;
    for (int i = 0; i < take; ++i)
        if (truth_set.count(r.order[static_cast<std::size_t>(i)])) ++hits;
    return static_cast<double>(hits) /
           std::min<double>(static_cast<double>(k), static_cast<double>(truth_set.size()));
}

NuisanceKind parse_nuisance(const std::string& name) {
    if (name == "gaussian-blocks") return NuisanceKind::gaussian_blocks;
    if (name == "laplace-copula") return NuisanceKind::laplace_copula;
    throw std::runtime_error("unknown nuisance generator '" + name +
                             "' (expected gaussian-blocks or laplace-copula)");
}

std::string nuisance_name(NuisanceKind k) {
    return k == NuisanceKind::gaussian_blocks ? "gaussian-blocks" : "laplace-copula";
}

} // namespace ssfs
