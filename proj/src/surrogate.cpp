#include "ssfs/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssfs {

namespace {

double softplus(double z) {
    if (z > 30.0) return z;
    if (z < -30.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw std::runtime_error("non-finite input");
}

void check_binary_both_classes(const Eigen::VectorXd& y) {
    bool has0 = false, has1 = false;
    for (int i = 0; i < y.size(); ++i) {
        if (y(i) == 0.0)
            has0 = true;
        else if (y(i) == 1.0)
            has1 = true;
        else
            throw std::runtime_error("targets must be 0/1");
    }
    if (!has0 || !has1) throw std::runtime_error("single-class labels");
}

} // namespace

void SurrogateSpec::set(const std::string& key, double value) {
    if (key == "C")
        logistic_c = value;
    else if (key == "alpha")
        ridge_alpha = value;
    else if (key == "tol")
        tolerance = value;
    else if (key == "max_iter")
        max_iterations = static_cast<int>(value);
    else if (key == "rounds")
        gbt_rounds = static_cast<int>(value);
    else if (key == "depth")
        gbt_max_depth = static_cast<int>(value);
    else if (key == "learning_rate")
        gbt_learning_rate = value;
    else if (key == "min_child_weight")
        gbt_min_child_weight = value;
    else if (key == "lambda")
        gbt_lambda = value;
    else if (key == "base_score")
        gbt_base_score = value;
    else if (key == "seed")
        seed = static_cast<std::uint64_t>(value);
    else
        throw std::runtime_error("unknown hyperparameter '" + key + "'");
}

void SurrogateSpec::validate() const {
    if (logistic_c <= 0.0) throw std::runtime_error("C must be positive");
    if (ridge_alpha <= 0.0) throw std::runtime_error("alpha must be positive");
    if (tolerance <= 0.0) throw std::runtime_error("tol must be positive");
    if (max_iterations < 1) throw std::runtime_error("max_iter must be at least 1");
    if (gbt_rounds < 0) throw std::runtime_error("rounds must be nonnegative");
    if (gbt_max_depth < 0) throw std::runtime_error("depth must be nonnegative");
    if (gbt_learning_rate <= 0.0) throw std::runtime_error("learning_rate must be positive");
    if (gbt_min_child_weight < 0.0) throw std::runtime_error("min_child_weight must be nonnegative");
    if (gbt_lambda < 0.0) throw std::runtime_error("lambda must be nonnegative");
    if (gbt_base_score <= 0.0 || gbt_base_score >= 1.0)
        throw std::runtime_error("base_score must lie in (0,1)");
}

double logistic_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01,
                          const Eigen::VectorXd& beta, double intercept, double c) {
    const int n = static_cast<int>(x.rows());
    const Eigen::VectorXd eta = (x * beta).array() + intercept;
    double loss = 0.0;
    for (int i = 0; i < n; ++i) loss += softplus(eta(i)) - y01(i) * eta(i);
    loss /= n;
    loss += beta.squaredNorm() / (2.0 * c * n);
    return loss;
}

void logistic_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01,
                       const Eigen::VectorXd& beta, double intercept, double c,
                       Eigen::VectorXd& grad_beta, double& grad_intercept) {
    const int n = static_cast<int>(x.rows());
    const Eigen::VectorXd eta = (x * beta).array() + intercept;
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = sigmoid(eta(i)) - y01(i);
    grad_beta = x.transpose() * r / n + beta / (c * n);
    grad_intercept = r.mean();
}

TrainedModel fit_logistic(const DataMatrix& x, const std::vector<int>& y, double l2_strength) {
    const int n = x.n(), p = x.p();
    if (static_cast<int>(y.size()) != n) throw std::runtime_error("label length mismatch");
    check_finite(x.values);
    if (l2_strength <= 0.0) throw std::runtime_error("C must be positive");
    Eigen::VectorXd y01(n);
    for (int i = 0; i < n; ++i) y01(i) = static_cast<double>(y[static_cast<std::size_t>(i)]);
    check_binary_both_classes(y01);

    const double c = l2_strength;
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    double intercept = 0.0;
    double obj = logistic_objective(x.values, y01, beta, intercept, c);

    TrainedModel m;
    m.spec.kind = SurrogateKind::logistic;
    m.spec.logistic_c = c;

    const double tol = 1e-6;
    const int max_iter = 1000;
    int it = 0;
    for (; it < max_iter; ++it) {
        const Eigen::VectorXd eta = (x.values * beta).array() + intercept;
        Eigen::VectorXd prob(n), s(n);
        for (int i = 0; i < n; ++i) {
            prob(i) = sigmoid(eta(i));
            s(i) = prob(i) * (1.0 - prob(i));
        }
        Eigen::VectorXd grad(p + 1);
        grad.head(p) = x.values.transpose() * (prob - y01) / n + beta / (c * n);
        grad(p) = (prob - y01).mean();
        if (grad.norm() <= tol) break;

        // Newton system over (beta, intercept); ridge applies to beta only
        Eigen::MatrixXd h(p + 1, p + 1);
        const Eigen::MatrixXd xs = x.values.array().colwise() * s.array();
        h.topLeftCorner(p, p) = x.values.transpose() * xs / n;
        h.topLeftCorner(p, p).diagonal().array() += 1.0 / (c * n);
        h.block(0, p, p, 1) = xs.colwise().sum().transpose() / n;
        h.block(p, 0, 1, p) = h.block(0, p, p, 1).transpose();
        h(p, p) = s.mean();
        h.diagonal().array() += 1e-12;

        const Eigen::VectorXd dir = -h.ldlt().solve(grad);
        const double slope = grad.dot(dir);

        // Armijo backtracking on the Newton direction
        double step = 1.0;
        double next_obj = obj;
        Eigen::VectorXd next_beta = beta;
        double next_intercept = intercept;
        for (int half = 0; half < 60; ++half) {
            next_beta = beta + step * dir.head(p);
            next_intercept = intercept + step * dir(p);
            next_obj = logistic_objective(x.values, y01, next_beta, next_intercept, c);
            if (next_obj <= obj + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (next_obj >= obj && grad.norm() <= 1e2 * tol) break;
        beta = next_beta;
        intercept = next_intercept;
        obj = next_obj;
    }

    m.coefficients = beta;
    m.intercept = intercept;
    m.final_loss = obj;
    m.iterations = it;
    m.raw_importances = beta.cwiseAbs();
    return m;
}

TrainedModel fit_ridge(const DataMatrix& x, const Eigen::VectorXd& y, double l2_strength) {
    const int n = x.n();
    if (y.size() != n) throw std::runtime_error("target length mismatch");
    check_finite(x.values);
    if (!y.allFinite()) throw std::runtime_error("non-finite input");
    if (l2_strength <= 0.0) throw std::runtime_error("alpha must be positive");

    const Eigen::RowVectorXd mean_x = x.values.colwise().mean();
    const double mean_y = y.mean();
    const Eigen::MatrixXd xc = x.values.rowwise() - mean_x;
    const Eigen::VectorXd yc = y.array() - mean_y;

    Eigen::MatrixXd gram = xc.transpose() * xc;
    gram.diagonal().array() += l2_strength;
    const Eigen::VectorXd beta = gram.ldlt().solve(xc.transpose() * yc);

    TrainedModel m;
    m.spec.kind = SurrogateKind::ridge;
    m.spec.ridge_alpha = l2_strength;
    m.coefficients = beta;
    m.intercept = mean_y - mean_x.dot(beta);
    m.final_loss = 0.5 * ((x.values * beta).array() + m.intercept - y.array()).square().mean();
    m.raw_importances = beta.cwiseAbs();
    return m;
}

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXd& g;
    const Eigen::VectorXd& h;
    const SurrogateSpec& spec;
    Eigen::VectorXd& gain_out;
    Eigen::VectorXd& pred_update;  // accumulated leaf increments per sample
    std::vector<TrainedModel::TreeNode> nodes;

    int build(std::vector<int>& idx, int depth) {
        double gsum = 0.0, hsum = 0.0;
        for (int i : idx) {
            gsum += g(i);
            hsum += h(i);
        }
        const double lam = spec.gbt_lambda;

        int best_feature = -1;
        double best_threshold = 0.0, best_gain = 0.0;
        if (depth < spec.gbt_max_depth && idx.size() >= 2) {
            const double parent = gsum * gsum / (hsum + lam);
            const int p = static_cast<int>(x.cols());
            std::vector<std::pair<double, int>> order(idx.size());
            for (int f = 0; f < p; ++f) {
                for (std::size_t i = 0; i < idx.size(); ++i)
                    order[i] = {x(idx[i], f), idx[i]};
                std::sort(order.begin(), order.end());
                double gl = 0.0, hl = 0.0;
                for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                    gl += g(order[i].second);
                    hl += h(order[i].second);
                    if (order[i].first == order[i + 1].first) continue;
                    const double gr = gsum - gl, hr = hsum - hl;
                    if (hl < spec.gbt_min_child_weight || hr < spec.gbt_min_child_weight)
                        continue;
                    const double gain =
                        0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = f;
                        best_threshold = 0.5 * (order[i].first + order[i + 1].first);
                    }
                }
            }
        }

        const int me = static_cast<int>(nodes.size());
        nodes.emplace_back();
        if (best_feature < 0) {
            const double value = -spec.gbt_learning_rate * gsum / (hsum + lam);
            nodes[me].value = value;
            for (int i : idx) pred_update(i) += value;
            return me;
        }

        gain_out(best_feature) += best_gain;
        std::vector<int> left, right;
        for (int i : idx)
            (x(i, best_feature) < best_threshold ? left : right).push_back(i);
        nodes[me].feature = best_feature;
        nodes[me].threshold = best_threshold;
        nodes[me].left = build(left, depth + 1);
        nodes[me].right = build(right, depth + 1);
        return me;
    }
};

double gbt_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& y, bool classifier) {
    const int n = static_cast<int>(y.size());
    double loss = 0.0;
    if (classifier) {
        for (int i = 0; i < n; ++i) loss += softplus(pred(i)) - y(i) * pred(i);
    } else {
        for (int i = 0; i < n; ++i) {
            const double r = pred(i) - y(i);
            loss += 0.5 * r * r;
        }
    }
    return loss / n;
}

} // namespace

TrainedModel fit_gbt(const DataMatrix& x, const Eigen::VectorXd& y, const SurrogateSpec& spec) {
    const int n = x.n(), p = x.p();
    if (y.size() != n) throw std::runtime_error("target length mismatch");
    check_finite(x.values);
    if (!y.allFinite()) throw std::runtime_error("non-finite input");
    spec.validate();
    const bool classifier = spec.kind == SurrogateKind::gbt_classifier;
    if (!classifier && spec.kind != SurrogateKind::gbt_regressor)
        throw std::runtime_error("fit_gbt requires a gbt spec");
    if (classifier) check_binary_both_classes(y);

    TrainedModel m;
    m.spec = spec;
    m.base_margin = classifier
                        ? std::log(spec.gbt_base_score / (1.0 - spec.gbt_base_score))
                        : spec.gbt_base_score;
    m.raw_importances = Eigen::VectorXd::Zero(p);

    Eigen::VectorXd pred = Eigen::VectorXd::Constant(n, m.base_margin);
    m.round_losses.push_back(gbt_loss(pred, y, classifier));

    for (int round = 0; round < spec.gbt_rounds; ++round) {
        Eigen::VectorXd g(n), h(n);
        if (classifier) {
            for (int i = 0; i < n; ++i) {
                const double pr = sigmoid(pred(i));
                g(i) = pr - y(i);
                h(i) = pr * (1.0 - pr);
            }
        } else {
            g = pred - y;
            h.setOnes();
        }
        Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
        TreeBuilder tb{x.values, g, h, spec, m.raw_importances, update, {}};
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
        tb.build(all, 0);
        m.trees.push_back(std::move(tb.nodes));
        pred += update;
        m.round_losses.push_back(gbt_loss(pred, y, classifier));
    }
    m.final_loss = m.round_losses.back();
    return m;
}

TrainedModel fit_surrogate(const DataMatrix& x, const Eigen::VectorXd& y,
                           const SurrogateSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case SurrogateKind::logistic: {
            std::vector<int> labels(static_cast<std::size_t>(y.size()));
            for (int i = 0; i < y.size(); ++i) {
                if (y(i) != 0.0 && y(i) != 1.0)
                    throw std::runtime_error("targets must be 0/1");
                labels[static_cast<std::size_t>(i)] = static_cast<int>(y(i));
            }
            return fit_logistic(x, labels, spec.logistic_c);
        }
        case SurrogateKind::ridge:
            return fit_ridge(x, y, spec.ridge_alpha);
        case SurrogateKind::gbt_classifier:
        case SurrogateKind::gbt_regressor:
            return fit_gbt(x, y, spec);
    }
    throw std::runtime_error("unknown surrogate kind");
}

Eigen::VectorXd feature_scores(const TrainedModel& m) {
    const double total = m.raw_importances.sum();
    const int p = static_cast<int>(m.raw_importances.size());
    if (total <= 0.0) return Eigen::VectorXd::Constant(p, 1.0 / p);
    return m.raw_importances / total;
}

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& xnew) const {
    const int n = static_cast<int>(xnew.rows());
    Eigen::VectorXd out(n);
    if (spec.kind == SurrogateKind::logistic || spec.kind == SurrogateKind::ridge) {
        out = (xnew * coefficients).array() + intercept;
        return out;
    }
    for (int i = 0; i < n; ++i) {
        double v = base_margin;
        for (const auto& tree : trees) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const auto& t = tree[static_cast<std::size_t>(node)];
                node = xnew(i, t.feature) < t.threshold ? t.left : t.right;
            }
            v += tree[static_cast<std::size_t>(node)].value;
        }
        out(i) = v;
    }
    return out;
}

} // namespace ssfs
