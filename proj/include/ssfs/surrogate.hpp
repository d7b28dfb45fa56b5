#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ssfs/dataio.hpp"

namespace ssfs {

enum class SurrogateKind { logistic, ridge, gbt_classifier, gbt_regressor };

// Hyperparameters for the supervised surrogates. set() assigns by canonical
// key name and rejects unknown keys; validate() rejects out-of-range values.
struct SurrogateSpec {
    SurrogateKind kind = SurrogateKind::logistic;
    double logistic_c = 1.0;  // inverse L2 strength, as in C-parameterized solvers
    double ridge_alpha = 1.0;
    double tolerance = 1e-6;  // gradient-norm stopping rule
    int max_iterations = 1000;
    int gbt_rounds = 100;
    int gbt_max_depth = 6;
    double gbt_learning_rate = 0.3;
    double gbt_min_child_weight = 1.0;
    double gbt_lambda = 1.0;  // L2 on leaf weights
    double gbt_base_score = 0.5;
    std::uint64_t seed = 0;

    void set(const std::string& key, double value);
    void validate() const;
};

// A fitted surrogate. raw_importances are |coefficients| for the linear
// models and per-feature accumulated split gain for the boosted trees.
struct TrainedModel {
    struct TreeNode {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;  // leaf increment, learning rate already applied
    };

    SurrogateSpec spec;
    Eigen::VectorXd raw_importances;

    // linear-model state
    Eigen::VectorXd coefficients;
    double intercept = 0.0;
    double final_loss = 0.0;
    int iterations = 0;

    // boosted-ensemble state
    std::vector<std::vector<TreeNode>> trees;
    double base_margin = 0.0;
    std::vector<double> round_losses;  // [0] before boosting, then one per round

    // margin for classifiers, value for regressors
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

// L2-regularized logistic regression by damped Newton descent from zero:
// minimizes mean logistic loss + ||beta||^2 / (2 C n), intercept unpenalized,
// to gradient norm <= 1e-6. y must contain both classes.
TrainedModel fit_logistic(const DataMatrix& x, const std::vector<int>& y, double l2_strength);

// Ridge regression solved exactly: (Xc' Xc + alpha I) beta = Xc' y on
// centered data, intercept recovered from the means.
TrainedModel fit_ridge(const DataMatrix& x, const Eigen::VectorXd& y, double l2_strength);

// Second-order gradient boosting with exact greedy splits on sorted feature
// values. Classifier uses logistic loss on 0/1 targets, regressor squared
// loss. Split ties break by lowest feature index, then lowest threshold.
TrainedModel fit_gbt(const DataMatrix& x, const Eigen::VectorXd& y, const SurrogateSpec& spec);

// Dispatch on spec.kind; binary targets are passed as 0/1 doubles.
TrainedModel fit_surrogate(const DataMatrix& x, const Eigen::VectorXd& y,
                           const SurrogateSpec& spec);

// raw_importances normalized to sum 1; all-zero importances give the
// uniform vector.
Eigen::VectorXd feature_scores(const TrainedModel& m);

// Objective and gradient of the regularized logistic loss at (beta, intercept);
// exposed for gradient checks.
double logistic_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01,
                          const Eigen::VectorXd& beta, double intercept, double c);
void logistic_gradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y01,
                       const Eigen::VectorXd& beta, double intercept, double c,
                       Eigen::VectorXd& grad_beta, double& grad_intercept);

} // namespace ssfs
