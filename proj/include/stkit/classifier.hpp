#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stkit/dataset.hpp"

namespace stkit {

// Gaussian Naive Bayes: independent per-feature normal likelihoods with
// per-class means/variances and empirical class priors.
struct NBModel {
  std::vector<std::string> classes;  // canonical (lexicographic) order
  Eigen::VectorXd priors;
  Eigen::MatrixXd means;      // classes x features
  Eigen::MatrixXd variances;  // classes x features, floor already added
  double variance_floor = 0.0;
  std::vector<std::string> feature_names;
  bool degenerate = false;  // single-class training set
};

struct EvalReport {
  double accuracy = 0.0;
  double phi = 0.0;
  std::vector<std::string> classes;  // row/column order of the confusion matrix
  Eigen::MatrixXi confusion;         // rows = true class, columns = predicted
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
};

struct SplitResult {
  Dataset train;
  Dataset validation;
  std::vector<std::string> warnings;
};

// Stratified random split: within each class, a seeded shuffle selects
// round(train_fraction * n_class) rows (clamped so both sides are nonempty
// when the class has >= 2 members) for training. Classes with a single
// member stay whole in training, with a warning. Row order within each part
// follows the original dataset order.
SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed);

// Means and variances are computed per class in a canonical order (classes
// sorted, rows within a class sorted lexicographically by feature values),
// so retraining on a permuted dataset is bit-identical. The variance floor
// floor_scale * (max feature variance) is added to every variance.
NBModel train(const Dataset& data, double floor_scale = 1e-9);

// Returns (argmax label, normalized posterior in model.classes order).
// Ties break toward the earlier class.
std::pair<std::string, Eigen::VectorXd> predict(const NBModel& model, const Eigen::VectorXd& x);

std::vector<std::string> predict_labels(const NBModel& model, const Eigen::MatrixXd& features);

EvalReport evaluate(const NBModel& model, const Dataset& validation);

// Accuracy, phi, and per-class precision/recall from a confusion matrix
// (rows = true, columns = predicted).
EvalReport report_from_confusion(const std::vector<std::string>& classes,
                                 const Eigen::MatrixXi& confusion);

// Matthews phi generalized to k classes (the R_k statistic); equals the
// standard binary Matthews correlation for k = 2. Degenerate denominators
// (all rows one class or all predictions one class) give 0.
double multiclass_phi(const Eigen::MatrixXi& confusion);

struct LearningCurvePoint {
  int prefix_size = 0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double phi_mean = 0.0;
  double phi_std = 0.0;
};

// For each prefix size m, restrict to the first m feature columns and run
// split/train/evaluate `repeats` times with split seeds seed, seed+1, ...
// With repeats = 1 and a full-width prefix this reproduces evaluate after
// split(data, train_fraction, seed).
std::vector<LearningCurvePoint> learning_curve(const Dataset& data,
                                               const std::vector<int>& prefix_sizes,
                                               double train_fraction, std::uint64_t seed,
                                               int repeats, double floor_scale = 1e-9);

}  // namespace stkit
