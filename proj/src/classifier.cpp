#include "stkit/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "stkit/rng.hpp"

namespace stkit {

namespace {

std::vector<std::string> sorted_classes(const std::vector<std::string>& labels) {
  std::vector<std::string> classes(labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.features.cols());
  out.labels.reserve(rows.size());
  out.feature_names = data.feature_names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        data.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(data.labels[rows[i]]);
  }
  return out;
}

// Lexicographic comparison of two feature rows, index tiebreak.
bool row_less(const Eigen::MatrixXd& m, std::size_t a, std::size_t b) {
  const Eigen::Index d = m.cols();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double x = m(static_cast<Eigen::Index>(a), j);
    const double y = m(static_cast<Eigen::Index>(b), j);
    if (x < y) return true;
    if (x > y) return false;
  }
  return a < b;
}

}  // namespace

SplitResult split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
  }
  if (data.rows() == 0 || data.rows() != data.labels.size()) {
    throw std::invalid_argument("split: dataset is empty or inconsistently labeled");
  }
  const std::vector<std::string> classes = sorted_classes(data.labels);
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);

  SplitResult result;
  std::vector<std::size_t> train_rows, val_rows;
  Rng rng = Rng::substream(seed, {0x73706c6974ULL});  // fixed stream key for splitting
  for (const std::string& cls : classes) {
    std::vector<std::size_t>& idx = by_class[cls];
    if (idx.size() < 2) {
      result.warnings.push_back("class '" + cls +
                                "' has fewer than 2 members; kept whole in training");
      train_rows.insert(train_rows.end(), idx.begin(), idx.end());
      continue;
    }
    // Fisher-Yates shuffle, then take the first n_train for training.
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(idx[i], idx[j]);
    }
    const auto n = static_cast<double>(idx.size());
    std::size_t n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + static_cast<long>(n_train));
    val_rows.insert(val_rows.end(), idx.begin() + static_cast<long>(n_train), idx.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  result.train = take_rows(data, train_rows);
  result.validation = take_rows(data, val_rows);
  return result;
}

NBModel train(const Dataset& data, double floor_scale) {
  const std::size_t n = data.rows();
  const Eigen::Index d = data.features.cols();
  if (n == 0 || d < 1 || data.labels.size() != n) {
    throw std::invalid_argument("train: dataset is empty or inconsistently labeled");
  }
  if (floor_scale <= 0.0) throw std::invalid_argument("train: floor_scale must be positive");

  NBModel model;
  model.classes = sorted_classes(data.labels);
  model.degenerate = model.classes.size() < 2;
  model.feature_names = data.feature_names;
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  model.priors.resize(k);
  model.means.resize(k, d);
  model.variances.resize(k, d);

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < n; ++i) by_class[data.labels[i]].push_back(i);

  for (Eigen::Index c = 0; c < k; ++c) {
    std::vector<std::size_t>& rows = by_class[model.classes[static_cast<std::size_t>(c)]];
    // Canonical accumulation order: rows sorted by feature values, making the
    // model independent of input row permutation, bit for bit.
    std::sort(rows.begin(), rows.end(),
              [&](std::size_t a, std::size_t b) { return row_less(data.features, a, b); });
    const double nc = static_cast<double>(rows.size());
    model.priors(c) = nc / static_cast<double>(n);
    for (Eigen::Index j = 0; j < d; ++j) {
      double sum = 0.0;
      for (std::size_t r : rows) sum += data.features(static_cast<Eigen::Index>(r), j);
      const double mean = sum / nc;
      double ss = 0.0;
      for (std::size_t r : rows) {
        const double dev = data.features(static_cast<Eigen::Index>(r), j) - mean;
        ss += dev * dev;
      }
      model.means(c, j) = mean;
      model.variances(c, j) = ss / nc;
    }
  }

  const double max_variance = model.variances.maxCoeff();
  model.variance_floor = floor_scale * (max_variance > 0.0 ? max_variance : 1.0);
  model.variances.array() += model.variance_floor;
  return model;
}

namespace {

Eigen::VectorXd log_joint(const NBModel& model, const Eigen::VectorXd& x) {
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  Eigen::VectorXd lp(k);
  constexpr double log_2pi = 1.8378770664093453;  // log(2*pi)
  for (Eigen::Index c = 0; c < k; ++c) {
    double acc = std::log(model.priors(c));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double var = model.variances(c, j);
      const double dev = x(j) - model.means(c, j);
      acc += -0.5 * (log_2pi + std::log(var)) - dev * dev / (2.0 * var);
    }
    lp(c) = acc;
  }
  return lp;
}

}  // namespace

std::pair<std::string, Eigen::VectorXd> predict(const NBModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.means.cols()) {
    throw std::invalid_argument("predict: feature dimension mismatch");
  }
  Eigen::VectorXd lp = log_joint(model, x);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < lp.size(); ++c) {
    if (lp(c) > lp(best)) best = c;
  }
  const double shift = lp(best);
  Eigen::VectorXd posterior = (lp.array() - shift).exp();
  posterior /= posterior.sum();
  return {model.classes[static_cast<std::size_t>(best)], posterior};
}

std::vector<std::string> predict_labels(const NBModel& model, const Eigen::MatrixXd& features) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    out.push_back(predict(model, features.row(r).transpose()).first);
  }
  return out;
}

double multiclass_phi(const Eigen::MatrixXi& confusion) {
  const Eigen::Index k = confusion.rows();
  double c = 0.0, s = 0.0;
  Eigen::VectorXd t = Eigen::VectorXd::Zero(k);  // true counts (row sums)
  Eigen::VectorXd p = Eigen::VectorXd::Zero(k);  // predicted counts (col sums)
  for (Eigen::Index i = 0; i < k; ++i) {
    c += confusion(i, i);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double v = confusion(i, j);
      s += v;
      t(i) += v;
      p(j) += v;
    }
  }
  const double num = c * s - p.dot(t);
  const double den2 = (s * s - p.squaredNorm()) * (s * s - t.squaredNorm());
  if (den2 <= 0.0) return 0.0;
  return num / std::sqrt(den2);
}

EvalReport report_from_confusion(const std::vector<std::string>& classes,
                                 const Eigen::MatrixXi& confusion) {
  if (confusion.rows() != confusion.cols() ||
      confusion.rows() != static_cast<Eigen::Index>(classes.size())) {
    throw std::invalid_argument("report_from_confusion: shape mismatch");
  }
  EvalReport report;
  report.classes = classes;
  report.confusion = confusion;
  const Eigen::Index k = confusion.rows();
  long long total = 0, correct = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    correct += confusion(i, i);
    for (Eigen::Index j = 0; j < k; ++j) total += confusion(i, j);
  }
  if (total == 0) throw std::invalid_argument("report_from_confusion: empty confusion matrix");
  report.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  report.phi = multiclass_phi(confusion);
  report.per_class_precision.resize(static_cast<std::size_t>(k));
  report.per_class_recall.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double col = confusion.col(i).sum();
    const double row = confusion.row(i).sum();
    report.per_class_precision[static_cast<std::size_t>(i)] =
        col > 0 ? confusion(i, i) / col : 0.0;
    report.per_class_recall[static_cast<std::size_t>(i)] = row > 0 ? confusion(i, i) / row : 0.0;
  }
  return report;
}

EvalReport evaluate(const NBModel& model, const Dataset& validation) {
  if (validation.rows() == 0) throw std::invalid_argument("evaluate: empty validation set");
  std::map<std::string, Eigen::Index> class_index;
  for (std::size_t i = 0; i < model.classes.size(); ++i) {
    class_index.emplace(model.classes[i], static_cast<Eigen::Index>(i));
  }
  const auto k = static_cast<Eigen::Index>(model.classes.size());
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t r = 0; r < validation.rows(); ++r) {
    const auto it = class_index.find(validation.labels[r]);
    if (it == class_index.end()) {
      throw std::invalid_argument("evaluate: validation label '" + validation.labels[r] +
                                  "' not among model classes");
    }
    const auto predicted =
        predict(model, validation.features.row(static_cast<Eigen::Index>(r)).transpose()).first;
    confusion(it->second, class_index.at(predicted)) += 1;
  }
  return report_from_confusion(model.classes, confusion);
}

std::vector<LearningCurvePoint> learning_curve(const Dataset& data,
                                               const std::vector<int>& prefix_sizes,
                                               double train_fraction, std::uint64_t seed,
                                               int repeats, double floor_scale) {
  if (repeats < 1) throw std::invalid_argument("learning_curve: repeats must be >= 1");
  std::vector<LearningCurvePoint> out;
  for (int m : prefix_sizes) {
    if (m < 1 || m > data.features.cols()) {
      throw std::invalid_argument("learning_curve: prefix size out of range");
    }
    Dataset sub;
    sub.features = data.features.leftCols(m);
    sub.labels = data.labels;
    if (static_cast<int>(data.feature_names.size()) >= m) {
      sub.feature_names.assign(data.feature_names.begin(), data.feature_names.begin() + m);
    }
    LearningCurvePoint point;
    point.prefix_size = m;
    std::vector<double> accs, phis;
    for (int r = 0; r < repeats; ++r) {
      SplitResult parts = split(sub, train_fraction, seed + static_cast<std::uint64_t>(r));
      NBModel model = train(parts.train, floor_scale);
      EvalReport report = evaluate(model, parts.validation);
      accs.push_back(report.accuracy);
      phis.push_back(report.phi);
    }
    auto mean_std = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      return std::pair<double, double>(mean, std::sqrt(ss / static_cast<double>(v.size())));
    };
    std::tie(point.accuracy_mean, point.accuracy_std) = mean_std(accs);
    std::tie(point.phi_mean, point.phi_std) = mean_std(phis);
    out.push_back(point);
  }
  return out;
}

}  // namespace stkit
