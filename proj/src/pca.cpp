#include "stkit/pca.hpp"

#include <stdexcept>

namespace stkit {

PCAModel pca_fit(const Eigen::MatrixXd& features, int k) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 1 || d < 1) throw std::invalid_argument("pca_fit: empty feature matrix");
  if (k < 1 || k > std::min(n, d)) {
    throw std::invalid_argument("pca_fit: k must satisfy 1 <= k <= min(n, d)");
  }

  PCAModel model;
  model.mean = features.colwise().mean();
  Eigen::MatrixXd centered = features.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = n > 1 ? Eigen::MatrixXd((centered.adjoint() * centered) /
                                                static_cast<double>(n - 1))
                              : Eigen::MatrixXd(Eigen::MatrixXd::Zero(d, d));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigensolver failed");
  // Eigenvalues come out ascending; take the top k in descending order.
  const Eigen::VectorXd values = solver.eigenvalues();
  const Eigen::MatrixXd vectors = solver.eigenvectors();
  const double max_value = values.size() > 0 ? std::max(values(values.size() - 1), 0.0) : 0.0;

  model.components.resize(k, d);
  model.explained_variance.resize(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index src = d - 1 - i;
    Eigen::RowVectorXd component = vectors.col(src).transpose();
    double lambda = values(src);
    if (lambda < 1e-12 * (max_value > 0 ? max_value : 1.0)) {
      lambda = 0.0;
      model.rank_deficient = true;
    }
    // Deterministic sign: the largest-magnitude entry is positive.
    Eigen::Index arg_max = 0;
    component.cwiseAbs().maxCoeff(&arg_max);
    if (component(arg_max) < 0) component = -component;
    model.components.row(i) = component;
    model.explained_variance(i) = lambda;
  }
  return model;
}

Eigen::MatrixXd pca_transform(const PCAModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.mean.size()) {
    throw std::invalid_argument("pca_transform: feature dimension mismatch");
  }
  return (features.rowwise() - model.mean.transpose()) * model.components.transpose();
}

}  // namespace stkit
