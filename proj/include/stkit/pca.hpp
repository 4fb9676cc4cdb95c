#pragma once

#include <Eigen/Dense>

namespace stkit {

struct PCAModel {
  Eigen::VectorXd mean;                 // length d
  Eigen::MatrixXd components;           // k x d, orthonormal rows
  Eigen::VectorXd explained_variance;   // length k, nonincreasing
  bool rank_deficient = false;          // some requested components carry no variance
};

// Mean-centered covariance eigendecomposition keeping the top k eigenvectors.
// Sign convention: the largest-magnitude entry of each component is positive.
// Components beyond the data rank come from the remaining orthonormal
// eigenbasis with explained_variance 0 and set rank_deficient.
PCAModel pca_fit(const Eigen::MatrixXd& features, int k);

// Projects rows: (x - mean) * components^T.
Eigen::MatrixXd pca_transform(const PCAModel& model, const Eigen::MatrixXd& features);

}  // namespace stkit
