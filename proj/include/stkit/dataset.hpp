#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stkit {

// A labeled feature matrix: one row per observation. feature_names, when
// present, has one entry per column (e.g. "p=3:a1").
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<std::string> labels;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(features.cols()); }
};

}  // namespace stkit
