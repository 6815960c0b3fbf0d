#pragma once

#include <string>
#include <vector>

#include "potfuse/geometry.hpp"

namespace potfuse {

/// Multiclass data: one instance per row of `features`, labels in 0..C-1.
struct Dataset {
  std::string name;
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;
  std::size_t dropped_rows = 0;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
  int n_classes() const { return static_cast<int>(class_names.size()); }
  std::vector<std::size_t> class_counts() const;

  /// max class count / min class count.
  double imbalance_ratio() const;

  Dataset subset(const std::vector<std::size_t>& rows) const;
};

/// Enforces n >= 1, d >= 1, C >= 2, finite features and labels covering 0..C-1.
/// Throws InputError naming the violated condition.
void validate(const Dataset& data);

}  // namespace potfuse
