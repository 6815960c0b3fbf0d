#pragma once

#include <optional>
#include <vector>

#include "potfuse/geometry.hpp"

namespace potfuse {

inline constexpr double kStdFloor = 1e-12;

/// Per-feature z-scoring with sample standard deviation (n-1).
///
/// Features whose standard deviation is below the floor are constant on the
/// fitted data and are mapped to 0 everywhere, including on held-out points.
struct StandardizerModel {
  Vector mean;
  Vector stddev;  // floored at kStdFloor
  std::vector<bool> constant;
};

StandardizerModel fit_standardizer(const Matrix& points);
Vector apply_standardizer(const StandardizerModel& m, const Vector& x);
Matrix apply_standardizer(const StandardizerModel& m, const Matrix& points);

struct PcaModel {
  Vector mean;
  Matrix components;          // d x k, orthonormal columns
  Vector explained_fraction;  // all d eigenvalue fractions, descending
  bool degenerate = false;    // covariance was identically zero

  Eigen::Index kept() const { return components.cols(); }
  double kept_fraction() const { return explained_fraction.head(kept()).sum(); }
};

/// Keeps the smallest k whose cumulative eigenvalue fraction reaches
/// `variance_threshold`. Each eigenvector's largest-magnitude entry is positive.
PcaModel fit_pca(const Matrix& points, double variance_threshold = 0.95);
Vector apply_pca(const PcaModel& m, const Vector& x);
Matrix apply_pca(const PcaModel& m, const Matrix& points);

struct PreprocessOptions {
  bool use_pca = true;
  double pca_variance = 0.95;
};

/// Standardize, then optionally PCA; both fitted on training rows only.
class Preprocessor {
 public:
  static Preprocessor fit(const Matrix& train_points, const PreprocessOptions& opts);

  Matrix transform(const Matrix& points) const;
  Vector transform(const Vector& x) const;
  Eigen::Index output_dim() const;
  const StandardizerModel& standardizer() const { return standardizer_; }
  const std::optional<PcaModel>& pca() const { return pca_; }

 private:
  StandardizerModel standardizer_;
  std::optional<PcaModel> pca_;
};

}  // namespace potfuse
