#pragma once

#include <Eigen/Dense>

namespace potfuse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kGeometryTolerance = 1e-9;

/// Inner product. Throws InputError on a dimension mismatch.
double dot(const Vector& a, const Vector& b);

/// Decision hyperplane {x : <n, x> + b = 0} with a unit normal.
///
/// Construction normalizes (w, b) jointly so that the discriminant equals
/// the signed Euclidean distance to the plane.
class Hyperplane {
 public:
  /// Throws InputError for an empty, zero, or non-finite weight vector.
  Hyperplane(const Vector& weights, double offset);

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  Eigen::Index dim() const { return normal_.size(); }

  Hyperplane flipped() const;

 private:
  Vector normal_;
  double offset_;
};

/// Orthonormal basis of the directions spanned by a hyperplane.
/// Stored column-wise as a d x (d-1) matrix; zero columns when d = 1.
class PlaneBasis {
 public:
  explicit PlaneBasis(Matrix vectors) : vectors_(std::move(vectors)) {}

  Eigen::Index size() const { return vectors_.cols(); }
  Eigen::Index ambient_dim() const { return vectors_.rows(); }
  bool empty() const { return vectors_.cols() == 0; }
  auto vector(Eigen::Index i) const { return vectors_.col(i); }
  const Matrix& matrix() const { return vectors_; }

 private:
  Matrix vectors_;
};

/// <n, x> + b. Throws InputError on a dimension mismatch.
double discriminant(const Hyperplane& h, const Vector& x);

/// Sign decision with the tie (exactly 0) mapped to +1.
inline int sign_label(double value) { return value < 0.0 ? -1 : 1; }

int classify(const Hyperplane& h, const Vector& x);

/// Householder completion of the normal: columns 2..d of the reflector that
/// maps the first standard axis onto +-n.
PlaneBasis plane_basis(const Hyperplane& h);
PlaneBasis plane_basis(const Vector& normal);

/// Coordinates of x in the plane basis (d-1 values; empty for d = 1).
Vector project_onto_basis(const PlaneBasis& basis, const Vector& x);

}  // namespace potfuse
