#include "potfuse/geometry.hpp"

#include <cmath>
#include <string>

#include "potfuse/error.hpp"

namespace potfuse {
namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  require_same_dim(a.size(), b.size(), "dot");
  return a.dot(b);
}

Hyperplane::Hyperplane(const Vector& weights, double offset) {
  if (weights.size() == 0) throw InputError("hyperplane: empty weight vector");
  if (!weights.allFinite() || !std::isfinite(offset)) {
    throw InputError("hyperplane: non-finite weights or offset");
  }
  const double norm = weights.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InputError("hyperplane: zero normal vector");
  }
  normal_ = weights / norm;
  offset_ = offset / norm;
}

Hyperplane Hyperplane::flipped() const {
  Hyperplane h = *this;
  h.normal_ = -normal_;
  h.offset_ = -offset_;
  return h;
}

double discriminant(const Hyperplane& h, const Vector& x) {
  require_same_dim(h.dim(), x.size(), "discriminant");
  return h.normal().dot(x) + h.offset();
}

int classify(const Hyperplane& h, const Vector& x) { return sign_label(discriminant(h, x)); }

PlaneBasis plane_basis(const Vector& normal) {
  const Eigen::Index d = normal.size();
  if (d == 0) throw InputError("plane_basis: empty normal");
  const double norm = normal.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("plane_basis: zero normal");
  if (d == 1) return PlaneBasis(Matrix(1, 0));

  const Vector n = normal / norm;
  // Reflect e1 onto -sign(n1)*n; picking the sign keeps v away from zero.
  Vector v = n;
  v(0) += n(0) >= 0.0 ? 1.0 : -1.0;
  const double vv = v.squaredNorm();
  Matrix basis(d, d - 1);
  for (Eigen::Index j = 1; j < d; ++j) {
    // Column j of I - 2 v v^T / (v^T v).
    Vector col = (-2.0 * v(j) / vv) * v;
    col(j) += 1.0;
    basis.col(j - 1) = col;
  }
  return PlaneBasis(std::move(basis));
}

PlaneBasis plane_basis(const Hyperplane& h) { return plane_basis(h.normal()); }

Vector project_onto_basis(const PlaneBasis& basis, const Vector& x) {
  require_same_dim(basis.ambient_dim(), x.size(), "project_onto_basis");
  if (basis.empty()) return Vector(0);
  return basis.matrix().transpose() * x;
}

}  // namespace potfuse
