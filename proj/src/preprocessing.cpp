#include "potfuse/preprocessing.hpp"

#include <cmath>

#include "potfuse/error.hpp"

namespace potfuse {

StandardizerModel fit_standardizer(const Matrix& points) {
  if (points.rows() == 0 || points.cols() == 0) throw InputError("fit_standardizer: empty input");
  const Eigen::Index n = points.rows();
  StandardizerModel m;
  m.mean = points.colwise().mean().transpose();
  m.stddev.resize(points.cols());
  m.constant.assign(static_cast<std::size_t>(points.cols()), false);
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    double sd = 0.0;
    if (n > 1) {
      sd = std::sqrt((points.col(j).array() - m.mean(j)).square().sum() / static_cast<double>(n - 1));
    }
    if (!(sd >= kStdFloor)) {
      sd = kStdFloor;
      m.constant[static_cast<std::size_t>(j)] = true;
    }
    m.stddev(j) = sd;
  }
  return m;
}

Vector apply_standardizer(const StandardizerModel& m, const Vector& x) {
  if (x.size() != m.mean.size()) throw InputError("apply_standardizer: dimension mismatch");
  Vector out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    out(j) = m.constant[static_cast<std::size_t>(j)] ? 0.0 : (x(j) - m.mean(j)) / m.stddev(j);
  }
  return out;
}

Matrix apply_standardizer(const StandardizerModel& m, const Matrix& points) {
  Matrix out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.row(i) = apply_standardizer(m, Vector(points.row(i).transpose())).transpose();
  }
  return out;
}

PcaModel fit_pca(const Matrix& points, double variance_threshold) {
  if (points.rows() < 2) throw InputError("fit_pca: need at least two points");
  if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
    throw InputError("fit_pca: variance threshold must be in (0, 1]");
  }
  const Eigen::Index d = points.cols();
  PcaModel m;
  m.mean = points.colwise().mean().transpose();
  const Matrix centered = points.rowwise() - m.mean.transpose();
  const Matrix cov = (centered.transpose() * centered) / static_cast<double>(points.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw InternalError("fit_pca: eigen-decomposition failed");
  // Eigen returns ascending eigenvalues.
  const Vector values = eig.eigenvalues().reverse().cwiseMax(0.0);
  const Matrix vectors = eig.eigenvectors().rowwise().reverse();
  const double total = values.sum();

  if (!(total > 0.0)) {
    m.degenerate = true;
    m.components = Matrix::Identity(d, 1);
    m.explained_fraction = Vector::Zero(d);
    m.explained_fraction(0) = 1.0;
    return m;
  }
  m.explained_fraction = values / total;
  Eigen::Index k = 0;
  double cumulative = 0.0;
  while (k < d) {
    cumulative += m.explained_fraction(k);
    ++k;
    if (cumulative >= variance_threshold - 1e-12) break;
  }
  m.components = vectors.leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    m.components.col(c).cwiseAbs().maxCoeff(&arg);
    if (m.components(arg, c) < 0.0) m.components.col(c) *= -1.0;
  }
  return m;
}

Vector apply_pca(const PcaModel& m, const Vector& x) {
  if (x.size() != m.mean.size()) throw InputError("apply_pca: dimension mismatch");
  return m.components.transpose() * (x - m.mean);
}

Matrix apply_pca(const PcaModel& m, const Matrix& points) {
  if (points.cols() != m.mean.size()) throw InputError("apply_pca: dimension mismatch");
  return (points.rowwise() - m.mean.transpose()) * m.components;
}

Preprocessor Preprocessor::fit(const Matrix& train_points, const PreprocessOptions& opts) {
  Preprocessor p;
  p.standardizer_ = fit_standardizer(train_points);
  if (opts.use_pca) p.pca_ = fit_pca(apply_standardizer(p.standardizer_, train_points), opts.pca_variance);
  return p;
}

Matrix Preprocessor::transform(const Matrix& points) const {
  Matrix z = apply_standardizer(standardizer_, points);
  return pca_ ? apply_pca(*pca_, z) : z;
}

Vector Preprocessor::transform(const Vector& x) const {
  Vector z = apply_standardizer(standardizer_, x);
  return pca_ ? apply_pca(*pca_, z) : z;
}

Eigen::Index Preprocessor::output_dim() const {
  return pca_ ? pca_->kept() : standardizer_.mean.size();
}

}  // namespace potfuse
