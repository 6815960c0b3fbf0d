#pragma once

#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "potfuse/geometry.hpp"

namespace potfuse {

/// Robust Silverman rule: 0.9 * min(s, IQR/1.34) * n^(-1/5).
///
/// s uses the n-1 denominator; quartiles use linear interpolation. When the
/// IQR is zero but s is not, s alone is used. Constant data (and n = 1) fall
/// back to max(1e-6, 1e-3 * (1 + |median|)). Throws InputError on empty input.
double silverman_bandwidth(std::span<const double> samples);

/// Linear-interpolation quantile of a sorted sample, q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

/// One-dimensional Gaussian-kernel density estimate.
class Kde1D {
 public:
  Kde1D(std::vector<double> samples, double bandwidth);

  /// Bandwidth chosen by silverman_bandwidth().
  static Kde1D fit(std::vector<double> samples);

  double pdf(double t) const;

  const std::vector<double>& samples() const { return samples_; }
  double bandwidth() const { return bandwidth_; }

 private:
  std::vector<double> samples_;
  double bandwidth_;
};

inline double kde1d_pdf(const Kde1D& k, double t) { return k.pdf(t); }

/// Multivariate normal fitted by maximum likelihood (covariance divides by n)
/// plus a ridge of 1e-6 * (1 + trace/dim) on the diagonal.
///
/// A zero-dimensional model is allowed and has density 1 everywhere.
class GaussianMle {
 public:
  GaussianMle(Vector mean, Matrix covariance);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  Eigen::Index dim() const { return mean_.size(); }

  double log_pdf(const Vector& x) const;
  double pdf(const Vector& x) const;

 private:
  Vector mean_;
  Matrix covariance_;
  Eigen::LLT<Matrix> chol_;
  double log_norm_ = 0.0;
};

/// Points are the rows of `points`. Throws InputError when there are none.
GaussianMle fit_gaussian_mle(const Matrix& points);
GaussianMle fit_gaussian_mle(const std::vector<Vector>& points);

inline double gaussian_pdf(const GaussianMle& g, const Vector& x) { return g.pdf(x); }

/// Product of independent per-axis KDEs.
class NaiveKde {
 public:
  explicit NaiveKde(std::vector<Kde1D> axes) : axes_(std::move(axes)) {}

  /// One Silverman-bandwidth KDE per column of `points`.
  static NaiveKde fit(const Matrix& points);

  /// 1.0 for the empty (zero-dimensional) estimator.
  double pdf(const Vector& x) const;

  std::size_t dim() const { return axes_.size(); }
  const std::vector<Kde1D>& axes() const { return axes_; }

 private:
  std::vector<Kde1D> axes_;
};

inline double naive_kde_pdf(const NaiveKde& nk, const Vector& x) { return nk.pdf(x); }

}  // namespace potfuse
