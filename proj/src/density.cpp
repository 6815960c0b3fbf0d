#include "potfuse/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "potfuse/error.hpp"

namespace potfuse {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)

double ridge_for(const Matrix& cov) {
  const auto k = static_cast<double>(cov.rows());
  return 1e-6 * (1.0 + cov.trace() / k);
}

}  // namespace

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw InputError("silverman_bandwidth: empty sample");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted_quantile(sorted, 0.5);
  const auto fallback = [&] { return std::max(1e-6, 1e-3 * (1.0 + std::abs(median))); };
  if (n == 1) return fallback();

  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);

  double scale = std::min(sd, iqr / 1.34);
  if (!(scale > 0.0)) scale = sd;
  const double h = 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
  if (!(h > 0.0) || !std::isfinite(h)) return fallback();
  return h;
}

Kde1D::Kde1D(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
  if (samples_.empty()) throw InputError("Kde1D: needs at least one sample");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
    throw InputError("Kde1D: bandwidth must be positive and finite");
  }
}

Kde1D Kde1D::fit(std::vector<double> samples) {
  const double h = silverman_bandwidth(samples);
  return Kde1D(std::move(samples), h);
}

double Kde1D::pdf(double t) const {
  double sum = 0.0;
  for (double s : samples_) {
    const double u = (t - s) / bandwidth_;
    sum += std::exp(-0.5 * u * u);
  }
  return sum * kInvSqrt2Pi / (static_cast<double>(samples_.size()) * bandwidth_);
}

GaussianMle::GaussianMle(Vector mean, Matrix covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (covariance_.rows() != mean_.size() || covariance_.cols() != mean_.size()) {
    throw InputError("GaussianMle: covariance shape does not match the mean");
  }
  if (mean_.size() == 0) return;
  chol_.compute(covariance_);
  if (chol_.info() != Eigen::Success) {
    throw InternalError("GaussianMle: covariance is not positive definite");
  }
  const Matrix& l = chol_.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i));
  log_norm_ = -0.5 * (static_cast<double>(dim()) * std::log(2.0 * std::numbers::pi) + log_det);
}

double GaussianMle::log_pdf(const Vector& x) const {
  if (x.size() != dim()) throw InputError("gaussian_pdf: dimension mismatch");
  if (dim() == 0) return 0.0;
  const Vector z = chol_.matrixL().solve(x - mean_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

double GaussianMle::pdf(const Vector& x) const { return std::exp(log_pdf(x)); }

GaussianMle fit_gaussian_mle(const Matrix& points) {
  const Eigen::Index n = points.rows();
  if (n == 0) throw InputError("fit_gaussian_mle: no points");
  const Eigen::Index k = points.cols();
  if (k == 0) return GaussianMle(Vector(0), Matrix(0, 0));

  const Vector mean = points.colwise().mean().transpose();
  const Matrix centered = points.rowwise() - mean.transpose();
  Matrix cov = (centered.transpose() * centered) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose());
  cov.diagonal().array() += ridge_for(cov);
  return GaussianMle(mean, std::move(cov));
}

GaussianMle fit_gaussian_mle(const std::vector<Vector>& points) {
  if (points.empty()) throw InputError("fit_gaussian_mle: no points");
  const Eigen::Index k = points.front().size();
  Matrix m(static_cast<Eigen::Index>(points.size()), k);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != k) throw InputError("fit_gaussian_mle: dimension mismatch");
    m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return fit_gaussian_mle(m);
}

NaiveKde NaiveKde::fit(const Matrix& points) {
  if (points.rows() == 0) throw InputError("NaiveKde: no points");
  std::vector<Kde1D> axes;
  axes.reserve(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    std::vector<double> col(points.col(j).data(), points.col(j).data() + points.rows());
    axes.push_back(Kde1D::fit(std::move(col)));
  }
  return NaiveKde(std::move(axes));
}

double NaiveKde::pdf(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != axes_.size()) {
    throw InputError("naive_kde_pdf: expected " + std::to_string(axes_.size()) +
                     " coordinates, got " + std::to_string(x.size()));
  }
  double p = 1.0;
  for (std::size_t i = 0; i < axes_.size(); ++i) p *= axes_[i].pdf(x(static_cast<Eigen::Index>(i)));
  return p;
}

}  // namespace potfuse
