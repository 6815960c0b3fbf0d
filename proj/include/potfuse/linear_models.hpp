#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "potfuse/geometry.hpp"

namespace potfuse {

/// Binary training data: one point per row of `points`, labels in {-1, +1}.
struct TrainSet {
  Matrix points;
  std::vector<int> labels;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  std::size_t count(int label) const;
  TrainSet subset(const std::vector<std::size_t>& rows) const;
  TrainSet with_flipped_labels() const;
};

/// Throws InputError on inconsistent sizes, labels outside {-1, +1} or non-finite points.
void validate(const TrainSet& t);

/// A trained hyperplane together with its plane basis.
class LinearModel {
 public:
  explicit LinearModel(Hyperplane h) : hyperplane_(std::move(h)), basis_(plane_basis(hyperplane_)) {}

  const Hyperplane& hyperplane() const { return hyperplane_; }
  const PlaneBasis& basis() const { return basis_; }
  Eigen::Index dim() const { return hyperplane_.dim(); }

  double discriminant(const Vector& x) const { return potfuse::discriminant(hyperplane_, x); }
  int classify(const Vector& x) const { return potfuse::classify(hyperplane_, x); }
  Vector project(const Vector& x) const { return project_onto_basis(basis_, x); }

 private:
  Hyperplane hyperplane_;
  PlaneBasis basis_;
};

enum class TrainerKind { Flda, Logistic, NearestCentroid, LinearSvm };

/// CLI names: flda, lr, nc, svm. Throws InputError on anything else.
TrainerKind parse_trainer(std::string_view name);
std::string_view trainer_name(TrainerKind kind);

LinearModel train_flda(const TrainSet& t);

struct LogisticOptions {
  double l2 = 1e-4;
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
};

struct LogisticFit {
  LinearModel model;
  std::vector<double> loss_trace;  // objective after each accepted step, starting at w = 0
};

/// Full-batch gradient descent with Armijo backtracking on the L2-regularized
/// logistic loss. The bias is not regularized.
LogisticFit fit_logistic(const TrainSet& t, const LogisticOptions& opts = {});
LinearModel train_logistic(const TrainSet& t);

LinearModel train_nearest_centroid(const TrainSet& t);

struct SvmOptions {
  double lambda = 1e-3;
  int epochs = 20;
};

struct SvmFit {
  LinearModel model;
  Vector weights;  // averaged iterate before unit normalization
  double bias = 0.0;
};

/// Pegasos-style subgradient descent on lambda/2 |(w, b)|^2 + mean hinge loss.
/// The bias rides along as a constant feature. Sample order is a seeded
/// permutation that is cycled for max(10 * n * epochs, 10 / lambda) steps; the returned weights
/// average the iterates of the second half.
SvmFit fit_linear_svm(const TrainSet& t, std::uint64_t seed, const SvmOptions& opts = {});
LinearModel train_linear_svm(const TrainSet& t, std::uint64_t seed);

/// The objective minimized by fit_linear_svm; equals 1 at w = 0, b = 0.
double svm_objective(const TrainSet& t, const Vector& w, double b, double lambda);

LinearModel train(TrainerKind kind, const TrainSet& t, std::uint64_t seed);

}  // namespace potfuse
