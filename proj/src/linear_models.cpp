#include "potfuse/linear_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "potfuse/error.hpp"
#include "potfuse/random.hpp"

namespace potfuse {
namespace {

void require_both_classes(const TrainSet& t, const char* trainer) {
  validate(t);
  if (t.count(1) == 0 || t.count(-1) == 0) {
    throw TrainingError(std::string(trainer) + ": both classes must be present");
  }
}

LinearModel make_model(const Vector& w, double b, const char* trainer) {
  try {
    return LinearModel(Hyperplane(w, b));
  } catch (const InputError& e) {
    throw TrainingError(std::string(trainer) + ": " + e.what());
  }
}

struct ClassStats {
  Vector mean;
  Matrix scatter;  // sum of outer products of centered points
  std::size_t count = 0;
};

ClassStats class_stats(const TrainSet& t, int label) {
  ClassStats s;
  s.mean = Vector::Zero(t.dim());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t.labels[static_cast<std::size_t>(i)] != label) continue;
    s.mean += t.points.row(i).transpose();
    ++s.count;
  }
  s.mean /= static_cast<double>(s.count);
  s.scatter = Matrix::Zero(t.dim(), t.dim());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t.labels[static_cast<std::size_t>(i)] != label) continue;
    const Vector c = t.points.row(i).transpose() - s.mean;
    s.scatter.noalias() += c * c.transpose();
  }
  return s;
}

double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

struct LogisticState {
  Vector w;
  double b = 0.0;
};

double logistic_loss(const TrainSet& t, const LogisticState& s, double l2) {
  const Vector z = (t.points * s.w).array() + s.b;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    sum += softplus(-t.labels[static_cast<std::size_t>(i)] * z(i));
  }
  return sum / static_cast<double>(t.size()) + 0.5 * l2 * s.w.squaredNorm();
}

LogisticState logistic_gradient(const TrainSet& t, const LogisticState& s, double l2) {
  const Vector z = (t.points * s.w).array() + s.b;
  Vector coef(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double y = t.labels[static_cast<std::size_t>(i)];
    coef(i) = -y * sigmoid(-y * z(i));
  }
  const double inv_n = 1.0 / static_cast<double>(t.size());
  LogisticState g;
  g.w = (t.points.transpose() * coef) * inv_n + l2 * s.w;
  g.b = coef.sum() * inv_n;
  return g;
}

}  // namespace

std::size_t TrainSet::count(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

TrainSet TrainSet::subset(const std::vector<std::size_t>& rows) const {
  TrainSet out;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), dim());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

TrainSet TrainSet::with_flipped_labels() const {
  TrainSet out = *this;
  for (int& y : out.labels) y = -y;
  return out;
}

void validate(const TrainSet& t) {
  if (static_cast<std::size_t>(t.points.rows()) != t.labels.size()) {
    throw InputError("TrainSet: point and label counts differ");
  }
  if (t.labels.empty()) throw InputError("TrainSet: empty");
  if (t.points.cols() == 0) throw InputError("TrainSet: zero-dimensional points");
  for (int y : t.labels) {
    if (y != 1 && y != -1) throw InputError("TrainSet: labels must be -1 or +1");
  }
  if (!t.points.allFinite()) throw InputError("TrainSet: non-finite feature value");
}

TrainerKind parse_trainer(std::string_view name) {
  if (name == "flda") return TrainerKind::Flda;
  if (name == "lr") return TrainerKind::Logistic;
  if (name == "nc") return TrainerKind::NearestCentroid;
  if (name == "svm") return TrainerKind::LinearSvm;
  throw InputError("unknown trainer '" + std::string(name) + "' (expected flda, lr, nc, svm)");
}

std::string_view trainer_name(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::Flda: return "flda";
    case TrainerKind::Logistic: return "lr";
    case TrainerKind::NearestCentroid: return "nc";
    case TrainerKind::LinearSvm: return "svm";
  }
  return "?";
}

LinearModel train_flda(const TrainSet& t) {
  require_both_classes(t, "flda");
  const ClassStats pos = class_stats(t, 1);
  const ClassStats neg = class_stats(t, -1);
  const auto n = static_cast<double>(pos.count + neg.count);
  // Per-class MLE covariances pooled by class size.
  Matrix within = (pos.scatter + neg.scatter) / n;
  const double ridge = 1e-6 * (1.0 + within.trace() / static_cast<double>(t.dim()));
  within.diagonal().array() += ridge;
  const Vector w = within.ldlt().solve(pos.mean - neg.mean);
  const double b = -w.dot(pos.mean + neg.mean) / 2.0;
  return make_model(w, b, "flda");
}

LogisticFit fit_logistic(const TrainSet& t, const LogisticOptions& opts) {
  require_both_classes(t, "lr");
  LogisticState s{Vector::Zero(t.dim()), 0.0};
  double loss = logistic_loss(t, s, opts.l2);
  std::vector<double> trace{loss};
  double step = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const LogisticState g = logistic_gradient(t, s, opts.l2);
    const double gnorm2 = g.w.squaredNorm() + g.b * g.b;
    if (std::sqrt(gnorm2) < opts.gradient_tolerance) break;
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step > 1e-20) {
      LogisticState trial{s.w - step * g.w, s.b - step * g.b};
      const double trial_loss = logistic_loss(t, trial, opts.l2);
      if (!std::isfinite(trial_loss)) throw TrainingError("lr: non-finite loss");
      if (trial_loss <= loss - 1e-4 * step * gnorm2) {
        s = std::move(trial);
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    trace.push_back(loss);
  }
  return LogisticFit{make_model(s.w, s.b, "lr"), std::move(trace)};
}

LinearModel train_logistic(const TrainSet& t) { return fit_logistic(t).model; }

LinearModel train_nearest_centroid(const TrainSet& t) {
  require_both_classes(t, "nc");
  Vector c_pos = Vector::Zero(t.dim());
  Vector c_neg = Vector::Zero(t.dim());
  std::size_t n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t.labels[static_cast<std::size_t>(i)] == 1) {
      c_pos += t.points.row(i).transpose();
      ++n_pos;
    } else {
      c_neg += t.points.row(i).transpose();
      ++n_neg;
    }
  }
  c_pos /= static_cast<double>(n_pos);
  c_neg /= static_cast<double>(n_neg);
  const Vector w = c_pos - c_neg;
  if (!(w.squaredNorm() > 0.0)) throw TrainingError("nc: class centroids coincide");
  return make_model(w, -w.dot(c_pos + c_neg) / 2.0, "nc");
}

double svm_objective(const TrainSet& t, const Vector& w, double b, double lambda) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double y = t.labels[static_cast<std::size_t>(i)];
    hinge += std::max(0.0, 1.0 - y * (t.points.row(i).dot(w) + b));
  }
  return 0.5 * lambda * (w.squaredNorm() + b * b) + hinge / static_cast<double>(t.size());
}

SvmFit fit_linear_svm(const TrainSet& t, std::uint64_t seed, const SvmOptions& opts) {
  require_both_classes(t, "svm");
  const Eigen::Index d = t.dim();
  const auto n = static_cast<std::size_t>(t.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_rng(seed, {0x5f3});
  std::shuffle(order.begin(), order.end(), rng);

  // Augmented weight vector (w, b) against (x, 1).
  Vector a = Vector::Zero(d + 1);
  const double radius = 1.0 / std::sqrt(opts.lambda);
  // Floor of 10 / lambda steps: below lambda * steps ~ 10 the early 1/(lambda * step)
  // kicks dominate and tiny training sets end far from the optimum.
  const std::size_t steps = std::max(10 * n * static_cast<std::size_t>(opts.epochs),
                                     static_cast<std::size_t>(std::ceil(10.0 / opts.lambda)));
  // The last iterate keeps a kick of size 1/(lambda * step) from the final
  // violated point; averaging the second half of the iterates removes it.
  Vector mean = Vector::Zero(d + 1);
  std::size_t averaged = 0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const auto i = static_cast<Eigen::Index>(order[(step - 1) % n]);
    const double y = t.labels[static_cast<std::size_t>(i)];
    const double eta = 1.0 / (opts.lambda * static_cast<double>(step));
    const double margin = y * (t.points.row(i).dot(a.head(d)) + a(d));
    a *= 1.0 - eta * opts.lambda;
    if (margin < 1.0) {
      a.head(d).noalias() += (eta * y) * t.points.row(i).transpose();
      a(d) += eta * y;
    }
    const double norm = a.norm();
    if (norm > radius) a *= radius / norm;
    if (2 * step > steps) {
      mean += a;
      ++averaged;
    }
  }
  mean /= static_cast<double>(averaged);
  const Vector w = mean.head(d);
  return SvmFit{make_model(w, mean(d), "svm"), w, mean(d)};
}

LinearModel train_linear_svm(const TrainSet& t, std::uint64_t seed) {
  return fit_linear_svm(t, seed).model;
}

LinearModel train(TrainerKind kind, const TrainSet& t, std::uint64_t seed) {
  switch (kind) {
    case TrainerKind::Flda: return train_flda(t);
    case TrainerKind::Logistic: return train_logistic(t);
    case TrainerKind::NearestCentroid: return train_nearest_centroid(t);
    case TrainerKind::LinearSvm: return train_linear_svm(t, seed);
  }
  throw InternalError("train: unknown trainer kind");
}

}  // namespace potfuse
