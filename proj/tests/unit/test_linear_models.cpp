#include <doctest.h>

#include "helpers.hpp"
#include "potfuse/error.hpp"
#include "potfuse/linear_models.hpp"

using namespace potfuse;
using testutil::vec;

namespace {

const TrainerKind kAllTrainers[] = {TrainerKind::Flda, TrainerKind::Logistic, TrainerKind::NearestCentroid,
                                    TrainerKind::LinearSvm};

TrainSet from_rows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  TrainSet t;
  t.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      t.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  t.labels = labels;
  return t;
}

double accuracy(const LinearModel& m, const TrainSet& t) {
  int ok = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) ok += m.classify(t.points.row(i).transpose()) == t.labels[i];
  return static_cast<double>(ok) / static_cast<double>(t.size());
}

}  // namespace

TEST_CASE("trainer names round trip") {
  for (TrainerKind k : kAllTrainers) CHECK(parse_trainer(trainer_name(k)) == k);
  CHECK_THROWS_AS(parse_trainer("mlp"), InputError);
}

TEST_CASE("flda examples") {
  std::mt19937_64 rng(1);
  const TrainSet sym = testutil::blobs(rng, 200, vec({1, 0}), 0.3);
  const LinearModel m = train_flda(sym);
  CHECK(std::abs(m.hyperplane().normal()(0)) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(std::abs(m.hyperplane().offset()) < 0.05);

  const LinearModel one_d = train_flda(from_rows({{-2}, {-1}, {1}, {2}}, {-1, -1, 1, 1}));
  CHECK(one_d.discriminant(vec({0})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(one_d.classify(vec({0.5})) == 1);
}

TEST_CASE("logistic regression examples") {
  const TrainSet t = from_rows({{-1}, {1}}, {-1, 1});
  const LinearModel m = train_logistic(t);
  CHECK(std::abs(m.discriminant(vec({0}))) < 1e-3);
  CHECK(m.classify(vec({1})) == 1);

  std::mt19937_64 rng(2);
  const TrainSet noisy = testutil::blobs(rng, 100, vec({0.5, 0.5}), 1.0);
  const LogisticFit fit = fit_logistic(noisy);
  REQUIRE(fit.loss_trace.size() >= 2);
  for (std::size_t i = 1; i < fit.loss_trace.size(); ++i) CHECK(fit.loss_trace[i] <= fit.loss_trace[i - 1]);
}

TEST_CASE("nearest centroid examples") {
  const TrainSet t = from_rows({{2, 1}, {2, -1}, {0, 1}, {0, -1}}, {1, 1, -1, -1});
  const LinearModel m = train_nearest_centroid(t);
  CHECK(m.hyperplane().normal()(0) == doctest::Approx(1.0));
  CHECK(m.hyperplane().normal()(1) == doctest::Approx(0.0));
  CHECK(m.discriminant(vec({1, 5})) == doctest::Approx(0.0));

  const LinearModel flipped = train_nearest_centroid(t.with_flipped_labels());
  CHECK((flipped.hyperplane().normal() + m.hyperplane().normal()).norm() < 1e-15);
  CHECK(flipped.hyperplane().offset() == doctest::Approx(-m.hyperplane().offset()));

  const LinearModel bisector = train_nearest_centroid(from_rows({{1, 1}, {3, 5}}, {1, -1}));
  CHECK(bisector.discriminant(vec({2, 3})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(bisector.hyperplane().normal().dot(vec({-2, -4}) / std::sqrt(20.0))) ==
        doctest::Approx(1.0));

  CHECK_THROWS_AS(train_nearest_centroid(from_rows({{1, 1}, {1, 1}}, {1, -1})), TrainingError);
}

TEST_CASE("linear svm examples") {
  const TrainSet t = from_rows({{-1}, {1}}, {-1, 1});
  const LinearModel m = train_linear_svm(t, 0);
  CHECK(std::abs(m.discriminant(vec({0}))) < 0.1);

  std::mt19937_64 rng(3);
  const TrainSet noisy = testutil::blobs(rng, 100, vec({0.7, 0.2}), 1.0);
  const SvmFit fit = fit_linear_svm(noisy, 7);
  CHECK(svm_objective(noisy, Vector::Zero(2), 0.0, 1e-3) == doctest::Approx(1.0));
  CHECK(svm_objective(noisy, fit.weights, fit.bias, 1e-3) <= 1.0);
}

TEST_CASE("every trainer separates well-separated blobs") {
  std::mt19937_64 rng(4);
  const TrainSet t = testutil::blobs(rng, 100, vec({2, 0}), 0.1);
  for (TrainerKind k : kAllTrainers) {
    CAPTURE(trainer_name(k));
    const LinearModel m = train(k, t, 0);
    CHECK(accuracy(m, t) >= 0.99);
    CHECK(m.hyperplane().normal().norm() == doctest::Approx(1.0).epsilon(1e-12));
    const Matrix& b = m.basis().matrix();
    CHECK((b.transpose() * b - Matrix::Identity(1, 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("single class input is a training error") {
  const TrainSet t = from_rows({{1, 2}, {3, 4}}, {1, 1});
  for (TrainerKind k : kAllTrainers) CHECK_THROWS_AS(train(k, t, 0), TrainingError);
}

TEST_CASE("label flip negates every trainer's decisions") {
  std::mt19937_64 rng(5);
  const TrainSet t = testutil::blobs(rng, 60, vec({0.6, -0.3, 0.2}), 1.0);
  for (TrainerKind k : kAllTrainers) {
    CAPTURE(trainer_name(k));
    const LinearModel a = train(k, t, 3);
    const LinearModel b = train(k, t.with_flipped_labels(), 3);
    for (int i = 0; i < 200; ++i) {
      const Vector x = testutil::gaussian_vector(rng, 3, 2.0);
      if (std::abs(a.discriminant(x)) < 1e-9) continue;
      REQUIRE(b.classify(x) == -a.classify(x));
    }
  }
}

TEST_CASE("nearest centroid is translation equivariant") {
  std::mt19937_64 rng(6);
  const TrainSet t = testutil::blobs(rng, 30, vec({1, 1}), 1.0);
  const Vector v = vec({12.5, -3.25});
  TrainSet shifted = t;
  shifted.points.rowwise() += v.transpose();
  const LinearModel a = train_nearest_centroid(t);
  const LinearModel b = train_nearest_centroid(shifted);
  for (int i = 0; i < 100; ++i) {
    const Vector x = testutil::gaussian_vector(rng, 2, 3.0);
    REQUIRE(std::abs(b.discriminant(x + v) - a.discriminant(x)) < 1e-9);
  }
}

TEST_CASE("trainers are deterministic") {
  std::mt19937_64 rng(7);
  const TrainSet t = testutil::blobs(rng, 40, vec({0.5, 0.5}), 1.0);
  for (TrainerKind k : kAllTrainers) {
    const LinearModel a = train(k, t, 42);
    const LinearModel b = train(k, t, 42);
    CHECK(a.hyperplane().normal() == b.hyperplane().normal());
    CHECK(a.hyperplane().offset() == b.hyperplane().offset());
  }
}
