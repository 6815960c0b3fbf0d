#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "potfuse/error.hpp"
#include "potfuse/io_data.hpp"
#include "potfuse/scoring.hpp"

using namespace potfuse;
using testutil::vec;

namespace {

const StrategyKind kPotentials[] = {StrategyKind::KE, StrategyKind::KA, StrategyKind::KB, StrategyKind::KC};

ScoredMember member_on(const TrainSet& t, StrategyKind kind) {
  return fit_member(train_nearest_centroid(t), t, Strategy{kind, 0.5});
}

}  // namespace

TEST_CASE("strategy names") {
  for (const char* name : {"avg", "vote", "sigmoid", "param", "ke", "ka", "kb", "kc"}) {
    CHECK(strategy_name(parse_strategy(name).kind) == name);
  }
  CHECK_THROWS_AS(parse_strategy("kd"), InputError);
  CHECK_THROWS_AS(parse_strategy("param", 0.0), InputError);
}

TEST_CASE("baseline scores") {
  const TrainSet t{(Matrix(2, 2) << 1, 0, -1, 0).finished(), {1, -1}};
  const ScoredMember avg = member_on(t, StrategyKind::Avg);
  CHECK(score_average(avg, vec({2, 1})) == 2.0);
  CHECK(score_average(avg, vec({0, 7})) == 0.0);
  CHECK(score_average(avg, vec({0.3, 7})) == discriminant(avg.model.hyperplane(), vec({0.3, 7})));
  CHECK(!avg.w_pos.has_value());
  CHECK(!avg.y_global.has_value());
  CHECK(!avg.y_pos.has_value());

  CHECK(score_vote(avg, vec({3.7, 0})) == 1.0);
  CHECK(score_vote(avg, vec({-0.001, 0})) == -1.0);
  CHECK(score_vote(avg, vec({0, 0})) == 1.0);

  CHECK(sigmoid_score(0.0) == 0.0);
  CHECK(sigmoid_score(1e6) == 0.5);
  CHECK(sigmoid_score(1.0) == doctest::Approx(0.2310585786300049).epsilon(1e-13));

  CHECK(parametric_score(0.0, 0.5) == 0.0);
  CHECK(parametric_score(1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(parametric_score(1.0, -1.0), InputError);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 3);
  for (int i = 0; i < 1000; ++i) {
    const double w = n(rng);
    REQUIRE(parametric_score(-w, 0.7) == -parametric_score(w, 0.7));
  }
}

TEST_CASE("parametric peak by grid search") {
  for (double zeta : {0.1, 0.5, 2.0}) {
    const double peak = 1.0 / std::sqrt(2.0 * zeta);
    double best = -INFINITY, worst = INFINITY, arg_best = 0, arg_worst = 0;
    const int steps = 200000;
    for (int i = 0; i <= steps; ++i) {
      const double w = -5 * peak + 10 * peak * i / steps;
      const double g = parametric_score(w, zeta);
      if (g > best) best = g, arg_best = w;
      if (g < worst) worst = g, arg_worst = w;
    }
    CHECK(std::abs(best - 1.0) < 1e-6);
    CHECK(std::abs(worst + 1.0) < 1e-6);
    CHECK(arg_best == doctest::Approx(peak).epsilon(1e-3));
    CHECK(arg_worst == doctest::Approx(-peak).epsilon(1e-3));
  }
}

TEST_CASE("posterior") {
  CHECK(posterior(0.3, 0.3, {0.5, 0.5}) == 0.5);
  CHECK(posterior(0.4, 0.1, {0.5, 0.5}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(posterior(0.0, 0.0, {0.3, 0.7}) == 0.3);
}

TEST_CASE("potential closed forms") {
  CHECK(ke_potential(0.4, 0.4, {0.5, 0.5}) == 0.0);
  CHECK(ke_potential(1.0, 0.0, {0.5, 0.5}) == doctest::Approx(0.12245933120185459).epsilon(1e-13));
  CHECK(std::abs(ke_potential(1e-16, 3e-16, {0.5, 0.5})) < 1e-9);

  CHECK(ka_exponent(0.7, 0.7) == 0.5);
  CHECK(ka_potential(0.9, 0.5) == 0.25);
  for (double t : {0.01, 0.3, 0.9}) CHECK(ka_potential(0.5, t) == 0.0);

  CHECK(kb_kc_potential(0.3, 0.3, 1.0, 1.0, {0.5, 0.5}) == 0.0);
  // a+ = 0.4 * 0.5 * 0.5 = 0.1, a- = 0.2 * 0.1 * 0.5 = 0.01: sigmoid(0.09) - 0.5 = 0.0224848...
  CHECK(kb_kc_potential(0.4, 0.2, 0.5, 0.1, {0.5, 0.5}) == doctest::Approx(0.0224848247918).epsilon(1e-11));
  const double exact = std::exp(0.1) / (std::exp(0.1) + std::exp(0.01)) - 0.5;
  CHECK(kb_kc_potential(0.4, 0.2, 0.5, 0.1, {0.5, 0.5}) == doctest::Approx(exact).epsilon(1e-13));

  // Huge density values are clamped before exp.
  CHECK(ke_potential(1e308, 1e308, {0.5, 0.5}) == 0.0);
  CHECK(std::isfinite(kb_kc_potential(1e200, 1.0, 1e200, 1.0, {0.5, 0.5})));
}

TEST_CASE("ka magnitude shrinks with the exponent") {
  for (double p : {0.9, 0.6, 0.2, 0.01}) {
    double prev = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double v = std::abs(ka_potential(p, i / 1000.0));
      REQUIRE(v >= prev);
      prev = v;
    }
  }
  // y(x) shrinking away from the peak pushes t, and |KA|, down.
  const double peak = 0.8;
  double prev = INFINITY;
  for (double y = 0.8; y >= 0.0; y -= 0.05) {
    const double v = std::abs(ka_potential(0.9, ka_exponent(y, peak)));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("randomized potential bounds and antisymmetry") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::lognormal_distribution<double> dens(0.0, 4.0);
  for (int i = 0; i < 20000; ++i) {
    const double wp = dens(rng), wn = dens(rng), yp = dens(rng), yn = dens(rng);
    const double pp = u(rng);
    const ClassPriors pr{pp, 1.0 - pp};
    const double ke = ke_potential(wp, wn, pr);
    const double kb = kb_kc_potential(wp, wn, yp, yn, pr);
    const double p = posterior(wp, wn, pr);
    const double ka = ka_potential(p, ka_exponent(dens(rng), dens(rng)));
    for (double v : {ke, kb, ka}) REQUIRE((v >= -0.5 && v <= 0.5));
    REQUIRE(std::abs(ke + ke_potential(wn, wp, pr.swapped())) <= 1e-12);
    REQUIRE(std::abs(kb + kb_kc_potential(wn, wp, yn, yp, pr.swapped())) <= 1e-12);
    const double t = u(rng);
    const double kw = ka_potential_weighted(wp * pr.pos, wn * pr.neg, t);
    REQUIRE((kw >= -0.5 && kw <= 0.5));
    REQUIRE(kw == -ka_potential_weighted(wn * pr.neg, wp * pr.pos, t));
    if (p > 1e-6 && p < 1 - 1e-6) REQUIRE(std::abs(kw - ka_potential(p, t)) <= 1e-12);
  }
}

TEST_CASE("fit_member priors and populated densities") {
  Matrix pts(10, 2);
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    pts.row(i) << i, (i * 7) % 5;
    labels.push_back(i < 3 ? 1 : -1);
  }
  const TrainSet t{pts, labels};
  const LinearModel model = train_nearest_centroid(t);
  const ScoredMember ke = fit_member(model, t, Strategy{StrategyKind::KE});
  CHECK(ke.priors.pos == doctest::Approx(0.3));
  CHECK(ke.priors.neg == doctest::Approx(0.7));
  CHECK(ke.w_pos.has_value());
  CHECK(!ke.y_global.has_value());
  const ScoredMember ka = fit_member(model, t, Strategy{StrategyKind::KA});
  CHECK(ka.y_global.has_value());
  CHECK(ka.y_peak == doctest::Approx(ka.y_global->pdf(ka.y_global->mean())));
  const ScoredMember kb = fit_member(model, t, Strategy{StrategyKind::KB});
  CHECK(std::holds_alternative<GaussianMle>(*kb.y_pos));
  const ScoredMember kc = fit_member(model, t, Strategy{StrategyKind::KC});
  CHECK(std::holds_alternative<NaiveKde>(*kc.y_neg));

  const TrainSet one_class{pts.topRows(3), {1, 1, 1}};
  CHECK_THROWS_AS(fit_member(model, one_class, Strategy{StrategyKind::KE}), FitError);
  CHECK_NOTHROW(fit_member(model, one_class, Strategy{StrategyKind::Avg}));
}

TEST_CASE("fitted members are bounded and antisymmetric under class swap") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + trial % 4;
    const TrainSet t = testutil::blobs(rng, 25, testutil::gaussian_vector(rng, d), 1.0);
    for (StrategyKind kind : kPotentials) {
      const ScoredMember m = member_on(t, kind);
      const ScoredMember s = m.swapped_classes();
      for (int i = 0; i < 100; ++i) {
        const Vector x = testutil::gaussian_vector(rng, d, 4.0);
        const double v = m.score(x);
        REQUIRE((v >= -0.5 && v <= 0.5));
        REQUIRE(std::abs(v + s.score(x)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("KB and KC reduce to KE in one dimension") {
  std::mt19937_64 rng(4);
  const TrainSet t = testutil::blobs(rng, 30, vec({0.8}), 1.0);
  const ScoredMember ke = member_on(t, StrategyKind::KE);
  const ScoredMember kb = member_on(t, StrategyKind::KB);
  const ScoredMember kc = member_on(t, StrategyKind::KC);
  for (int i = 0; i < 500; ++i) {
    const Vector x = testutil::gaussian_vector(rng, 1, 3.0);
    REQUIRE(kb.score(x) == ke.score(x));
    REQUIRE(kc.score(x) == ke.score(x));
  }
}

TEST_CASE("KE member on banana data has two overlapping unimodal-looking curves") {
  const Dataset banana = make_banana(200, 0.15, 0);
  TrainSet t{banana.features, {}};
  for (int l : banana.labels) t.labels.push_back(l == 0 ? 1 : -1);
  const ScoredMember m = member_on(t, StrategyKind::KE);
  double mode_pos = 0, mode_neg = 0, best_pos = 0, best_neg = 0;
  for (int i = -300; i <= 300; ++i) {
    const double w = i / 100.0;
    if (m.w_pos->pdf(w) > best_pos) best_pos = m.w_pos->pdf(w), mode_pos = w;
    if (m.w_neg->pdf(w) > best_neg) best_neg = m.w_neg->pdf(w), mode_neg = w;
  }
  CHECK(mode_pos > 0.0);
  CHECK(mode_neg < 0.0);
  CHECK(m.w_pos->pdf(0.0) > 0.01 * best_pos);
  CHECK(m.w_neg->pdf(0.0) > 0.01 * best_neg);
}
