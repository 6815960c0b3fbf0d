#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "potfuse/ensemble.hpp"
#include "potfuse/error.hpp"
#include "potfuse/io_data.hpp"

using namespace potfuse;
using testutil::vec;

namespace {

TrainSet hundred(std::mt19937_64& rng) { return testutil::blobs(rng, 50, vec({1, 0.5}), 1.0); }

// A member whose score is the discriminant of a fixed plane (Avg strategy).
ScoredMember avg_member(const Vector& w, double b) {
  ScoredMember m{LinearModel(Hyperplane(w, b)), Strategy{StrategyKind::Avg}, {}, {}, {}, {}, {}, {}, 0.0};
  return m;
}

}  // namespace

TEST_CASE("bagging defaults and sizes") {
  const BaggingConfig cfg;
  CHECK(cfg.n_members == 11);
  CHECK(cfg.sample_fraction == 0.8);
  CHECK(bag_size(100, 0.8) == 80);
  CHECK(bag_size(7, 0.8) == 6);
  CHECK(bag_size(1, 0.8) == 1);
  CHECK(bag_size(10, 1.0) == 10);
  CHECK_THROWS_AS(validate(BaggingConfig{0, 0.8, 0}), InputError);
  CHECK_THROWS_AS(validate(BaggingConfig{3, 1.5, 0}), InputError);

  std::mt19937_64 rng(1);
  const TrainSet t = hundred(rng);
  const auto bags = make_bag_indices(t, cfg);
  REQUIRE(bags.size() == 11);
  for (const auto& bag : bags) {
    CHECK(bag.size() == 80);
    CHECK(std::all_of(bag.begin(), bag.end(), [&](std::size_t i) { return i < 100; }));
  }
  CHECK(bags == make_bag_indices(t, cfg));
  CHECK(bags != make_bag_indices(t, BaggingConfig{11, 0.8, 1}));

  // Drawn with replacement: some bag repeats an index.
  bool repeated = false;
  for (const auto& bag : bags) repeated |= std::set<std::size_t>(bag.begin(), bag.end()).size() < bag.size();
  CHECK(repeated);

  const auto sets = make_bags(t, cfg);
  REQUIRE(sets.size() == 11);
  CHECK(sets[0].size() == 80);
  CHECK(sets[3].points.row(5) == t.points.row(static_cast<Eigen::Index>(bags[3][5])));
}

TEST_CASE("bags always contain both classes") {
  // One minority point out of 20: most draws of 16 miss it, redraws or the
  // full-set fallback must supply it.
  TrainSet t;
  t.points = Matrix::Zero(20, 1);
  for (int i = 0; i < 20; ++i) {
    t.points(i, 0) = i;
    t.labels.push_back(i == 0 ? 1 : -1);
  }
  for (const auto& bag : make_bag_indices(t, BaggingConfig{11, 0.8, 3})) {
    CHECK(std::find(bag.begin(), bag.end(), std::size_t{0}) != bag.end());
  }
}

TEST_CASE("fuse averages member scores") {
  const Vector x = vec({0.2, 0.0});
  const BinaryEnsemble same({avg_member(vec({1, 0}), 0), avg_member(vec({1, 0}), 0)}, Strategy{StrategyKind::Avg});
  CHECK(same.fuse(x).score == doctest::Approx(0.2));
  CHECK(same.fuse(x).label == 1);
  CHECK(fuse(same, x).score == avg_member(vec({1, 0}), 0).score(x));

  auto vote_member = [](double sign) {
    ScoredMember m = avg_member(vec({sign, 0}), 0);
    m.strategy = Strategy{StrategyKind::Vote};
    return m;
  };
  const BinaryEnsemble votes({vote_member(1), vote_member(1), vote_member(-1)}, Strategy{StrategyKind::Vote});
  CHECK(votes.fuse(vec({1, 0})).score == doctest::Approx(1.0 / 3.0));
  CHECK(votes.fuse(vec({1, 0})).label == 1);

  const BinaryEnsemble tie({vote_member(1), vote_member(-1)}, Strategy{StrategyKind::Vote});
  CHECK(tie.fuse(vec({1, 0})).label == 1);

  CHECK_THROWS_AS(BinaryEnsemble({}, Strategy{StrategyKind::Avg}), InputError);
}

TEST_CASE("trained ensembles: bounds, determinism, member order") {
  std::mt19937_64 rng(2);
  const TrainSet t = hundred(rng);
  for (StrategyKind kind : {StrategyKind::KE, StrategyKind::KA, StrategyKind::KB, StrategyKind::KC}) {
    const BinaryEnsemble e = train_binary_ensemble(t, TrainerKind::Logistic, Strategy{kind}, BaggingConfig{});
    const BinaryEnsemble again = train_binary_ensemble(t, TrainerKind::Logistic, Strategy{kind}, BaggingConfig{});
    std::vector<ScoredMember> reversed(e.members().rbegin(), e.members().rend());
    const BinaryEnsemble rev(reversed, Strategy{kind});
    REQUIRE(e.members().size() == 11);
    for (int i = 0; i < 200; ++i) {
      const Vector x = testutil::gaussian_vector(rng, 2, 3.0);
      const FusedScore f = e.fuse(x);
      REQUIRE((f.score >= -0.5 && f.score <= 0.5));
      REQUIRE(f.score == again.fuse(x).score);
      REQUIRE(std::abs(rev.fuse(x).score - f.score) <= 1e-12);
      if (std::abs(f.score) > 1e-12) REQUIRE(rev.fuse(x).label == f.label);
    }
  }
}

TEST_CASE("ovo pair counts") {
  for (int c : {2, 3, 5}) {
    TrainSet unused;
    Dataset d;
    d.name = "c";
    d.features.resize(6 * c, 2);
    std::mt19937_64 rng(static_cast<unsigned>(c));
    for (int i = 0; i < 6 * c; ++i) {
      const int label = i % c;
      d.features.row(i) << 4.0 * label + testutil::gaussian_vector(rng, 1)(0), testutil::gaussian_vector(rng, 1)(0);
      d.labels.push_back(label);
    }
    for (int k = 0; k < c; ++k) d.class_names.push_back("k" + std::to_string(k));
    d.feature_names = {"a", "b"};
    const OvoEnsemble e = train_ovo(d, TrainerKind::NearestCentroid, Strategy{StrategyKind::KE}, BaggingConfig{});
    CHECK(e.pairs().size() == static_cast<std::size_t>(c * (c - 1) / 2));
    CHECK(e.degenerate_pairs() == 0);
  }
}

TEST_CASE("ovo tie break by summed magnitude") {
  // Classes A=0, B=1, C=2. Pairs in order (0,1), (0,2), (1,2).
  std::vector<OvoPair> pairs(3);
  pairs[0].pos_class = 0, pairs[0].neg_class = 1;
  pairs[1].pos_class = 0, pairs[1].neg_class = 2;
  pairs[2].pos_class = 1, pairs[2].neg_class = 2;
  // A beats B (0.4), C beats A (0.2), B beats C (0.1).
  const std::vector<OvoVote> cycle{{0, 0.4}, {2, 0.2}, {1, 0.1}};
  CHECK(aggregate_ovo_votes(3, pairs, cycle) == 0);
  const std::vector<OvoVote> unanimous{{0, 0.1}, {0, 0.1}, {1, 0.3}};
  CHECK(aggregate_ovo_votes(3, pairs, unanimous) == 0);
  // Fully symmetric: lowest index wins.
  const std::vector<OvoVote> flat{{0, 0.2}, {2, 0.2}, {1, 0.2}};
  CHECK(aggregate_ovo_votes(3, pairs, flat) == 0);
}

TEST_CASE("two-class ovo agrees with the binary ensemble") {
  const Dataset d = make_blobs(60, 2.0, 1.0, 4);
  const BaggingConfig cfg{11, 0.8, 9};
  const Strategy s{StrategyKind::KB};
  const OvoEnsemble ovo = train_ovo(d, TrainerKind::NearestCentroid, s, cfg);
  REQUIRE(ovo.pairs().size() == 1);
  const BinaryEnsemble& bin = *ovo.pairs()[0].ensemble;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Vector x = testutil::gaussian_vector(rng, 2, 3.0);
    const int expected = bin.fuse(x).label == 1 ? 0 : 1;
    REQUIRE(predict_ovo(ovo, x) == expected);
    REQUIRE(predict_ovo(ovo, x) == ovo.predict(x));
  }
}

TEST_CASE("degenerate pairs fall back to the majority class") {
  // Class 1 duplicates class 0's single point; nearest centroid cannot split them.
  Dataset d;
  d.name = "dup";
  d.features.resize(5, 1);
  d.features << 0, 0, 0, 5, 6;
  d.labels = {0, 0, 1, 2, 2};
  d.class_names = {"a", "b", "c"};
  d.feature_names = {"x"};
  const OvoEnsemble e = train_ovo(d, TrainerKind::NearestCentroid, Strategy{StrategyKind::Avg}, BaggingConfig{});
  CHECK(e.degenerate_pairs() == 1);
  CHECK(e.pairs()[0].degenerate());
  CHECK(e.pairs()[0].fallback_class == 0);
  CHECK(e.predict(vec({0})) == 0);
}
