#include "potfuse/ensemble.hpp"

#include <cmath>
#include <random>
#include <string>

#include "potfuse/error.hpp"
#include "potfuse/random.hpp"

namespace potfuse {
namespace {

constexpr int kMaxRedraws = 100;

bool has_both_classes(const TrainSet& t, const std::vector<std::size_t>& rows) {
  bool pos = false, neg = false;
  for (std::size_t r : rows) {
    (t.labels[r] == 1 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

}  // namespace

void validate(const BaggingConfig& cfg) {
  if (cfg.n_members < 1) throw InputError("bagging: need at least one member");
  if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
    throw InputError("bagging: sample fraction must be in (0, 1]");
  }
}

std::size_t bag_size(std::size_t n, double fraction) {
  // The small slack keeps e.g. 0.8 * 100 from rounding up to 81.
  const double raw = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

std::vector<std::vector<std::size_t>> make_bag_indices(const TrainSet& t, const BaggingConfig& cfg) {
  validate(cfg);
  const auto n = static_cast<std::size_t>(t.size());
  if (n == 0) throw InputError("bagging: empty training set");
  const std::size_t m = bag_size(n, cfg.sample_fraction);
  const bool two_classes = t.count(1) > 0 && t.count(-1) > 0;

  std::vector<std::vector<std::size_t>> bags;
  bags.reserve(static_cast<std::size_t>(cfg.n_members));
  for (int member = 0; member < cfg.n_members; ++member) {
    std::vector<std::size_t> rows;
    bool ok = false;
    for (int attempt = 0; attempt <= kMaxRedraws && !ok; ++attempt) {
      auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(member), static_cast<std::uint64_t>(attempt)});
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      rows.assign(m, 0);
      for (auto& r : rows) r = pick(rng);
      ok = !two_classes || has_both_classes(t, rows);
    }
    if (!ok) {
      rows.resize(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    }
    bags.push_back(std::move(rows));
  }
  return bags;
}

std::vector<TrainSet> make_bags(const TrainSet& t, const BaggingConfig& cfg) {
  std::vector<TrainSet> out;
  for (const auto& rows : make_bag_indices(t, cfg)) out.push_back(t.subset(rows));
  return out;
}

BinaryEnsemble::BinaryEnsemble(std::vector<ScoredMember> members, Strategy strategy)
    : members_(std::move(members)), strategy_(strategy) {
  if (members_.empty()) throw InputError("BinaryEnsemble: no members");
  const Eigen::Index d = members_.front().model.dim();
  for (const auto& m : members_) {
    if (m.strategy.kind != strategy_.kind) throw InputError("BinaryEnsemble: mixed strategies");
    if (m.model.dim() != d) throw InputError("BinaryEnsemble: mixed dimensions");
  }
}

FusedScore BinaryEnsemble::fuse(const Vector& x) const {
  double sum = 0.0;
  for (const auto& m : members_) sum += m.score(x);
  const double score = sum / static_cast<double>(members_.size());
  return FusedScore{score, sign_label(score)};
}

BinaryEnsemble train_binary_ensemble(const TrainSet& t, TrainerKind trainer, const Strategy& strategy,
                                     const BaggingConfig& cfg) {
  validate(t);
  const auto bags = make_bag_indices(t, cfg);
  std::vector<ScoredMember> members;
  std::size_t skipped = 0;
  std::string last_error;
  for (std::size_t i = 0; i < bags.size(); ++i) {
    const TrainSet bag = t.subset(bags[i]);
    try {
      const LinearModel model = train(trainer, bag, derive_seed(cfg.seed, {0x7a1, i}));
      members.push_back(fit_member(model, bag, strategy));
    } catch (const TrainingError& e) {
      ++skipped;
      last_error = e.what();
    } catch (const FitError& e) {
      ++skipped;
      last_error = e.what();
    }
  }
  if (members.empty()) throw TrainingError("no usable ensemble member: " + last_error);
  BinaryEnsemble e(std::move(members), strategy);
  e.set_skipped_members(skipped);
  return e;
}

OvoEnsemble::OvoEnsemble(int n_classes, std::vector<OvoPair> pairs)
    : n_classes_(n_classes), pairs_(std::move(pairs)) {
  const auto expected = static_cast<std::size_t>(n_classes * (n_classes - 1) / 2);
  if (n_classes < 2 || pairs_.size() != expected) {
    throw InputError("OvoEnsemble: expected C(C-1)/2 pairwise ensembles");
  }
}

std::size_t OvoEnsemble::degenerate_pairs() const {
  std::size_t n = 0;
  for (const auto& p : pairs_) n += p.degenerate() ? 1 : 0;
  return n;
}

OvoVote OvoEnsemble::pair_vote(std::size_t pair_index, const Vector& x) const {
  const OvoPair& p = pairs_.at(pair_index);
  if (p.degenerate()) return OvoVote{p.fallback_class, 0.0};
  const FusedScore f = p.ensemble->fuse(x);
  return OvoVote{f.label == 1 ? p.pos_class : p.neg_class, std::abs(f.score)};
}

int aggregate_ovo_votes(int n_classes, const std::vector<OvoPair>& pairs,
                        const std::vector<OvoVote>& votes) {
  std::vector<int> count(static_cast<std::size_t>(n_classes), 0);
  for (const auto& v : votes) ++count[static_cast<std::size_t>(v.winner)];
  const int best = *std::max_element(count.begin(), count.end());

  std::vector<double> magnitude(static_cast<std::size_t>(n_classes), 0.0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    magnitude[static_cast<std::size_t>(pairs[i].pos_class)] += votes[i].magnitude;
    magnitude[static_cast<std::size_t>(pairs[i].neg_class)] += votes[i].magnitude;
  }
  int winner = -1;
  for (int c = 0; c < n_classes; ++c) {
    if (count[static_cast<std::size_t>(c)] != best) continue;
    if (winner < 0 || magnitude[static_cast<std::size_t>(c)] > magnitude[static_cast<std::size_t>(winner)]) {
      winner = c;
    }
  }
  return winner;
}

int OvoEnsemble::predict(const Vector& x) const {
  std::vector<OvoVote> votes;
  votes.reserve(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) votes.push_back(pair_vote(i, x));
  return aggregate_ovo_votes(n_classes_, pairs_, votes);
}

OvoEnsemble train_ovo(const Dataset& data, TrainerKind trainer, const Strategy& strategy,
                      const BaggingConfig& cfg) {
  validate(data);
  validate(cfg);
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < 1) {
      throw InputError("train_ovo: class '" + data.class_names[c] + "' has no instances");
    }
  }
  const int n_classes = data.n_classes();
  std::vector<OvoPair> pairs;
  for (int i = 0; i < n_classes; ++i) {
    for (int j = i + 1; j < n_classes; ++j) {
      std::vector<std::size_t> rows;
      for (std::size_t r = 0; r < data.labels.size(); ++r) {
        if (data.labels[r] == i || data.labels[r] == j) rows.push_back(r);
      }
      TrainSet t;
      t.points.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        t.points.row(static_cast<Eigen::Index>(r)) = data.features.row(static_cast<Eigen::Index>(rows[r]));
        t.labels.push_back(data.labels[rows[r]] == i ? 1 : -1);
      }
      OvoPair pair;
      pair.pos_class = i;
      pair.neg_class = j;
      pair.fallback_class = t.count(1) >= t.count(-1) ? i : j;
      BaggingConfig pair_cfg = cfg;
      pair_cfg.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      try {
        pair.ensemble = train_binary_ensemble(t, trainer, strategy, pair_cfg);
      } catch (const TrainingError&) {
        pair.ensemble.reset();
      }
      pairs.push_back(std::move(pair));
    }
  }
  return OvoEnsemble(n_classes, std::move(pairs));
}

}  // namespace potfuse
