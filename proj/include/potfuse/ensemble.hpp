#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "potfuse/dataset.hpp"
#include "potfuse/linear_models.hpp"
#include "potfuse/scoring.hpp"

namespace potfuse {

struct BaggingConfig {
  int n_members = 11;
  double sample_fraction = 0.8;
  std::uint64_t seed = 0;
};

void validate(const BaggingConfig& cfg);

/// ceil(fraction * n), at least 1.
std::size_t bag_size(std::size_t n, double fraction);

/// Row indices of each bag, drawn with replacement. A bag that misses a class
/// present in `t` is redrawn up to 100 times before falling back to all rows.
std::vector<std::vector<std::size_t>> make_bag_indices(const TrainSet& t, const BaggingConfig& cfg);
std::vector<TrainSet> make_bags(const TrainSet& t, const BaggingConfig& cfg);

struct FusedScore {
  double score = 0.0;
  int label = 1;
};

class BinaryEnsemble {
 public:
  BinaryEnsemble(std::vector<ScoredMember> members, Strategy strategy);

  /// Mean member score; the label is its sign with 0 mapped to +1.
  FusedScore fuse(const Vector& x) const;

  const std::vector<ScoredMember>& members() const { return members_; }
  const Strategy& strategy() const { return strategy_; }
  std::size_t skipped_members() const { return skipped_members_; }
  void set_skipped_members(std::size_t n) { skipped_members_ = n; }

 private:
  std::vector<ScoredMember> members_;
  Strategy strategy_;
  std::size_t skipped_members_ = 0;
};

inline FusedScore fuse(const BinaryEnsemble& e, const Vector& x) { return e.fuse(x); }

/// Bagging + one model per bag + fit_member. Bags whose trainer or density
/// fit fails are skipped; throws TrainingError if none survive.
BinaryEnsemble train_binary_ensemble(const TrainSet& t, TrainerKind trainer, const Strategy& strategy,
                                     const BaggingConfig& cfg);

/// One unordered class pair. `pos_class` plays +1, `neg_class` plays -1.
struct OvoPair {
  int pos_class = 0;
  int neg_class = 1;
  std::optional<BinaryEnsemble> ensemble;  // empty when degenerate
  int fallback_class = 0;                  // prior-majority class used when degenerate

  bool degenerate() const { return !ensemble.has_value(); }
};

struct OvoVote {
  int winner = 0;
  double magnitude = 0.0;  // |fused score|, 0 for degenerate pairs
};

class OvoEnsemble {
 public:
  OvoEnsemble(int n_classes, std::vector<OvoPair> pairs);

  int n_classes() const { return n_classes_; }
  const std::vector<OvoPair>& pairs() const { return pairs_; }
  std::size_t degenerate_pairs() const;

  OvoVote pair_vote(std::size_t pair_index, const Vector& x) const;
  int predict(const Vector& x) const;

 private:
  int n_classes_;
  std::vector<OvoPair> pairs_;
};

/// Votes per class, ties broken by the summed |fused score| of each tied
/// class's pairs, then by the lowest class index.
int aggregate_ovo_votes(int n_classes, const std::vector<OvoPair>& pairs,
                        const std::vector<OvoVote>& votes);

/// Requires C >= 2 and at least 2 instances per class.
OvoEnsemble train_ovo(const Dataset& data, TrainerKind trainer, const Strategy& strategy,
                      const BaggingConfig& cfg);

inline int predict_ovo(const OvoEnsemble& e, const Vector& x) { return e.predict(x); }

}  // namespace potfuse
