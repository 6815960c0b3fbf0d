#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "potfuse/dataset.hpp"
#include "potfuse/ensemble.hpp"
#include "potfuse/preprocessing.hpp"

namespace potfuse {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int n_classes);

  void add(int truth, int predicted, std::int64_t count = 1);
  std::int64_t at(int truth, int predicted) const;
  int n_classes() const { return n_classes_; }
  std::int64_t total() const;
  std::int64_t correct() const;
  double accuracy() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  int n_classes_;
  std::vector<std::int64_t> counts_;
};

/// Six criteria in [0, 1], 0 best. MCC values are reported as (1 - MCC) / 2.
struct CriterionScores {
  double macro_fdr = 0.0;
  double macro_fnr = 0.0;
  double macro_mcc = 0.0;
  double micro_fdr = 0.0;
  double micro_fnr = 0.0;
  double micro_mcc = 0.0;

  static constexpr std::size_t kCount = 6;
  std::array<double, kCount> values() const {
    return {macro_fdr, macro_fnr, macro_mcc, micro_fdr, micro_fnr, micro_mcc};
  }
};

inline constexpr std::array<std::string_view, CriterionScores::kCount> kCriterionNames = {
    "macro_fdr", "macro_fnr", "macro_mcc", "micro_fdr", "micro_fnr", "micro_mcc"};

/// Matthews correlation from binary counts; 0 when the denominator vanishes.
double binary_mcc(double tp, double fp, double fn, double tn);

/// Micro MCC before the (1 - MCC) / 2 transform.
double micro_mcc_raw(const ConfusionMatrix& cm);

CriterionScores compute_criteria(const ConfusionMatrix& cm);

struct PipelineSpec {
  TrainerKind trainer = TrainerKind::NearestCentroid;
  Strategy strategy;
  BaggingConfig bagging;
  PreprocessOptions preprocess;
};

/// Stratified assignment of each row to a fold in 0..folds-1.
std::vector<int> stratified_folds(const std::vector<int>& labels, int n_classes, int folds,
                                  std::uint64_t seed);

struct EvaluationReport {
  std::string dataset;
  bool skipped = false;
  std::string skip_reason;
  int folds_requested = 10;
  int folds_used = 0;
  std::vector<ConfusionMatrix> fold_matrices;
  std::vector<CriterionScores> fold_criteria;
  ConfusionMatrix pooled{2};
  CriterionScores pooled_criteria;
  std::size_t degenerate_pairs = 0;
  bool pca_degenerate = false;
  std::vector<std::string> notes;
};

/// Per fold: fit preprocessing and the One-vs-One ensemble on the training
/// split, predict the test split. Folds shrink to the smallest class count
/// (at least 2); a class with a single instance marks the dataset skipped.
EvaluationReport cross_validate(const Dataset& data, const PipelineSpec& spec, int folds = 10,
                                std::uint64_t seed = 0);

/// Per-row ranks (1 = lowest score), ties share the mean position.
/// Throws InputError on non-finite scores or fewer than 2 columns.
Matrix rank_rows(const Matrix& scores);

struct ImanDavenport {
  double friedman_chi2 = 0.0;
  double statistic = 0.0;  // F_F
  double p_value = 1.0;
  double df1 = 0.0;
  double df2 = 0.0;
  bool flagged = false;  // chi2 >= N(k-1): F undefined, p reported as 0
};

struct RankTable {
  Matrix ranks;  // datasets x algorithms
  Vector average_ranks;
  ImanDavenport test;  // only meaningful with at least 2 datasets
  bool test_available = false;
};

Vector average_ranks(const Matrix& scores);
RankTable make_rank_table(const Matrix& scores);

/// Friedman statistic and its Iman-Davenport F correction for a rank matrix.
ImanDavenport iman_davenport(const Matrix& ranks);

/// P(F <= x) for the F distribution with (d1, d2) degrees of freedom.
double f_distribution_cdf(double x, double d1, double d2);

}  // namespace potfuse
