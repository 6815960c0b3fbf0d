#include "potfuse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "potfuse/error.hpp"
#include "potfuse/random.hpp"

namespace potfuse {

ConfusionMatrix::ConfusionMatrix(int n_classes)
    : n_classes_(n_classes), counts_(static_cast<std::size_t>(n_classes * n_classes), 0) {
  if (n_classes < 1) throw InputError("ConfusionMatrix: need at least one class");
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
  if (truth < 0 || truth >= n_classes_ || predicted < 0 || predicted >= n_classes_) {
    throw InputError("ConfusionMatrix: class index out of range");
  }
  if (count < 0) throw InputError("ConfusionMatrix: negative count");
  counts_[static_cast<std::size_t>(truth * n_classes_ + predicted)] += count;
}

std::int64_t ConfusionMatrix::at(int truth, int predicted) const {
  return counts_.at(static_cast<std::size_t>(truth * n_classes_ + predicted));
}

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::correct() const {
  std::int64_t c = 0;
  for (int i = 0; i < n_classes_; ++i) c += at(i, i);
  return c;
}

double ConfusionMatrix::accuracy() const {
  return static_cast<double>(correct()) / static_cast<double>(total());
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.n_classes_ != n_classes_) throw InputError("ConfusionMatrix: class count mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

double binary_mcc(double tp, double fp, double fn, double tn) {
  const double den = std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  if (!(den > 0.0)) return 0.0;
  return (tp * tn - fp * fn) / den;
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

struct BinaryCounts {
  double tp = 0, fp = 0, fn = 0, tn = 0;
};

BinaryCounts binarize(const ConfusionMatrix& cm, int c) {
  BinaryCounts b;
  const auto total = static_cast<double>(cm.total());
  b.tp = static_cast<double>(cm.at(c, c));
  for (int k = 0; k < cm.n_classes(); ++k) {
    if (k == c) continue;
    b.fp += static_cast<double>(cm.at(k, c));
    b.fn += static_cast<double>(cm.at(c, k));
  }
  b.tn = total - b.tp - b.fp - b.fn;
  return b;
}

BinaryCounts summed_counts(const ConfusionMatrix& cm) {
  BinaryCounts s;
  for (int c = 0; c < cm.n_classes(); ++c) {
    const BinaryCounts b = binarize(cm, c);
    s.tp += b.tp;
    s.fp += b.fp;
    s.fn += b.fn;
    s.tn += b.tn;
  }
  return s;
}

}  // namespace

double micro_mcc_raw(const ConfusionMatrix& cm) {
  const BinaryCounts s = summed_counts(cm);
  return binary_mcc(s.tp, s.fp, s.fn, s.tn);
}

CriterionScores compute_criteria(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw InputError("compute_criteria: empty confusion matrix");
  const int c_count = cm.n_classes();
  CriterionScores out;
  double mcc_sum = 0.0;
  for (int c = 0; c < c_count; ++c) {
    const BinaryCounts b = binarize(cm, c);
    out.macro_fdr += ratio_or_zero(b.fp, b.tp + b.fp);
    out.macro_fnr += ratio_or_zero(b.fn, b.tp + b.fn);
    mcc_sum += binary_mcc(b.tp, b.fp, b.fn, b.tn);
  }
  out.macro_fdr /= c_count;
  out.macro_fnr /= c_count;
  out.macro_mcc = (1.0 - mcc_sum / c_count) / 2.0;

  const BinaryCounts s = summed_counts(cm);
  // Summed tp + fp and tp + fn both equal the total, so the complement form
  // makes micro FDR and FNR bitwise equal to 1 - accuracy.
  out.micro_fdr = s.tp + s.fp > 0.0 ? 1.0 - s.tp / (s.tp + s.fp) : 0.0;
  out.micro_fnr = s.tp + s.fn > 0.0 ? 1.0 - s.tp / (s.tp + s.fn) : 0.0;
  out.micro_mcc = (1.0 - binary_mcc(s.tp, s.fp, s.fn, s.tn)) / 2.0;
  return out;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int n_classes, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw InputError("stratified_folds: need at least 2 folds");
  std::vector<int> assignment(labels.size(), -1);
  std::size_t offset = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) rows.push_back(i);
    }
    auto rng = make_rng(seed, {0xf01d, static_cast<std::uint64_t>(c)});
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      assignment[rows[k]] = static_cast<int>((offset + k) % static_cast<std::size_t>(folds));
    }
    offset += rows.size();
  }
  return assignment;
}

EvaluationReport cross_validate(const Dataset& data, const PipelineSpec& spec, int folds,
                                std::uint64_t seed) {
  validate(data);
  validate(spec.bagging);
  EvaluationReport report;
  report.dataset = data.name;
  report.folds_requested = folds;
  report.pooled = ConfusionMatrix(data.n_classes());

  const auto counts = data.class_counts();
  const std::size_t min_count = *std::min_element(counts.begin(), counts.end());
  if (min_count < 2) {
    report.skipped = true;
    report.skip_reason = "a class has a single instance";
    return report;
  }
  int k = folds;
  if (min_count < static_cast<std::size_t>(folds)) {
    k = static_cast<int>(min_count);
    report.notes.push_back("folds reduced from " + std::to_string(folds) + " to " + std::to_string(k));
  }
  report.folds_used = k;
  const auto assignment = stratified_folds(data.labels, data.n_classes(), k, seed);

  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      (assignment[i] == f ? test_rows : train_rows).push_back(i);
    }
    Dataset train = data.subset(train_rows);
    const Preprocessor prep = Preprocessor::fit(train.features, spec.preprocess);
    if (prep.pca() && prep.pca()->degenerate) report.pca_degenerate = true;
    train.features = prep.transform(train.features);

    BaggingConfig cfg = spec.bagging;
    cfg.seed = derive_seed(spec.bagging.seed, {0xcf, static_cast<std::uint64_t>(f)});
    const OvoEnsemble ensemble = train_ovo(train, spec.trainer, spec.strategy, cfg);
    report.degenerate_pairs += ensemble.degenerate_pairs();

    ConfusionMatrix cm(data.n_classes());
    for (std::size_t row : test_rows) {
      const Vector x = prep.transform(Vector(data.features.row(static_cast<Eigen::Index>(row)).transpose()));
      cm.add(data.labels[row], ensemble.predict(x));
    }
    report.fold_criteria.push_back(compute_criteria(cm));
    report.pooled += cm;
    report.fold_matrices.push_back(std::move(cm));
  }
  report.pooled_criteria = compute_criteria(report.pooled);
  if (report.pca_degenerate) report.notes.push_back("PCA saw an all-zero covariance in some fold");
  if (report.degenerate_pairs > 0) {
    report.notes.push_back(std::to_string(report.degenerate_pairs) +
                           " degenerate class pairs predicted by prior majority");
  }
  return report;
}

Matrix rank_rows(const Matrix& scores) {
  if (scores.cols() < 2) throw InputError("ranking needs at least two algorithms");
  if (scores.rows() < 1) throw InputError("ranking needs at least one dataset");
  if (!scores.allFinite()) throw InputError("ranking: non-finite score");
  const Eigen::Index k = scores.cols();
  Matrix ranks(scores.rows(), k);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return scores(r, a) < scores(r, b); });
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && scores(r, order[j + 1]) == scores(r, order[i])) ++j;
      const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t t = i; t <= j; ++t) ranks(r, order[t]) = shared;
      i = j + 1;
    }
  }
  return ranks;
}

Vector average_ranks(const Matrix& scores) { return rank_rows(scores).colwise().mean().transpose(); }

double f_distribution_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0 && d2 > 0.0)) throw InputError("F distribution: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return boost::math::ibeta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2));
}

ImanDavenport iman_davenport(const Matrix& ranks) {
  const auto n = static_cast<double>(ranks.rows());
  const auto k = static_cast<double>(ranks.cols());
  if (ranks.rows() < 2 || ranks.cols() < 2) {
    throw InputError("Iman-Davenport test needs at least 2 datasets and 2 algorithms");
  }
  ImanDavenport out;
  out.df1 = k - 1.0;
  out.df2 = (k - 1.0) * (n - 1.0);
  const Vector mean_ranks = ranks.colwise().mean().transpose();
  double chi2 = 12.0 * n / (k * (k + 1.0)) * (mean_ranks.squaredNorm() - k * (k + 1.0) * (k + 1.0) / 4.0);
  if (chi2 < 1e-12) chi2 = 0.0;
  out.friedman_chi2 = chi2;
  if (chi2 == 0.0) return out;

  const double denom = n * (k - 1.0) - chi2;
  if (!(denom > 1e-12 * n * (k - 1.0))) {
    out.statistic = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    out.flagged = true;
    return out;
  }
  out.statistic = (n - 1.0) * chi2 / denom;
  const double x = out.df1 * out.statistic / (out.df1 * out.statistic + out.df2);
  out.p_value = boost::math::ibetac(out.df1 / 2.0, out.df2 / 2.0, x);
  return out;
}

RankTable make_rank_table(const Matrix& scores) {
  RankTable t;
  t.ranks = rank_rows(scores);
  t.average_ranks = t.ranks.colwise().mean().transpose();
  if (scores.rows() >= 2) {
    t.test = iman_davenport(t.ranks);
    t.test_available = true;
  }
  return t;
}

}  // namespace potfuse
