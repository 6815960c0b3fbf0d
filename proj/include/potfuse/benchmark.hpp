#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "potfuse/evaluation.hpp"
#include "potfuse/io_data.hpp"

namespace potfuse {

struct BenchmarkConfig {
  std::vector<std::filesystem::path> data;
  std::vector<TrainerKind> trainers{TrainerKind::Flda, TrainerKind::Logistic, TrainerKind::NearestCentroid,
                                    TrainerKind::LinearSvm};
  std::vector<StrategyKind> strategies{StrategyKind::Avg, StrategyKind::Vote, StrategyKind::Sigmoid,
                                       StrategyKind::Param, StrategyKind::KE, StrategyKind::KA,
                                       StrategyKind::KB, StrategyKind::KC};
  int members = 11;
  double fraction = 0.8;
  int folds = 10;
  std::uint64_t seed = 0;
  double pca_variance = 0.95;
  bool no_pca = false;
  double zeta = 0.5;
  int jobs = 1;
  std::filesystem::path out = "results";
  CsvOptions csv;
};

/// key = value listing of every protocol setting (dataset paths reduced to file names).
std::string config_echo(const BenchmarkConfig& cfg);

/// One (dataset, trainer, strategy) cross-validation.
struct BenchmarkRun {
  std::string dataset;
  TrainerKind trainer;
  StrategyKind strategy;
  EvaluationReport report;
};

struct BenchmarkResult {
  std::vector<BenchmarkRun> runs;
  std::vector<Dataset> datasets;           // loaded datasets, input order
  std::vector<std::string> skipped;        // "name: reason"
};

/// Loads the data and cross-validates every combination; `jobs` workers
/// share the runs, results come back in (dataset, trainer, strategy) order.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, std::ostream& log);

std::string results_csv(const BenchmarkResult& r);
std::string summary_csv(const BenchmarkResult& r);
std::string datasets_csv(const BenchmarkResult& r);
std::string rank_report(const BenchmarkResult& r, const BenchmarkConfig& cfg, std::size_t criterion);
std::string stats_report(const BenchmarkResult& r, const BenchmarkConfig& cfg);

/// Runs the benchmark and writes config.txt, results.csv, summary.csv,
/// datasets.csv, ranks_<criterion>.txt and stats.txt into cfg.out.
/// Returns 0 on success, 2 if any dataset or run was skipped.
int cmd_benchmark(const BenchmarkConfig& cfg, std::ostream& log);

}  // namespace potfuse
