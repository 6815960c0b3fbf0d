#include "potfuse/benchmark.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "potfuse/error.hpp"
#include "potfuse/util.hpp"

namespace potfuse {
namespace {

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& name, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += name(items[i]);
  }
  return out;
}

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Pooled criterion matrix for one trainer: datasets x strategies.
struct CriterionGrid {
  std::vector<std::string> datasets;
  Matrix scores;
};

CriterionGrid grid_for(const BenchmarkResult& r, const BenchmarkConfig& cfg, TrainerKind trainer,
                       std::size_t criterion) {
  CriterionGrid g;
  std::vector<std::vector<double>> rows;
  for (const auto& ds : r.datasets) {
    std::vector<double> row;
    bool complete = true;
    for (StrategyKind s : cfg.strategies) {
      const BenchmarkRun* found = nullptr;
      for (const auto& run : r.runs) {
        if (run.dataset == ds.name && run.trainer == trainer && run.strategy == s) found = &run;
      }
      if (!found || found->report.skipped) {
        complete = false;
        break;
      }
      row.push_back(found->report.pooled_criteria.values()[criterion]);
    }
    if (complete) {
      g.datasets.push_back(ds.name);
      rows.push_back(std::move(row));
    }
  }
  g.scores.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cfg.strategies.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      g.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return g;
}

}  // namespace

std::string config_echo(const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "# potfuse benchmark configuration\n";
  out << "datasets = " << join(cfg.data, [](const auto& p) { return p.filename().string(); }) << "\n";
  out << "trainers = " << join(cfg.trainers, [](TrainerKind k) { return std::string(trainer_name(k)); }) << "\n";
  out << "strategies = " << join(cfg.strategies, [](StrategyKind k) { return std::string(strategy_name(k)); })
      << "\n";
  out << "members = " << cfg.members << "\n";
  out << "fraction = " << format_value(cfg.fraction) << "\n";
  out << "sampling = with_replacement\n";
  out << "folds = " << cfg.folds << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "pca = " << (cfg.no_pca ? "off" : "on") << "\n";
  out << "pca_variance = " << format_value(cfg.pca_variance) << "\n";
  out << "standardize = on\n";
  out << "kernel = gaussian\n";
  out << "bandwidth = silverman\n";
  out << "zeta = " << format_value(cfg.zeta) << "\n";
  out << "multiclass = one_vs_one\n";
  return out.str();
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, std::ostream& log) {
  if (cfg.data.empty()) throw InputError("benchmark: no datasets given");
  if (cfg.trainers.empty()) throw InputError("benchmark: no trainers given");
  if (cfg.strategies.empty()) throw InputError("benchmark: no strategies given");
  if (cfg.folds < 2) throw InputError("benchmark: need at least 2 folds");
  if (cfg.jobs < 1) throw InputError("benchmark: jobs must be at least 1");
  if (!(cfg.zeta > 0.0)) throw InputError("benchmark: zeta must be positive");
  if (!(cfg.pca_variance > 0.0 && cfg.pca_variance <= 1.0)) {
    throw InputError("benchmark: PCA variance must be in (0, 1]");
  }
  validate(BaggingConfig{cfg.members, cfg.fraction, cfg.seed});

  BenchmarkResult result;
  for (const auto& path : cfg.data) {
    try {
      Dataset d = load_dataset(path, cfg.csv);
      d.name = path.stem().string();
      validate(d);
      result.datasets.push_back(std::move(d));
    } catch (const Error& e) {
      result.skipped.push_back(path.filename().string() + ": " + e.what());
      log << "skipping " << path.string() << ": " << e.what() << "\n";
    }
  }

  struct Job {
    std::size_t dataset;
    TrainerKind trainer;
    StrategyKind strategy;
  };
  std::vector<Job> jobs;
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    for (TrainerKind t : cfg.trainers) {
      for (StrategyKind s : cfg.strategies) jobs.push_back({d, t, s});
    }
  }
  result.runs.resize(jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const Dataset& data = result.datasets[job.dataset];
      PipelineSpec spec;
      spec.trainer = job.trainer;
      spec.strategy = Strategy{job.strategy, cfg.zeta};
      spec.bagging = BaggingConfig{cfg.members, cfg.fraction, cfg.seed};
      spec.preprocess = PreprocessOptions{!cfg.no_pca, cfg.pca_variance};
      BenchmarkRun run{data.name, job.trainer, job.strategy, {}};
      try {
        run.report = cross_validate(data, spec, cfg.folds, cfg.seed);
      } catch (const Error& e) {
        run.report.dataset = data.name;
        run.report.skipped = true;
        run.report.skip_reason = e.what();
      }
      {
        std::lock_guard lock(log_mutex);
        log << data.name << " " << trainer_name(job.trainer) << " " << strategy_name(job.strategy) << ": ";
        if (run.report.skipped) {
          log << "skipped (" << run.report.skip_reason << ")\n";
        } else {
          log << "accuracy " << fixed(run.report.pooled.accuracy(), 4) << "\n";
        }
      }
      result.runs[i] = std::move(run);
    }
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), std::max<std::size_t>(jobs.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& run : result.runs) {
    if (run.report.skipped) {
      result.skipped.push_back(run.dataset + "/" + std::string(trainer_name(run.trainer)) + "/" +
                               std::string(strategy_name(run.strategy)) + ": " + run.report.skip_reason);
    }
  }
  return result;
}

std::string results_csv(const BenchmarkResult& r) {
  std::string out = "dataset,trainer,strategy,fold,criterion,value\n";
  for (const auto& run : r.runs) {
    if (run.report.skipped) continue;
    const std::string prefix = csv_field(run.dataset) + "," + std::string(trainer_name(run.trainer)) + "," +
                               std::string(strategy_name(run.strategy)) + ",";
    const auto emit = [&](const std::string& fold, const CriterionScores& c) {
      const auto values = c.values();
      for (std::size_t k = 0; k < values.size(); ++k) {
        out += prefix + fold + "," + std::string(kCriterionNames[k]) + "," + format_value(values[k]) + "\n";
      }
    };
    for (std::size_t f = 0; f < run.report.fold_criteria.size(); ++f) {
      emit(std::to_string(f + 1), run.report.fold_criteria[f]);
    }
    emit("pooled", run.report.pooled_criteria);
  }
  return out;
}

std::string summary_csv(const BenchmarkResult& r) {
  std::string out = "dataset,trainer,strategy,folds,accuracy";
  for (auto name : kCriterionNames) out += "," + std::string(name);
  out += ",notes\n";
  for (const auto& run : r.runs) {
    out += csv_field(run.dataset) + "," + std::string(trainer_name(run.trainer)) + "," +
           std::string(strategy_name(run.strategy)) + ",";
    if (run.report.skipped) {
      out += ",,,,,,,," + csv_field("skipped: " + run.report.skip_reason) + "\n";
      continue;
    }
    out += std::to_string(run.report.folds_used) + "," + format_value(run.report.pooled.accuracy());
    for (double v : run.report.pooled_criteria.values()) out += "," + format_value(v);
    std::string notes;
    for (const auto& n : run.report.notes) notes += (notes.empty() ? "" : "; ") + n;
    out += "," + csv_field(notes) + "\n";
  }
  return out;
}

std::string datasets_csv(const BenchmarkResult& r) {
  std::string out = "dataset,instances,features,classes,imbalance_ratio,dropped_rows\n";
  for (const auto& d : r.datasets) {
    out += csv_field(d.name) + "," + std::to_string(d.size()) + "," + std::to_string(d.dim()) + "," +
           std::to_string(d.n_classes()) + "," + fixed(d.imbalance_ratio(), 2) + "," +
           std::to_string(d.dropped_rows) + "\n";
  }
  return out;
}

std::string rank_report(const BenchmarkResult& r, const BenchmarkConfig& cfg, std::size_t criterion) {
  std::ostringstream out;
  out << "criterion: " << kCriterionNames[criterion] << " (lower is better, rank 1 = best)\n";
  for (TrainerKind trainer : cfg.trainers) {
    const CriterionGrid g = grid_for(r, cfg, trainer, criterion);
    out << "\ntrainer: " << trainer_name(trainer) << "\n";
    out << padded("", 16);
    for (StrategyKind s : cfg.strategies) out << padded(std::string(strategy_name(s)), 9);
    out << "\n";
    if (g.datasets.empty() || cfg.strategies.size() < 2) {
      out << "(ranking needs at least one complete dataset and two strategies)\n";
      continue;
    }
    const RankTable table = make_rank_table(g.scores);
    out << padded("p-value", 16);
    out << (table.test_available ? fixed(table.test.p_value, 3) : std::string("n/a")) << "\n";
    out << padded("average rank", 16);
    for (Eigen::Index j = 0; j < table.average_ranks.size(); ++j) out << padded(fixed(table.average_ranks(j), 3), 9);
    out << "\n";
    for (std::size_t i = 0; i < g.datasets.size(); ++i) {
      out << padded(g.datasets[i], 16);
      for (Eigen::Index j = 0; j < table.ranks.cols(); ++j) {
        out << padded(fixed(table.ranks(static_cast<Eigen::Index>(i), j), 1), 9);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string stats_report(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "# Friedman / Iman-Davenport tests over datasets, per trainer and criterion\n";
  out << "trainer,criterion,datasets,algorithms,friedman_chi2,iman_davenport_f,df1,df2,p_value,note\n";
  for (TrainerKind trainer : cfg.trainers) {
    for (std::size_t c = 0; c < CriterionScores::kCount; ++c) {
      const CriterionGrid g = grid_for(r, cfg, trainer, c);
      out << trainer_name(trainer) << "," << kCriterionNames[c] << "," << g.datasets.size() << ","
          << cfg.strategies.size() << ",";
      if (g.datasets.size() < 2 || cfg.strategies.size() < 2) {
        out << ",,,,,needs at least 2 datasets and 2 strategies\n";
        continue;
      }
      const ImanDavenport t = iman_davenport(rank_rows(g.scores));
      out << format_value(t.friedman_chi2) << "," << format_value(t.statistic) << "," << format_value(t.df1) << ","
          << format_value(t.df2) << "," << format_value(t.p_value) << ","
          << (t.flagged ? "chi2 >= N(k-1): F undefined, p set to 0" : "") << "\n";
    }
  }
  if (!r.skipped.empty()) {
    out << "\n# skipped\n";
    for (const auto& s : r.skipped) out << s << "\n";
  }
  return out.str();
}

int cmd_benchmark(const BenchmarkConfig& cfg, std::ostream& log) {
  const BenchmarkResult r = run_benchmark(cfg, log);
  std::filesystem::create_directories(cfg.out);
  write_file_atomic(cfg.out / "config.txt", config_echo(cfg));
  write_file_atomic(cfg.out / "results.csv", results_csv(r));
  write_file_atomic(cfg.out / "summary.csv", summary_csv(r));
  write_file_atomic(cfg.out / "datasets.csv", datasets_csv(r));
  for (std::size_t c = 0; c < CriterionScores::kCount; ++c) {
    write_file_atomic(cfg.out / ("ranks_" + std::string(kCriterionNames[c]) + ".txt"), rank_report(r, cfg, c));
  }
  write_file_atomic(cfg.out / "stats.txt", stats_report(r, cfg));
  return r.skipped.empty() ? 0 : 2;
}

}  // namespace potfuse
