// potfuse: benchmark potential-function fusion of linear-classifier ensembles.
//
//   potfuse benchmark --data a.csv b.arff --trainers nc --strategies ke,ka,kb,kc --out results
//   potfuse toy --out figures
//   potfuse generate banana --n 200 --noise 0.15 --out banana.csv

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "potfuse/benchmark.hpp"
#include "potfuse/error.hpp"
#include "potfuse/io_data.hpp"
#include "potfuse/toy.hpp"

namespace {

// Fills options of `app` that were not given on the command line from a
// key=value file. Keys are option long names without the leading dashes.
void apply_config_file(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw potfuse::InputError("cannot open config file '" + path + "'");
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;
    CLI::Option* opt = app.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw potfuse::InputError("config file '" + path + "': unknown key '" + item.name + "'");
    }
    if (opt->count() > 0) continue;
    opt->add_result(item.inputs);
    opt->run_callback();
  }
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential-function fusion for ensembles of linear classifiers"};
  app.require_subcommand(1);

  // benchmark
  potfuse::BenchmarkConfig bench;
  std::vector<std::string> data_paths;
  std::vector<std::string> trainers{"flda,lr,nc,svm"};
  std::vector<std::string> strategies{"avg,vote,sigmoid,param,ke,ka,kb,kc"};
  std::string label_column;
  auto* b = app.add_subcommand("benchmark", "Cross-validate every (dataset, trainer, strategy) combination");
  std::string config_path;
  b->add_option("--config", config_path, "key=value file with benchmark settings; command-line flags win");
  b->add_option("--data", data_paths, "CSV, ARFF or KEEL .dat files");
  b->add_option("--trainers", trainers, "Comma list from flda, lr, nc, svm");
  b->add_option("--strategies", strategies, "Comma list from avg, vote, sigmoid, param, ke, ka, kb, kc");
  b->add_option("--members", bench.members, "Ensemble size")->capture_default_str();
  b->add_option("--fraction", bench.fraction, "Bag size as a fraction of the training split")->capture_default_str();
  b->add_option("--folds", bench.folds, "Cross-validation folds")->capture_default_str();
  b->add_option("--seed", bench.seed, "Seed for folds, bags and stochastic trainers")->capture_default_str();
  b->add_option("--pca-variance", bench.pca_variance, "Variance fraction kept by PCA")->capture_default_str();
  b->add_flag("--no-pca", bench.no_pca, "Standardize only");
  b->add_option("--zeta", bench.zeta, "Shape parameter of the param strategy")->capture_default_str();
  b->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
  b->add_option("--out", bench.out, "Output directory")->capture_default_str();
  b->add_option("--label", label_column, "CSV label column name (default: last column)");
  b->add_option("--delimiter", bench.csv.delimiter, "CSV delimiter")->capture_default_str();
  b->add_flag("!--no-header", bench.csv.header, "CSV files have no header row");

  // toy
  std::string toy_data;
  std::filesystem::path toy_out = "figures";
  int toy_n = 200, toy_grid = 60;
  double toy_noise = 0.15;
  std::uint64_t toy_seed = 0;
  auto* t = app.add_subcommand("toy", "Draw the 2-D potential-function figures as SVG");
  t->add_option("--data", toy_data, "2-D CSV (default: generated banana data)");
  t->add_option("--n", toy_n, "Points per class for the banana data")->capture_default_str();
  t->add_option("--noise", toy_noise, "Banana noise sigma")->capture_default_str();
  t->add_option("--seed", toy_seed, "Banana seed")->capture_default_str();
  t->add_option("--grid", toy_grid, "Heatmap cells per side")->capture_default_str();
  t->add_option("--out", toy_out, "Output directory")->capture_default_str();

  // generate
  std::string kind = "banana";
  std::filesystem::path gen_out;
  int gen_n = 200;
  double gen_noise = 0.15, gen_sep = 4.0;
  std::uint64_t gen_seed = 0;
  auto* g = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  g->add_option("kind", kind, "banana or blobs")->check(CLI::IsMember({"banana", "blobs"}))->capture_default_str();
  g->add_option("--n", gen_n, "Points per class")->capture_default_str();
  g->add_option("--noise", gen_noise, "Noise sigma")->capture_default_str();
  g->add_option("--separation", gen_sep, "Distance between blob centres")->capture_default_str();
  g->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  g->add_option("--out", gen_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*b) {
      if (!config_path.empty()) apply_config_file(*b, config_path);
      if (data_paths.empty()) throw potfuse::InputError("benchmark: --data names no dataset files");
      bench.data.assign(data_paths.begin(), data_paths.end());
      bench.trainers.clear();
      for (const auto& name : split_list(trainers)) bench.trainers.push_back(potfuse::parse_trainer(name));
      bench.strategies.clear();
      for (const auto& name : split_list(strategies)) {
        bench.strategies.push_back(potfuse::parse_strategy(name, bench.zeta).kind);
      }
      if (!label_column.empty()) bench.csv.label_name = label_column;
      return potfuse::cmd_benchmark(bench, std::cerr);
    }
    if (*t) {
      const potfuse::Dataset data =
          toy_data.empty() ? potfuse::make_banana(toy_n, toy_noise, toy_seed) : potfuse::load_dataset(toy_data);
      const auto toy = potfuse::build_toy(data, toy_grid);
      for (const auto& path : potfuse::write_toy_svgs(toy, toy_out)) std::cout << path.string() << "\n";
      return 0;
    }
    if (*g) {
      const potfuse::Dataset data = kind == "banana" ? potfuse::make_banana(gen_n, gen_noise, gen_seed)
                                                     : potfuse::make_blobs(gen_n, gen_sep, gen_noise, gen_seed);
      potfuse::write_csv(data, gen_out);
      return 0;
    }
  } catch (const potfuse::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
