#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "potfuse/dataset.hpp"

namespace potfuse {

struct CsvOptions {
  bool header = true;
  char delimiter = ',';
  /// Label column by header name; takes precedence over `label_index`.
  std::optional<std::string> label_name;
  /// Zero-based label column; negative counts from the end (-1 = last, the default).
  int label_index = -1;
};

/// Numeric columns stay numeric, any column with a non-numeric value is
/// one-hot encoded (categories in first-appearance order). Labels map to
/// 0..C-1 in first-appearance order. Rows with an empty, "?" or "NA" cell
/// are dropped and counted in Dataset::dropped_rows.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts = {});
Dataset parse_csv(const std::string& text, const std::string& name, const CsvOptions& opts = {});

/// ARFF (and KEEL .dat) reader. The label is the @outputs attribute, else an
/// attribute named "class", else the last attribute. '?' marks a missing value.
Dataset load_arff(const std::filesystem::path& path);
Dataset parse_arff(const std::string& text, const std::string& name);

/// Picks load_arff for .arff/.dat files and load_csv otherwise.
Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& csv = {});

/// Two interleaved half-moons in 2-D with isotropic Gaussian noise.
Dataset make_banana(int n_per_class, double noise, std::uint64_t seed);

/// Two isotropic Gaussian blobs at (-separation/2, 0) and (+separation/2, 0).
Dataset make_blobs(int n_per_class, double separation, double sigma, std::uint64_t seed);

/// Writes a dataset as CSV with a header and the class name as last column.
void write_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace potfuse
