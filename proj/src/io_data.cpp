#include "potfuse/io_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "potfuse/error.hpp"
#include "potfuse/random.hpp"

namespace potfuse {

// ---------------------------------------------------------------- Dataset

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (int y : labels) {
    if (y >= 0 && static_cast<std::size_t>(y) < counts.size()) ++counts[static_cast<std::size_t>(y)];
  }
  return counts;
}

double Dataset::imbalance_ratio() const {
  const auto counts = class_counts();
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  if (counts.empty() || *lo == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(*hi) / static_cast<double>(*lo);
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.name = name;
  out.class_names = class_names;
  out.feature_names = feature_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), dim());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

void validate(const Dataset& data) {
  const std::string where = data.name.empty() ? "dataset" : "dataset '" + data.name + "'";
  if (data.size() < 1) throw InputError(where + ": no instances");
  if (data.dim() < 1) throw InputError(where + ": no features");
  if (data.n_classes() < 2) throw InputError(where + ": needs at least two classes");
  if (static_cast<std::size_t>(data.size()) != data.labels.size()) {
    throw InputError(where + ": feature and label counts differ");
  }
  if (!data.features.allFinite()) throw InputError(where + ": non-finite feature value");
  for (int y : data.labels) {
    if (y < 0 || y >= data.n_classes()) throw InputError(where + ": label out of range");
  }
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw InputError(where + ": class '" + data.class_names[c] + "' never appears");
  }
}

// ---------------------------------------------------------------- parsing helpers

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?" || cell == "NA"; }

std::optional<double> parse_number(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view without_bom(const std::string& text) {
  std::string_view v(text);
  if (v.starts_with("\xEF\xBB\xBF")) v.remove_prefix(3);
  return v;
}

/// RFC 4180 records: quoted fields, doubled quotes, line breaks inside quotes.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::vector<Record> split_csv(const std::string& text, char delim, const std::string& source) {
  std::vector<Record> records;
  Record rec;
  std::string field;
  bool in_quotes = false, field_quoted = false, any = false;
  std::size_t line = 1;
  rec.line = 1;
  const auto end_field = [&] {
    rec.fields.push_back(field_quoted ? field : trim(field));
    field.clear();
    field_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty() && !any;
    if (!blank) records.push_back(std::move(rec));
    rec = Record{};
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && trim(field).empty()) {
      in_quotes = true;
      field_quoted = true;
      field.clear();
      any = true;
    } else if (c == delim) {
      end_field();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
      rec.line = ++line;
    } else {
      field += c;
      if (c != ' ' && c != '\t') any = true;
    }
  }
  if (in_quotes) throw InputError(source + ": unterminated quoted field");
  if (!field.empty() || !rec.fields.empty() || any) end_record();
  return records;
}

enum class ColumnKind { Infer, Numeric, Nominal };

struct RawTable {
  std::string name;
  std::string source;
  std::vector<std::string> columns;
  std::vector<ColumnKind> kinds;
  std::vector<std::vector<std::string>> declared;  // declared nominal values (ARFF)
  std::vector<Record> rows;
  std::size_t label = 0;
};

Dataset encode(RawTable table) {
  const std::size_t ncol = table.columns.size();
  Dataset data;
  data.name = table.name;

  std::vector<const Record*> kept;
  for (const auto& r : table.rows) {
    if (r.fields.size() != ncol) {
      throw InputError(table.source + ": line " + std::to_string(r.line) + ": expected " + std::to_string(ncol) +
                       " fields, found " + std::to_string(r.fields.size()));
    }
    if (std::any_of(r.fields.begin(), r.fields.end(), is_missing)) {
      ++data.dropped_rows;
    } else {
      kept.push_back(&r);
    }
  }
  if (data.dropped_rows > 0) {
    std::cerr << "warning: " << table.source << ": dropped " << data.dropped_rows
              << " row(s) with missing values\n";
  }
  if (kept.empty()) throw InputError(table.source + ": no complete rows");

  struct Encoded {
    bool numeric = true;
    std::vector<std::string> categories;
  };
  std::vector<Encoded> enc(ncol);
  std::size_t out_dim = 0;
  for (std::size_t c = 0; c < ncol; ++c) {
    if (c == table.label) continue;
    Encoded& e = enc[c];
    if (table.kinds[c] == ColumnKind::Nominal) {
      e.numeric = false;
      e.categories = table.declared[c];
    } else if (table.kinds[c] == ColumnKind::Infer) {
      e.numeric = std::all_of(kept.begin(), kept.end(),
                              [&](const Record* r) { return parse_number(r->fields[c]).has_value(); });
    }
    if (!e.numeric && table.kinds[c] != ColumnKind::Nominal) {
      for (const Record* r : kept) {
        if (std::find(e.categories.begin(), e.categories.end(), r->fields[c]) == e.categories.end()) {
          e.categories.push_back(r->fields[c]);
        }
      }
    }
    if (e.numeric) {
      data.feature_names.push_back(table.columns[c]);
      ++out_dim;
    } else {
      for (const auto& v : e.categories) data.feature_names.push_back(table.columns[c] + "=" + v);
      out_dim += e.categories.size();
    }
  }
  if (out_dim == 0) throw InputError(table.source + ": no feature columns");

  data.features = Matrix::Zero(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(out_dim));
  std::unordered_map<std::string, int> label_ids;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Record& r = *kept[i];
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < ncol; ++c) {
      if (c == table.label) continue;
      const Encoded& e = enc[c];
      if (e.numeric) {
        const auto v = parse_number(r.fields[c]);
        if (!v) {
          throw InputError(table.source + ": line " + std::to_string(r.line) + ": column '" + table.columns[c] +
                           "' is not numeric: '" + r.fields[c] + "'");
        }
        data.features(static_cast<Eigen::Index>(i), col++) = *v;
      } else {
        const auto it = std::find(e.categories.begin(), e.categories.end(), r.fields[c]);
        if (it == e.categories.end()) {
          throw InputError(table.source + ": line " + std::to_string(r.line) + ": value '" + r.fields[c] +
                           "' not declared for attribute '" + table.columns[c] + "'");
        }
        data.features(static_cast<Eigen::Index>(i), col + (it - e.categories.begin())) = 1.0;
        col += static_cast<Eigen::Index>(e.categories.size());
      }
    }
    const std::string& label = r.fields[table.label];
    if (table.kinds[table.label] == ColumnKind::Nominal) {
      const auto& declared = table.declared[table.label];
      if (std::find(declared.begin(), declared.end(), label) == declared.end()) {
        throw InputError(table.source + ": line " + std::to_string(r.line) + ": class value '" + label +
                         "' not declared");
      }
    }
    auto [it, inserted] = label_ids.emplace(label, static_cast<int>(data.class_names.size()));
    if (inserted) data.class_names.push_back(label);
    data.labels.push_back(it->second);
  }
  if (data.class_names.size() < 2) {
    throw InputError(table.source + ": label column '" + table.columns[table.label] +
                     "' has a single class");
  }
  return data;
}

std::string stem_of(const std::string& name) { return std::filesystem::path(name).stem().string(); }

}  // namespace

// ---------------------------------------------------------------- CSV

Dataset parse_csv(const std::string& text, const std::string& name, const CsvOptions& opts) {
  auto records = split_csv(std::string(without_bom(text)), opts.delimiter, name);
  if (records.empty()) throw InputError(name + ": empty file");
  RawTable table;
  table.name = stem_of(name);
  table.source = name;
  const std::size_t ncol = records.front().fields.size();
  if (opts.header) {
    table.columns = records.front().fields;
    records.erase(records.begin());
  } else {
    for (std::size_t c = 0; c < ncol; ++c) table.columns.push_back("x" + std::to_string(c));
  }
  if (ncol < 2) throw InputError(name + ": need at least one feature column and a label column");
  if (opts.label_name) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), *opts.label_name);
    if (it == table.columns.end()) throw InputError(name + ": no column named '" + *opts.label_name + "'");
    table.label = static_cast<std::size_t>(it - table.columns.begin());
  } else {
    const long idx = opts.label_index < 0 ? static_cast<long>(ncol) + opts.label_index : opts.label_index;
    if (idx < 0 || idx >= static_cast<long>(ncol)) {
      throw InputError(name + ": label column index " + std::to_string(opts.label_index) + " out of range");
    }
    table.label = static_cast<std::size_t>(idx);
  }
  table.kinds.assign(ncol, ColumnKind::Infer);
  table.declared.assign(ncol, {});
  table.rows = std::move(records);
  return encode(std::move(table));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
  return parse_csv(read_file(path), path.string(), opts);
}

// ---------------------------------------------------------------- ARFF

namespace {

/// Splits "name rest" where name may be quoted.
std::pair<std::string, std::string> take_name(const std::string& s) {
  const std::string t = trim(s);
  if (!t.empty() && (t[0] == '\'' || t[0] == '"')) {
    const auto close = t.find(t[0], 1);
    if (close == std::string::npos) return {"", ""};
    return {t.substr(1, close - 1), trim(t.substr(close + 1))};
  }
  const auto sp = t.find_first_of(" \t{");
  if (sp == std::string::npos) return {t, ""};
  return {t.substr(0, sp), trim(t.substr(sp))};
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

Dataset parse_arff(const std::string& text, const std::string& name) {
  RawTable table;
  table.name = stem_of(name);
  table.source = name;
  std::optional<std::string> outputs;
  bool in_data = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::string data_text;
  std::vector<std::size_t> data_lines;
  const auto bad = [&](const std::string& why) {
    return InputError(name + ": line " + std::to_string(line_no) + ": " + why + ": '" + trim(raw) + "'");
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    if (in_data) {
      if (line[0] == '{') throw bad("sparse ARFF data is not supported");
      data_text += line;
      data_text += '\n';
      data_lines.push_back(line_no);
      continue;
    }
    if (line[0] != '@') throw bad("expected a header declaration");
    const auto sp = line.find_first_of(" \t");
    const std::string keyword = lower(line.substr(0, sp));
    const std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    if (keyword == "@relation") {
      if (rest.empty()) throw bad("@relation without a name");
      table.name = unquote(rest);
    } else if (keyword == "@attribute") {
      auto [attr, type] = take_name(rest);
      if (attr.empty() || type.empty()) throw bad("malformed @attribute");
      table.columns.push_back(attr);
      if (type[0] == '{') {
        const auto close = type.find('}');
        if (close == std::string::npos) throw bad("unterminated nominal value list");
        std::vector<std::string> values;
        std::stringstream vs(type.substr(1, close - 1));
        std::string v;
        while (std::getline(vs, v, ',')) values.push_back(unquote(v));
        if (values.empty()) throw bad("empty nominal value list");
        table.kinds.push_back(ColumnKind::Nominal);
        table.declared.push_back(std::move(values));
      } else {
        const std::string t = lower(take_name(type).first);
        if (t == "numeric" || t == "real" || t == "integer") {
          table.kinds.push_back(ColumnKind::Numeric);
        } else if (t == "string") {
          table.kinds.push_back(ColumnKind::Infer);
        } else {
          throw bad("unsupported attribute type '" + t + "'");
        }
        table.declared.emplace_back();
      }
    } else if (keyword == "@inputs") {
      // KEEL listing of input attributes; the label comes from @outputs.
    } else if (keyword == "@outputs" || keyword == "@output") {
      outputs = unquote(rest);
    } else if (keyword == "@data") {
      if (table.columns.empty()) throw bad("@data before any @attribute");
      in_data = true;
    } else {
      throw bad("unknown declaration");
    }
  }
  if (!in_data) throw InputError(name + ": missing @data section");

  const auto find_col = [&](const std::string& wanted) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (lower(table.columns[c]) == lower(wanted)) return c;
    }
    return std::nullopt;
  };
  if (outputs) {
    const auto c = find_col(*outputs);
    if (!c) throw InputError(name + ": @outputs names unknown attribute '" + *outputs + "'");
    table.label = *c;
  } else if (const auto c = find_col("class")) {
    table.label = *c;
  } else {
    table.label = table.columns.size() - 1;
  }

  auto records = split_csv(data_text, ',', name);
  for (std::size_t i = 0; i < records.size() && i < data_lines.size(); ++i) {
    records[i].line = data_lines[i];
    for (auto& f : records[i].fields) f = unquote(f);
  }
  table.rows = std::move(records);
  if (table.rows.empty()) throw InputError(name + ": no data rows");
  return encode(std::move(table));
}

Dataset load_arff(const std::filesystem::path& path) { return parse_arff(read_file(path), path.string()); }

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& csv) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".arff" || ext == ".dat") return load_arff(path);
  return load_csv(path, csv);
}

// ---------------------------------------------------------------- synthetic data

Dataset make_banana(int n_per_class, double noise, std::uint64_t seed) {
  if (n_per_class < 1) throw InputError("make_banana: need at least one point per class");
  if (!(noise >= 0.0)) throw InputError("make_banana: noise must be non-negative");
  Dataset data;
  data.name = "banana";
  data.class_names = {"upper", "lower"};
  data.feature_names = {"x1", "x2"};
  const auto n = static_cast<Eigen::Index>(n_per_class);
  data.features.resize(2 * n, 2);
  auto rng = make_rng(seed, {0xba7a7a});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double theta = n > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    data.features.row(i) << std::cos(theta), std::sin(theta);
    data.features.row(n + i) << 1.0 - std::cos(theta), 0.5 - std::sin(theta);
  }
  data.labels.assign(static_cast<std::size_t>(n), 0);
  data.labels.resize(static_cast<std::size_t>(2 * n), 1);
  if (noise > 0.0) {
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) data.features(i, j) += noise * gauss(rng);
    }
  }
  return data;
}

Dataset make_blobs(int n_per_class, double separation, double sigma, std::uint64_t seed) {
  if (n_per_class < 1) throw InputError("make_blobs: need at least one point per class");
  if (!(sigma >= 0.0)) throw InputError("make_blobs: sigma must be non-negative");
  Dataset data;
  data.name = "blobs";
  data.class_names = {"left", "right"};
  data.feature_names = {"x1", "x2"};
  const auto n = static_cast<Eigen::Index>(n_per_class);
  data.features.resize(2 * n, 2);
  auto rng = make_rng(seed, {0xb10b});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const double cx = (i < n ? -0.5 : 0.5) * separation;
    data.features(i, 0) = cx + sigma * gauss(rng);
    data.features(i, 1) = sigma * gauss(rng);
    data.labels.push_back(i < n ? 0 : 1);
  }
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.precision(17);
  for (std::size_t j = 0; j < data.feature_names.size(); ++j) out << data.feature_names[j] << ',';
  out << "class\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) out << data.features(i, j) << ',';
    out << data.class_names[static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])] << '\n';
  }
}

}  // namespace potfuse
