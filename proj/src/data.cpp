#include "sae/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sae/io.hpp"

namespace sae::data {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::vector<std::string_view>> split_rows(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  // Skip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!trim(line).empty()) {
      std::vector<std::string_view> cells;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      rows.push_back(std::move(cells));
    }
    pos = end + 1;
  }
  return rows;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

bool all_numeric(const std::vector<std::string_view>& row, std::size_t from) {
  for (std::size_t c = from; c < row.size(); ++c)
    if (!parse_number(row[c])) return false;
  return true;
}

std::string position(const std::string& origin, std::size_t row, std::size_t col) {
  return origin + ": row " + std::to_string(row) + ", col " + std::to_string(col);
}

fs::path resolve(const fs::path& base, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

void LabeledDataset::validate() const {
  if (static_cast<Index>(labels.size()) != features.cols()) {
    throw DataError("dataset '" + name + "': " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(features.cols()) + " samples");
  }
  if (!matlin::all_finite(features)) throw DataError("dataset '" + name + "': non-finite features");
  if (semantics) {
    for (const auto& id : classes())
      if (!semantics->contains(id))
        throw DataError("dataset '" + name + "': class '" + id + "' has no semantic vector");
  }
}

void SplitSpec::validate() const {
  if (seen.empty() || unseen.empty())
    throw DataError("split: both seen and unseen class lists must be non-empty");
  const std::unordered_set<ClassId> s(seen.begin(), seen.end());
  for (const auto& id : unseen)
    if (s.count(id))
      throw DataError("split: class '" + id +
                      "' is both seen and unseen; seen and unseen classes must be disjoint");
  if (gzsl_holdout && !(*gzsl_holdout > 0.0 && *gzsl_holdout < 1.0))
    throw DataError("split: gzsl_holdout must lie in (0, 1)");
}

DenseMatrix parse_matrix_csv(const std::string& text, const std::string& origin) {
  auto rows = split_rows(text);
  if (rows.empty()) throw DataError(origin + ": empty file");
  std::size_t first = 0;
  if (!all_numeric(rows[0], 0)) first = 1;
  if (first == rows.size()) throw DataError(origin + ": header only, no data rows");
  const std::size_t cols = rows[first].size();
  const Index n = static_cast<Index>(rows.size() - first);
  DenseMatrix m(static_cast<Index>(cols), n);
  for (std::size_t r = first; r < rows.size(); ++r) {
    const std::size_t data_row = r - first + 1;
    if (rows[r].size() != cols) {
      throw DataError(origin + ": row " + std::to_string(data_row) + " has " +
                      std::to_string(rows[r].size()) + " columns, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = parse_number(rows[r][c]);
      if (!v)
        throw DataError(position(origin, data_row, c + 1) + ": not a number: '" +
                        std::string(rows[r][c]) + "'");
      if (!std::isfinite(*v))
        throw DataError(position(origin, data_row, c + 1) + ": non-finite value '" +
                        std::string(rows[r][c]) + "'");
      m(static_cast<Index>(c), static_cast<Index>(data_row - 1)) = *v;
    }
  }
  return m;
}

DenseMatrix load_matrix_csv(const std::string& path) {
  return parse_matrix_csv(io::read_file(path), path);
}

std::string format_matrix_csv(const DenseMatrix& m) {
  std::string out;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i) out += ',';
      out += io::format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void save_matrix_csv(const std::string& path, const DenseMatrix& m) {
  io::write_file_atomic(path, format_matrix_csv(m));
}

std::vector<ClassId> load_labels_csv(const std::string& path) {
  const std::string text = io::read_file(path);
  const auto rows = split_rows(text);
  if (rows.empty()) throw DataError(path + ": empty file");
  std::vector<ClassId> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == 0 && (rows[r][0] == "class_id" || rows[r][0] == "label")) continue;
    if (rows[r].size() != 1 || rows[r][0].empty())
      throw DataError(path + ": row " + std::to_string(r + 1) + ": expected a single class id");
    out.emplace_back(rows[r][0]);
  }
  if (out.empty()) throw DataError(path + ": no labels");
  return out;
}

void save_labels_csv(const std::string& path, const std::vector<ClassId>& labels) {
  std::string out = "class_id\n";
  for (const auto& l : labels) out += l + '\n';
  io::write_file_atomic(path, out);
}

PrototypeSet load_semantics_csv(const std::string& path) {
  const std::string text = io::read_file(path);
  const auto rows = split_rows(text);
  if (rows.empty()) throw DataError(path + ": empty file");
  std::size_t first = all_numeric(rows[0], 1) ? 0 : 1;
  if (first == rows.size()) throw DataError(path + ": header only, no classes");
  const std::size_t width = rows[first].size();
  if (width < 2) throw DataError(path + ": expected 'class_id, v1, ..., vk' rows");
  std::vector<ClassId> ids;
  DenseMatrix protos(static_cast<Index>(width - 1), static_cast<Index>(rows.size() - first));
  for (std::size_t r = first; r < rows.size(); ++r) {
    const std::size_t data_row = r - first + 1;
    if (rows[r].size() != width) {
      throw DataError(path + ": semantic dim mismatch: class '" + std::string(rows[r][0]) +
                      "' has " + std::to_string(rows[r].size() - 1) + " values, expected " +
                      std::to_string(width - 1));
    }
    ids.emplace_back(rows[r][0]);
    for (std::size_t c = 1; c < width; ++c) {
      const auto v = parse_number(rows[r][c]);
      if (!v) throw DataError(position(path, data_row, c + 1) + ": not a number");
      if (!std::isfinite(*v)) throw DataError(position(path, data_row, c + 1) + ": non-finite value");
      protos(static_cast<Index>(c - 1), static_cast<Index>(data_row - 1)) = *v;
    }
  }
  return PrototypeSet(std::move(ids), std::move(protos));
}

void save_semantics_csv(const std::string& path, const PrototypeSet& protos) {
  std::string out;
  for (Index j = 0; j < protos.size(); ++j) {
    out += protos.class_ids()[static_cast<std::size_t>(j)];
    for (Index i = 0; i < protos.dim(); ++i) out += ',' + io::format_double(protos.protos()(i, j));
    out += '\n';
  }
  io::write_file_atomic(path, out);
}

Manifest load_manifest(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("manifest '" + path + "': " + e.what());
  }
  const fs::path base = fs::path(path).parent_path();

  const auto get_string = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_string()) throw DataError("manifest '" + path + "': \"" + key + "\" must be a string");
    return doc[key].get<std::string>();
  };
  const auto get_ids = [&](const char* key) -> std::optional<std::vector<ClassId>> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_array()) throw DataError("manifest '" + path + "': \"" + key + "\" must be an array");
    std::vector<ClassId> out;
    for (const auto& v : doc[key]) {
      if (v.is_string()) out.push_back(v.get<std::string>());
      else if (v.is_number_integer()) out.push_back(std::to_string(v.get<long long>()));
      else throw DataError("manifest '" + path + "': \"" + key + "\" entries must be strings or integers");
    }
    return out;
  };
  const auto require = [&](const char* key) {
    auto v = get_string(key);
    if (!v) throw DataError("manifest '" + path + "': missing required key \"" + key + "\"");
    return *v;
  };

  Manifest m;
  LabeledDataset& ds = m.dataset;
  ds.name = get_string("name").value_or(fs::path(path).stem().string());
  ds.features = load_matrix_csv(resolve(base, require("features_csv")).string());
  ds.labels = load_labels_csv(resolve(base, require("labels_csv")).string());
  if (auto sem = get_string("semantics_csv")) ds.semantics = load_semantics_csv(resolve(base, *sem).string());
  ds.validate();
  if (ds.semantics && ds.semantics->dim() == 0) throw DataError("manifest '" + path + "': empty semantic vectors");

  const auto seen = get_ids("seen_classes");
  const auto unseen = get_ids("unseen_classes");
  if (seen.has_value() != unseen.has_value())
    throw DataError("manifest '" + path + "': seen_classes and unseen_classes must be given together");
  if (seen) {
    SplitSpec spec{*seen, *unseen, std::nullopt};
    if (doc.contains("gzsl_holdout") && !doc["gzsl_holdout"].is_null()) {
      if (!doc["gzsl_holdout"].is_number()) throw DataError("manifest '" + path + "': gzsl_holdout must be a number");
      spec.gzsl_holdout = doc["gzsl_holdout"].get<double>();
    }
    spec.validate();
    const auto present = ds.classes();
    const std::unordered_set<ClassId> present_set(present.begin(), present.end());
    for (const auto* list : {&spec.seen, &spec.unseen})
      for (const auto& id : *list)
        if (!present_set.count(id)) throw DataError("manifest '" + path + "': unknown class '" + id + "' in split");
    m.split = std::move(spec);
  }

  if (auto tf = get_string("test_features_csv")) {
    LabeledDataset test;
    test.name = ds.name + "-test";
    test.features = load_matrix_csv(resolve(base, *tf).string());
    if (test.features.rows() != ds.dim())
      throw DataError("manifest '" + path + "': test features have dimension " +
                      std::to_string(test.features.rows()) + ", training features " +
                      std::to_string(ds.dim()));
    if (auto tl = get_string("test_labels_csv")) test.labels = load_labels_csv(resolve(base, *tl).string());
    if (!test.labels.empty()) test.validate();
    else if (!matlin::all_finite(test.features)) throw DataError("manifest '" + path + "': non-finite test features");
    m.test = std::move(test);
  }
  return m;
}

WrittenFiles write_dataset_files(const std::string& dir, const std::string& prefix,
                                 const LabeledDataset& dataset) {
  WrittenFiles files;
  files.features_csv = prefix + "features.csv";
  files.labels_csv = prefix + "labels.csv";
  save_matrix_csv((fs::path(dir) / files.features_csv).string(), dataset.features);
  save_labels_csv((fs::path(dir) / files.labels_csv).string(), dataset.labels);
  if (dataset.semantics) {
    files.semantics_csv = prefix + "semantics.csv";
    save_semantics_csv((fs::path(dir) / *files.semantics_csv).string(), *dataset.semantics);
  }
  return files;
}

DenseMatrix l2_normalize_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) /= n;
  }
  return out;
}

LabeledDataset select_samples(const LabeledDataset& dataset, const std::vector<Index>& indices) {
  LabeledDataset out;
  out.name = dataset.name;
  out.semantics = dataset.semantics;
  out.features.resize(dataset.dim(), static_cast<Index>(indices.size()));
  out.labels.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    out.features.col(static_cast<Index>(j)) = dataset.features.col(indices[j]);
    out.labels.push_back(dataset.labels[static_cast<std::size_t>(indices[j])]);
  }
  return out;
}

LabeledDataset select_classes(const LabeledDataset& dataset, const std::vector<ClassId>& classes) {
  const std::unordered_set<ClassId> keep(classes.begin(), classes.end());
  std::vector<Index> idx;
  for (std::size_t i = 0; i < dataset.labels.size(); ++i)
    if (keep.count(dataset.labels[i])) idx.push_back(static_cast<Index>(i));
  return select_samples(dataset, idx);
}

namespace {

void require_covered(const LabeledDataset& dataset, const SplitSpec& spec) {
  spec.validate();
  const auto present = dataset.classes();
  const std::unordered_set<ClassId> present_set(present.begin(), present.end());
  for (const auto& id : spec.unseen)
    if (!present_set.count(id)) throw DataError("split: unseen class '" + id + "' is absent from the dataset");
  for (const auto& id : spec.seen)
    if (!present_set.count(id)) throw DataError("split: seen class '" + id + "' is absent from the dataset");
  std::unordered_set<ClassId> listed(spec.seen.begin(), spec.seen.end());
  listed.insert(spec.unseen.begin(), spec.unseen.end());
  for (const auto& id : present)
    if (!listed.count(id)) throw DataError("split: class '" + id + "' is neither seen nor unseen");
}

}  // namespace

ZslSplit zsl_split(const LabeledDataset& dataset, const SplitSpec& spec) {
  require_covered(dataset, spec);
  return {select_classes(dataset, spec.seen), select_classes(dataset, spec.unseen)};
}

GzslSplit gzsl_split(const LabeledDataset& dataset, const SplitSpec& spec, std::uint64_t seed) {
  require_covered(dataset, spec);
  const double fraction = spec.gzsl_holdout.value_or(kDefaultGzslHoldout);

  std::map<ClassId, std::vector<Index>> members;
  for (std::size_t i = 0; i < dataset.labels.size(); ++i)
    members[dataset.labels[i]].push_back(static_cast<Index>(i));

  std::mt19937_64 rng(seed);
  std::vector<bool> held(dataset.labels.size(), false);
  for (const auto& id : spec.seen) {
    auto idx = members[id];
    const auto n = static_cast<long>(idx.size());
    long count = std::lround(fraction * static_cast<double>(n));
    if (n > 1) count = std::clamp(count, 1L, n - 1);
    else count = 0;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (long c = 0; c < count; ++c) held[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])] = true;
  }

  const std::unordered_set<ClassId> seen(spec.seen.begin(), spec.seen.end());
  std::vector<Index> train_idx, test_idx;
  GzslSplit out;
  for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
    const bool is_seen = seen.count(dataset.labels[i]) > 0;
    if (is_seen && !held[i]) {
      train_idx.push_back(static_cast<Index>(i));
    } else {
      test_idx.push_back(static_cast<Index>(i));
      out.seen_mask.push_back(is_seen);
    }
  }
  out.train = select_samples(dataset, train_idx);
  out.test = select_samples(dataset, test_idx);
  return out;
}

}  // namespace sae::data
