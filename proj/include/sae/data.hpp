#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sae/classes.hpp"
#include "sae/matlin/dense.hpp"

namespace sae::data {

/// Features are d×N (one sample per column); labels has length N.
struct LabeledDataset {
  DenseMatrix features;
  std::vector<ClassId> labels;
  std::optional<PrototypeSet> semantics;
  std::string name;

  Index size() const { return features.cols(); }
  Index dim() const { return features.rows(); }
  std::vector<ClassId> classes() const { return unique_in_order(labels); }

  /// Throws DataError if any invariant is broken.
  void validate() const;
};

struct SplitSpec {
  std::vector<ClassId> seen;
  std::vector<ClassId> unseen;
  std::optional<double> gzsl_holdout;

  void validate() const;
};

struct Manifest {
  LabeledDataset dataset;
  std::optional<SplitSpec> split;
  // Separate evaluation set, used by clustering.
  std::optional<LabeledDataset> test;
};

// ---- CSV matrices -----------------------------------------------------------
//
// On disk: one sample per row, comma separated, optional header row (detected
// by a non-numeric first row). In memory: one sample per column.

DenseMatrix parse_matrix_csv(const std::string& text, const std::string& origin = "<memory>");
DenseMatrix load_matrix_csv(const std::string& path);
std::string format_matrix_csv(const DenseMatrix& m);
void save_matrix_csv(const std::string& path, const DenseMatrix& m);

std::vector<ClassId> load_labels_csv(const std::string& path);
void save_labels_csv(const std::string& path, const std::vector<ClassId>& labels);

// One class per row: id, v1, ..., vk.
PrototypeSet load_semantics_csv(const std::string& path);
void save_semantics_csv(const std::string& path, const PrototypeSet& protos);

/// Relative paths inside the manifest resolve against the manifest's directory.
Manifest load_manifest(const std::string& path);

/// Writes features/labels(/semantics) CSVs into `dir` with the given file prefix
/// and returns the manifest entries pointing at them.
struct WrittenFiles {
  std::string features_csv;
  std::string labels_csv;
  std::optional<std::string> semantics_csv;
};
WrittenFiles write_dataset_files(const std::string& dir, const std::string& prefix,
                                 const LabeledDataset& dataset);

// ---- preprocessing and splits ---------------------------------------------

/// Scales each nonzero column to unit L2 norm; zero columns are left alone.
DenseMatrix l2_normalize_columns(const DenseMatrix& m);

LabeledDataset select_samples(const LabeledDataset& dataset, const std::vector<Index>& indices);
LabeledDataset select_classes(const LabeledDataset& dataset, const std::vector<ClassId>& classes);

struct ZslSplit {
  LabeledDataset train;  // seen classes
  LabeledDataset test;   // unseen classes
};
ZslSplit zsl_split(const LabeledDataset& dataset, const SplitSpec& spec);

inline constexpr double kDefaultGzslHoldout = 0.2;

struct GzslSplit {
  LabeledDataset train;
  LabeledDataset test;          // held-out seen samples mixed with all unseen samples
  std::vector<bool> seen_mask;  // per test sample: true when its class is seen
};

/// Per seen class, holds out round(fraction·n) samples (at least one when n > 1,
/// never the whole class). Deterministic for a fixed seed.
GzslSplit gzsl_split(const LabeledDataset& dataset, const SplitSpec& spec, std::uint64_t seed);

}  // namespace sae::data
