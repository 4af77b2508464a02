#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sae/zsl.hpp"

namespace sae::zsl {

/// One evaluated method ("SAE (W)", "Ridge F->S", ...).
struct MethodResult {
  std::string method;
  std::vector<std::pair<std::string, double>> metrics;
  std::map<ClassId, double> per_class;
  std::vector<SeenUnseenPoint> curve;

  /// Throws NumericalError for non-finite values, and for values outside [0, 1]
  /// unless `unit_interval` is false (losses such as the clustering Δ).
  void add(const std::string& name, double value, bool unit_interval = true);
  std::optional<double> metric(const std::string& name) const;
};

struct EvalReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<MethodResult> rows;
  std::optional<CrossValidationResult> lambda_cv;

  const MethodResult* row(const std::string& method) const;

  nlohmann::ordered_json to_json() const;
  /// Aligned plain-text rendering of the same content.
  std::string to_table() const;
};

nlohmann::ordered_json to_json(const CrossValidationResult& cv);

}  // namespace sae::zsl
