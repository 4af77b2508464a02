#include "sae/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace sae::zsl {

namespace {

// Display width of UTF-8 text: one column per code point.
std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string pad_right(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
  const std::size_t w = display_width(s);
  return w >= width ? s : std::string(width - w, ' ') + s;
}

}  // namespace

void MethodResult::add(const std::string& name, double value, bool unit_interval) {
  if (!std::isfinite(value) || (unit_interval && !(value >= 0.0 && value <= 1.0))) {
    std::ostringstream os;
    os << "report: metric '" << name << "' = " << value
       << (unit_interval ? " is outside [0, 1]" : " is not finite");
    throw NumericalError(os.str());
  }
  metrics.emplace_back(name, value);
}

std::optional<double> MethodResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return std::nullopt;
}

const MethodResult* EvalReport::row(const std::string& method) const {
  for (const auto& r : rows)
    if (r.method == method) return &r;
  return nullptr;
}

nlohmann::ordered_json to_json(const CrossValidationResult& cv) {
  nlohmann::ordered_json j;
  j["best_lambda"] = cv.best_lambda;
  j["folds"] = cv.folds;
  auto& scores = j["scores"] = nlohmann::ordered_json::array();
  for (const auto& s : cv.scores) {
    nlohmann::ordered_json e;
    e["lambda"] = s.lambda;
    if (s.accuracy) e["accuracy"] = *s.accuracy;
    else e["failure"] = s.failure;
    scores.push_back(std::move(e));
  }
  return j;
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  auto& cfg = j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  auto& out_rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    auto& m = row["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    auto& pc = row["per_class"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.per_class) pc[k] = v;
    if (!r.curve.empty()) {
      auto& curve = row["curve"] = nlohmann::ordered_json::array();
      for (const auto& p : r.curve)
        curve.push_back({{"gamma", p.gamma}, {"seen", p.seen_accuracy}, {"unseen", p.unseen_accuracy}});
    }
    out_rows.push_back(std::move(row));
  }
  if (lambda_cv) j["lambda_cv"] = zsl::to_json(*lambda_cv);
  return j;
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  for (const auto& [k, v] : config) os << k << ": " << v << "\n";
  if (!config.empty()) os << "\n";

  std::vector<std::string> names;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.metrics)
      if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);

  std::size_t method_w = 6;
  for (const auto& r : rows) method_w = std::max(method_w, display_width(r.method));
  std::vector<std::size_t> widths;
  for (const auto& n : names) widths.push_back(std::max<std::size_t>(display_width(n), 8));

  os << pad_right("method", method_w);
  for (std::size_t i = 0; i < names.size(); ++i) os << "  " << pad_left(names[i], widths[i]);
  os << "\n";
  for (const auto& r : rows) {
    os << pad_right(r.method, method_w);
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::string cell = "-";
      if (auto v = r.metric(names[i])) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(4) << *v;
        cell = c.str();
      }
      os << "  " << pad_left(cell, widths[i]);
    }
    os << "\n";
  }

  if (lambda_cv) {
    os << "\nlambda cross-validation (" << lambda_cv->folds << " class-wise folds), best "
       << lambda_cv->best_lambda << "\n";
    for (const auto& s : lambda_cv->scores) {
      os << "  " << std::left << std::setw(12) << s.lambda << " ";
      if (s.accuracy) os << std::fixed << std::setprecision(4) << *s.accuracy << std::defaultfloat;
      else os << "failed: " << s.failure;
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace sae::zsl
