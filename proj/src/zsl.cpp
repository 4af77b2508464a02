#include "sae/zsl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace sae::zsl {

std::string to_string(DistanceKind d) { return d == DistanceKind::cosine ? "cosine" : "euclidean"; }

std::string to_string(Direction d) { return d == Direction::encoder ? "encoder" : "decoder"; }

std::string to_string(Method m) {
  switch (m) {
    case Method::sae: return "sae";
    case Method::ridge_forward: return "ridge-forward";
    case Method::ridge_reverse: return "ridge-reverse";
  }
  return "?";
}

DistanceKind parse_distance(const std::string& s) {
  if (s == "cosine") return DistanceKind::cosine;
  if (s == "euclidean") return DistanceKind::euclidean;
  throw UsageError("unknown distance '" + s + "' (expected cosine or euclidean)");
}

Direction parse_direction(const std::string& s) {
  if (s == "encoder") return Direction::encoder;
  if (s == "decoder") return Direction::decoder;
  throw UsageError("unknown direction '" + s + "' (expected encoder or decoder)");
}

DenseMatrix fit_projection(Method method, const GramProducts& grams, double lambda,
                           const TrainConfig& cfg) {
  switch (method) {
    case Method::sae: {
      TrainConfig c = cfg;
      c.lambda = lambda;
      return solve_sae_system(make_sae_system(grams, lambda), c).w();
    }
    case Method::ridge_forward: return solve_ridge_forward(grams, lambda);
    case Method::ridge_reverse: return solve_ridge_reverse(grams, lambda);
  }
  throw UsageError("unknown method");
}

namespace {

DenseMatrix unit_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) /= n;
  }
  return out;
}

// Negated distances between columns of `protos` (rows of the result) and
// columns of `queries`.
DenseMatrix negated_distances(const DenseMatrix& protos, const DenseMatrix& queries,
                              DistanceKind dist) {
  if (dist == DistanceKind::cosine) {
    const DenseMatrix p = unit_columns(protos);
    const DenseMatrix q = unit_columns(queries);
    DenseMatrix sim = p.transpose() * q;
    sim.array() -= 1.0;
    return sim;
  }
  DenseMatrix out(protos.cols(), queries.cols());
  for (Index m = 0; m < queries.cols(); ++m)
    out.col(m) = -(protos.colwise() - queries.col(m)).colwise().norm().transpose();
  return out;
}

}  // namespace

DenseMatrix score_matrix(const DenseMatrix& w, const DenseMatrix& x_test,
                         const PrototypeSet& protos, DistanceKind dist, Direction direction) {
  if (protos.empty()) throw DataError("score_matrix: empty prototype set");
  if (x_test.rows() != w.cols()) {
    throw DimensionError("score_matrix: test features are " + std::to_string(x_test.rows()) +
                         "-dimensional, model expects " + std::to_string(w.cols()));
  }
  if (protos.dim() != w.rows()) {
    throw DimensionError("score_matrix: prototypes are " + std::to_string(protos.dim()) +
                         "-dimensional, model expects " + std::to_string(w.rows()));
  }
  if (direction == Direction::encoder) return negated_distances(protos.protos(), w * x_test, dist);
  return negated_distances(w.transpose() * protos.protos(), x_test, dist);
}

DenseMatrix score_matrix(const SaeModel& model, const DenseMatrix& x_test,
                         const PrototypeSet& protos, DistanceKind dist, Direction direction) {
  return score_matrix(model.w(), x_test, protos, dist, direction);
}

std::vector<Index> argmax_columns(const DenseMatrix& scores) {
  std::vector<Index> out(static_cast<std::size_t>(scores.cols()), 0);
  for (Index m = 0; m < scores.cols(); ++m) {
    Index best = 0;
    for (Index r = 1; r < scores.rows(); ++r)
      if (scores(r, m) > scores(best, m)) best = r;
    out[static_cast<std::size_t>(m)] = best;
  }
  return out;
}

std::vector<ClassId> classify(const DenseMatrix& w, const DenseMatrix& x_test,
                              const PrototypeSet& protos, DistanceKind dist, Direction direction) {
  const auto idx = argmax_columns(score_matrix(w, x_test, protos, dist, direction));
  std::vector<ClassId> out;
  out.reserve(idx.size());
  for (Index i : idx) out.push_back(protos.class_ids()[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<ClassId> classify_encoder(const SaeModel& model, const DenseMatrix& x_test,
                                      const PrototypeSet& protos, DistanceKind dist) {
  return classify(model.w(), x_test, protos, dist, Direction::encoder);
}

std::vector<ClassId> classify_decoder(const SaeModel& model, const DenseMatrix& x_test,
                                      const PrototypeSet& protos, DistanceKind dist) {
  return classify(model.w(), x_test, protos, dist, Direction::decoder);
}

double hit_at_k(const DenseMatrix& scores, const std::vector<ClassId>& row_ids,
                const std::vector<ClassId>& true_ids, Index k) {
  if (k < 1) throw DataError("hit_at_k: k must be at least 1");
  if (static_cast<Index>(row_ids.size()) != scores.rows())
    throw DimensionError("hit_at_k: row ids do not match score rows");
  if (static_cast<Index>(true_ids.size()) != scores.cols())
    throw DimensionError("hit_at_k: " + std::to_string(true_ids.size()) + " labels for " +
                         std::to_string(scores.cols()) + " samples");
  if (true_ids.empty()) throw DataError("hit_at_k: no samples");
  std::unordered_map<ClassId, Index> row_of;
  for (std::size_t r = 0; r < row_ids.size(); ++r) row_of.emplace(row_ids[r], static_cast<Index>(r));

  Index hits = 0;
  for (Index m = 0; m < scores.cols(); ++m) {
    const auto it = row_of.find(true_ids[static_cast<std::size_t>(m)]);
    if (it == row_of.end())
      throw DataError("hit_at_k: unknown true class '" + true_ids[static_cast<std::size_t>(m)] + "'");
    const Index t = it->second;
    const double ts = scores(t, m);
    Index ahead = 0;
    for (Index r = 0; r < scores.rows(); ++r)
      if (scores(r, m) > ts || (scores(r, m) == ts && r < t)) ++ahead;
    if (ahead < k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.cols());
}

AccuracyReport multiway_accuracy(const std::vector<ClassId>& predicted,
                                 const std::vector<ClassId>& truth) {
  if (predicted.size() != truth.size())
    throw DimensionError("multiway_accuracy: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(truth.size()) + " labels");
  if (truth.empty()) throw DataError("multiway_accuracy: no samples");
  AccuracyReport r;
  std::map<ClassId, Index> correct;
  Index total_correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++r.support[truth[i]];
    if (predicted[i] == truth[i]) {
      ++correct[truth[i]];
      ++total_correct;
    }
  }
  double sum = 0.0;
  for (const auto& [id, n] : r.support) {
    const double acc = static_cast<double>(correct[id]) / static_cast<double>(n);
    r.per_class[id] = acc;
    sum += acc;
  }
  r.overall = static_cast<double>(total_correct) / static_cast<double>(truth.size());
  r.mean_per_class = sum / static_cast<double>(r.support.size());
  return r;
}

AusucResult ausuc(const DenseMatrix& seen_scores, const std::vector<ClassId>& seen_ids,
                  const DenseMatrix& unseen_scores, const std::vector<ClassId>& unseen_ids,
                  const std::vector<ClassId>& true_ids, const std::vector<bool>& seen_mask,
                  Index gamma_grid) {
  const Index m = static_cast<Index>(true_ids.size());
  if (seen_scores.cols() != m || unseen_scores.cols() != m || static_cast<Index>(seen_mask.size()) != m)
    throw DimensionError("ausuc: score matrices, labels and mask must cover the same samples");
  if (seen_scores.rows() != static_cast<Index>(seen_ids.size()) ||
      unseen_scores.rows() != static_cast<Index>(unseen_ids.size()))
    throw DimensionError("ausuc: class id lists do not match score rows");
  if (seen_ids.empty() || unseen_ids.empty())
    throw DataError("ausuc: need at least one seen and one unseen class");
  if (gamma_grid < 2) throw DataError("ausuc: gamma grid needs at least 2 points");

  // Row of each sample's true class in the stacked [seen; unseen] ordering.
  std::unordered_map<ClassId, Index> row_of;
  for (std::size_t i = 0; i < seen_ids.size(); ++i) row_of.emplace(seen_ids[i], static_cast<Index>(i));
  for (std::size_t i = 0; i < unseen_ids.size(); ++i)
    row_of.emplace(unseen_ids[i], static_cast<Index>(seen_ids.size() + i));
  const Index n_seen_rows = static_cast<Index>(seen_ids.size());

  std::vector<Index> true_row(static_cast<std::size_t>(m));
  Index n_seen = 0, n_unseen = 0;
  for (Index j = 0; j < m; ++j) {
    const auto it = row_of.find(true_ids[static_cast<std::size_t>(j)]);
    if (it == row_of.end())
      throw DataError("ausuc: unknown true class '" + true_ids[static_cast<std::size_t>(j)] + "'");
    const bool is_seen = seen_mask[static_cast<std::size_t>(j)];
    if (is_seen != (it->second < n_seen_rows))
      throw DataError("ausuc: seen mask disagrees with the class of sample " + std::to_string(j));
    true_row[static_cast<std::size_t>(j)] = it->second;
    (is_seen ? n_seen : n_unseen) += 1;
  }
  if (n_seen == 0 || n_unseen == 0)
    throw DataError("ausuc: test set must contain both seen-class and unseen-class samples");

  const double lo = seen_scores.minCoeff() - unseen_scores.maxCoeff();
  const double hi = seen_scores.maxCoeff() - unseen_scores.minCoeff();
  double margin = 0.1 * (hi - lo);
  if (!(margin > 0.0)) margin = 1.0;
  const double g0 = lo - margin, g1 = hi + margin;

  AusucResult out;
  out.curve.reserve(static_cast<std::size_t>(gamma_grid));
  for (Index g = 0; g < gamma_grid; ++g) {
    const double gamma = g0 + (g1 - g0) * static_cast<double>(g) / static_cast<double>(gamma_grid - 1);
    Index seen_ok = 0, unseen_ok = 0;
    for (Index j = 0; j < m; ++j) {
      Index best = 0;
      double best_score = seen_scores(0, j) - gamma;
      for (Index r = 1; r < n_seen_rows; ++r) {
        const double s = seen_scores(r, j) - gamma;
        if (s > best_score) best_score = s, best = r;
      }
      for (Index r = 0; r < unseen_scores.rows(); ++r)
        if (unseen_scores(r, j) > best_score) best_score = unseen_scores(r, j), best = n_seen_rows + r;
      if (best == true_row[static_cast<std::size_t>(j)])
        (seen_mask[static_cast<std::size_t>(j)] ? seen_ok : unseen_ok) += 1;
    }
    out.curve.push_back({gamma, static_cast<double>(seen_ok) / static_cast<double>(n_seen),
                         static_cast<double>(unseen_ok) / static_cast<double>(n_unseen)});
  }

  std::vector<SeenUnseenPoint> pts = out.curve;
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.unseen_accuracy != b.unseen_accuracy) return a.unseen_accuracy < b.unseen_accuracy;
    return a.seen_accuracy > b.seen_accuracy;
  });
  // Keep only the best seen accuracy at each unseen accuracy.
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return a.unseen_accuracy == b.unseen_accuracy; }),
            pts.end());
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].unseen_accuracy - pts[i - 1].unseen_accuracy) *
            (pts[i].seen_accuracy + pts[i - 1].seen_accuracy) * 0.5;
  out.area = std::clamp(area, 0.0, 1.0);
  return out;
}

CrossValidationResult cross_validate_lambda(const DenseMatrix& x,
                                            const std::vector<ClassId>& labels,
                                            const PrototypeSet& semantics,
                                            std::vector<double> lambda_grid,
                                            const CrossValidationConfig& cfg) {
  if (lambda_grid.empty()) throw DataError("cross_validate_lambda: empty lambda grid");
  for (double l : lambda_grid)
    if (!(l > 0.0) || !std::isfinite(l))
      throw DataError("cross_validate_lambda: lambda values must be positive and finite");
  std::sort(lambda_grid.begin(), lambda_grid.end());
  lambda_grid.erase(std::unique(lambda_grid.begin(), lambda_grid.end()), lambda_grid.end());
  if (cfg.folds < 2) throw DataError("cross_validate_lambda: need at least 2 folds");
  if (static_cast<Index>(labels.size()) != x.cols())
    throw DimensionError("cross_validate_lambda: labels do not match samples");

  const auto classes = unique_in_order(labels);
  if (static_cast<Index>(classes.size()) < 2 * cfg.folds)
    throw DataError("cross_validate_lambda: " + std::to_string(classes.size()) +
                    " classes is too few for " + std::to_string(cfg.folds) +
                    " class-wise folds (need at least " + std::to_string(2 * cfg.folds) + ")");

  std::unordered_map<ClassId, Index> fold_of;
  for (std::size_t i = 0; i < classes.size(); ++i)
    fold_of.emplace(classes[i], static_cast<Index>(i) % cfg.folds);

  struct Fold {
    GramProducts grams;
    DenseMatrix x_test;
    std::vector<ClassId> test_labels;
    PrototypeSet protos;
  };
  std::vector<Fold> folds;
  for (Index f = 0; f < cfg.folds; ++f) {
    std::vector<Index> train_idx, test_idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      (fold_of.at(labels[i]) == f ? test_idx : train_idx).push_back(static_cast<Index>(i));
    DenseMatrix x_train(x.rows(), static_cast<Index>(train_idx.size()));
    std::vector<ClassId> train_labels;
    for (std::size_t j = 0; j < train_idx.size(); ++j) {
      x_train.col(static_cast<Index>(j)) = x.col(train_idx[j]);
      train_labels.push_back(labels[static_cast<std::size_t>(train_idx[j])]);
    }
    Fold fold;
    fold.x_test.resize(x.rows(), static_cast<Index>(test_idx.size()));
    for (std::size_t j = 0; j < test_idx.size(); ++j) {
      fold.x_test.col(static_cast<Index>(j)) = x.col(test_idx[j]);
      fold.test_labels.push_back(labels[static_cast<std::size_t>(test_idx[j])]);
    }
    fold.grams = GramProducts::compute(x_train, semantics.per_sample(train_labels));
    fold.protos = semantics.subset(unique_in_order(fold.test_labels));
    folds.push_back(std::move(fold));
  }

  CrossValidationResult result;
  result.folds = cfg.folds;
  std::optional<double> best_acc;
  for (double lambda : lambda_grid) {
    LambdaScore score;
    score.lambda = lambda;
    try {
      double sum = 0.0;
      for (const auto& fold : folds) {
        const DenseMatrix w = fit_projection(cfg.method, fold.grams, lambda);
        const auto pred = classify(w, fold.x_test, fold.protos, cfg.distance, cfg.direction);
        sum += multiway_accuracy(pred, fold.test_labels).overall;
      }
      score.accuracy = sum / static_cast<double>(folds.size());
      if (!best_acc || *score.accuracy > *best_acc) {
        best_acc = score.accuracy;
        result.best_lambda = lambda;
      }
    } catch (const NumericalError& e) {
      score.failure = e.what();
    }
    result.scores.push_back(std::move(score));
  }
  if (!best_acc) throw NumericalError("cross_validate_lambda: training failed for every lambda in the grid");
  return result;
}

}  // namespace sae::zsl
