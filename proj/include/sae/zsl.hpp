#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sae/classes.hpp"
#include "sae/model.hpp"

namespace sae::zsl {

enum class DistanceKind { cosine, euclidean };

// Where nearest-prototype search happens: encoder compares W·x with the
// prototypes in semantic space; decoder compares x with Wᵀ·prototype in
// feature space.
enum class Direction { encoder, decoder };

// How the projection W (k×d) is fitted.
enum class Method { sae, ridge_forward, ridge_reverse };

std::string to_string(DistanceKind d);
std::string to_string(Direction d);
std::string to_string(Method m);
DistanceKind parse_distance(const std::string& s);
Direction parse_direction(const std::string& s);

/// Fits W for `method` from precomputed Gram products.
DenseMatrix fit_projection(Method method, const GramProducts& grams, double lambda,
                           const TrainConfig& cfg = {});

/// u×M matrix of negated distances between each test sample (column) and each
/// prototype (row), computed in the space selected by `direction`.
DenseMatrix score_matrix(const DenseMatrix& w, const DenseMatrix& x_test,
                         const PrototypeSet& protos, DistanceKind dist, Direction direction);
DenseMatrix score_matrix(const SaeModel& model, const DenseMatrix& x_test,
                         const PrototypeSet& protos, DistanceKind dist, Direction direction);

/// Row index of the maximum of each column; ties go to the lowest row.
std::vector<Index> argmax_columns(const DenseMatrix& scores);

std::vector<ClassId> classify(const DenseMatrix& w, const DenseMatrix& x_test,
                              const PrototypeSet& protos, DistanceKind dist, Direction direction);
std::vector<ClassId> classify_encoder(const SaeModel& model, const DenseMatrix& x_test,
                                      const PrototypeSet& protos,
                                      DistanceKind dist = DistanceKind::cosine);
std::vector<ClassId> classify_decoder(const SaeModel& model, const DenseMatrix& x_test,
                                      const PrototypeSet& protos,
                                      DistanceKind dist = DistanceKind::cosine);

/// Fraction of samples whose true class is among the k best-scoring rows.
/// Rows with equal scores rank by row index.
double hit_at_k(const DenseMatrix& scores, const std::vector<ClassId>& row_ids,
                const std::vector<ClassId>& true_ids, Index k);

struct AccuracyReport {
  double overall = 0.0;         // per sample
  double mean_per_class = 0.0;  // unweighted mean of per_class
  std::map<ClassId, double> per_class;
  std::map<ClassId, Index> support;
};

AccuracyReport multiway_accuracy(const std::vector<ClassId>& predicted,
                                 const std::vector<ClassId>& truth);

// ---- generalized ZSL ----------------------------------------------------------

inline constexpr Index kDefaultGammaGrid = 200;

struct SeenUnseenPoint {
  double gamma = 0.0;
  double seen_accuracy = 0.0;
  double unseen_accuracy = 0.0;
};

struct AusucResult {
  double area = 0.0;
  std::vector<SeenUnseenPoint> curve;  // in increasing gamma
};

/// Area under the seen/unseen accuracy curve traced by subtracting a calibration
/// offset gamma from every seen-class score. Rows of `seen_scores` and
/// `unseen_scores` are the classes in `seen_ids` / `unseen_ids`; columns are test
/// samples. The gamma grid spans the observed range of seen-minus-unseen score
/// differences with a 10% margin on both sides, so the curve always reaches both
/// axes.
AusucResult ausuc(const DenseMatrix& seen_scores, const std::vector<ClassId>& seen_ids,
                  const DenseMatrix& unseen_scores, const std::vector<ClassId>& unseen_ids,
                  const std::vector<ClassId>& true_ids, const std::vector<bool>& seen_mask,
                  Index gamma_grid = kDefaultGammaGrid);

// ---- lambda selection -----------------------------------------------------------

struct LambdaScore {
  double lambda = 0.0;
  std::optional<double> accuracy;  // empty when training failed
  std::string failure;
};

struct CrossValidationResult {
  double best_lambda = 0.0;
  Index folds = 0;
  std::vector<LambdaScore> scores;  // ascending lambda
};

struct CrossValidationConfig {
  Index folds = 3;
  Direction direction = Direction::encoder;
  DistanceKind distance = DistanceKind::cosine;
  Method method = Method::sae;
};

/// Class-wise cross-validation: classes (in first-appearance order) are dealt
/// round-robin into folds, and each fold's classes play the unseen classes for a
/// model trained on the rest. Picks the lambda with the best mean per-sample
/// accuracy; ties go to the smaller lambda. Lambdas whose training fails
/// numerically are recorded and skipped.
CrossValidationResult cross_validate_lambda(const DenseMatrix& x,
                                            const std::vector<ClassId>& labels,
                                            const PrototypeSet& semantics,
                                            std::vector<double> lambda_grid,
                                            const CrossValidationConfig& cfg = {});

}  // namespace sae::zsl
