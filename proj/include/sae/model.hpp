#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "sae/matlin.hpp"

namespace sae {

inline constexpr double kDefaultLambda = 0.2;

struct TrainConfig {
  double lambda = kDefaultLambda;
  // 0 selects the Schur default of 30 iterations per row.
  Index schur_max_iters = 0;
  // Relative stationarity tolerance: ‖AW + WB − C‖_F ≤ residual_tol · max(1, ‖C‖_F).
  double residual_tol = 1e-6;

  void validate() const;
};

/// The three matrices of the stationarity condition A·W + W·B = C:
/// A = S·Sᵀ, B = λ·X·Xᵀ, C = (1+λ)·S·Xᵀ.
struct SaeSystem {
  DenseMatrix a;  // k×k
  DenseMatrix b;  // d×d
  DenseMatrix c;  // k×d
  double lambda = kDefaultLambda;
};

/// Trained semantic autoencoder. The encoder is `w()` (k×d); the decoder is its
/// transpose and is never stored separately.
class SaeModel {
 public:
  /// Wraps an existing projection. Throws DataError on non-finite entries or
  /// a non-positive lambda.
  static SaeModel from_weights(DenseMatrix w, double lambda, double train_residual = 0.0);

  const DenseMatrix& w() const { return w_; }
  double lambda() const { return lambda_; }
  double train_residual() const { return train_residual_; }
  Index k() const { return w_.rows(); }
  Index d() const { return w_.cols(); }

 private:
  SaeModel(DenseMatrix w, double lambda, double residual)
      : w_(std::move(w)), lambda_(lambda), train_residual_(residual) {}

  DenseMatrix w_;
  double lambda_;
  double train_residual_;
};

/// S·Sᵀ, X·Xᵀ and S·Xᵀ: everything the closed-form solvers need from the data.
/// Their cost is the only part of training that grows with N.
struct GramProducts {
  DenseMatrix ss;  // k×k
  DenseMatrix xx;  // d×d
  DenseMatrix sx;  // k×d

  static GramProducts compute(const DenseMatrix& x, const DenseMatrix& s);
};

SaeSystem make_sae_system(const GramProducts& grams, double lambda);
SaeSystem make_sae_system(const DenseMatrix& x, const DenseMatrix& s, double lambda);

/// Adds ε·I to A and B with ε = 1e-8·trace/dim taken per matrix. Used to break
/// a singular pencil while keeping the closed-form path.
SaeSystem jittered(const SaeSystem& system, double relative = 1e-8);

/// Solves the Sylvester system and checks the stationarity residual.
SaeModel solve_sae_system(const SaeSystem& system, const TrainConfig& cfg = {});

/// Closed-form SAE training. x is d×N, s is k×N.
SaeModel train_sae(const DenseMatrix& x, const DenseMatrix& s, const TrainConfig& cfg = {});

/// ‖X − WᵀS‖²_F + λ‖WX − S‖²_F
double objective(const SaeModel& model, const DenseMatrix& x, const DenseMatrix& s);
double objective(const DenseMatrix& w, double lambda, const DenseMatrix& x, const DenseMatrix& s);

/// Semantic embedding W·x of each column.
DenseMatrix encode(const SaeModel& model, const DenseMatrix& x);
/// Feature-space reconstruction Wᵀ·s of each column.
DenseMatrix decode(const SaeModel& model, const DenseMatrix& s);

/// argmin ‖WX − S‖² + λ‖W‖²  →  W = S·Xᵀ·(X·Xᵀ + λI)⁻¹
DenseMatrix solve_ridge_forward(const DenseMatrix& x, const DenseMatrix& s, double lambda);
/// argmin ‖X − WᵀS‖² + λ‖W‖²  →  W = (S·Sᵀ + λI)⁻¹·S·Xᵀ
DenseMatrix solve_ridge_reverse(const DenseMatrix& x, const DenseMatrix& s, double lambda);

DenseMatrix solve_ridge_forward(const GramProducts& grams, double lambda);
DenseMatrix solve_ridge_reverse(const GramProducts& grams, double lambda);

// JSON persistence: W stored column-major as a flat array plus its dims.
nlohmann::json model_to_json(const SaeModel& model);
SaeModel model_from_json(const nlohmann::json& doc);
// `extra` keys are merged into the top-level object.
void save_model(const SaeModel& model, const std::string& path,
                const nlohmann::json& extra = nlohmann::json::object());
SaeModel load_model(const std::string& path);

}  // namespace sae
