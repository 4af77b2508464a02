#include "sae/model.hpp"

#include <cmath>
#include <sstream>

#include "sae/io.hpp"

namespace sae {

namespace {

void require_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream os;
    os << what << ": lambda must be a positive finite number, got " << lambda;
    throw DataError(os.str());
  }
}

void require_paired(const DenseMatrix& x, const DenseMatrix& s, const char* what) {
  if (x.cols() != s.cols()) {
    throw DimensionError(std::string(what) + ": X has " + std::to_string(x.cols()) +
                         " samples but S has " + std::to_string(s.cols()));
  }
  if (x.cols() == 0) throw DimensionError(std::string(what) + ": no samples");
}

}  // namespace

void TrainConfig::validate() const {
  require_lambda(lambda, "TrainConfig");
  if (!(residual_tol > 0.0)) throw DataError("TrainConfig: residual_tol must be positive");
  if (schur_max_iters < 0) throw DataError("TrainConfig: schur_max_iters must be >= 0");
}

SaeModel SaeModel::from_weights(DenseMatrix w, double lambda, double train_residual) {
  require_lambda(lambda, "SaeModel");
  if (!matlin::all_finite(w)) throw DataError("SaeModel: projection has non-finite entries");
  return SaeModel(std::move(w), lambda, train_residual);
}

GramProducts GramProducts::compute(const DenseMatrix& x, const DenseMatrix& s) {
  require_paired(x, s, "gram products");
  GramProducts g;
  g.ss = s * s.transpose();
  g.xx = x * x.transpose();
  g.sx = s * x.transpose();
  return g;
}

SaeSystem make_sae_system(const GramProducts& grams, double lambda) {
  require_lambda(lambda, "train_sae");
  SaeSystem sys;
  sys.lambda = lambda;
  sys.a = grams.ss;
  sys.b = lambda * grams.xx;
  sys.c = (1.0 + lambda) * grams.sx;
  return sys;
}

SaeSystem make_sae_system(const DenseMatrix& x, const DenseMatrix& s, double lambda) {
  require_lambda(lambda, "train_sae");
  return make_sae_system(GramProducts::compute(x, s), lambda);
}

SaeSystem jittered(const SaeSystem& system, double relative) {
  SaeSystem out = system;
  const auto bump = [relative](DenseMatrix& m) {
    const Index n = m.rows();
    if (n == 0) return;
    double eps = relative * m.trace() / static_cast<double>(n);
    if (!(eps > 0.0)) eps = relative;
    m.diagonal().array() += eps;
  };
  bump(out.a);
  bump(out.b);
  return out;
}

SaeModel solve_sae_system(const SaeSystem& system, const TrainConfig& cfg) {
  cfg.validate();
  SylvesterOptions opts;
  opts.schur.max_iters = cfg.schur_max_iters;
  DenseMatrix w;
  try {
    w = matlin::solve_sylvester(system.a, system.b, system.c, opts);
  } catch (const SingularPencilError& e) {
    throw SingularPencilError(std::string(e.what()) +
                              "; add diagonal jitter to S·Sᵀ and λ·X·Xᵀ or change lambda");
  }
  const double residual = matlin::sylvester_residual(system.a, system.b, w, system.c);
  const double scale = std::max(1.0, system.c.norm());
  if (!(residual <= cfg.residual_tol * scale)) {
    std::ostringstream os;
    os << "train_sae: stationarity residual " << residual << " exceeds " << cfg.residual_tol
       << " x " << scale;
    throw NumericalError(os.str());
  }
  return SaeModel::from_weights(std::move(w), system.lambda, residual);
}

SaeModel train_sae(const DenseMatrix& x, const DenseMatrix& s, const TrainConfig& cfg) {
  cfg.validate();
  return solve_sae_system(make_sae_system(x, s, cfg.lambda), cfg);
}

double objective(const DenseMatrix& w, double lambda, const DenseMatrix& x, const DenseMatrix& s) {
  require_paired(x, s, "objective");
  if (w.rows() != s.rows() || w.cols() != x.rows()) {
    throw DimensionError("objective: W is " + matlin::shape_string(w.rows(), w.cols()) +
                         ", data implies " + matlin::shape_string(s.rows(), x.rows()));
  }
  const double decoder = (x - w.transpose() * s).squaredNorm();
  const double encoder = (w * x - s).squaredNorm();
  return decoder + lambda * encoder;
}

double objective(const SaeModel& model, const DenseMatrix& x, const DenseMatrix& s) {
  return objective(model.w(), model.lambda(), x, s);
}

DenseMatrix encode(const SaeModel& model, const DenseMatrix& x) {
  if (x.rows() != model.d()) {
    throw DimensionError("encode: expected " + std::to_string(model.d()) +
                         "-dimensional features, got " + std::to_string(x.rows()));
  }
  return model.w() * x;
}

DenseMatrix decode(const SaeModel& model, const DenseMatrix& s) {
  if (s.rows() != model.k()) {
    throw DimensionError("decode: expected " + std::to_string(model.k()) +
                         "-dimensional semantics, got " + std::to_string(s.rows()));
  }
  return model.w().transpose() * s;
}

DenseMatrix solve_ridge_forward(const GramProducts& grams, double lambda) {
  require_lambda(lambda, "solve_ridge_forward");
  DenseMatrix gram = grams.xx;
  gram.diagonal().array() += lambda;
  // (XXᵀ + λI)·Wᵀ = X·Sᵀ
  const DenseMatrix wt = matlin::solve_spd(gram, grams.sx.transpose());
  return wt.transpose();
}

DenseMatrix solve_ridge_reverse(const GramProducts& grams, double lambda) {
  require_lambda(lambda, "solve_ridge_reverse");
  DenseMatrix gram = grams.ss;
  gram.diagonal().array() += lambda;
  return matlin::solve_spd(gram, grams.sx);
}

DenseMatrix solve_ridge_forward(const DenseMatrix& x, const DenseMatrix& s, double lambda) {
  require_lambda(lambda, "solve_ridge_forward");
  return solve_ridge_forward(GramProducts::compute(x, s), lambda);
}

DenseMatrix solve_ridge_reverse(const DenseMatrix& x, const DenseMatrix& s, double lambda) {
  require_lambda(lambda, "solve_ridge_reverse");
  return solve_ridge_reverse(GramProducts::compute(x, s), lambda);
}

nlohmann::json model_to_json(const SaeModel& model) {
  const DenseMatrix& w = model.w();
  std::vector<double> data(w.data(), w.data() + w.size());
  nlohmann::json doc;
  doc["format"] = "sae-model";
  doc["version"] = 1;
  doc["k"] = model.k();
  doc["d"] = model.d();
  doc["lambda"] = model.lambda();
  doc["train_residual"] = model.train_residual();
  doc["w"] = {{"rows", w.rows()}, {"cols", w.cols()}, {"order", "column-major"}, {"data", data}};
  return doc;
}

SaeModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string()) != "sae-model")
      throw DataError("model: missing or unexpected \"format\" (expected \"sae-model\")");
    const auto& wj = doc.at("w");
    const Index rows = wj.at("rows").get<Index>();
    const Index cols = wj.at("cols").get<Index>();
    const auto data = wj.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols)
      throw DataError("model: W data length does not match its dims");
    if (doc.at("k").get<Index>() != rows || doc.at("d").get<Index>() != cols)
      throw DataError("model: k/d disagree with W dims");
    DenseMatrix w = Eigen::Map<const DenseMatrix>(data.data(), rows, cols);
    return SaeModel::from_weights(std::move(w), doc.at("lambda").get<double>(),
                                  doc.value("train_residual", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model: malformed JSON: ") + e.what());
  }
}

void save_model(const SaeModel& model, const std::string& path, const nlohmann::json& extra) {
  nlohmann::json doc = model_to_json(model);
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  io::write_file_atomic(path, doc.dump(2) + "\n");
}

SaeModel load_model(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace sae
