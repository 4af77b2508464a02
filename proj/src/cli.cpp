#include "sae/cli.hpp"

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/LU>
#include <json.hpp>

#include "sae/clustering.hpp"
#include "sae/data.hpp"
#include "sae/errors.hpp"
#include "sae/io.hpp"
#include "sae/matlin.hpp"
#include "sae/model.hpp"
#include "sae/report.hpp"
#include "sae/zsl.hpp"

namespace sae::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* const kRowEncoder = "SAE (W)";
const char* const kRowDecoder = "SAE (Wᵀ)";
const char* const kRowRidgeForward = "Ridge F→S";
const char* const kRowRidgeReverse = "Ridge F←S";

struct Options {
  std::string manifest;
  std::string model;
  std::string out;
  double lambda = kDefaultLambda;
  std::vector<double> lambda_grid;
  std::string direction = "both";
  std::string distance = "cosine";
  std::string normalize = "none";
  std::uint64_t seed = 0;
  Index folds = 3;
  Index restarts = 10;
  Index k = 0;
  Index top_k = 5;
  bool baselines = false;
  std::string kind = "same_size";
  std::optional<double> noise;
  Index dim = 16;
};

std::string table_path(const std::string& json_path) {
  fs::path p(json_path);
  if (p.extension() == ".json") return p.replace_extension(".txt").string();
  return json_path + ".txt";
}

std::string sibling_path(const std::string& json_path, const std::string& suffix) {
  fs::path p(json_path);
  if (p.extension() == ".json") p.replace_extension();
  return p.string() + suffix;
}

void write_json(const std::string& path, const ordered_json& j) {
  io::write_file_atomic(path, j.dump(2) + "\n");
}

std::string fmt(double v) { return io::format_double(v); }

bool use_l2(const Options& o) {
  if (o.normalize == "none") return false;
  if (o.normalize == "l2") return true;
  throw UsageError("--normalize must be 'none' or 'l2', got '" + o.normalize + "'");
}

DenseMatrix preprocess(const DenseMatrix& x, const Options& o) {
  return use_l2(o) ? data::l2_normalize_columns(x) : x;
}

std::vector<zsl::Direction> directions(const Options& o) {
  if (o.direction == "both") return {zsl::Direction::encoder, zsl::Direction::decoder};
  return {zsl::parse_direction(o.direction)};
}

const char* row_name(zsl::Direction d) {
  return d == zsl::Direction::encoder ? kRowEncoder : kRowDecoder;
}

const PrototypeSet& require_semantics(const data::LabeledDataset& ds, const std::string& command) {
  if (!ds.semantics) throw DataError(command + ": manifest has no semantics_csv");
  return *ds.semantics;
}

const data::SplitSpec& require_split(const data::Manifest& m, const std::string& command) {
  if (!m.split) throw DataError(command + ": manifest has no seen_classes / unseen_classes split");
  return *m.split;
}

struct Fitted {
  SaeModel model;
  bool jitter = false;
};

// Solves the SAE system, retrying once with diagonal jitter on a singular pencil.
Fitted fit_sae(const GramProducts& grams, double lambda, std::ostream& out) {
  TrainConfig cfg;
  cfg.lambda = lambda;
  const SaeSystem system = make_sae_system(grams, lambda);
  try {
    return {solve_sae_system(system, cfg), false};
  } catch (const SingularPencilError& e) {
    out << "note: singular Sylvester pencil at lambda " << fmt(lambda)
        << "; retrying with diagonal jitter 1e-8*trace/dim on S*S^T and lambda*X*X^T\n";
    return {solve_sae_system(jittered(system), cfg), true};
  }
}

// Chooses lambda: class-wise cross-validation when a grid is given, else --lambda.
double choose_lambda(const Options& o, const DenseMatrix& x, const std::vector<ClassId>& labels,
                     const PrototypeSet& semantics, zsl::Method method, zsl::Direction direction,
                     std::optional<zsl::CrossValidationResult>* record) {
  if (o.lambda_grid.empty()) return o.lambda;
  zsl::CrossValidationConfig cfg;
  cfg.folds = o.folds;
  cfg.direction = direction;
  cfg.distance = zsl::parse_distance(o.distance);
  cfg.method = method;
  auto cv = zsl::cross_validate_lambda(x, labels, semantics, o.lambda_grid, cfg);
  const double best = cv.best_lambda;
  if (record) *record = std::move(cv);
  return best;
}

void require_out(const Options& o, const std::string& command) {
  if (o.out.empty()) throw UsageError(command + ": --out is required");
}

void require_manifest(const Options& o, const std::string& command) {
  if (o.manifest.empty()) throw UsageError(command + ": --manifest is required");
}

void validate_common(const Options& o) {
  if (!(o.lambda > 0.0) || !std::isfinite(o.lambda)) throw UsageError("--lambda must be positive");
  for (double l : o.lambda_grid)
    if (!(l > 0.0) || !std::isfinite(l)) throw UsageError("--lambda-grid values must be positive");
  if (o.folds < 2) throw UsageError("--folds must be at least 2");
  zsl::parse_distance(o.distance);
  use_l2(o);
}

// ---- train -------------------------------------------------------------------

int cmd_train(const Options& o, std::ostream& out) {
  require_manifest(o, "train");
  require_out(o, "train");
  validate_common(o);
  const auto manifest = data::load_manifest(o.manifest);
  data::LabeledDataset ds = manifest.dataset;
  if (manifest.split) ds = data::zsl_split(ds, *manifest.split).train;
  const DenseMatrix x = preprocess(ds.features, o);

  std::optional<zsl::CrossValidationResult> cv;
  DenseMatrix s;
  std::string semantic_space;
  double lambda = o.lambda;
  if (ds.semantics) {
    s = ds.semantics->per_sample(ds.labels);
    semantic_space = "semantics";
    lambda = choose_lambda(o, x, ds.labels, *ds.semantics, zsl::Method::sae, zsl::Direction::encoder, &cv);
  } else {
    if (!o.lambda_grid.empty()) throw UsageError("train: --lambda-grid needs semantic prototypes in the manifest");
    s = clustering::encode_labels(ds.labels).s_matrix;
    semantic_space = "normalized one-hot labels";
  }

  const auto fitted = fit_sae(GramProducts::compute(x, s), lambda, out);
  nlohmann::json extra;
  extra["dataset"] = ds.name;
  extra["samples"] = ds.size();
  extra["semantic_space"] = semantic_space;
  extra["normalize"] = o.normalize;
  extra["jitter"] = fitted.jitter;
  if (cv) extra["lambda_cv"] = nlohmann::json::parse(zsl::to_json(*cv).dump());
  save_model(fitted.model, o.out, extra);

  out << "trained W (" << fitted.model.k() << "x" << fitted.model.d() << ") on " << ds.size()
      << " samples, lambda " << fmt(lambda) << ", stationarity residual "
      << fmt(fitted.model.train_residual()) << "\n";
  out << "wrote " << o.out << "\n";
  return kExitOk;
}

// ---- zsl-eval ------------------------------------------------------------------

zsl::MethodResult evaluate_rows(const std::string& name, const DenseMatrix& w, const DenseMatrix& x_test,
                                const std::vector<ClassId>& truth, const PrototypeSet& protos,
                                zsl::DistanceKind dist, zsl::Direction dir, Index top_k) {
  const DenseMatrix scores = zsl::score_matrix(w, x_test, protos, dist, dir);
  std::vector<ClassId> pred;
  for (Index i : zsl::argmax_columns(scores)) pred.push_back(protos.class_ids()[static_cast<std::size_t>(i)]);
  const auto acc = zsl::multiway_accuracy(pred, truth);
  zsl::MethodResult r;
  r.method = name;
  r.add("accuracy", acc.overall);
  r.add("mean_per_class", acc.mean_per_class);
  const Index k = std::min(top_k, protos.size());
  r.add("hit@" + std::to_string(k), zsl::hit_at_k(scores, protos.class_ids(), truth, k));
  r.per_class = acc.per_class;
  return r;
}

void write_report(const zsl::EvalReport& report, const std::string& path, std::ostream& out) {
  write_json(path, report.to_json());
  const std::string table = report.to_table();
  io::write_file_atomic(table_path(path), table);
  out << table;
  out << "wrote " << path << " and " << table_path(path) << "\n";
}

int cmd_zsl_eval(const Options& o, std::ostream& out) {
  require_manifest(o, "zsl-eval");
  require_out(o, "zsl-eval");
  validate_common(o);
  if (o.top_k < 1) throw UsageError("--top-k must be at least 1");
  const auto dirs = directions(o);
  const auto dist = zsl::parse_distance(o.distance);

  const auto manifest = data::load_manifest(o.manifest);
  const auto& split = require_split(manifest, "zsl-eval");
  const auto& semantics = require_semantics(manifest.dataset, "zsl-eval");
  const auto parts = data::zsl_split(manifest.dataset, split);
  const DenseMatrix x_train = preprocess(parts.train.features, o);
  const DenseMatrix x_test = preprocess(parts.test.features, o);
  const PrototypeSet unseen = semantics.subset(split.unseen);

  zsl::EvalReport report;
  report.config = {{"command", "zsl-eval"},
                   {"dataset", manifest.dataset.name},
                   {"distance", zsl::to_string(dist)},
                   {"normalize", o.normalize},
                   {"seen_classes", std::to_string(split.seen.size())},
                   {"unseen_classes", std::to_string(split.unseen.size())},
                   {"test_samples", std::to_string(parts.test.size())}};

  const auto grams = GramProducts::compute(x_train, semantics.per_sample(parts.train.labels));
  DenseMatrix w;
  if (!o.model.empty()) {
    const SaeModel model = load_model(o.model);
    w = model.w();
    report.config.emplace_back("model", o.model);
    report.config.emplace_back("lambda", fmt(model.lambda()));
  } else {
    const double lambda = choose_lambda(o, x_train, parts.train.labels, semantics, zsl::Method::sae,
                                        dirs.front(), &report.lambda_cv);
    const auto fitted = fit_sae(grams, lambda, out);
    w = fitted.model.w();
    report.config.emplace_back("lambda", fmt(lambda));
    if (fitted.jitter) report.config.emplace_back("jitter", "true");
  }
  for (auto d : dirs)
    report.rows.push_back(evaluate_rows(row_name(d), w, x_test, parts.test.labels, unseen, dist, d, o.top_k));

  if (o.baselines) {
    const double lf = choose_lambda(o, x_train, parts.train.labels, semantics, zsl::Method::ridge_forward,
                                    zsl::Direction::encoder, nullptr);
    const double lr = choose_lambda(o, x_train, parts.train.labels, semantics, zsl::Method::ridge_reverse,
                                    zsl::Direction::decoder, nullptr);
    report.config.emplace_back("ridge_forward_lambda", fmt(lf));
    report.config.emplace_back("ridge_reverse_lambda", fmt(lr));
    report.rows.push_back(evaluate_rows(kRowRidgeForward, solve_ridge_forward(grams, lf), x_test,
                                        parts.test.labels, unseen, dist, zsl::Direction::encoder, o.top_k));
    report.rows.push_back(evaluate_rows(kRowRidgeReverse, solve_ridge_reverse(grams, lr), x_test,
                                        parts.test.labels, unseen, dist, zsl::Direction::decoder, o.top_k));
  }
  write_report(report, o.out, out);
  return kExitOk;
}

// ---- gzsl-eval -----------------------------------------------------------------

int cmd_gzsl_eval(const Options& o, std::ostream& out) {
  require_manifest(o, "gzsl-eval");
  require_out(o, "gzsl-eval");
  validate_common(o);
  const auto dirs = directions(o);
  const auto dist = zsl::parse_distance(o.distance);

  const auto manifest = data::load_manifest(o.manifest);
  const auto& split = require_split(manifest, "gzsl-eval");
  const auto& semantics = require_semantics(manifest.dataset, "gzsl-eval");
  const auto parts = data::gzsl_split(manifest.dataset, split, o.seed);
  const DenseMatrix x_train = preprocess(parts.train.features, o);
  const DenseMatrix x_test = preprocess(parts.test.features, o);
  const PrototypeSet seen = semantics.subset(split.seen);
  const PrototypeSet unseen = semantics.subset(split.unseen);

  zsl::EvalReport report;
  report.config = {{"command", "gzsl-eval"},
                   {"dataset", manifest.dataset.name},
                   {"distance", zsl::to_string(dist)},
                   {"normalize", o.normalize},
                   {"seed", std::to_string(o.seed)},
                   {"gzsl_holdout", fmt(split.gzsl_holdout.value_or(data::kDefaultGzslHoldout))},
                   {"train_samples", std::to_string(parts.train.size())},
                   {"test_samples", std::to_string(parts.test.size())}};

  DenseMatrix w;
  if (!o.model.empty()) {
    const SaeModel model = load_model(o.model);
    w = model.w();
    report.config.emplace_back("model", o.model);
  } else {
    const double lambda = choose_lambda(o, x_train, parts.train.labels, semantics, zsl::Method::sae,
                                        dirs.front(), &report.lambda_cv);
    const auto fitted = fit_sae(GramProducts::compute(x_train, semantics.per_sample(parts.train.labels)),
                                lambda, out);
    w = fitted.model.w();
    report.config.emplace_back("lambda", fmt(lambda));
    if (fitted.jitter) report.config.emplace_back("jitter", "true");
  }

  for (auto d : dirs) {
    const DenseMatrix ss = zsl::score_matrix(w, x_test, seen, dist, d);
    const DenseMatrix us = zsl::score_matrix(w, x_test, unseen, dist, d);
    const auto curve = zsl::ausuc(ss, seen.class_ids(), us, unseen.class_ids(), parts.test.labels,
                                  parts.seen_mask);
    // Uncalibrated (gamma = 0) accuracies over the joint label space.
    DenseMatrix joint(ss.rows() + us.rows(), ss.cols());
    joint << ss, us;
    std::vector<ClassId> all_ids = seen.class_ids();
    all_ids.insert(all_ids.end(), unseen.class_ids().begin(), unseen.class_ids().end());
    std::vector<ClassId> pred;
    for (Index i : zsl::argmax_columns(joint)) pred.push_back(all_ids[static_cast<std::size_t>(i)]);
    Index seen_ok = 0, seen_n = 0, unseen_ok = 0, unseen_n = 0;
    for (std::size_t j = 0; j < pred.size(); ++j) {
      const bool hit = pred[j] == parts.test.labels[j];
      if (parts.seen_mask[j]) seen_n += 1, seen_ok += hit;
      else unseen_n += 1, unseen_ok += hit;
    }
    zsl::MethodResult r;
    r.method = row_name(d);
    r.add("ausuc", curve.area);
    r.add("seen_accuracy", static_cast<double>(seen_ok) / static_cast<double>(seen_n));
    r.add("unseen_accuracy", static_cast<double>(unseen_ok) / static_cast<double>(unseen_n));
    r.per_class = zsl::multiway_accuracy(pred, parts.test.labels).per_class;
    r.curve = curve.curve;
    report.rows.push_back(std::move(r));
  }
  write_report(report, o.out, out);
  return kExitOk;
}

// ---- cluster -------------------------------------------------------------------

int cmd_cluster(const Options& o, std::ostream& out) {
  require_manifest(o, "cluster");
  require_out(o, "cluster");
  validate_common(o);
  if (o.restarts < 1) throw UsageError("--restarts must be at least 1");
  if (o.k < 0) throw UsageError("--k must be positive");

  const auto manifest = data::load_manifest(o.manifest);
  if (!manifest.test) throw DataError("cluster: manifest has no test_features_csv");
  data::LabeledDataset train = manifest.dataset;
  train.features = preprocess(train.features, o);
  const DenseMatrix x_test = preprocess(manifest.test->features, o);
  const std::vector<ClassId>* truth = manifest.test->labels.empty() ? nullptr : &manifest.test->labels;
  const Index k = o.k > 0 ? o.k : static_cast<Index>(train.classes().size());

  const auto result = clustering::run_supervised_clustering(train, x_test, truth, o.lambda, k, o.restarts, o.seed);

  zsl::EvalReport report;
  report.config = {{"command", "cluster"},
                   {"dataset", train.name},
                   {"normalize", o.normalize},
                   {"lambda", fmt(o.lambda)},
                   {"k", std::to_string(k)},
                   {"restarts", std::to_string(o.restarts)},
                   {"seed", std::to_string(o.seed)},
                   {"test_samples", std::to_string(x_test.cols())}};
  const auto add_row = [&](const std::string& name, const clustering::ClusterAssignment& a,
                           const std::optional<double>& loss) {
    zsl::MethodResult r;
    r.method = name;
    if (loss) r.add("delta", *loss, false);
    r.add("inertia", a.inertia, false);
    report.rows.push_back(std::move(r));
  };
  add_row("SAE + k-means", result.sae, result.sae_loss);
  add_row("k-means (L2)", result.raw, result.raw_loss);

  const std::string sae_csv = sibling_path(o.out, ".assignments.csv");
  const std::string raw_csv = sibling_path(o.out, ".raw_assignments.csv");
  clustering::save_assignments_csv(sae_csv, result.sae.labels);
  clustering::save_assignments_csv(raw_csv, result.raw.labels);
  write_report(report, o.out, out);
  out << "wrote " << sae_csv << " and " << raw_csv << "\n";
  return kExitOk;
}

// ---- synth ---------------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  require_out(o, "synth");
  const auto kind = clustering::parse_synth_kind(o.kind);
  if (o.noise && !(*o.noise >= 0.0 && *o.noise < 1.0)) throw UsageError("--noise must lie in [0, 1)");
  const auto bench = clustering::synth_benchmark(kind, o.seed, o.noise);
  fs::create_directories(o.out);
  const auto train_files = data::write_dataset_files(o.out, "train_", bench.train);
  const auto test_files = data::write_dataset_files(o.out, "test_", bench.test);
  ordered_json m;
  m["name"] = "synthetic-" + clustering::to_string(kind);
  m["features_csv"] = train_files.features_csv;
  m["labels_csv"] = train_files.labels_csv;
  m["test_features_csv"] = test_files.features_csv;
  m["test_labels_csv"] = test_files.labels_csv;
  const std::string manifest = (fs::path(o.out) / "manifest.json").string();
  write_json(manifest, m);
  out << "wrote " << bench.train.size() << " training and " << bench.test.size() << " test samples; manifest "
      << manifest << "\n";
  return kExitOk;
}

// ---- solver-check --------------------------------------------------------------

int cmd_solver_check(const Options& o, std::ostream& out) {
  if (o.dim < 1 || o.dim > 64) throw UsageError("--dim must lie in [1, 64]");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto random = [&](Index r, Index c) {
    DenseMatrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = normal(rng);
    return m;
  };
  const Index n = o.dim;
  const DenseMatrix g = random(n, n), h = random(n, n), c = random(n, n);
  const DenseMatrix a = g * g.transpose();
  const DenseMatrix b = h * h.transpose() + DenseMatrix::Identity(n, n);

  const DenseMatrix w = matlin::solve_sylvester(a, b, c);
  const double residual = matlin::sylvester_residual(a, b, w, c) / std::max(1.0, c.norm());

  // Reference: the n²×n² Kronecker system solved by dense LU.
  const DenseMatrix eye = DenseMatrix::Identity(n, n);
  DenseMatrix kron = DenseMatrix::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j) {
    kron.block(j * n, j * n, n, n) += a;
    for (Index i = 0; i < n; ++i) kron.block(i * n, j * n, n, n) += b(j, i) * eye;
  }
  const Eigen::VectorXd vec_c = Eigen::Map<const Eigen::VectorXd>(c.data(), n * n);
  const Eigen::VectorXd vec_w = kron.partialPivLu().solve(vec_c);
  const double deviation = (Eigen::Map<const Eigen::VectorXd>(w.data(), n * n) - vec_w).cwiseAbs().maxCoeff();

  const bool ok = residual <= 1e-8 && deviation <= 1e-6;
  out << "dim " << n << ", seed " << o.seed << "\n";
  out << "relative residual " << fmt(residual) << " (tolerance 1e-8)\n";
  out << "max deviation from Kronecker solve " << fmt(deviation) << " (tolerance 1e-6)\n";
  out << (ok ? "ok" : "FAILED") << "\n";
  if (!o.out.empty()) {
    ordered_json j;
    j["dim"] = n;
    j["seed"] = o.seed;
    j["relative_residual"] = residual;
    j["max_deviation"] = deviation;
    j["ok"] = ok;
    write_json(o.out, j);
  }
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic autoencoder: training, zero-shot evaluation and supervised clustering", "sae"};
  app.require_subcommand(1);
  Options o;

  const auto add_lambda = [&](CLI::App* sub) {
    auto* l = sub->add_option("--lambda", o.lambda, "Weight of the encoder term")->capture_default_str();
    auto* g = sub->add_option("--lambda-grid", o.lambda_grid,
                              "Candidate lambdas; selects one by class-wise cross-validation")
                  ->delimiter(',');
    l->excludes(g);
    sub->add_option("--folds", o.folds, "Class-wise cross-validation folds")->capture_default_str();
  };
  const auto add_normalize = [&](CLI::App* sub) {
    sub->add_option("--normalize", o.normalize, "Feature preprocessing: none or l2")->capture_default_str();
  };
  const auto add_eval = [&](CLI::App* sub) {
    sub->add_option("--manifest", o.manifest, "Dataset manifest (JSON)")->required();
    sub->add_option("--model", o.model, "Trained model; trained on the seen classes when omitted");
    sub->add_option("--direction", o.direction, "encoder, decoder or both")->capture_default_str();
    sub->add_option("--distance", o.distance, "cosine or euclidean")->capture_default_str();
    sub->add_option("--out", o.out, "Report path (JSON); a .txt table is written next to it")->required();
    add_lambda(sub);
    add_normalize(sub);
  };

  auto* train = app.add_subcommand("train", "Train a model and write it as JSON");
  train->add_option("--manifest", o.manifest, "Dataset manifest (JSON)")->required();
  train->add_option("--out", o.out, "Model output path")->required();
  add_lambda(train);
  add_normalize(train);

  auto* zsl_eval = app.add_subcommand("zsl-eval", "Zero-shot evaluation on the unseen classes");
  add_eval(zsl_eval);
  zsl_eval->add_option("--top-k", o.top_k, "K for hit@K")->capture_default_str();
  zsl_eval->add_flag("--baselines", o.baselines, "Also evaluate both ridge regression baselines");

  auto* gzsl_eval = app.add_subcommand("gzsl-eval", "Generalized zero-shot evaluation (AUSUC)");
  add_eval(gzsl_eval);
  gzsl_eval->add_option("--seed", o.seed, "Seed for the held-out seen samples")->capture_default_str();

  auto* cluster = app.add_subcommand("cluster", "Supervised clustering of the manifest's test set");
  cluster->add_option("--manifest", o.manifest, "Manifest with training and test data")->required();
  cluster->add_option("--out", o.out, "Report path (JSON)")->required();
  cluster->add_option("--lambda", o.lambda, "Weight of the encoder term")->capture_default_str();
  cluster->add_option("--k", o.k, "Number of clusters (default: number of training classes)");
  cluster->add_option("--restarts", o.restarts, "k-means restarts")->capture_default_str();
  cluster->add_option("--seed", o.seed, "k-means seed")->capture_default_str();
  add_normalize(cluster);

  auto* synth = app.add_subcommand("synth", "Write the synthetic clustering benchmark");
  synth->add_option("--kind", o.kind, "same_size or diff_size_noisy")->capture_default_str();
  synth->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  synth->add_option("--noise", o.noise, "Fraction of training samples moved to foreign subclusters");
  synth->add_option("--out", o.out, "Output directory")->required();

  auto* check = app.add_subcommand("solver-check", "Compare the Sylvester solver with a dense Kronecker solve");
  check->add_option("--dim", o.dim, "Size of A, B and C")->capture_default_str();
  check->add_option("--seed", o.seed, "Seed for the random instance")->capture_default_str();
  check->add_option("--out", o.out, "Optional JSON output path");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }
    if (train->parsed()) return cmd_train(o, out);
    if (zsl_eval->parsed()) return cmd_zsl_eval(o, out);
    if (gzsl_eval->parsed()) return cmd_gzsl_eval(o, out);
    if (cluster->parsed()) return cmd_cluster(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (check->parsed()) return cmd_solver_check(o, out);
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << " (run 'sae --help')\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace sae::cli
