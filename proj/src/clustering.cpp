#include "sae/clustering.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

#include "sae/io.hpp"

namespace sae::clustering {

LabelEncoding encode_labels(const std::vector<ClassId>& labels) {
  if (labels.empty()) throw DataError("encode_labels: no samples");
  LabelEncoding enc;
  enc.class_ids = unique_in_order(labels);
  std::unordered_map<ClassId, Index> row_of;
  for (std::size_t i = 0; i < enc.class_ids.size(); ++i) row_of.emplace(enc.class_ids[i], static_cast<Index>(i));
  std::vector<Index> counts(enc.class_ids.size(), 0);
  for (const auto& l : labels) ++counts[static_cast<std::size_t>(row_of.at(l))];

  enc.s_matrix = DenseMatrix::Zero(static_cast<Index>(enc.class_ids.size()), static_cast<Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Index r = row_of.at(labels[i]);
    enc.s_matrix(r, static_cast<Index>(i)) = 1.0 / std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(r)]));
  }
  return enc;
}

namespace {

struct RunResult {
  std::vector<Index> labels;
  DenseMatrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

DenseMatrix seed_plus_plus(const DenseMatrix& pts, Index k, std::mt19937_64& rng) {
  const Index n = pts.cols();
  DenseMatrix centers(pts.rows(), k);
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.col(0) = pts.col(pick(rng));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (pts.col(i) - centers.col(0)).squaredNorm();
  for (Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Index chosen = n - 1;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.col(c) = pts.col(chosen);
    for (Index i = 0; i < n; ++i)
      d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], (pts.col(i) - centers.col(c)).squaredNorm());
  }
  return centers;
}

RunResult lloyd(const DenseMatrix& pts, DenseMatrix centers, Index max_iters) {
  const Index n = pts.cols(), k = centers.cols();
  RunResult r;
  r.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (Index it = 0; it < max_iters; ++it) {
    bool changed = false;
    double inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = (pts.col(i) - centers.col(0)).squaredNorm();
      for (Index c = 1; c < k; ++c) {
        const double d = (pts.col(i) - centers.col(c)).squaredNorm();
        if (d < best_d) best_d = d, best = c;
      }
      auto& slot = r.labels[static_cast<std::size_t>(i)];
      if (slot != best) changed = true;
      slot = best;
      dist[static_cast<std::size_t>(i)] = best_d;
      inertia += best_d;
    }
    r.trace.push_back(inertia);
    r.inertia = inertia;
    if (!changed) break;

    DenseMatrix sums = DenseMatrix::Zero(pts.rows(), k);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const Index c = r.labels[static_cast<std::size_t>(i)];
      sums.col(c) += pts.col(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.col(c) = sums.col(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move its centroid onto the point farthest from its own centroid.
      Index far = 0;
      for (Index i = 1; i < n; ++i)
        if (dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
      centers.col(c) = pts.col(far);
      dist[static_cast<std::size_t>(far)] = 0.0;
    }
  }
  r.centroids = std::move(centers);
  return r;
}

std::uint64_t restart_seed(std::uint64_t seed, Index restart) {
  // splitmix64 step over (seed, restart)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using u128 = unsigned __int128;

constexpr u128 kExactLimit = u128{1} << 62;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// The loss as an exact rational, rounded once to double. Empty when an
// intermediate outgrows 62 bits.
std::optional<double> exact_loss(const std::map<std::pair<Index, Index>, double>& joint,
                                 const std::map<Index, double>& n_pred, const std::map<Index, double>& n_true,
                                 std::size_t clusters) {
  u128 num = 0, den = 1;
  for (const auto& [key, n] : joint) {
    const auto c = static_cast<u128>(n);
    u128 tn = c * c;
    u128 td = static_cast<u128>(n_pred.at(key.first)) * static_cast<u128>(n_true.at(key.second));
    const u128 g = gcd128(tn, td);
    tn /= g;
    td /= g;
    if (tn >= kExactLimit || td >= kExactLimit) return std::nullopt;
    num = num * td + tn * den;
    den *= td;
    const u128 h = gcd128(num, den);
    num /= h;
    den /= h;
    if (num >= kExactLimit || den >= kExactLimit) return std::nullopt;
  }
  const u128 total = static_cast<u128>(clusters) * den;
  if (total >= kExactLimit || 2 * num > total) return std::nullopt;
  const u128 diff = total - 2 * num;
  constexpr u128 kMantissa = u128{1} << 53;
  if (diff >= kMantissa || den >= kMantissa) return std::nullopt;
  return static_cast<double>(static_cast<std::uint64_t>(diff)) / static_cast<double>(static_cast<std::uint64_t>(den));
}

}  // namespace

ClusterAssignment kmeans(const DenseMatrix& points, const KMeansConfig& cfg) {
  if (cfg.k < 1) throw DataError("kmeans: k must be at least 1");
  if (cfg.k > points.cols())
    throw DataError("kmeans: k = " + std::to_string(cfg.k) + " exceeds the number of samples (" +
                    std::to_string(points.cols()) + ")");
  if (cfg.restarts < 1) throw DataError("kmeans: restarts must be at least 1");
  if (cfg.max_iters < 1) throw DataError("kmeans: max_iters must be at least 1");
  if (!matlin::all_finite(points)) throw DataError("kmeans: non-finite input");

  ClusterAssignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  best.seed = cfg.seed;
  for (Index r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(restart_seed(cfg.seed, r));
    RunResult run = lloyd(points, seed_plus_plus(points, cfg.k, rng), cfg.max_iters);
    best.restart_inertia.push_back(run.inertia);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels = std::move(run.labels);
      best.centroids = std::move(run.centroids);
      best.inertia_trace = std::move(run.trace);
      best.restart = r;
    }
  }
  return best;
}

ClusterAssignment project_and_cluster(const SaeModel& model, const DenseMatrix& x_test, Index k,
                                      Index restarts, std::uint64_t seed) {
  return kmeans(encode(model, x_test), {k, restarts, seed, 300});
}

double clustering_loss(const std::vector<Index>& predicted, const std::vector<Index>& truth) {
  if (predicted.size() != truth.size())
    throw DimensionError("clustering_loss: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(truth.size()) + " labels");
  if (truth.empty()) throw DataError("clustering_loss: no samples");
  // ‖Ĉ − C‖² = ‖Ĉ‖² + ‖C‖² − 2⟨Ĉ, C⟩ where ‖C‖² is the number of clusters and
  // ⟨Ĉ, C⟩ = Σ n_pt² / (n_p · n_t) over the contingency table.
  std::map<Index, double> n_pred, n_true;
  std::map<std::pair<Index, Index>, double> joint;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    n_pred[predicted[i]] += 1.0;
    n_true[truth[i]] += 1.0;
    joint[{predicted[i], truth[i]}] += 1.0;
  }
  const double clusters = static_cast<double>(n_pred.size() + n_true.size());
  if (const auto exact = exact_loss(joint, n_pred, n_true, n_pred.size() + n_true.size())) return *exact;
  double inner = 0.0;
  for (const auto& [key, n] : joint) inner += n * n / (n_pred[key.first] * n_true[key.second]);
  return std::max(0.0, clusters - 2.0 * inner);
}

std::vector<Index> index_labels(const std::vector<ClassId>& labels) {
  std::unordered_map<ClassId, Index> idx;
  std::vector<Index> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(idx.emplace(l, static_cast<Index>(idx.size())).first->second);
  return out;
}

double clustering_loss(const std::vector<ClassId>& predicted, const std::vector<ClassId>& truth) {
  return clustering_loss(index_labels(predicted), index_labels(truth));
}

std::string format_assignments_csv(const std::vector<Index>& labels) {
  std::string out = "sample_index,cluster_id\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
  return out;
}

void save_assignments_csv(const std::string& path, const std::vector<Index>& labels) {
  io::write_file_atomic(path, format_assignments_csv(labels));
}

SupervisedClusteringResult run_supervised_clustering(const data::LabeledDataset& train,
                                                     const DenseMatrix& x_test,
                                                     const std::vector<ClassId>* test_labels,
                                                     double lambda, Index k, Index restarts,
                                                     std::uint64_t seed) {
  train.validate();
  const auto enc = encode_labels(train.labels);
  TrainConfig cfg;
  cfg.lambda = lambda;
  SaeModel model = train_sae(train.features, enc.s_matrix, cfg);
  ClusterAssignment sae = project_and_cluster(model, x_test, k, restarts, seed);
  ClusterAssignment raw = kmeans(x_test, {k, restarts, seed, 300});
  SupervisedClusteringResult out{std::move(model), std::move(sae), std::move(raw), std::nullopt, std::nullopt};
  if (test_labels) {
    const auto truth = index_labels(*test_labels);
    out.sae_loss = clustering_loss(out.sae.labels, truth);
    out.raw_loss = clustering_loss(out.raw.labels, truth);
  }
  return out;
}

}  // namespace sae::clustering
