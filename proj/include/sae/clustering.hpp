#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sae/classes.hpp"
#include "sae/data.hpp"
#include "sae/model.hpp"

namespace sae::clustering {

/// Normalized one-hot label matrix: column i has a single nonzero entry
/// 1/sqrt(n_c) in the row of sample i's class c, so every row has unit norm.
struct LabelEncoding {
  std::vector<ClassId> class_ids;  // first-appearance order; row order of s_matrix
  DenseMatrix s_matrix;            // (#classes)×N
};

LabelEncoding encode_labels(const std::vector<ClassId>& labels);

struct ClusterAssignment {
  std::vector<Index> labels;  // cluster index per sample
  DenseMatrix centroids;      // dim×k
  double inertia = 0.0;       // sum of squared distances to the assigned centroid
  std::uint64_t seed = 0;
  Index restart = 0;                   // index of the winning restart
  std::vector<double> inertia_trace;   // winner's inertia after each assignment step
  std::vector<double> restart_inertia; // final inertia of every restart
};

struct KMeansConfig {
  Index k = 1;
  Index restarts = 10;
  std::uint64_t seed = 0;
  Index max_iters = 300;
};

/// k-means++ seeding plus Lloyd iterations, run `restarts` times from seeds
/// derived from cfg.seed; returns the lowest-inertia run (ties: lowest restart).
/// Points are columns.
ClusterAssignment kmeans(const DenseMatrix& points, const KMeansConfig& cfg);

/// Encodes x_test with W and clusters the embeddings.
ClusterAssignment project_and_cluster(const SaeModel& model, const DenseMatrix& x_test, Index k,
                                      Index restarts, std::uint64_t seed);

/// Squared Frobenius distance between the normalized equivalence matrices of two
/// partitions (entry 1/n_c when samples i and j share cluster c of size n_c).
/// Invariant to relabeling of either partition.
double clustering_loss(const std::vector<Index>& predicted, const std::vector<Index>& truth);
double clustering_loss(const std::vector<ClassId>& predicted, const std::vector<ClassId>& truth);

/// Maps labels to dense indices in first-appearance order.
std::vector<Index> index_labels(const std::vector<ClassId>& labels);

std::string format_assignments_csv(const std::vector<Index>& labels);
void save_assignments_csv(const std::string& path, const std::vector<Index>& labels);

// ---- synthetic benchmark ------------------------------------------------------

enum class SynthKind { same_size, diff_size_noisy };

SynthKind parse_synth_kind(const std::string& s);
std::string to_string(SynthKind kind);

/// Geometry of the synthetic data, all in one place.
///
/// Three classes, each made of two isotropic Gaussian subclusters. Class c sits at
/// vertex c of an equilateral triangle in the (y, z) plane, centred on the origin;
/// its two subclusters are pushed apart along x. A subcluster's nearest foreign subcluster is one
/// triangle side away, its sibling 2·subcluster_offset away.
struct SynthGeometry {
  static constexpr double triangle_side = 1.0;
  static constexpr double subcluster_offset = 4.0;
  static constexpr double subcluster_sigma = 0.15;
  static constexpr double default_noise_fraction = 0.05;
  static constexpr std::array<Index, 3> same_sizes{1000, 1000, 1000};
  static constexpr std::array<Index, 3> diff_sizes{1000, 2000, 4000};

  /// 3×6 matrix; column 2c + s is subcluster s of class c.
  static DenseMatrix subcluster_centers();
};

/// Deterministic per seed. Class ids are "0", "1", "2". In the noisy variant a
/// `noise_fraction` of each class's samples is drawn around a randomly chosen
/// foreign subcluster while keeping its own label; the same-size variant is
/// noise free unless a fraction is given.
data::LabeledDataset synth_generate(SynthKind kind, std::uint64_t seed,
                                    std::optional<double> noise_fraction = std::nullopt);

/// Train/test pair for the clustering benchmark. Training data always has the
/// same-size layout; the noisy variant corrupts `noise_fraction` of the training
/// samples (default 5%). The test set follows the variant's class sizes, is noise
/// free, and is drawn from a seed derived from `seed`.
struct SynthBenchmark {
  data::LabeledDataset train;
  data::LabeledDataset test;
};

SynthBenchmark synth_benchmark(SynthKind kind, std::uint64_t seed,
                               std::optional<double> noise_fraction = std::nullopt);

// ---- end-to-end supervised clustering -----------------------------------------

struct SupervisedClusteringResult {
  SaeModel model;
  ClusterAssignment sae;
  ClusterAssignment raw;  // k-means on the raw test features (Euclidean baseline)
  std::optional<double> sae_loss;
  std::optional<double> raw_loss;
};

/// Trains SAE on the normalized label encoding of `train`, projects `x_test`
/// and clusters it; also clusters the raw features as a baseline. Losses are
/// filled in when `test_labels` is given.
SupervisedClusteringResult run_supervised_clustering(const data::LabeledDataset& train,
                                                     const DenseMatrix& x_test,
                                                     const std::vector<ClassId>* test_labels,
                                                     double lambda, Index k, Index restarts,
                                                     std::uint64_t seed);

}  // namespace sae::clustering
