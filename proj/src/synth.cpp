#include <cmath>
#include <random>

#include "sae/clustering.hpp"

namespace sae::clustering {

SynthKind parse_synth_kind(const std::string& s) {
  if (s == "same_size") return SynthKind::same_size;
  if (s == "diff_size_noisy") return SynthKind::diff_size_noisy;
  throw UsageError("unknown synthetic kind '" + s + "' (expected same_size or diff_size_noisy)");
}

std::string to_string(SynthKind kind) {
  return kind == SynthKind::same_size ? "same_size" : "diff_size_noisy";
}

DenseMatrix SynthGeometry::subcluster_centers() {
  const double h = triangle_side * std::sqrt(3.0) / 2.0;
  const double ys[3] = {-0.5 * triangle_side, 0.5 * triangle_side, 0.0};
  const double zs[3] = {-h / 3.0, -h / 3.0, 2.0 * h / 3.0};
  DenseMatrix centers(3, 6);
  for (Index c = 0; c < 3; ++c) {
    centers.col(2 * c) << -subcluster_offset, ys[c], zs[c];
    centers.col(2 * c + 1) << subcluster_offset, ys[c], zs[c];
  }
  return centers;
}

data::LabeledDataset synth_generate(SynthKind kind, std::uint64_t seed,
                                    std::optional<double> noise_fraction) {
  const double noise = noise_fraction.value_or(
      kind == SynthKind::diff_size_noisy ? SynthGeometry::default_noise_fraction : 0.0);
  if (!(noise >= 0.0 && noise < 1.0)) throw DataError("synth_generate: noise fraction must lie in [0, 1)");
  const auto& sizes = kind == SynthKind::same_size ? SynthGeometry::same_sizes : SynthGeometry::diff_sizes;
  const DenseMatrix centers = SynthGeometry::subcluster_centers();

  Index total = 0;
  for (Index n : sizes) total += n;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, SynthGeometry::subcluster_sigma);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Index> foreign(0, 3);

  data::LabeledDataset ds;
  ds.name = "synthetic-" + to_string(kind);
  ds.features.resize(3, total);
  ds.labels.reserve(static_cast<std::size_t>(total));
  Index col = 0;
  for (Index c = 0; c < 3; ++c) {
    for (Index i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i, ++col) {
      Index sub = 2 * c + (i % 2);
      if (noise > 0.0 && coin(rng) < noise) {
        // Any of the four subclusters belonging to the other two classes.
        Index pick = foreign(rng);
        if (pick >= 2 * c) pick += 2;
        sub = pick;
      }
      for (Index r = 0; r < 3; ++r) ds.features(r, col) = centers(r, sub) + jitter(rng);
      ds.labels.push_back(std::to_string(c));
    }
  }
  return ds;
}

SynthBenchmark synth_benchmark(SynthKind kind, std::uint64_t seed,
                               std::optional<double> noise_fraction) {
  const double train_noise = kind == SynthKind::diff_size_noisy
                                 ? noise_fraction.value_or(SynthGeometry::default_noise_fraction)
                                 : noise_fraction.value_or(0.0);
  SynthBenchmark b;
  b.train = synth_generate(SynthKind::same_size, seed, train_noise);
  b.train.name = "synthetic-" + to_string(kind) + "-train";
  b.test = synth_generate(kind, seed ^ 0x5DEECE66DULL, 0.0);
  b.test.name = "synthetic-" + to_string(kind) + "-test";
  return b;
}

}  // namespace sae::clustering
