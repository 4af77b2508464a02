// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sae/cli.hpp"
#include "sae/clustering.hpp"
#include "sae/data.hpp"
#include "sae/io.hpp"
#include "sae/matlin.hpp"
#include "sae/model.hpp"
#include "sae/zsl.hpp"
#include "support/oracles.hpp"
#include "support/zsl_task.hpp"

namespace {

using sae::ClassId;
using sae::DenseMatrix;
using sae::Index;
using sae::testing::random_matrix;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;
namespace zsl = sae::zsl;
namespace cl = sae::clustering;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// ---- 1 -----------------------------------------------------------------------

Outcome sylvester_correctness() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<Index> size(2, 20);
  double worst_dev = 0.0, worst_res = 0.0, solver_time = 0.0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 50; ++i) {
    const Index k = size(rng), d = size(rng);
    const DenseMatrix g = random_matrix(k, k, rng), h = random_matrix(d, d, rng);
    const DenseMatrix a = g * g.transpose();
    const DenseMatrix b = h * h.transpose() + DenseMatrix::Identity(d, d);
    const DenseMatrix c = random_matrix(k, d, rng);
    const auto ts = Clock::now();
    const DenseMatrix w = sae::matlin::solve_sylvester(a, b, c);
    solver_time += seconds_since(ts);
    const DenseMatrix ref = sae::testing::kronecker_sylvester(a, b, c);
    worst_dev = std::max(worst_dev, (w - ref).cwiseAbs().maxCoeff());
    worst_res = std::max(worst_res, (a * w + w * b - c).norm() / c.norm());
  }
  const double total = seconds_since(t0);
  const bool pass = worst_dev <= 1e-6 && worst_res <= 1e-8 && total < 5.0;
  return {pass, "50 instances: max |W - W_kron| " + sci(worst_dev) + " (<= 1e-6), max relative residual " +
                    sci(worst_res) + " (<= 1e-8), " + fixed(total, 3) + " s total, solver " +
                    fixed(solver_time, 3) + " s (< 5 s)"};
}

// ---- 2 -----------------------------------------------------------------------

Outcome stationarity_and_optimality() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> dd(1, 32), kk(1, 8), nn(10, 200);
  std::uniform_real_distribution<double> log_lambda(std::log(0.01), std::log(10.0));
  double worst_grad = 0.0;
  int violations = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const Index d = dd(rng), k = kk(rng), n = nn(rng);
    const DenseMatrix x = random_matrix(d, n, rng), s = random_matrix(k, n, rng);
    sae::TrainConfig cfg;
    cfg.lambda = std::exp(log_lambda(rng));
    const auto model = sae::train_sae(x, s, cfg);
    const DenseMatrix& w = model.w();

    // Central differences; exact for a quadratic up to rounding.
    const double step = 1e-3;
    DenseMatrix probe = w, grad(k, d);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < k; ++i) {
        probe(i, j) = w(i, j) + step;
        const double up = sae::objective(probe, cfg.lambda, x, s);
        probe(i, j) = w(i, j) - step;
        const double down = sae::objective(probe, cfg.lambda, x, s);
        probe(i, j) = w(i, j);
        grad(i, j) = (up - down) / (2.0 * step);
      }
    }
    worst_grad = std::max(worst_grad, grad.norm());

    const double f0 = sae::objective(w, cfg.lambda, x, s);
    for (int p = 0; p < 100; ++p) {
      DenseMatrix delta = random_matrix(k, d, rng);
      delta *= 0.1 / delta.norm();
      if (sae::objective(DenseMatrix(w + delta), cfg.lambda, x, s) < f0) ++violations;
    }
  }
  const bool pass = worst_grad <= 1e-5 && violations == 0;
  return {pass, "20 instances: max finite-difference gradient norm " + sci(worst_grad) +
                    " (<= 1e-5), perturbations lowering the objective " + std::to_string(violations) + "/2000"};
}

// ---- 3 and 4: synthetic zero-shot task -----------------------------------------

const std::vector<double> kLambdaGrid{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
constexpr int kZslSeeds = 10;

struct ZslRun {
  double sae_encoder = 0.0;
  double sae_decoder = 0.0;
  double ridge_forward = 0.0;
  double ridge_reverse = 0.0;
};

double accuracy(const DenseMatrix& w, const DenseMatrix& x, const std::vector<ClassId>& truth,
                const sae::PrototypeSet& protos, zsl::Direction dir) {
  const auto pred = zsl::classify(w, x, protos, zsl::DistanceKind::cosine, dir);
  return zsl::multiway_accuracy(pred, truth).overall;
}

ZslRun run_zsl_task(std::uint64_t seed, bool l2) {
  const auto task = sae::testing::make_zsl_task(seed);
  const auto parts = sae::data::zsl_split(task.dataset, task.split);
  const auto& sem = *task.dataset.semantics;
  const DenseMatrix x_train = l2 ? sae::data::l2_normalize_columns(parts.train.features) : parts.train.features;
  const DenseMatrix x_test = l2 ? sae::data::l2_normalize_columns(parts.test.features) : parts.test.features;
  const auto unseen = sem.subset(task.split.unseen);
  const auto grams = sae::GramProducts::compute(x_train, sem.per_sample(parts.train.labels));

  const auto cv = [&](zsl::Method m, zsl::Direction dir) {
    zsl::CrossValidationConfig cfg;
    cfg.method = m;
    cfg.direction = dir;
    return zsl::cross_validate_lambda(x_train, parts.train.labels, sem, kLambdaGrid, cfg).best_lambda;
  };
  ZslRun r;
  const DenseMatrix w = zsl::fit_projection(zsl::Method::sae, grams, cv(zsl::Method::sae, zsl::Direction::encoder));
  r.sae_encoder = accuracy(w, x_test, parts.test.labels, unseen, zsl::Direction::encoder);
  r.sae_decoder = accuracy(w, x_test, parts.test.labels, unseen, zsl::Direction::decoder);
  const DenseMatrix wf = zsl::fit_projection(zsl::Method::ridge_forward, grams,
                                             cv(zsl::Method::ridge_forward, zsl::Direction::encoder));
  r.ridge_forward = accuracy(wf, x_test, parts.test.labels, unseen, zsl::Direction::encoder);
  const DenseMatrix wr = zsl::fit_projection(zsl::Method::ridge_reverse, grams,
                                             cv(zsl::Method::ridge_reverse, zsl::Direction::decoder));
  r.ridge_reverse = accuracy(wr, x_test, parts.test.labels, unseen, zsl::Direction::decoder);
  return r;
}

std::map<bool, std::vector<ZslRun>>& zsl_runs() {
  static std::map<bool, std::vector<ZslRun>> runs;
  if (runs.empty()) {
    for (bool l2 : {false, true})
      for (int s = 0; s < kZslSeeds; ++s) runs[l2].push_back(run_zsl_task(static_cast<std::uint64_t>(s), l2));
  }
  return runs;
}

Outcome ablation_direction() {
  bool pass = true;
  std::string detail;
  for (const auto& [l2, runs] : zsl_runs()) {
    double sae = 0.0, fwd = 0.0, rev = 0.0;
    int seeds_fwd = 0, seeds_rev = 0;
    for (const auto& r : runs) {
      sae += r.sae_encoder / kZslSeeds;
      fwd += r.ridge_forward / kZslSeeds;
      rev += r.ridge_reverse / kZslSeeds;
      seeds_fwd += r.sae_encoder >= r.ridge_forward;
      seeds_rev += r.sae_encoder >= r.ridge_reverse;
    }
    pass = pass && sae >= fwd && sae >= rev;
    if (!detail.empty()) detail += "; ";
    detail += std::string(l2 ? "l2" : "raw") + " features: mean unseen accuracy SAE " + fixed(sae) +
              ", ridge F->S " + fixed(fwd) + ", ridge F<-S " + fixed(rev) + " (SAE ahead on " +
              std::to_string(seeds_fwd) + "/" + std::to_string(seeds_rev) + " of " + std::to_string(kZslSeeds) +
              " seeds)";
  }
  return {pass, "10 seen / 4 unseen, lambda by 3-fold class-wise CV, " + std::to_string(kZslSeeds) +
                    " seeds; " + detail};
}

Outcome two_strategy_agreement() {
  bool pass = true;
  std::string detail;
  for (const auto& [l2, runs] : zsl_runs()) {
    double worst = 0.0, mean_gap = 0.0, enc = 0.0, dec = 0.0;
    int over = 0;
    for (const auto& r : runs) {
      const double gap = std::abs(r.sae_encoder - r.sae_decoder);
      worst = std::max(worst, gap);
      mean_gap += gap / kZslSeeds;
      over += gap > 0.05;
      enc += r.sae_encoder / kZslSeeds;
      dec += r.sae_decoder / kZslSeeds;
    }
    pass = pass && worst <= 0.05;
    if (!detail.empty()) detail += "; ";
    detail += std::string(l2 ? "l2" : "raw") + " features: max |W - W^T| gap " + fixed(100.0 * worst, 2) +
              " points (<= 5) with " + std::to_string(over) +
              " seeds over, mean gap " + fixed(100.0 * mean_gap, 2) + " points, mean W " + fixed(enc) + ", W^T " + fixed(dec);
  }
  return {pass, std::to_string(kZslSeeds) + " seeds; " + detail};
}

// ---- 5 -----------------------------------------------------------------------

Outcome supervised_clustering() {
  const auto t0 = Clock::now();
  bool pass = true;
  std::string detail;
  for (auto kind : {cl::SynthKind::same_size, cl::SynthKind::diff_size_noisy}) {
    const auto bench = cl::synth_benchmark(kind, 1);
    const auto r = cl::run_supervised_clustering(bench.train, bench.test.features, &bench.test.labels, 0.2, 3, 10, 1);
    pass = pass && *r.sae_loss <= 0.2 && *r.sae_loss < 0.5 * *r.raw_loss;
    if (!detail.empty()) detail += "; ";
    detail += cl::to_string(kind) + ": SAE delta " + fixed(*r.sae_loss) + " (<= 0.2), raw k-means delta " +
              fixed(*r.raw_loss);
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 30.0;
  return {pass, detail + "; " + fixed(elapsed, 2) + " s (< 30 s)"};
}

// ---- 6 -----------------------------------------------------------------------

Outcome training_speed() {
  const auto ds = cl::synth_generate(cl::SynthKind::same_size, 5);
  const auto t0 = Clock::now();
  const auto s = cl::encode_labels(ds.labels).s_matrix;
  const auto model = sae::train_sae(ds.features, s, {});
  const double small = seconds_since(t0);

  // Solver phase only (system assembly from Gram products plus the Sylvester
  // solve), d = k = 32. Best of many repetitions over several instances.
  const auto solver_time = [](Index n) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    double total = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
      const DenseMatrix x = random_matrix(32, n, rng), s = random_matrix(32, n, rng);
      const auto grams = sae::GramProducts::compute(x, s);
      double best = 1e9;
      for (int rep = 0; rep < 30; ++rep) {
        const auto t = Clock::now();
        const auto m = sae::solve_sae_system(sae::make_sae_system(grams, 0.2));
        best = std::min(best, seconds_since(t));
        if (!std::isfinite(m.w()(0, 0))) best = 1e9;
      }
      total += best;
    }
    return total / 5.0;
  };
  const double t1k = solver_time(1000), t10k = solver_time(10000);
  const double change = std::abs(t10k - t1k) / t1k;
  const bool pass = small < 1.0 && change < 0.2 && model.k() == 3;
  return {pass, "N = 3000, d = 3 training " + fixed(small * 1e3, 2) + " ms (< 1 s); d = k = 32 solver phase " +
                    fixed(t1k * 1e6, 1) + " us at N = 1000, " + fixed(t10k * 1e6, 1) + " us at N = 10000, change " +
                    fixed(100.0 * change, 1) + "% (< 20%)"};
}

// ---- 7 -----------------------------------------------------------------------

Outcome ausuc_bounds() {
  std::mt19937_64 rng(9);
  double lo = 1.0, hi = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> cnt(1, 5);
    const int ns = cnt(rng), nu = cnt(rng), m = 2 + trial % 30;
    std::vector<ClassId> seen, unseen, truth;
    for (int i = 0; i < ns; ++i) seen.push_back("s" + std::to_string(i));
    for (int i = 0; i < nu; ++i) unseen.push_back("u" + std::to_string(i));
    std::vector<bool> mask;
    for (int j = 0; j < m; ++j) {
      const bool is_seen = j % 2 == 0;
      mask.push_back(is_seen);
      truth.push_back(is_seen ? seen[static_cast<std::size_t>(j) % seen.size()]
                              : unseen[static_cast<std::size_t>(j) % unseen.size()]);
    }
    const double scale = trial % 3 == 0 ? 1e-3 : (trial % 3 == 1 ? 1.0 : 1e3);
    const auto r = zsl::ausuc(scale * random_matrix(ns, m, rng), seen, scale * random_matrix(nu, m, rng), unseen,
                              truth, mask);
    lo = std::min(lo, r.area);
    hi = std::max(hi, r.area);
  }

  // Perfect: every sample scores its own class 0 and every other class -10.
  const std::vector<ClassId> seen{"s0", "s1"}, unseen{"u0", "u1"};
  const std::vector<ClassId> truth{"s0", "s1", "u0", "u1", "s0", "u1"};
  const std::vector<bool> mask{true, true, false, false, true, false};
  DenseMatrix ss = DenseMatrix::Constant(2, 6, -10.0), us = DenseMatrix::Constant(2, 6, -10.0);
  for (Index j = 0; j < 6; ++j) {
    const auto& t = truth[static_cast<std::size_t>(j)];
    if (t[0] == 's') ss(t[1] - '0', j) = 0.0;
    else us(t[1] - '0', j) = 0.0;
  }
  const double perfect = zsl::ausuc(ss, seen, us, unseen, truth, mask).area;

  // Zero unseen: unseen samples always prefer the wrong unseen class.
  DenseMatrix us0 = us;
  for (Index j = 0; j < 6; ++j) {
    if (mask[static_cast<std::size_t>(j)]) continue;
    us0.col(j).reverseInPlace();
  }
  const double zero = zsl::ausuc(ss, seen, us0, unseen, truth, mask).area;

  const bool pass = lo >= 0.0 && hi <= 1.0 && std::abs(perfect - 1.0) <= 1e-9 && zero == 0.0;
  return {pass, "300 random runs in [" + fixed(lo) + ", " + fixed(hi) + "]; perfect " + fixed(perfect, 12) +
                    " (1 +- 1e-9); zero-unseen " + fixed(zero, 12) + " (== 0)"};
}

// ---- 8 -----------------------------------------------------------------------

struct Fraction {
  long long num = 0, den = 1;
  Fraction operator+(const Fraction& o) const {
    Fraction r{num * o.den + o.num * den, den * o.den};
    const long long g = std::gcd(r.num, r.den);
    return {r.num / g, r.den / g};
  }
  Fraction operator-(const Fraction& o) const { return *this + Fraction{-o.num, o.den}; }
  Fraction operator*(const Fraction& o) const {
    Fraction r{num * o.num, den * o.den};
    const long long g = std::gcd(r.num, r.den);
    return g ? Fraction{r.num / g, r.den / g} : Fraction{0, 1};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Δ summed entry by entry over the explicit N×N matrices in exact arithmetic.
double brute_delta(const std::vector<Index>& a, const std::vector<Index>& b) {
  const std::size_t n = a.size();
  Fraction sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto entry = [&](const std::vector<Index>& l) {
        if (l[i] != l[j]) return Fraction{0, 1};
        return Fraction{1, static_cast<long long>(std::count(l.begin(), l.end(), l[i]))};
      };
      const Fraction d = entry(a) - entry(b);
      sum = sum + d * d;
    }
  }
  return sum.value();
}

// All set partitions of n items as restricted growth strings.
void partitions(std::size_t n, std::vector<Index>& cur, Index max_label, std::vector<std::vector<Index>>& out) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (Index l = 0; l <= max_label + 1; ++l) {
    cur.push_back(l);
    partitions(n, cur, std::max(max_label, l), out);
    cur.pop_back();
  }
}

double brute_hit_at_k(const DenseMatrix& scores, const std::vector<ClassId>& rows, const std::vector<ClassId>& truth,
                      Index k) {
  int hits = 0;
  for (Index m = 0; m < scores.cols(); ++m) {
    std::vector<Index> order(static_cast<std::size_t>(scores.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a, m) > scores(b, m); });
    for (Index pos = 0; pos < k; ++pos)
      if (rows[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] == truth[static_cast<std::size_t>(m)])
        ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(scores.cols());
}

Outcome metric_oracles() {
  long checks = 0, mismatches = 0;

  // Multi-way accuracy: every (prediction, truth) labelling over 3 classes, N ≤ 4.
  const std::vector<ClassId> names{"a", "b", "c"};
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t total = static_cast<std::size_t>(std::pow(3, 2 * n));
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<ClassId> pred, truth;
      std::size_t c = code;
      for (std::size_t i = 0; i < n; ++i, c /= 3) pred.push_back(names[c % 3]);
      for (std::size_t i = 0; i < n; ++i, c /= 3) truth.push_back(names[c % 3]);
      const auto r = zsl::multiway_accuracy(pred, truth);
      int correct = 0;
      std::map<ClassId, std::pair<int, int>> per;  // hits, support
      for (std::size_t i = 0; i < n; ++i) {
        per[truth[i]].second += 1;
        if (pred[i] == truth[i]) ++correct, per[truth[i]].first += 1;
      }
      double mean = 0.0;
      for (const auto& [id, hs] : per) mean += static_cast<double>(hs.first) / static_cast<double>(hs.second);
      mean /= static_cast<double>(per.size());
      ++checks;
      if (r.overall != static_cast<double>(correct) / static_cast<double>(n) || r.mean_per_class != mean) ++mismatches;
    }
  }

  // hit@K: small integer scores so ties are common, N ≤ 6 samples, 4 classes.
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> score(0, 2), cls(0, 3);
  const std::vector<ClassId> rows{"p", "q", "r", "s"};
  for (int trial = 0; trial < 3000; ++trial) {
    const Index n = 1 + trial % 6;
    DenseMatrix scores(4, n);
    std::vector<ClassId> truth;
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < 4; ++i) scores(i, j) = score(rng);
      truth.push_back(rows[static_cast<std::size_t>(cls(rng))]);
    }
    for (Index k = 1; k <= 4; ++k) {
      ++checks;
      if (zsl::hit_at_k(scores, rows, truth, k) != brute_hit_at_k(scores, rows, truth, k)) ++mismatches;
    }
  }

  // Δ: every pair of set partitions for N ≤ 6.
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<std::vector<Index>> all;
    std::vector<Index> cur;
    partitions(n, cur, -1, all);
    for (const auto& a : all) {
      for (const auto& b : all) {
        ++checks;
        if (cl::clustering_loss(a, b) != brute_delta(a, b)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checks) + " exhaustive and randomized instances (N <= 6), " +
                               std::to_string(mismatches) + " differ from the brute-force value"};
}

// ---- 9 -----------------------------------------------------------------------

std::string read_or_empty(const fs::path& p) { return fs::exists(p) ? sae::io::read_file(p.string()) : ""; }

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "sae_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);

  sae::testing::ZslTaskConfig small;
  small.train_per_class = 15;
  small.test_per_class = 20;
  const auto task = sae::testing::make_zsl_task(11, small);
  const auto files = sae::data::write_dataset_files(dir.string(), "zsl_", task.dataset);
  nlohmann::json m{{"features_csv", files.features_csv}, {"labels_csv", files.labels_csv},
                   {"semantics_csv", *files.semantics_csv}, {"seen_classes", task.split.seen},
                   {"unseen_classes", task.split.unseen}};
  const std::string manifest = (dir / "task.json").string();
  sae::io::write_file_atomic(manifest, m.dump());
  const std::string p = dir.string() + "/";

  struct Command {
    std::vector<std::string> args;
    std::vector<std::string> artifacts;
  };
  const std::vector<Command> commands{
      {{"train", "--manifest", manifest, "--lambda-grid", "0.01,0.1,1,10", "--out", p + "model.json"},
       {p + "model.json"}},
      {{"zsl-eval", "--manifest", manifest, "--model", p + "model.json", "--baselines", "--out", p + "zsl.json"},
       {p + "zsl.json", p + "zsl.txt"}},
      {{"zsl-eval", "--manifest", manifest, "--lambda-grid", "0.1,1", "--out", p + "zsl_cv.json"},
       {p + "zsl_cv.json"}},
      {{"gzsl-eval", "--manifest", manifest, "--seed", "5", "--out", p + "gzsl.json"}, {p + "gzsl.json"}},
      {{"synth", "--kind", "diff_size_noisy", "--seed", "3", "--out", p + "bench"},
       {p + "bench/manifest.json", p + "bench/train_features.csv", p + "bench/test_labels.csv"}},
      {{"cluster", "--manifest", p + "bench/manifest.json", "--seed", "4", "--out", p + "clusters.json"},
       {p + "clusters.json", p + "clusters.assignments.csv"}},
      {{"solver-check", "--dim", "12", "--seed", "7", "--out", p + "solver.json"}, {p + "solver.json"}},
  };

  int identical = 0, total = 0, failures = 0;
  for (const auto& c : commands) {
    std::vector<std::string> argv{"sae"};
    argv.insert(argv.end(), c.args.begin(), c.args.end());
    std::ostringstream out, err;
    std::vector<std::string> first;
    if (sae::cli::run(argv, out, err) != 0) ++failures;
    for (const auto& a : c.artifacts) first.push_back(read_or_empty(a));
    if (sae::cli::run(argv, out, err) != 0) ++failures;
    for (std::size_t i = 0; i < c.artifacts.size(); ++i) {
      ++total;
      if (!first[i].empty() && first[i] == read_or_empty(c.artifacts[i])) ++identical;
    }
  }
  return {identical == total && failures == 0,
          std::to_string(commands.size()) + " commands run twice: " + std::to_string(identical) + "/" +
              std::to_string(total) + " artifacts byte-identical, " + std::to_string(failures) + " nonzero exits"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"sylvester-correctness", sylvester_correctness},
      {"stationarity-and-optimality", stationarity_and_optimality},
      {"ablation-direction", ablation_direction},
      {"two-strategy-agreement", two_strategy_agreement},
      {"supervised-clustering", supervised_clustering},
      {"training-speed", training_speed},
      {"ausuc-bounds", ausuc_bounds},
      {"metric-oracles", metric_oracles},
      {"cli-determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
