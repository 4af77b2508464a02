#include <doctest.h>

#include <functional>
#include <limits>
#include <random>

#include "sae/model.hpp"
#include "support/oracles.hpp"

using sae::DenseMatrix;
using sae::Index;
using sae::testing::random_matrix;

namespace {

DenseMatrix scalar(double v) {
  DenseMatrix m(1, 1);
  m << v;
  return m;
}

// Central finite-difference gradient of the relaxed objective with respect to W.
DenseMatrix fd_gradient(const DenseMatrix& w, double lambda, const DenseMatrix& x,
                        const DenseMatrix& s, double h = 1e-3) {
  DenseMatrix g(w.rows(), w.cols());
  DenseMatrix probe = w;
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) {
      probe(i, j) = w(i, j) + h;
      const double up = sae::objective(probe, lambda, x, s);
      probe(i, j) = w(i, j) - h;
      const double down = sae::objective(probe, lambda, x, s);
      probe(i, j) = w(i, j);
      g(i, j) = (up - down) / (2.0 * h);
    }
  }
  return g;
}

// Plain gradient descent on a strongly convex quadratic; independent of solve_spd.
DenseMatrix descend(const std::function<DenseMatrix(const DenseMatrix&)>& grad, DenseMatrix w,
                    double step, int iters) {
  for (int it = 0; it < iters; ++it) w -= step * grad(w);
  return w;
}

}  // namespace

TEST_CASE("train_sae scalar closed form") {
  sae::TrainConfig cfg;
  cfg.lambda = 1.0;
  const auto model = sae::train_sae(scalar(2.0), scalar(1.0), cfg);
  CHECK(model.w()(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(sae::objective(model, scalar(2.0), scalar(1.0)) == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(sae::encode(model, scalar(2.0))(0, 0) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(sae::decode(model, scalar(1.0))(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("train_sae self-encoding fixed point") {
  std::mt19937_64 rng(3);
  const DenseMatrix x = random_matrix(5, 40, rng);
  for (double lambda : {0.01, 0.2, 3.0}) {
    sae::TrainConfig cfg;
    cfg.lambda = lambda;
    const auto model = sae::train_sae(x, x, cfg);
    CHECK((model.w() - DenseMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(sae::objective(model, x, x) < 1e-15 * x.squaredNorm() + 1e-18);
  }
}

TEST_CASE("train_sae zeroes the gradient of the relaxed objective") {
  std::mt19937_64 rng(17);
  const DenseMatrix x = random_matrix(8, 100, rng);
  const DenseMatrix s = random_matrix(3, 100, rng);
  sae::TrainConfig cfg;
  cfg.lambda = 0.5;
  const auto model = sae::train_sae(x, s, cfg);
  CHECK(fd_gradient(model.w(), 0.5, x, s).norm() <= 1e-6);
  // The gradient is genuinely nonzero a little away from the optimum.
  const DenseMatrix off = model.w() + 0.01 * DenseMatrix::Ones(3, 8);
  CHECK(fd_gradient(off, 0.5, x, s).norm() > 1e-3);

  const auto sys = sae::make_sae_system(x, s, 0.5);
  const double stationarity = (sys.a * model.w() + model.w() * sys.b - sys.c).norm();
  CHECK(stationarity <= 1e-6 * std::max(1.0, sys.c.norm()));
  CHECK(model.train_residual() == doctest::Approx(stationarity));
}

TEST_CASE("trained W is a global minimum") {
  std::mt19937_64 rng(99);
  const DenseMatrix x = random_matrix(6, 50, rng);
  const DenseMatrix s = random_matrix(2, 50, rng);
  const auto model = sae::train_sae(x, s, {});
  const double best = sae::objective(model, x, s);
  for (int i = 0; i < 100; ++i) {
    DenseMatrix delta = random_matrix(2, 6, rng);
    delta *= 0.1 / delta.norm();
    CHECK(best <= sae::objective(model.w() + delta, model.lambda(), x, s));
  }
}

TEST_CASE("objective special cases") {
  std::mt19937_64 rng(5);
  const DenseMatrix x = random_matrix(4, 9, rng);
  const DenseMatrix s = random_matrix(3, 9, rng);
  const auto identity = sae::SaeModel::from_weights(DenseMatrix::Identity(4, 4), 0.7);
  CHECK(sae::objective(identity, x, x) == 0.0);
  const auto zero = sae::SaeModel::from_weights(DenseMatrix::Zero(3, 4), 0.7);
  CHECK(sae::objective(zero, x, s) ==
        doctest::Approx(x.squaredNorm() + 0.7 * s.squaredNorm()).epsilon(1e-14));
  CHECK_THROWS_AS(sae::objective(zero, x, s.leftCols(5)), sae::DimensionError);
  CHECK_THROWS_AS(sae::objective(zero, s, s), sae::DimensionError);
}

TEST_CASE("encode and decode") {
  std::mt19937_64 rng(6);
  const DenseMatrix x = random_matrix(4, 3, rng);
  const auto identity = sae::SaeModel::from_weights(DenseMatrix::Identity(4, 4), 1.0);
  CHECK(sae::encode(identity, x) == x);
  CHECK(sae::decode(identity, x) == x);

  const auto m = sae::SaeModel::from_weights(random_matrix(2, 4, rng), 1.0);
  CHECK(sae::encode(m, DenseMatrix::Zero(4, 2)) == DenseMatrix::Zero(2, 2));
  CHECK(sae::decode(m, DenseMatrix::Zero(2, 2)) == DenseMatrix::Zero(4, 2));
  CHECK(sae::decode(m, DenseMatrix::Identity(2, 2)) == m.w().transpose());
  CHECK_THROWS_AS(sae::encode(m, DenseMatrix::Zero(2, 1)), sae::DimensionError);
  CHECK_THROWS_AS(sae::decode(m, DenseMatrix::Zero(4, 1)), sae::DimensionError);
}

TEST_CASE("SaeModel validation") {
  DenseMatrix bad = DenseMatrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sae::SaeModel::from_weights(bad, 1.0), sae::DataError);
  CHECK_THROWS_AS(sae::SaeModel::from_weights(DenseMatrix::Zero(2, 2), 0.0), sae::DataError);
  sae::TrainConfig cfg;
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(sae::train_sae(DenseMatrix::Ones(2, 3), DenseMatrix::Ones(1, 3), cfg),
                  sae::DataError);
  CHECK_THROWS_AS(sae::train_sae(DenseMatrix::Ones(2, 3), DenseMatrix::Ones(1, 4)),
                  sae::DimensionError);
}

TEST_CASE("singular pencil propagates with guidance and jitter resolves it") {
  // Both S and X are rank-deficient along a shared direction of zero energy.
  DenseMatrix x = DenseMatrix::Zero(3, 4);
  x.row(0) << 1, 2, 3, 4;
  x.row(1) << 0, 1, 0, 1;
  DenseMatrix s = DenseMatrix::Zero(2, 4);
  s.row(0) << 1, 0, 1, 0;
  try {
    sae::train_sae(x, s, {});
    FAIL("expected SingularPencilError");
  } catch (const sae::SingularPencilError& e) {
    CHECK(std::string(e.what()).find("jitter") != std::string::npos);
  }
  const auto model = sae::solve_sae_system(sae::jittered(sae::make_sae_system(x, s, 0.2)));
  CHECK(sae::matlin::all_finite(model.w()));
}

TEST_CASE("solve_ridge_forward") {
  std::mt19937_64 rng(21);
  const DenseMatrix sq = random_matrix(4, 4, rng) + 4.0 * DenseMatrix::Identity(4, 4);
  CHECK((sae::solve_ridge_forward(sq, sq, 1e-10) - DenseMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-8);

  const DenseMatrix x = random_matrix(5, 30, rng);
  const DenseMatrix s = random_matrix(3, 30, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1.0, 10.0, 100.0, 1e4, 1e6, 1e8}) {
    const double norm = sae::solve_ridge_forward(x, s, lambda).norm();
    CHECK(norm < prev);
    prev = norm;
  }
  CHECK(prev < 1e-5);

  const double lambda = 0.5;
  const auto grad = [&](const DenseMatrix& w) -> DenseMatrix {
    return 2.0 * (w * x - s) * x.transpose() + 2.0 * lambda * w;
  };
  const double lip = 2.0 * ((x * x.transpose()).norm() + lambda);
  const DenseMatrix oracle = descend(grad, DenseMatrix::Zero(3, 5), 1.0 / lip, 20000);
  CHECK((sae::solve_ridge_forward(x, s, lambda) - oracle).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("solve_ridge_reverse") {
  std::mt19937_64 rng(22);
  const DenseMatrix sq = random_matrix(4, 4, rng) + 4.0 * DenseMatrix::Identity(4, 4);
  CHECK((sae::solve_ridge_reverse(sq, sq, 1e-10) - DenseMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-8);

  const DenseMatrix x = random_matrix(5, 30, rng);
  const DenseMatrix s = random_matrix(3, 30, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {1.0, 10.0, 100.0, 1e4, 1e6, 1e8}) {
    const double norm = sae::solve_ridge_reverse(x, s, lambda).norm();
    CHECK(norm < prev);
    prev = norm;
  }
  CHECK(prev < 1e-5);

  const double lambda = 0.5;
  const auto grad = [&](const DenseMatrix& w) -> DenseMatrix {
    return -2.0 * s * (x - w.transpose() * s).transpose() + 2.0 * lambda * w;
  };
  const double lip = 2.0 * ((s * s.transpose()).norm() + lambda);
  const DenseMatrix oracle = descend(grad, DenseMatrix::Zero(3, 5), 1.0 / lip, 20000);
  CHECK((sae::solve_ridge_reverse(x, s, lambda) - oracle).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("model JSON round trip is exact") {
  std::mt19937_64 rng(31);
  const auto model = sae::train_sae(random_matrix(7, 40, rng), random_matrix(3, 40, rng), {});
  const auto back = sae::model_from_json(nlohmann::json::parse(sae::model_to_json(model).dump()));
  CHECK(back.w() == model.w());
  CHECK(back.lambda() == model.lambda());
  CHECK(back.train_residual() == model.train_residual());

  auto doc = sae::model_to_json(model);
  doc["w"]["rows"] = 4;
  CHECK_THROWS_AS(sae::model_from_json(doc), sae::DataError);
  CHECK_THROWS_AS(sae::model_from_json(nlohmann::json::object()), sae::DataError);
}
