#include "lp_oracles.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/rng.hpp"
#include "ridgerec/solvers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace ridgerec;

namespace {

Matrix gaussian(Eigen::Index m, Eigen::Index d, std::uint64_t key) {
  CounterRng rng(key);
  Matrix a(m, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = rng.normal();
  return a;
}

Vector gaussian_vec(Eigen::Index n, std::uint64_t key) { return gaussian(n, 1, key).col(0); }

Vector sparse_vec(Eigen::Index d, Eigen::Index s, std::uint64_t key) {
  CounterRng rng(key);
  Vector x = Vector::Zero(d);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (Eigen::Index k = 0; k < s; ++k) {
    const auto j = k + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d - k)));
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    x[idx[static_cast<std::size_t>(k)]] = rng.normal();
  }
  return x;
}

Matrix row(double a, double b) {
  Matrix p(1, 2);
  p << a, b;
  return p;
}

}  // namespace

TEST_CASE("l1_eq examples") {
  const Matrix phi = gaussian(3, 6, 1);
  auto zero = solve_l1_eq(phi, Vector::Zero(3));
  CHECK(zero.converged);
  CHECK(zero.solution.isZero(0.0));

  auto r = solve_l1_eq(row(1, 0.5), Vector::Ones(1));
  CHECK(r.converged);
  CHECK(r.solution[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.solution[1]) < 1e-8);

  const Matrix sq = gaussian(5, 5, 2);
  const Vector y = gaussian_vec(5, 3);
  auto inv = solve_l1_eq(sq, y);
  CHECK(inv.converged);
  CHECK((inv.solution - sq.lu().solve(y)).norm() < 1e-7 * (1 + y.norm()));

  CHECK_THROWS_AS(solve_l1_eq(phi, Vector::Zero(4)), InputError);
}

TEST_CASE("l1_eq accepts overdetermined systems") {
  const Matrix phi = gaussian(8, 4, 4);
  const Vector x = gaussian_vec(4, 5);
  auto r = solve_l1_eq(phi, phi * x);
  CHECK(r.converged);
  CHECK((r.solution - x).norm() < 1e-7);
}

TEST_CASE("l1_qc examples") {
  const Matrix phi = gaussian(4, 9, 6);
  const Vector y = gaussian_vec(4, 7);
  auto big = solve_l1_qc(phi, y, y.norm() * 1.01);
  CHECK(big.converged);
  CHECK(big.solution.isZero(0.0));

  auto eq = solve_l1_eq(phi, y);
  auto qc0 = solve_l1_qc(phi, y, 0.0);
  CHECK(qc0.converged);
  CHECK(qc0.objective() == doctest::Approx(eq.objective()).epsilon(1e-7));

  auto r = solve_l1_qc(row(1, 0.5), Vector::Ones(1), 0.5);
  CHECK(r.converged);
  CHECK(r.solution[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(r.solution[1]) < 1e-6);

  CHECK_THROWS_AS(solve_l1_qc(phi, y, -1.0), InputError);
}

TEST_CASE("l1_qc objective shrinks as eta grows") {
  const Matrix phi = gaussian(6, 15, 8);
  const Vector y = gaussian_vec(6, 9);
  double prev = kInf;
  for (double frac : {0.0, 0.05, 0.1, 0.3, 0.6, 0.9}) {
    auto r = solve_l1_qc(phi, y, frac * y.norm());
    REQUIRE(r.converged);
    CHECK(r.objective() <= prev * (1 + 1e-7));
    prev = r.objective();
  }
}

TEST_CASE("dantzig examples") {
  const Matrix phi = gaussian(4, 7, 10);
  const Vector y = gaussian_vec(4, 11);
  const double top = (phi.transpose() * y).cwiseAbs().maxCoeff();
  auto zero = solve_dantzig(phi, y, top);
  CHECK(zero.converged);
  CHECK(zero.solution.isZero(0.0));

  const Matrix sq = gaussian(5, 5, 12);
  const Vector ys = gaussian_vec(5, 13);
  auto inv = solve_dantzig(sq, ys, 0.0);
  CHECK(inv.converged);
  CHECK((inv.solution - sq.lu().solve(ys)).norm() < 1e-7 * (1 + ys.norm()));

  CHECK_THROWS_AS(solve_dantzig(phi, y, -0.1), InputError);
}

TEST_CASE("dantzig on the identity is soft thresholding") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(t % 8);
    const Vector y = gaussian_vec(d, derive_key(14, {t}));
    const double thresh = 0.1 * static_cast<double>(t % 7);
    auto r = solve_dantzig(Matrix::Identity(d, d), y, thresh);
    REQUIRE(r.converged);
    CHECK((r.solution - testing::soft_threshold(y, thresh)).cwiseAbs().maxCoeff() < 1e-6);
    if (d > 4) continue;
    const auto lp = testing::dantzig_exhaustive(Matrix::Identity(d, d), y, thresh);
    REQUIRE(lp.has_value());
    CHECK(testing::soft_threshold(y, thresh).lpNorm<1>() == doctest::Approx(*lp).epsilon(1e-9));
  }
}

TEST_CASE("solvers agree with exhaustive oracles on tiny instances") {
  const double tol = SolveOptions{}.tol;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(t % 5);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(t % static_cast<std::uint64_t>(d));
    const Matrix phi = gaussian(m, d, derive_key(15, {t}));
    const Vector y = gaussian_vec(m, derive_key(16, {t}));
    CAPTURE(t);

    auto eq = solve_l1_eq(phi, y);
    const auto eq_lp = testing::l1_eq_exhaustive(phi, y);
    REQUIRE(eq_lp.has_value());
    REQUIRE(eq.converged);
    CHECK(std::abs(eq.objective() - *eq_lp) <= 10 * tol * std::max(1.0, *eq_lp));

    if (d <= 4) {
      const double thresh = 0.2 * (phi.transpose() * y).cwiseAbs().maxCoeff();
      auto ds = solve_dantzig(phi, y, thresh);
      const auto ds_lp = testing::dantzig_exhaustive(phi, y, thresh);
      REQUIRE(ds_lp.has_value());
      REQUIRE(ds.converged);
      CHECK(std::abs(ds.objective() - *ds_lp) <= 10 * tol * std::max(1.0, *ds_lp));
    }

    const double eta = 0.3 * y.norm();
    auto qc = solve_l1_qc(phi, y, eta);
    REQUIRE(qc.converged);
    CHECK((phi * qc.solution - y).norm() <= eta * (1 + tol) + tol);
    const double best = testing::l1_qc_exhaustive(phi, y, eta);
    CHECK(std::abs(qc.objective() - best) <= 10 * tol * std::max(1.0, best));
  }
}

TEST_CASE("solvers are permutation equivariant") {
  const Matrix phi = gaussian(5, 12, 17);
  const Vector y = phi * sparse_vec(12, 2, 18);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(12);
  perm.setIdentity();
  CounterRng rng(19);
  for (Eigen::Index k = 11; k > 0; --k) std::swap(perm.indices()[k], perm.indices()[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(k + 1)))]);
  const Matrix phi_p = phi * perm;

  auto a = solve_l1_eq(phi, y);
  auto b = solve_l1_eq(phi_p, y);
  CHECK((perm.transpose() * a.solution - b.solution).norm() < 1e-6);
  auto c = solve_dantzig(phi, y, 0.05);
  auto e = solve_dantzig(phi_p, y, 0.05);
  CHECK(c.objective() == doctest::Approx(e.objective()).epsilon(1e-7));
  auto f = solve_l1_qc(phi, y, 0.1 * y.norm());
  auto g = solve_l1_qc(phi_p, y, 0.1 * y.norm());
  CHECK(f.objective() == doctest::Approx(g.objective()).epsilon(1e-7));
}

TEST_CASE("basis pursuit recovers sparse vectors from Bernoulli measurements") {
  int ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto phi = SensingMatrix::bernoulli(60, 200, derive_key(20, {t}));
    Vector x = sparse_vec(200, 5, derive_key(21, {t}));
    x /= x.norm();
    auto r = solve_l1_eq(phi.matrix(), phi.matrix() * x);
    if (r.converged && (r.solution - x).norm() <= 1e-6) ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("reports are consistent") {
  const Matrix phi = gaussian(6, 20, 22);
  const Vector y = gaussian_vec(6, 23);
  for (const SolveReport& r : {solve_l1_eq(phi, y), solve_l1_qc(phi, y, 0.2), solve_dantzig(phi, y, 0.3)}) {
    CHECK(r.solution.allFinite());
    CHECK(r.tolerance > 0.0);
    if (r.converged) CHECK(r.residual <= r.tolerance);
  }
}
