#include "lp_oracles.hpp"
#include "ridgerec/cli.hpp"
#include "ridgerec/experiment.hpp"
#include "ridgerec/linalg.hpp"
#include "ridgerec/rng.hpp"
#include "ridgerec/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace ridgerec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

ExperimentConfig base(Algo algo, const std::string& profile, int trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.algo = algo;
  c.profile = profile;
  c.trials = trials;
  c.master_seed = seed;
  c.record_time = false;
  return c;
}

Outcome a1() {
  auto c = base(Algo::A, "linear", 50, 101);
  double worst = 0.0;
  bool ok = true;
  for (const auto& r : run_grid(c)) {
    ok = ok && !r.failed() && r.err_l1 <= 1e-12;
    worst = std::max(worst, r.err_l1);
  }
  return {ok, "max err_l1=" + fmt(worst)};
}

Outcome a2() {
  auto c = base(Algo::A, "tanh", 100, 102);
  c.h_grid = {0.01, 0.05, 0.1, 0.2};
  const Profile g = make_profile("tanh");
  int held = 0, total = 0;
  double worst_ratio = 0.0;
  for (const auto& r : run_grid(c)) {
    const double bound = 2.0 * r.h * g.c1 / (g.anchor_slope - g.c1 * r.h);
    ++total;
    if (!r.failed() && r.err_l1 <= bound) ++held;
    worst_ratio = std::max(worst_ratio, r.err_l1 / bound);
  }
  return {held == total, std::to_string(held) + "/" + std::to_string(total) + " max err/bound=" + fmt(worst_ratio)};
}

Outcome a3() {
  auto c = base(Algo::A, "tanh-shift", 120, 103);
  c.d_grid = {10, 100, 1000};
  const auto rows = summarize(run_grid(c), c.profile);
  bool ok = rows.size() == 3;
  std::string detail = "mean err_l1:";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " d=" + std::to_string(rows[i].d) + ":" + fmt(rows[i].mean_err_l1);
    if (i > 0) ok = ok && rows[i].mean_err_l1 < rows[i - 1].mean_err_l1;
  }
  return {ok, detail};
}

Outcome b1() {
  auto c = base(Algo::B, "linear", 100, 104);
  c.d_grid = {200};
  c.m_grid = {60};
  c.s = 5;
  int exact = 0;
  double worst = 0.0;
  for (const auto& r : run_grid(c)) {
    if (!r.failed() && r.err_l1 <= 1e-6) ++exact;
    if (!r.failed()) worst = std::max(worst, r.err_l1);
  }
  return {exact >= 95, std::to_string(exact) + "/100 within 1e-6, max err_l1=" + fmt(worst)};
}

Outcome b2() {
  auto c = base(Algo::B, "tanh-shift", 40, 105);
  c.d_grid = {50, 100, 150, 200, 250, 300, 350, 400};
  for (Eigen::Index m = 1; m <= 55; m += 3) c.m_grid.push_back(m);
  c.m_grid.push_back(10);
  std::sort(c.m_grid.begin(), c.m_grid.end());
  c.s = 5;
  c.h_grid = {0.1};
  double at10 = std::nan(""), at55 = std::nan("");
  for (const auto& r : summarize(run_grid(c), c.profile)) {
    if (r.d != 200) continue;
    if (r.m == 10) at10 = r.mean_err_l1;
    if (r.m == 55) at55 = r.mean_err_l1;
  }
  return {at55 * 10.0 <= at10, "d=200 mean err_l1 m=10:" + fmt(at10) + " m=55:" + fmt(at55)};
}

ExperimentConfig c_config(double sigma, std::vector<double> h) {
  auto c = base(Algo::C, "tanh-shift", 40, 106);
  c.d_grid = {300};
  c.m_grid = {120};
  c.s = 5;
  c.sigma_grid = {sigma};
  c.h_grid = std::move(h);
  c.allow_exterior = true;
  return c;
}

double best_h = std::nan("");

Outcome c1() {
  const auto c = c_config(0.01, log_spaced(1e-3, 10.0, 12));
  const auto rows = summarize(run_grid(c), c.profile);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].mean_err_l2 < rows[arg].mean_err_l2) arg = i;
  }
  best_h = rows[arg].h;
  const bool ok = arg > 0 && arg + 1 < rows.size() && rows[arg].mean_err_l2 < rows.front().mean_err_l2 &&
                  rows[arg].mean_err_l2 < rows.back().mean_err_l2;
  return {ok, "min " + fmt(rows[arg].mean_err_l2) + " at h=" + fmt(best_h) + ", endpoints " +
                  fmt(rows.front().mean_err_l2) + " / " + fmt(rows.back().mean_err_l2)};
}

Outcome c2() {
  if (std::isnan(best_h)) return {false, "C1 produced no h"};
  std::string detail = "h=" + fmt(best_h) + " mean err_l2:";
  double prev = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double sigma : {0.03, 0.01, 0.003, 0.001}) {
    const auto c = c_config(sigma, {best_h});
    const double e = summarize(run_grid(c), c.profile).front().mean_err_l2;
    ok = ok && e <= prev;
    prev = e;
    detail += " " + fmt(sigma) + ":" + fmt(e);
  }
  return {ok, detail};
}

Outcome d1() {
  auto c = base(Algo::D, "linear", 50, 107);
  double worst = 0.0;
  bool ok = true;
  for (const auto& r : run_grid(c)) {
    ok = ok && !r.failed() && r.err_l2 <= 1e-12;
    worst = std::max(worst, r.err_l2);
  }
  return {ok, "max err_l2=" + fmt(worst)};
}

Outcome d2() {
  auto c = base(Algo::D, "recip", 100, 108);
  c.h_grid = {0.01, 0.05};
  int held = 0, total = 0;
  double worst_ratio = 0.0;
  for (const auto& r : run_grid(c)) {
    ProfileParams p;
    p.local_radius = radial_local_radius(r.h);
    const Profile g = make_profile("recip", p);
    const double q = r.h + r.h * r.h / 4.0;
    const double bound = 2.0 * g.c1 * q / (g.anchor_slope - g.c1 * q);
    ++total;
    if (!r.failed() && bound > 0.0 && r.err_l2 <= bound) ++held;
    worst_ratio = std::max(worst_ratio, r.err_l2 / bound);
  }
  return {held == total, std::to_string(held) + "/" + std::to_string(total) + " max err/bound=" + fmt(worst_ratio)};
}

Outcome p1() {
  CounterRng rng(109);
  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(30));
    Vector x(d), noise(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      x[i] = rng.normal();
      noise[i] = rng.normal();
    }
    double lambda = 4.0 * rng.uniform() - 2.0;
    if (lambda == 0.0) lambda = 1.0;
    const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.5);
    for (int p : {1, 2}) {
      auto norm = [p](const Vector& v) { return p == 1 ? v.lpNorm<1>() : v.norm(); };
      const Vector xn = x / norm(x);
      const Vector xt = lambda * xn + scale * noise;
      const double lhs = norm((lambda > 0 ? 1.0 : -1.0) * xt / norm(xt) - xn);
      const double rhs = 2.0 * norm(xt - lambda * xn) / norm(xt);
      if (!(lhs <= rhs)) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in 2000 checks"};
}

Matrix gaussian_matrix(Eigen::Index m, Eigen::Index d, std::uint64_t key) {
  CounterRng rng(key);
  Matrix a(m, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = rng.normal();
  return a;
}

Outcome p2() {
  const double tol = SolveOptions{}.tol;
  double worst_soft = 0.0;
  for (Eigen::Index d = 1; d <= 8; ++d) {
    const Vector y = gaussian_matrix(d, 1, derive_key(110, {static_cast<std::uint64_t>(d)}));
    const double t = 0.5 * y.cwiseAbs().maxCoeff();
    const auto rep = solve_dantzig(Matrix::Identity(d, d), y, t);
    worst_soft = std::max(worst_soft, (rep.solution - testing::soft_threshold(y, t)).cwiseAbs().maxCoeff());
  }

  double worst_gap = 0.0;
  bool solvers_ok = true;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(k % 3);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(k % static_cast<std::uint64_t>(d));
    const Matrix phi = gaussian_matrix(m, d, derive_key(111, {k}));
    const Vector y = gaussian_matrix(m, 1, derive_key(112, {k}));
    auto check = [&](const SolveReport& rep, std::optional<double> best) {
      if (!rep.converged || !best) {
        solvers_ok = false;
        return;
      }
      const double gap = std::abs(rep.objective() - *best) / std::max(1.0, *best);
      worst_gap = std::max(worst_gap, gap);
      solvers_ok = solvers_ok && gap <= 10.0 * tol;
    };
    check(solve_l1_eq(phi, y), testing::l1_eq_exhaustive(phi, y));
    const double thresh = 0.2 * (phi.transpose() * y).cwiseAbs().maxCoeff();
    check(solve_dantzig(phi, y, thresh), testing::dantzig_exhaustive(phi, y, thresh));
    const double eta = 0.3 * y.norm();
    check(solve_l1_qc(phi, y, eta), testing::l1_qc_exhaustive(phi, y, eta));
  }

  bool sigma_ok = true;
  CounterRng rng(113);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(12));
    Vector x(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = static_cast<double>(static_cast<int>(rng.below(33)) - 16) / 8.0;
    for (Eigen::Index s = 0; s <= d; ++s) sigma_ok = sigma_ok && best_s_term_error(x, s) == testing::best_s_term_brute(x, s);
  }

  return {worst_soft <= 1e-6 && solvers_ok && sigma_ok,
          "soft-threshold max dev=" + fmt(worst_soft) + ", max rel gap=" + fmt(worst_gap) +
              ", sigma_s " + (sigma_ok ? "exact" : "mismatch")};
}

Outcome p3() {
  bool monotone = true;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Eigen::Index d = 6 + static_cast<Eigen::Index>(k % 9);
    const Eigen::Index m = 3 + static_cast<Eigen::Index>(k % 6);
    const auto phi = SensingMatrix::bernoulli(m, d, derive_key(114, {k}));
    double prev = 0.0;
    for (Eigen::Index s = 1; s <= std::min<Eigen::Index>(d, 6); ++s) {
      const double delta = rip_constant_exhaustive(phi.matrix(), s).delta;
      monotone = monotone && delta >= prev;
      prev = delta;
    }
  }
  double worst = 0.0;
  for (Eigen::Index d = 2; d <= 10; ++d) {
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(d, d, derive_key(115, {static_cast<std::uint64_t>(d)})));
    const Matrix q = qr.householderQ();
    for (Eigen::Index s = 1; s <= std::min<Eigen::Index>(d, 5); ++s)
      worst = std::max(worst, rip_constant_exhaustive(q, s).delta);
  }
  return {monotone && worst < 1e-12, std::string(monotone ? "monotone" : "not monotone") +
                                         ", orthonormal max delta=" + fmt(worst)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome r1() {
  const auto dir = std::filesystem::temp_directory_path();
  std::vector<std::string> outputs;
  for (const char* tag : {"1", "2"}) {
    const std::string sum = (dir / ("ridgerec_r1_fig1_" + std::string(tag) + ".csv")).string();
    const std::string rec = (dir / ("ridgerec_r1_rec_" + std::string(tag) + ".csv")).string();
    std::ostringstream out, err;
    const int code = dispatch({"ridgerec", "repro-fig1", "--seed", "2024", "--no-timing", "--out", sum, "--records", rec},
                              out, err);
    if (code != kExitOk) return {false, "exit " + std::to_string(code) + ": " + err.str()};
    outputs.push_back(slurp(sum) + '\x1f' + slurp(rec));
    std::filesystem::remove(sum);
    std::filesystem::remove(rec);
  }
  return {outputs[0] == outputs[1] && !outputs[0].empty(),
          std::to_string(outputs[0].size()) + " bytes, " + (outputs[0] == outputs[1] ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"B1", b1}, {"B2", b2}, {"C1", c1}, {"C2", c2},
      {"D1", d1}, {"D2", d2}, {"P1", p1}, {"P2", p2}, {"P3", p3}, {"R1", r1}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  (" << fmt(secs) << " s)"
              << std::endl;
  }
  std::cout << "criteria: " << criteria.size() - static_cast<std::size_t>(failed) << " passed, " << failed
            << " failed" << std::endl;
  return failed == 0 ? 0 : 1;
}
