#include "ridgerec/solvers.hpp"

#include "ridgerec/errors.hpp"
#include "ridgerec/lp_ipm.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace ridgerec {

namespace {

// A = [Phi, -Phi] for the split w = u - v.
class SplitEquality final : public lp::ConstraintOperator {
 public:
  explicit SplitEquality(const Matrix& phi) : phi_(phi) {}

  Eigen::Index rows() const override { return phi_.rows(); }
  Eigen::Index cols() const override { return 2 * phi_.cols(); }
  Vector apply(const Vector& x) const override {
    const auto d = phi_.cols();
    return phi_ * (x.head(d) - x.tail(d));
  }
  Vector apply_transpose(const Vector& y) const override {
    const auto d = phi_.cols();
    Vector out(2 * d);
    out.head(d) = phi_.transpose() * y;
    out.tail(d) = -out.head(d);
    return out;
  }
  bool factor(const Vector& scaling, double regularization) override {
    const auto d = phi_.cols();
    const Vector w = scaling.head(d) + scaling.tail(d);
    Matrix m = phi_ * w.asDiagonal() * phi_.transpose();
    m.diagonal().array() += regularization;
    llt_.compute(m);
    return llt_.info() == Eigen::Success;
  }
  Vector solve(const Vector& rhs) const override { return llt_.solve(rhs); }

 private:
  const Matrix& phi_;
  Eigen::LLT<Matrix> llt_;
};

// Dantzig selector in standard form with G = Phi^T Phi and slacks s1, s2:
//   [ G  -G  I  0 ] [u ]   [ c + t ]
//   [-G   G  0  I ] [v ] = [ t - c ]
//                   [s1]
//                   [s2]
// The 2d x 2d normal matrix [[K + D3, -K], [-K, K + D4]], K = G W G, is
// reduced to the d x d system (K + D3 D4 / (D3 + D4)) p = rhs.
class DantzigConstraints final : public lp::ConstraintOperator {
 public:
  explicit DantzigConstraints(const Matrix& phi) : phi_(phi) {
    if (phi_.rows() >= phi_.cols()) gram_ = phi_.transpose() * phi_;
  }

  Eigen::Index rows() const override { return 2 * phi_.cols(); }
  Eigen::Index cols() const override { return 4 * phi_.cols(); }

  Vector apply(const Vector& x) const override {
    const auto d = phi_.cols();
    const Vector g = gram_apply(x.segment(0, d) - x.segment(d, d));
    Vector out(2 * d);
    out.head(d) = g + x.segment(2 * d, d);
    out.tail(d) = -g + x.segment(3 * d, d);
    return out;
  }

  Vector apply_transpose(const Vector& y) const override {
    const auto d = phi_.cols();
    const Vector g = gram_apply(y.head(d) - y.tail(d));
    Vector out(4 * d);
    out.segment(0, d) = g;
    out.segment(d, d) = -g;
    out.segment(2 * d, d) = y.head(d);
    out.segment(3 * d, d) = y.tail(d);
    return out;
  }

  bool factor(const Vector& scaling, double regularization) override {
    const auto d = phi_.cols();
    const Vector w = scaling.segment(0, d) + scaling.segment(d, d);
    d3_ = scaling.segment(2 * d, d).array() + regularization;
    d4_ = scaling.segment(3 * d, d).array() + regularization;
    Matrix k;
    if (gram_.size() == 0) {
      const Matrix inner = phi_ * w.asDiagonal() * phi_.transpose();
      k = phi_.transpose() * inner * phi_;
    } else {
      k = gram_ * w.asDiagonal() * gram_;
    }
    k.diagonal().array() += (d3_.array() * d4_.array() / (d3_.array() + d4_.array()));
    llt_.compute(k);
    return llt_.info() == Eigen::Success && d3_.minCoeff() > 0.0 && d4_.minCoeff() > 0.0;
  }

  Vector solve(const Vector& rhs) const override {
    const auto d = phi_.cols();
    const auto r1 = rhs.head(d).array();
    const auto r2 = rhs.tail(d).array();
    const Eigen::ArrayXd denom = d3_.array() + d4_.array();
    const Vector reduced = ((d4_.array() * r1 - d3_.array() * r2) / denom).matrix();
    const Eigen::ArrayXd p = llt_.solve(reduced).array();
    Vector out(2 * d);
    out.head(d) = ((r1 + r2 + d4_.array() * p) / denom).matrix();
    out.tail(d) = ((r1 + r2 - d3_.array() * p) / denom).matrix();
    return out;
  }

 private:
  Vector gram_apply(const Vector& v) const {
    if (gram_.size() != 0) return gram_ * v;
    return phi_.transpose() * (phi_ * v);
  }

  const Matrix& phi_;
  Matrix gram_;
  Vector d3_, d4_;
  Eigen::LLT<Matrix> llt_;
};

void check_common(const Matrix& phi, const Vector& y, const SolveOptions& options) {
  if (phi.size() == 0) throw InputError("solver: empty matrix");
  if (phi.rows() != y.size()) throw InputError("solver: Phi rows must match y length");
  if (!phi.allFinite() || !y.allFinite()) throw InputError("solver: non-finite input");
  if (!(options.tol > 0.0)) throw InputError("solver: tolerance must be positive");
  if (options.max_iterations < 1) throw InputError("solver: iteration cap must be positive");
}

bool full_row_rank(const Matrix& phi) {
  if (phi.rows() > phi.cols()) return false;
  Eigen::ColPivHouseholderQR<Matrix> qr(phi.transpose());
  return qr.rank() == phi.rows();
}

SolveReport zero_report(Eigen::Index d, double tol) {
  SolveReport r;
  r.solution = Vector::Zero(d);
  r.converged = true;
  r.tolerance = tol;
  return r;
}

double eq_residual(const Matrix& phi, const Vector& y, const Vector& w) {
  return (phi * w - y).norm() / std::max(1.0, y.norm());
}

// Re-solves Phi_S w_S = y on the numerical support of an interior-point
// solution, which lands exactly on the optimal vertex when it is unique.
std::optional<Vector> polish_on_support(const Matrix& phi, const Vector& y, const Vector& w,
                                        double tol) {
  const double wmax = w.cwiseAbs().maxCoeff();
  if (wmax == 0.0) return std::nullopt;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > 1e-7 * wmax) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0 || k > phi.rows()) return std::nullopt;
  Matrix cols(phi.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) cols.col(j) = phi.col(support[static_cast<std::size_t>(j)]);
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  if (qr.rank() < k) return std::nullopt;
  const Vector ws = qr.solve(y);
  Vector polished = Vector::Zero(w.size());
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto i = support[static_cast<std::size_t>(j)];
    if (ws[j] * w[i] <= 0.0) return std::nullopt;
    polished[i] = ws[j];
  }
  if (eq_residual(phi, y, polished) > tol) return std::nullopt;
  if (polished.lpNorm<1>() > w.lpNorm<1>() + tol * std::max(1.0, w.lpNorm<1>())) return std::nullopt;
  return polished;
}

}  // namespace

SolveReport solve_l1_eq(const Matrix& phi, const Vector& y, const SolveOptions& options) {
  check_common(phi, y, options);
  const auto d = phi.cols();
  if (y.cwiseAbs().maxCoeff() == 0.0) return zero_report(d, options.tol);

  // Independent columns leave a single feasible point.
  if (phi.rows() >= d) {
    Eigen::ColPivHouseholderQR<Matrix> qr(phi);
    if (qr.rank() == d) {
      SolveReport report;
      report.tolerance = options.tol;
      report.solution = qr.solve(y);
      report.residual = eq_residual(phi, y, report.solution);
      report.converged = report.residual <= options.tol;
      return report;
    }
  }

  SplitEquality a(phi);
  const Vector cost = Vector::Ones(2 * d);
  lp::IpmOptions ipm_opts{options.tol, std::min(options.max_iterations, 500)};
  const lp::IpmResult ipm = lp::solve_standard_form(a, y, cost, ipm_opts);

  SolveReport report;
  report.tolerance = options.tol;
  report.iterations = ipm.iterations;
  report.solution = ipm.x.head(d) - ipm.x.tail(d);
  if (!report.solution.allFinite()) report.solution = Vector::Zero(d);
  if (ipm.converged) {
    if (auto polished = polish_on_support(phi, y, report.solution, options.tol)) {
      report.solution = *polished;
    }
  }
  report.residual = eq_residual(phi, y, report.solution);
  report.converged = ipm.converged && report.residual <= options.tol;
  return report;
}

SolveReport solve_dantzig(const Matrix& phi, const Vector& y, double thresh, const SolveOptions& options) {
  check_common(phi, y, options);
  if (!(thresh >= 0.0) || !std::isfinite(thresh)) throw InputError("dantzig: threshold must be >= 0");
  const auto d = phi.cols();
  const Vector corr = phi.transpose() * y;
  const double scale = std::max(1.0, corr.cwiseAbs().maxCoeff());
  if (corr.cwiseAbs().maxCoeff() <= thresh) return zero_report(d, options.tol);

  auto violation = [&](const Vector& w) {
    const double v = (phi.transpose() * (y - phi * w)).cwiseAbs().maxCoeff() - thresh;
    return std::max(0.0, v) / scale;
  };

  // With a zero threshold and full row rank the constraint is exactly Phi w = y.
  if (thresh == 0.0 && full_row_rank(phi)) {
    SolveReport r = solve_l1_eq(phi, y, options);
    r.residual = violation(r.solution);
    r.converged = r.converged && r.residual <= options.tol;
    return r;
  }

  DantzigConstraints a(phi);
  Vector b(2 * d);
  b.head(d) = corr.array() + thresh;
  b.tail(d) = thresh - corr.array();
  Vector cost = Vector::Zero(4 * d);
  cost.head(2 * d).setOnes();
  lp::IpmOptions ipm_opts{options.tol, std::min(options.max_iterations, 500)};
  const lp::IpmResult ipm = lp::solve_standard_form(a, b, cost, ipm_opts);

  SolveReport report;
  report.tolerance = options.tol;
  report.iterations = ipm.iterations;
  report.solution = ipm.x.segment(0, d) - ipm.x.segment(d, d);
  if (!report.solution.allFinite()) report.solution = Vector::Zero(d);
  report.residual = violation(report.solution);
  report.converged = ipm.converged && report.residual <= options.tol;
  return report;
}

namespace {

// Log-barrier Newton method for (P1, eta) over (w, u) with |w| <= u and
// |Phi w - y|^2 <= eta^2. The Newton system diag(sx) + Phi^T S Phi is solved
// by Woodbury when m < d.
class QuadraticBarrier {
 public:
  QuadraticBarrier(const Matrix& phi, double eta) : phi_(phi), eta_(eta) {}

  struct State {
    Vector w, u, r;  // r = Phi w - y
  };

  double value(const State& s, double tau) const {
    const Eigen::ArrayXd f1 = s.w.array() - s.u.array();
    const Eigen::ArrayXd f2 = -s.w.array() - s.u.array();
    const double fe = 0.5 * (s.r.squaredNorm() - eta_ * eta_);
    if ((f1 >= 0.0).any() || (f2 >= 0.0).any() || fe >= 0.0) return kInf;
    return s.u.sum() - ((-f1).log().sum() + (-f2).log().sum() + std::log(-fe)) / tau;
  }

  // One damped Newton step; returns the Newton decrement lambda^2 or a
  // negative value when no descent was possible.
  double step(State& s, double tau) const {
    const Eigen::ArrayXd f1 = s.w.array() - s.u.array();
    const Eigen::ArrayXd f2 = -s.w.array() - s.u.array();
    const double fe = 0.5 * (s.r.squaredNorm() - eta_ * eta_);
    const Vector atr = phi_.transpose() * s.r;

    const Eigen::ArrayXd ntgz = 1.0 / f1 - 1.0 / f2 + atr.array() / fe;
    const Eigen::ArrayXd ntgu = -tau - 1.0 / f1 - 1.0 / f2;
    const Eigen::ArrayXd sig11 = 1.0 / f1.square() + 1.0 / f2.square();
    const Eigen::ArrayXd sig12 = -1.0 / f1.square() + 1.0 / f2.square();
    const Eigen::ArrayXd sigx = sig11 - sig12.square() / sig11;
    const Vector w1p = (ntgz - sig12 / sig11 * ntgu).matrix();

    const Vector dw = solve_hessian(sigx, s.r, fe, w1p);
    if (!dw.allFinite()) return -1.0;
    const Vector adw = phi_ * dw;
    const Vector du = (ntgu / sig11 - sig12 / sig11 * dw.array()).matrix();

    Vector grad(2 * s.w.size());
    grad << (-ntgz / tau).matrix(), (-ntgu / tau).matrix();
    Vector dir(2 * s.w.size());
    dir << dw, du;
    const double slope = grad.dot(dir);
    if (!(slope < 0.0)) return 0.0;

    // Largest step keeping every barrier term finite.
    double smax = 1.0;
    for (Eigen::Index i = 0; i < dw.size(); ++i) {
      const double a1 = dw[i] - du[i];
      const double a2 = -dw[i] - du[i];
      if (a1 > 0.0) smax = std::min(smax, -f1[i] / a1);
      if (a2 > 0.0) smax = std::min(smax, -f2[i] / a2);
    }
    const double aq = adw.squaredNorm();
    if (aq > 0.0) {
      const double bq = 2.0 * s.r.dot(adw);
      const double cq = s.r.squaredNorm() - eta_ * eta_;
      smax = std::min(smax, (-bq + std::sqrt(bq * bq - 4.0 * aq * cq)) / (2.0 * aq));
    }
    double t = 0.99 * smax;
    const double f0 = value(s, tau);
    State trial;
    for (int back = 0; back < 60; ++back) {
      trial.w = s.w + t * dw;
      trial.u = s.u + t * du;
      trial.r = s.r + t * adw;
      if (value(trial, tau) <= f0 + 0.01 * t * slope) {
        s = std::move(trial);
        return -slope;
      }
      t *= 0.5;
    }
    return -1.0;
  }

 private:
  // (diag(sx) - Phi^T Phi / fe + atr atr^T / fe^2) dw = rhs, with
  // atr = Phi^T r, i.e. diag(sx) + Phi^T S Phi, S = -I/fe + r r^T / fe^2.
  Vector solve_hessian(const Eigen::ArrayXd& sx, const Vector& r, double fe, const Vector& rhs) const {
    const auto m = phi_.rows();
    const auto d = phi_.cols();
    const double alpha = -1.0 / fe;
    const double gamma = 1.0 / (fe * fe);
    if (m >= d) {
      Matrix h = alpha * (phi_.transpose() * phi_);
      const Vector atr = phi_.transpose() * r;
      h.noalias() += gamma * atr * atr.transpose();
      h.diagonal() += sx.matrix();
      return h.ldlt().solve(rhs);
    }
    const Eigen::ArrayXd dinv = 1.0 / sx;
    // S^{-1} by Sherman-Morrison.
    Matrix cap = Matrix::Identity(m, m) / alpha;
    cap.noalias() -= (gamma / (alpha * (alpha + gamma * r.squaredNorm()))) * r * r.transpose();
    cap.noalias() += phi_ * dinv.matrix().asDiagonal() * phi_.transpose();
    const Vector dr = (dinv * rhs.array()).matrix();
    const Vector t = cap.ldlt().solve(phi_ * dr);
    return dr - (dinv * (phi_.transpose() * t).array()).matrix();
  }

  const Matrix& phi_;
  double eta_;
};

}  // namespace

SolveReport solve_l1_qc(const Matrix& phi, const Vector& y, double eta, const SolveOptions& options) {
  check_common(phi, y, options);
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InputError("l1_qc: eta must be >= 0");
  const auto d = phi.cols();
  const double yscale = std::max(1.0, y.norm());
  if (y.norm() <= eta) return zero_report(d, options.tol);
  if (eta == 0.0) return solve_l1_eq(phi, y, options);

  auto violation = [&](const Vector& w) { return std::max(0.0, (phi * w - y).norm() - eta) / yscale; };

  QuadraticBarrier::State st;
  st.w = phi.completeOrthogonalDecomposition().solve(y);
  st.r = phi * st.w - y;
  SolveReport report;
  report.tolerance = options.tol;
  if (st.r.norm() >= eta) {
    // The least-squares point already violates the ball: no interior start.
    report.solution = st.w;
    report.residual = violation(st.w);
    report.converged = false;
    return report;
  }
  const double wmax = st.w.cwiseAbs().maxCoeff();
  st.u = (0.95 * st.w.cwiseAbs()).array() + 0.10 * wmax;

  QuadraticBarrier barrier(phi, eta);
  const double n_constraints = 2.0 * static_cast<double>(d) + 1.0;
  double tau = std::max(n_constraints / std::max(st.w.lpNorm<1>(), 1e-300), 1.0);
  constexpr double kTauGrowth = 10.0;
  constexpr int kNewtonPerStage = 60;
  int total = 0;
  bool done = false;
  while (!done && total < options.max_iterations) {
    for (int k = 0; k < kNewtonPerStage && total < options.max_iterations; ++k) {
      const double lambda2 = barrier.step(st, tau);
      ++total;
      if (lambda2 < 0.0 || lambda2 / 2.0 < 1e-13) break;
    }
    const double gap = n_constraints / tau;
    if (gap <= options.tol * std::max(1.0, st.u.sum())) done = true;
    tau *= kTauGrowth;
  }

  report.solution = st.w;
  report.iterations = total;
  report.residual = violation(st.w);
  report.converged = done && report.residual <= options.tol && st.w.allFinite();
  return report;
}

}  // namespace ridgerec
