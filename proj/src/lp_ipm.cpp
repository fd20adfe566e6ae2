#include "ridgerec/lp_ipm.hpp"

#include "ridgerec/errors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace ridgerec::lp {

bool DenseConstraints::factor(const Vector& scaling, double regularization) {
  Matrix m = a_ * scaling.asDiagonal() * a_.transpose();
  m.diagonal().array() += regularization;
  llt_.compute(m);
  return llt_.info() == Eigen::Success;
}

namespace {

constexpr std::array<double, 7> kRegularizationLadder{0.0, 1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4};

bool factor_with_ladder(ConstraintOperator& a, const Vector& scaling) {
  const double scale = std::max(1.0, scaling.maxCoeff());
  for (double reg : kRegularizationLadder) {
    if (a.factor(scaling, reg * scale)) return true;
  }
  return false;
}

double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

struct Direction {
  Vector dx, dy, dz;
};

// Solves  A dx = rp,  A^T dy + dz = rd,  Z dx + X dz = rc  with D = X / Z
// already factored.
Direction newton_direction(const ConstraintOperator& a, const Vector& x, const Vector& z,
                           const Vector& d, const Vector& rp, const Vector& rd, const Vector& rc) {
  Direction dir;
  const Vector rhs = rp + a.apply(d.cwiseProduct(rd) - rc.cwiseQuotient(z));
  dir.dy = a.solve(rhs);
  // Iterative refinement against the unregularized normal matrix.
  for (int pass = 0; pass < 2; ++pass) {
    const Vector res = rhs - a.apply(d.cwiseProduct(a.apply_transpose(dir.dy)));
    dir.dy += a.solve(res);
  }
  dir.dz = rd - a.apply_transpose(dir.dy);
  dir.dx = (rc - x.cwiseProduct(dir.dz)).cwiseQuotient(z);
  return dir;
}

}  // namespace

IpmResult solve_standard_form(ConstraintOperator& a, const Vector& b, const Vector& c,
                              const IpmOptions& options) {
  const Eigen::Index n = a.cols();
  const Eigen::Index p = a.rows();
  if (b.size() != p || c.size() != n) throw InputError("lp: dimension mismatch");
  if (!(options.tol > 0.0)) throw InputError("lp: tolerance must be positive");

  IpmResult out;
  const double b_scale = 1.0 + b.norm();
  const double c_scale = 1.0 + c.norm();

  // Mehrotra's starting point.
  if (!factor_with_ladder(a, Vector::Ones(n))) throw SolverFailure("lp: A A^T is singular");
  Vector x = a.apply_transpose(a.solve(b));
  Vector y = a.solve(a.apply(c));
  Vector z = c - a.apply_transpose(y);
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  z.array() += std::max(-1.5 * z.minCoeff(), 0.0);
  {
    const double xz = x.dot(z);
    const double xs = x.sum();
    const double zs = z.sum();
    if (xz > 0.0 && xs > 0.0 && zs > 0.0) {
      x.array() += 0.5 * xz / zs;
      z.array() += 0.5 * xz / xs;
    }
    const double floor = 1e-2 * std::max({1.0, x.cwiseAbs().maxCoeff(), z.cwiseAbs().maxCoeff()});
    x = x.cwiseMax(floor);
    z = z.cwiseMax(floor);
  }

  const double nd = static_cast<double>(n);
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    const Vector rp = b - a.apply(x);
    const Vector rd = c - a.apply_transpose(y) - z;
    const double primal_obj = c.dot(x);
    const double dual_obj = b.dot(y);
    out.primal_infeasibility = rp.norm() / b_scale;
    out.dual_infeasibility = rd.norm() / c_scale;
    out.relative_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj));
    out.iterations = iter;
    if (!x.allFinite() || !y.allFinite() || !z.allFinite()) break;
    if (out.primal_infeasibility <= options.tol && out.dual_infeasibility <= options.tol &&
        out.relative_gap <= options.tol) {
      out.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    const double mu = x.dot(z) / nd;
    const Vector d = x.cwiseQuotient(z);
    if (!factor_with_ladder(a, d)) break;

    // Predictor.
    const Vector xz = x.cwiseProduct(z);
    const Direction aff = newton_direction(a, x, z, d, rp, rd, -xz);
    const double ap_aff = max_step(x, aff.dx);
    const double ad_aff = max_step(z, aff.dz);
    const double mu_aff = (x + ap_aff * aff.dx).dot(z + ad_aff * aff.dz) / nd;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    // Corrector.
    const Vector rc =
        (sigma * mu - xz.array() - aff.dx.cwiseProduct(aff.dz).array()).matrix();
    const Direction dir = newton_direction(a, x, z, d, rp, rd, rc);
    const double step_frac = std::clamp(1.0 - 10.0 * mu, 0.9, 0.99995);
    const double ap = std::min(1.0, step_frac * max_step(x, dir.dx));
    const double ad = std::min(1.0, step_frac * max_step(z, dir.dz));

    x += ap * dir.dx;
    y += ad * dir.dy;
    z += ad * dir.dz;
  }

  spdlog::debug("lp: {} iterations, primal {:.3g}, dual {:.3g}, gap {:.3g}, converged {}", out.iterations,
                out.primal_infeasibility, out.dual_infeasibility, out.relative_gap, out.converged);
  out.x = std::move(x);
  out.y = std::move(y);
  out.z = std::move(z);
  return out;
}

}  // namespace ridgerec::lp
