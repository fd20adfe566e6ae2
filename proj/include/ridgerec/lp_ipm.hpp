#pragma once

#include "ridgerec/linalg.hpp"

#include <Eigen/Cholesky>

namespace ridgerec::lp {

/// Constraint matrix A of a standard-form LP, exposed through products and
/// the normal-equations solve the interior-point iteration needs. Structured
/// problems implement this to avoid forming A explicitly.
class ConstraintOperator {
 public:
  virtual ~ConstraintOperator() = default;

  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  virtual Vector apply(const Vector& x) const = 0;
  virtual Vector apply_transpose(const Vector& y) const = 0;

  /// Factors A diag(scaling) A^T + regularization * I. Returns false when the
  /// factorization breaks down.
  virtual bool factor(const Vector& scaling, double regularization) = 0;

  /// Solves with the most recent factorization.
  virtual Vector solve(const Vector& rhs) const = 0;
};

/// Explicit dense A.
class DenseConstraints final : public ConstraintOperator {
 public:
  explicit DenseConstraints(Matrix a) : a_(std::move(a)) {}

  Eigen::Index rows() const override { return a_.rows(); }
  Eigen::Index cols() const override { return a_.cols(); }
  Vector apply(const Vector& x) const override { return a_ * x; }
  Vector apply_transpose(const Vector& y) const override { return a_.transpose() * y; }
  bool factor(const Vector& scaling, double regularization) override;
  Vector solve(const Vector& rhs) const override { return llt_.solve(rhs); }

 private:
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
};

struct IpmOptions {
  double tol = 1e-8;
  int max_iterations = 300;
};

struct IpmResult {
  Vector x;  // primal
  Vector y;  // equality multipliers
  Vector z;  // reduced costs
  int iterations = 0;
  double primal_infeasibility = 0.0;  // |b - Ax| / (1 + |b|)
  double dual_infeasibility = 0.0;    // |c - A^T y - z| / (1 + |c|)
  double relative_gap = 0.0;          // |c^T x - b^T y| / (1 + |c^T x|)
  bool converged = false;
};

/// Mehrotra predictor-corrector for  min c^T x  s.t.  Ax = b, x >= 0.
IpmResult solve_standard_form(ConstraintOperator& a, const Vector& b, const Vector& c,
                              const IpmOptions& options = {});

}  // namespace ridgerec::lp
