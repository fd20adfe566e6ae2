#pragma once

#include "ridgerec/linalg.hpp"

namespace ridgerec {

struct SolveOptions {
  /// Relative tolerance on feasibility and on the optimal objective.
  double tol = 1e-8;
  /// Cap on inner iterations (IPM steps or Newton steps).
  int max_iterations = 100'000;
};

struct SolveReport {
  Vector solution;
  int iterations = 0;
  /// Constraint violation, relative to max(1, scale of the right-hand side).
  double residual = 0.0;
  bool converged = false;
  double tolerance = 0.0;

  double objective() const { return solution.lpNorm<1>(); }
};

/// Basis pursuit:  min |w|_1  s.t.  Phi w = y.
SolveReport solve_l1_eq(const Matrix& phi, const Vector& y, const SolveOptions& options = {});

/// (P1, eta):  min |w|_1  s.t.  |Phi w - y|_2 <= eta.
SolveReport solve_l1_qc(const Matrix& phi, const Vector& y, double eta,
                        const SolveOptions& options = {});

/// Dantzig selector:  min |w|_1  s.t.  |Phi^T (y - Phi w)|_inf <= thresh.
SolveReport solve_dantzig(const Matrix& phi, const Vector& y, double thresh,
                          const SolveOptions& options = {});

}  // namespace ridgerec
