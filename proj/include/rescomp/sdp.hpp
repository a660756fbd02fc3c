#pragma once

#include <limits>
#include <vector>

#include "rescomp/linalg.hpp"

namespace rescomp {

/// Small dense primal-dual interior-point solver for problems of the form
///
///   minimize   sum_j Re Tr(C_j X_j)
///   subject to sum_j Re Tr(A_kj X_j) = b_k,   X_j >= 0 (Hermitian blocks)
///
/// with dual  maximize b.y  subject to  Z_j = C_j - sum_k y_k A_kj >= 0.
/// Uses the HKM search direction with a Mehrotra predictor-corrector.
class SdpProblem {
 public:
  struct Entry {
    int row;
    int col;
    Complex value;
  };
  struct Term {
    int block;
    std::vector<Entry> entries;
  };
  struct Constraint {
    std::vector<Term> terms;
    double rhs = 0.0;
  };

  /// Adds a PSD block; `trace_bound` is an a-priori bound on Tr X_j over the
  /// feasible set, used only for the safe dual bound.
  int add_block(int dim, double trace_bound = std::numeric_limits<double>::infinity());
  /// Adds Re Tr(C X_block) to the objective.
  void add_objective(int block, const Matrix& c);
  /// Starts a new equality constraint with right-hand side `rhs`; returns its index.
  int add_constraint(double rhs);
  /// Adds Re Tr(a X_block) to constraint `k`. `a` must be Hermitian.
  void add_term(int k, int block, const Matrix& a, double scale = 1.0);

  int num_blocks() const { return static_cast<int>(dims_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int block_dim(int j) const { return dims_[static_cast<size_t>(j)]; }
  double trace_bound(int j) const { return trace_bounds_[static_cast<size_t>(j)]; }
  const Matrix& objective(int j) const { return objective_[static_cast<size_t>(j)]; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

 private:
  std::vector<int> dims_;
  std::vector<double> trace_bounds_;
  std::vector<Matrix> objective_;
  std::vector<Constraint> constraints_;
};

struct SdpOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
  double step_factor = 0.95;
};

struct SdpSolution {
  std::vector<Matrix> x;
  std::vector<Matrix> z;
  RealVector y;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// b.y corrected by the negative part of each Z_j times its trace bound;
  /// a rigorous lower bound on the primal optimum.
  double safe_dual_bound = -std::numeric_limits<double>::infinity();
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

/// Re Tr(A X) for a sparse Hermitian term.
double evaluate_term(const SdpProblem::Term& term, const Matrix& x);

}  // namespace rescomp
