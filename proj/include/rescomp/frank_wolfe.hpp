#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "rescomp/linalg.hpp"

namespace rescomp {

struct LmoResult {
  Matrix state;
  double value = 0.0;
  /// Rigorous lower bound on the minimum over the set when `certified`.
  double lower_bound = 0.0;
  bool certified = true;
  int restarts = 0;
};

/// Smooth convex objective over a convex set of Hermitian matrices, accessed
/// only through a linear minimization oracle.
struct FwProblem {
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&)> gradient;
  std::function<LmoResult(const Matrix&)> lmo;
  /// Optional exact minimizer of t -> value(x + t d) on [0, tmax]. Golden
  /// section search is used when absent.
  std::function<double(const Matrix&, const Matrix&, double)> line_search;
};

struct FwOptions {
  double gap = 1e-4;
  int max_iterations = 50000;
  int max_atoms = 200;
  double line_tolerance = 1e-10;
  bool away_steps = true;
  /// Pairwise steps between active atoms after every oracle call. They need
  /// no oracle and make up for the slow rate on curved sets.
  int corrective_steps = 0;
  /// Early exit once the objective is at or below this value.
  double stop_below = -std::numeric_limits<double>::infinity();
  /// Early exit once the certified lower bound exceeds this value.
  double stop_above_lower = std::numeric_limits<double>::infinity();
  /// Called when the heuristic gap closes but the oracle bound was not
  /// certified; may return a certified lower bound on min <G, s>.
  std::function<double(const Matrix&)> certify_linear_min;
};

struct FwResult {
  Matrix x;
  double value = 0.0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool certified = false;
  int max_restarts = 0;
};

/// Away-step Frank-Wolfe from a convex combination of starting atoms.
/// Converged means value - lower_bound <= gap.
FwResult frank_wolfe(const FwProblem& problem, const std::vector<std::pair<Matrix, double>>& start, const FwOptions& options);

/// Minimizer of a unimodal function on [lo, hi] by golden section search.
double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace rescomp
