#pragma once

#include <string>

#include "rescomp/theory.hpp"

namespace rescomp {

/// A divergence value in bits together with the bracket that certifies it.
struct DivergenceResult {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  int iterations = 0;
  bool converged = false;
  /// True when lower_bound is rigorous (not just a heuristic estimate).
  bool certified = false;
  /// "closed-form", "frank-wolfe", "sdp", "cutting-plane", "support", "bisection".
  std::string method;
  /// Closest free state for D and D_max, optimal test for D_H.
  Matrix optimizer;
  std::string note;

  double gap() const { return upper_bound - lower_bound; }
};

struct RelEntropyOptions {
  double gap = 1e-4;
  int max_iterations = 50000;
  uint64_t seed = 7;
  /// Skip closed forms and run the iterative engine.
  bool force_iterative = false;
  LmoOptions lmo;
};

/// min over the set of D(rho || sigma).
DivergenceResult rel_entropy_of_resource(const Matrix& rho, const FreeStateSet& set, const RelEntropyOptions& options = {});
DivergenceResult rel_entropy_of_resource(const DensityOperator& rho, const FreeStateSet& set,
                                         const RelEntropyOptions& options = {});

struct DmaxOptions {
  double tol = 1e-6;
  uint64_t seed = 7;
  /// Use the bisection engine even when a cone representation exists.
  bool force_bisection = false;
};

/// min over the set of log2 min{lambda : rho <= lambda sigma}.
DivergenceResult dmax(const Matrix& rho, const FreeStateSet& set, const DmaxOptions& options = {});

/// Admissible tests for the hypothesis-testing divergence.
enum class TestClass { All, Diagonal, Real };

struct HypothesisOptions {
  double tol = 1e-8;
  TestClass tests = TestClass::All;
  /// Basis defining Diagonal and Real tests (computational when empty).
  Matrix basis;
  uint64_t seed = 7;
  int max_cuts = 200;
};

/// -log2 of the least type-II error Tr rho (I - P) over tests 0 <= P <= I with
/// sup over the set of Tr sigma P at most epsilon. +inf when the optimal error
/// vanishes.
DivergenceResult hypothesis_testing(const Matrix& rho, const FreeStateSet& set, double epsilon,
                                    const HypothesisOptions& options = {});

/// Same problem after a fixed preprocessing channel: tests act on the
/// channel output and the type-I error is taken over the image of the set.
DivergenceResult hypothesis_testing_through(const Matrix& rho, const FreeStateSet& set, const KrausChannel& channel,
                                            double epsilon, const HypothesisOptions& options = {});

/// sup over the set of Tr sigma P, exact when the oracle is exact.
double alpha_value(const FreeStateSet& set, const Matrix& p, uint64_t seed = 7);

enum class Additivity {
  /// Set kinds whose relative entropy of resource is known to be additive.
  KnownAdditive,
  /// Caller vouches for additivity; the single-copy value is returned.
  AssertedAdditive,
  /// Evaluate (1/n) D(rho^n || S_n) for n <= 2; an upper estimate only.
  EvaluateN,
};

DivergenceResult regularized_rel_entropy(const Matrix& rho, const FreeStateSet& set, Additivity mode, int n = 1,
                                         const RelEntropyOptions& options = {});

/// The n-copy free set used by EvaluateN and the permutation taking the
/// copy-major layout of rho^n to the layout of that set.
struct CopySet {
  FreeStateSet set;
  std::vector<int> order;
};
CopySet copy_set(const FreeStateSet& set, int n);

}  // namespace rescomp
