#pragma once

#include <limits>
#include <set>
#include <string>
#include <vector>

#include "rescomp/linalg.hpp"

namespace rescomp {

struct Party {
  std::string label;
  int dim = 0;

  bool operator==(const Party&) const = default;
};

/// Ordered list of labelled tensor factors. Declaration order is canonical;
/// reordering only happens through `permute`.
class TensorStructure {
 public:
  TensorStructure() = default;
  explicit TensorStructure(std::vector<Party> parties);

  static TensorStructure single(int dim, std::string label = "0");

  const std::vector<Party>& parties() const { return parties_; }
  size_t size() const { return parties_.size(); }
  int total_dim() const;
  int index_of(const std::string& label) const;
  bool contains(const std::string& label) const;
  std::vector<int> dims() const;
  std::vector<std::string> labels() const;

  TensorStructure concat(const TensorStructure& other) const;
  TensorStructure subset(const std::vector<int>& indices) const;

  bool operator==(const TensorStructure&) const = default;

 private:
  std::vector<Party> parties_;
};

/// A density matrix tagged with its tensor structure.
/// Invariants: Hermitian within 1e-10, eigenvalues >= -1e-10, |Tr - 1| <= 1e-10.
class DensityOperator {
 public:
  DensityOperator(Matrix m, TensorStructure structure);
  explicit DensityOperator(Matrix m);

  /// Skips validation. For values produced internally by operations that
  /// already preserve the invariants up to round-off.
  static DensityOperator trusted(Matrix m, TensorStructure structure);

  const Matrix& matrix() const { return m_; }
  const TensorStructure& structure() const { return structure_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  DensityOperator with_structure(TensorStructure s) const;

 private:
  DensityOperator() = default;
  Matrix m_;
  TensorStructure structure_;
};

/// Throws std::invalid_argument if `m` is not a valid state within `tol`.
void validate_density(const Matrix& m, double tol = 1e-10);
bool is_density(const Matrix& m, double tol = 1e-10);

// --- named states ------------------------------------------------------------

DensityOperator ket_state(const Vector& v, TensorStructure s = {});
DensityOperator basis_state(int dim, int index);
DensityOperator maximally_mixed(int dim);
DensityOperator plus_state();
DensityOperator minus_state();
DensityOperator plus_y_state();
/// (|00> + |11> + ...)/sqrt(d) on parties A, B of dimension d each.
DensityOperator maximally_entangled(int d = 2, std::string a = "A", std::string b = "B");

// --- structure operations ----------------------------------------------------

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
DensityOperator tensor(const std::vector<DensityOperator>& factors);

Matrix partial_trace(const Matrix& m, const TensorStructure& s, const std::vector<int>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::set<std::string>& keep);
/// Single-party marginal.
Matrix marginal(const Matrix& m, const TensorStructure& s, int party);

/// Embeds a local operator on `party` into the full space (identity elsewhere).
Matrix embed(const Matrix& local, const TensorStructure& s, int party);

/// Reorders tensor factors: output factor k is input factor order[k].
Matrix permute(const Matrix& m, const TensorStructure& s, const std::vector<int>& order);
DensityOperator permute(const DensityOperator& rho, const std::vector<int>& order);
/// Permutation unitary for the same reordering (columns indexed by input basis).
Matrix permutation_unitary(const TensorStructure& s, const std::vector<int>& order);

Matrix partial_transpose(const Matrix& m, const TensorStructure& s, int party);
Matrix partial_transpose(const DensityOperator& rho, const std::string& party);

// --- entropies and distances -------------------------------------------------

double von_neumann_entropy(const Matrix& rho);
double von_neumann_entropy(const DensityOperator& rho);
/// Relative entropy in bits; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const Matrix& rho, const Matrix& sigma);
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

/// Dephasing in the basis given by the columns of `basis` (identity if empty).
Matrix dephase(const Matrix& rho, const Matrix& basis = Matrix());
DensityOperator dephase(const DensityOperator& rho, const Matrix& basis = Matrix());

double trace_norm_distance(const Matrix& a, const Matrix& b);
double trace_norm_distance(const DensityOperator& a, const DensityOperator& b);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace rescomp
