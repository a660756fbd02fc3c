#include "rescomp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescomp {

int SdpProblem::add_block(int dim, double trace_bound) {
  if (dim <= 0) throw std::invalid_argument("SDP block dimension must be positive");
  dims_.push_back(dim);
  trace_bounds_.push_back(trace_bound);
  objective_.push_back(Matrix::Zero(dim, dim));
  return num_blocks() - 1;
}

void SdpProblem::add_objective(int block, const Matrix& c) { objective_.at(static_cast<size_t>(block)) += c; }

int SdpProblem::add_constraint(double rhs) {
  constraints_.push_back({{}, rhs});
  return num_constraints() - 1;
}

void SdpProblem::add_term(int k, int block, const Matrix& a, double scale) {
  if (a.rows() != block_dim(block) || a.cols() != block_dim(block))
    throw std::invalid_argument("SDP term does not match block dimension");
  auto& c = constraints_.at(static_cast<size_t>(k));
  Term* term = nullptr;
  for (auto& t : c.terms)
    if (t.block == block) term = &t;
  if (!term) {
    c.terms.push_back({block, {}});
    term = &c.terms.back();
  }
  // Merge into a dense copy so repeated terms on the same block accumulate.
  Matrix dense = Matrix::Zero(a.rows(), a.cols());
  for (const auto& e : term->entries) dense(e.row, e.col) += e.value;
  dense += scale * a;
  term->entries.clear();
  for (int r = 0; r < dense.rows(); ++r)
    for (int col = 0; col < dense.cols(); ++col)
      if (std::abs(dense(r, col)) > 1e-15) term->entries.push_back({r, col, dense(r, col)});
}

double evaluate_term(const SdpProblem::Term& term, const Matrix& x) {
  Complex s = 0.0;
  for (const auto& e : term.entries) s += e.value * x(e.col, e.row);
  return s.real();
}

namespace {

void accumulate_term(const SdpProblem::Term& term, double coeff, Matrix& out) {
  for (const auto& e : term.entries) out(e.row, e.col) += coeff * e.value;
}

/// Largest step alpha in (0, 1] keeping x + alpha dx positive definite.
double max_step(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  Matrix s;
  if (llt.info() == Eigen::Success) {
    const Matrix linv = llt.matrixL().solve(Matrix::Identity(x.rows(), x.cols()));
    s = linv * dx * linv.adjoint();
  } else {
    const auto e = eig_hermitian(x);
    const Matrix isqrt = spectral_map(e, [](double v) { return 1.0 / std::sqrt(std::max(v, 1e-300)); });
    s = isqrt * dx * isqrt;
  }
  const double lmin = min_eigenvalue(s);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

Matrix inverse_hpd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success) return hermitian_part(llt.solve(Matrix::Identity(m.rows(), m.cols())));
  const auto e = eig_hermitian(m);
  return spectral_map(e, [](double v) { return 1.0 / std::max(v, 1e-300); });
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  const int nb = problem.num_blocks();
  const int m = problem.num_constraints();
  const auto& cons = problem.constraints();

  // Per-block list of (constraint index, term) for the Schur complement.
  std::vector<std::vector<std::pair<int, const SdpProblem::Term*>>> by_block(static_cast<size_t>(nb));
  for (int k = 0; k < m; ++k)
    for (const auto& t : cons[static_cast<size_t>(k)].terms) by_block[static_cast<size_t>(t.block)].push_back({k, &t});

  RealVector b(m);
  for (int k = 0; k < m; ++k) b(k) = cons[static_cast<size_t>(k)].rhs;

  int total_dim = 0;
  double c_norm = 0.0, a_norm = 0.0;
  for (int j = 0; j < nb; ++j) {
    total_dim += problem.block_dim(j);
    c_norm = std::max(c_norm, problem.objective(j).norm());
  }
  for (const auto& c : cons)
    for (const auto& t : c.terms) {
      double s = 0.0;
      for (const auto& e : t.entries) s += std::norm(e.value);
      a_norm = std::max(a_norm, std::sqrt(s));
    }
  const double b_norm = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;

  // Infeasible start, scaled roughly to the data.
  const double xi = std::max(10.0, std::sqrt(static_cast<double>(total_dim)) * (1.0 + b_norm) / (1.0 + a_norm));
  const double eta = std::max({10.0, c_norm, a_norm});

  SdpSolution sol;
  sol.x.resize(static_cast<size_t>(nb));
  sol.z.resize(static_cast<size_t>(nb));
  for (int j = 0; j < nb; ++j) {
    sol.x[static_cast<size_t>(j)] = xi * identity(problem.block_dim(j));
    sol.z[static_cast<size_t>(j)] = eta * identity(problem.block_dim(j));
  }
  sol.y = RealVector::Zero(m);

  auto apply_a = [&](const std::vector<Matrix>& xs) {
    RealVector out = RealVector::Zero(m);
    for (int k = 0; k < m; ++k)
      for (const auto& t : cons[static_cast<size_t>(k)].terms) out(k) += evaluate_term(t, xs[static_cast<size_t>(t.block)]);
    return out;
  };
  auto apply_at = [&](const RealVector& y) {
    std::vector<Matrix> out(static_cast<size_t>(nb));
    for (int j = 0; j < nb; ++j) out[static_cast<size_t>(j)] = Matrix::Zero(problem.block_dim(j), problem.block_dim(j));
    for (int k = 0; k < m; ++k)
      for (const auto& t : cons[static_cast<size_t>(k)].terms) accumulate_term(t, y(k), out[static_cast<size_t>(t.block)]);
    return out;
  };
  auto objective_value = [&](const std::vector<Matrix>& xs) {
    double v = 0.0;
    for (int j = 0; j < nb; ++j) v += trace_product(problem.objective(j), xs[static_cast<size_t>(j)]);
    return v;
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    sol.iterations = iter;
    const RealVector ax = apply_a(sol.x);
    const RealVector rp = b - ax;
    const auto aty = apply_at(sol.y);
    std::vector<Matrix> rd(static_cast<size_t>(nb));
    double rd_norm = 0.0, mu = 0.0;
    for (int j = 0; j < nb; ++j) {
      const auto sj = static_cast<size_t>(j);
      rd[sj] = problem.objective(j) - aty[sj] - sol.z[sj];
      rd_norm = std::max(rd_norm, rd[sj].norm());
      mu += trace_product(sol.x[sj], sol.z[sj]);
    }
    mu /= total_dim;
    sol.primal_value = objective_value(sol.x);
    sol.dual_value = b.dot(sol.y);
    sol.primal_infeasibility = (m ? rp.norm() : 0.0) / (1.0 + b_norm);
    sol.dual_infeasibility = rd_norm / (1.0 + c_norm);
    const double gap = std::abs(sol.primal_value - sol.dual_value) / (1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value));
    if (gap <= options.tolerance && sol.primal_infeasibility <= options.tolerance &&
        sol.dual_infeasibility <= options.tolerance) {
      sol.converged = true;
      break;
    }

    std::vector<Matrix> zinv(static_cast<size_t>(nb));
    for (int j = 0; j < nb; ++j) zinv[static_cast<size_t>(j)] = inverse_hpd(sol.z[static_cast<size_t>(j)]);

    // Schur complement M_kl = Re Tr(A_k Z^-1 A_l X).
    Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < nb; ++j) {
      const auto& list = by_block[static_cast<size_t>(j)];
      const Matrix& zi = zinv[static_cast<size_t>(j)];
      const Matrix& x = sol.x[static_cast<size_t>(j)];
      for (size_t p = 0; p < list.size(); ++p) {
        for (size_t q = p; q < list.size(); ++q) {
          Complex s = 0.0;
          for (const auto& ek : list[p].second->entries)
            for (const auto& el : list[q].second->entries) s += ek.value * zi(ek.col, el.row) * el.value * x(el.col, ek.row);
          schur(list[p].first, list[q].first) += s.real();
          if (q != p) schur(list[q].first, list[p].first) += s.real();
        }
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
    if (ldlt.info() != Eigen::Success) break;

    // Solves for (dx, dy, dz) given the complementarity target R_j per block.
    auto direction = [&](const std::vector<Matrix>& r, std::vector<Matrix>& dx, RealVector& dy, std::vector<Matrix>& dz) {
      std::vector<Matrix> rz(static_cast<size_t>(nb)), xrdz(static_cast<size_t>(nb));
      for (int j = 0; j < nb; ++j) {
        const auto sj = static_cast<size_t>(j);
        rz[sj] = r[sj] * zinv[sj];
        xrdz[sj] = sol.x[sj] * rd[sj] * zinv[sj];
      }
      const RealVector rhs = rp - apply_a(rz) + apply_a(xrdz);
      dy = m ? RealVector(ldlt.solve(rhs)) : RealVector();
      const auto atdy = apply_at(dy);
      dx.resize(static_cast<size_t>(nb));
      dz.resize(static_cast<size_t>(nb));
      for (int j = 0; j < nb; ++j) {
        const auto sj = static_cast<size_t>(j);
        dz[sj] = rd[sj] - atdy[sj];
        dx[sj] = sym(rz[sj] - sol.x[sj] * dz[sj] * zinv[sj]);
      }
    };
    auto step_lengths = [&](const std::vector<Matrix>& dx, const std::vector<Matrix>& dz) {
      double ap = std::numeric_limits<double>::infinity(), ad = ap;
      for (int j = 0; j < nb; ++j) {
        ap = std::min(ap, max_step(sol.x[static_cast<size_t>(j)], dx[static_cast<size_t>(j)]));
        ad = std::min(ad, max_step(sol.z[static_cast<size_t>(j)], dz[static_cast<size_t>(j)]));
      }
      return std::pair<double, double>{ap, ad};
    };

    // Predictor.
    std::vector<Matrix> r(static_cast<size_t>(nb)), dxa, dza;
    RealVector dya;
    for (int j = 0; j < nb; ++j) r[static_cast<size_t>(j)] = -sol.x[static_cast<size_t>(j)] * sol.z[static_cast<size_t>(j)];
    direction(r, dxa, dya, dza);
    auto [apa, ada] = step_lengths(dxa, dza);
    apa = std::min(1.0, apa);
    ada = std::min(1.0, ada);
    double mu_aff = 0.0;
    for (int j = 0; j < nb; ++j) {
      const auto sj = static_cast<size_t>(j);
      mu_aff += trace_product(sol.x[sj] + apa * dxa[sj], sol.z[sj] + ada * dza[sj]);
    }
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (int j = 0; j < nb; ++j) {
      const auto sj = static_cast<size_t>(j);
      r[sj] = sigma * mu * identity(problem.block_dim(j)) - sol.x[sj] * sol.z[sj] - dxa[sj] * dza[sj];
    }
    std::vector<Matrix> dx, dz;
    RealVector dy;
    direction(r, dx, dy, dz);
    auto [ap, ad] = step_lengths(dx, dz);
    ap = std::min(1.0, options.step_factor * ap);
    ad = std::min(1.0, options.step_factor * ad);
    if (ap < 1e-12 && ad < 1e-12) break;

    for (int j = 0; j < nb; ++j) {
      const auto sj = static_cast<size_t>(j);
      sol.x[sj] = hermitian_part(sol.x[sj] + ap * dx[sj]);
      sol.z[sj] = hermitian_part(sol.z[sj] + ad * dz[sj]);
    }
    if (m) sol.y += ad * dy;
  }

  sol.primal_value = objective_value(sol.x);
  sol.dual_value = b.dot(sol.y);
  // Rigorous lower bound: recompute Z from y exactly and charge its negative part.
  const auto aty = apply_at(sol.y);
  double safe = sol.dual_value;
  for (int j = 0; j < nb; ++j) {
    const double lmin = min_eigenvalue(problem.objective(j) - aty[static_cast<size_t>(j)]);
    if (lmin < 0) safe += lmin * problem.trace_bound(j);
  }
  sol.safe_dual_bound = std::isnan(safe) ? -std::numeric_limits<double>::infinity() : safe;
  return sol;
}

}  // namespace rescomp
