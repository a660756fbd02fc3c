#include "rescomp/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescomp {

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = fc <= fd ? c : d;
  double fbest = std::min(fc, fd);
  // Endpoints matter for drop steps and for objectives that are flat near 0.
  const double flo = f(lo), fhi = f(hi);
  if (fhi <= fbest) {
    best = hi;
    fbest = fhi;
  }
  if (flo < fbest) best = lo;
  return best;
}

namespace {

Matrix combine(const std::vector<Matrix>& atoms, const std::vector<double>& w) {
  Matrix x = Matrix::Zero(atoms.front().rows(), atoms.front().cols());
  for (size_t i = 0; i < atoms.size(); ++i) x += w[i] * atoms[i];
  return x;
}

}  // namespace

FwResult frank_wolfe(const FwProblem& problem, const std::vector<std::pair<Matrix, double>>& start, const FwOptions& options) {
  if (start.empty()) throw std::invalid_argument("frank_wolfe: empty starting combination");
  std::vector<Matrix> atoms;
  std::vector<double> w;
  for (const auto& [a, c] : start) {
    if (c <= 0) continue;
    atoms.push_back(a);
    w.push_back(c);
  }
  Matrix x = combine(atoms, w);

  FwResult res;
  double best_cert = -std::numeric_limits<double>::infinity();
  double best_heur = -std::numeric_limits<double>::infinity();
  int certify_attempts = 0;
  int stalls = 0;

  for (int it = 0; it < options.max_iterations; ++it) {
    res.iterations = it + 1;
    const double f = problem.value(x);
    res.x = x;
    res.value = f;
    if (f <= options.stop_below) break;
    const Matrix g = problem.gradient(x);
    const LmoResult s = problem.lmo(g);
    res.max_restarts = std::max(res.max_restarts, s.restarts);
    const double gx = trace_product(g, x);
    const double fw_gap = gx - s.value;
    best_heur = std::max(best_heur, f - fw_gap);
    if (s.certified) best_cert = std::max(best_cert, f - (gx - s.lower_bound));

    if (f - best_cert <= options.gap) {
      res.converged = true;
      res.certified = true;
      break;
    }
    if (f - best_heur <= options.gap) {
      if (options.certify_linear_min && certify_attempts < 5) {
        ++certify_attempts;
        const double bound = options.certify_linear_min(g);
        best_cert = std::max(best_cert, f - (gx - std::min(bound, s.value)));
        if (f - best_cert <= options.gap) {
          res.converged = true;
          res.certified = true;
          break;
        }
      } else {
        res.converged = true;
        res.certified = false;
        break;
      }
    }
    const double lower_now = std::isfinite(best_cert) ? best_cert : best_heur;
    if (lower_now > options.stop_above_lower) break;

    // Choose between the toward step and the away step.
    Matrix dir;
    double tmax = 1.0;
    int away = -1;
    if (options.away_steps && atoms.size() > 1) {
      double worst = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < atoms.size(); ++i) {
        const double v = trace_product(g, atoms[i]);
        if (v > worst) {
          worst = v;
          away = static_cast<int>(i);
        }
      }
      if (worst - gx > fw_gap && w[static_cast<size_t>(away)] < 1.0) {
        dir = x - atoms[static_cast<size_t>(away)];
        const double wv = w[static_cast<size_t>(away)];
        tmax = wv / (1.0 - wv);
      } else {
        away = -1;
      }
    }
    if (away < 0) dir = s.state - x;

    double t;
    if (problem.line_search) {
      t = problem.line_search(x, dir, tmax);
    } else {
      t = golden_section([&](double tt) { return problem.value(x + tt * dir); }, 0.0, tmax,
                         options.line_tolerance * std::max(1.0, tmax));
    }
    t = std::clamp(t, 0.0, tmax);
    if (t <= 0.0) {
      if (++stalls > 20) break;
    } else {
      stalls = 0;
    }

    if (away < 0) {
      if (t >= 1.0) {
        atoms = {s.state};
        w = {1.0};
      } else {
        for (auto& wi : w) wi *= (1.0 - t);
        bool merged = false;
        for (size_t i = 0; i < atoms.size(); ++i)
          if ((atoms[i] - s.state).norm() <= 1e-12) {
            w[i] += t;
            merged = true;
            break;
          }
        if (!merged) {
          atoms.push_back(s.state);
          w.push_back(t);
        }
      }
    } else {
      const auto v = static_cast<size_t>(away);
      for (auto& wi : w) wi *= (1.0 + t);
      w[v] -= t;
      if (t >= tmax || w[v] <= 1e-15) {
        atoms.erase(atoms.begin() + static_cast<long>(v));
        w.erase(w.begin() + static_cast<long>(v));
      }
    }
    if (static_cast<int>(atoms.size()) > options.max_atoms) {
      atoms = {combine(atoms, w)};
      w = {1.0};
    }
    x = combine(atoms, w);

    for (int c = 0; c < options.corrective_steps && atoms.size() > 1; ++c) {
      const Matrix gc = problem.gradient(x);
      size_t lo = 0, hi = 0;
      double vlo = std::numeric_limits<double>::infinity();
      double vhi = -std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < atoms.size(); ++i) {
        const double v = trace_product(gc, atoms[i]);
        if (v < vlo) {
          vlo = v;
          lo = i;
        }
        if (v > vhi) {
          vhi = v;
          hi = i;
        }
      }
      if (lo == hi || vhi - vlo <= 0.1 * options.gap) break;
      const Matrix pd = atoms[lo] - atoms[hi];
      const double pmax = w[hi];
      double tc = problem.line_search ? problem.line_search(x, pd, pmax)
                                      : golden_section([&](double tt) { return problem.value(x + tt * pd); }, 0.0, pmax,
                                                       options.line_tolerance * std::max(1.0, pmax));
      tc = std::clamp(tc, 0.0, pmax);
      if (tc <= 0.0) break;
      w[lo] += tc;
      w[hi] -= tc;
      if (w[hi] <= 1e-15) {
        atoms.erase(atoms.begin() + static_cast<long>(hi));
        w.erase(w.begin() + static_cast<long>(hi));
      }
      x = combine(atoms, w);
    }
  }

  res.lower_bound = std::isfinite(best_cert) ? best_cert : best_heur;
  if (!res.converged) res.certified = std::isfinite(best_cert);
  return res;
}

}  // namespace rescomp
