#include "fractalhand/simplex.hpp"

#include <cmath>
#include <limits>

#include "fractalhand/error.hpp"

namespace fractalhand {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  // Objective row lives at index rows_: reduced costs, and minus the objective value in rhs.
  double& cost(std::size_t c) { return at(rows_, c); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Runs primal simplex iterations on columns [0, allowed). Returns false on unboundedness.
LpStatus iterate(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed, double tol) {
  const std::size_t limit = 64 * (t.rows() + t.cols()) + 1000;
  for (std::size_t iter = 0; iter < limit; ++iter) {
    std::size_t enter = allowed;
    for (std::size_t c = 0; c < allowed; ++c) {
      if (t.at(t.rows(), c) < -tol) {
        enter = c;
        break;
      }
    }
    if (enter == allowed) return LpStatus::optimal;

    std::size_t leave = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= tol) continue;
      const double ratio = t.at(r, t.cols()) / a;
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && leave < t.rows() && basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave == t.rows()) return LpStatus::unbounded;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  return LpStatus::iteration_limit;
}

}  // namespace

LpSolution solve_lp(const StandardFormLp& lp, double pivot_tolerance, double feasibility_tolerance) {
  const std::size_t m = lp.rows, n = lp.cols;
  if (lp.A.size() != m * n || lp.b.size() != m || lp.c.size() != n) {
    throw InvalidArgument("LP dimensions do not match");
  }

  // Columns: n structural, then m artificial.
  Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * lp.A[r * n + c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * lp.b[r];
    basis[r] = n + r;
  }

  // Phase 1: maximize -(sum of artificials).
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += t.at(r, c);
    t.cost(c) = -s;
  }
  double s = 0.0;
  for (std::size_t r = 0; r < m; ++r) s += t.rhs(r);
  t.cost(n + m) = -s;

  LpSolution out;
  LpStatus st = iterate(t, basis, n + m, pivot_tolerance);
  if (st == LpStatus::iteration_limit) {
    out.status = st;
    return out;
  }
  if (-t.cost(n + m) > feasibility_tolerance) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // Drive zero-level artificials out of the basis where a structural column can replace them.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > pivot_tolerance) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }

  // Phase 2 objective row.
  for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.cost(c) = -lp.c[c];
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] >= n) continue;
    const double cb = lp.c[basis[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= n + m; ++c) t.cost(c) += cb * t.at(r, c);
  }

  st = iterate(t, basis, n, pivot_tolerance);
  out.status = st;
  if (st != LpStatus::optimal) return out;

  out.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) out.x[basis[r]] = t.rhs(r);
  }
  out.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) out.objective += lp.c[c] * out.x[c];
  return out;
}

}  // namespace fractalhand
