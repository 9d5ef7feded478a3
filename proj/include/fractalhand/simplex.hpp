#pragma once

#include <cstddef>
#include <vector>

namespace fractalhand {

// Dense linear program in standard form:
//   maximize c.x  subject to  A x = b,  x >= 0.
// A is row-major with `rows` rows and `cols` columns.
struct StandardFormLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;
  std::vector<double> b;
  std::vector<double> c;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase tableau simplex with Bland's anti-cycling rule. Intended for small, dense,
// highly degenerate problems (a handful of rows, tens of columns).
LpSolution solve_lp(const StandardFormLp& lp, double pivot_tolerance = 1e-11,
                    double feasibility_tolerance = 1e-9);

}  // namespace fractalhand
