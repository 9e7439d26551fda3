#pragma once

#include <vector>

namespace dse {

// Feasibility slack accepted on returned LP solutions.
inline constexpr double kLpTol = 1e-8;

// Small dense maximization problem:
//   maximize objective . x
//   subject to lhs * x <= rhs,  lower <= x <= upper.
// Infinite bounds are allowed (use +/-HUGE_VAL).
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> lhs;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  void add_constraint(std::vector<double> row, double bound);
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;  // present iff optimal
  double value = 0.0;     // present iff optimal
};

// Two-phase dense simplex.  Deterministic for identical input; infeasible and
// unbounded problems are reported through the status, never by throwing.
LpSolution solve(const LinearProgram& lp);

}  // namespace dse
