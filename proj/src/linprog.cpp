#include "dse/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace dse {

void LinearProgram::add_constraint(std::vector<double> row, double bound) {
  lhs.push_back(std::move(row));
  rhs.push_back(bound);
}

namespace {

constexpr double kPivotTol = 1e-9;

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // structural + slack + artificial
  std::size_t n_struct = 0;
  std::size_t n_art = 0;
  std::vector<std::vector<double>> t;  // rows x (cols + 1), last entry rhs
  std::vector<double> obj;             // reduced costs, size cols + 1
  std::vector<std::size_t> basis;

  double& rhs(std::size_t i) { return t[i][cols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = t[pr][pc];
    for (std::size_t j = 0; j <= cols; ++j) t[pr][j] /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      const double f = t[i][pc];
      if (std::fabs(f) < 1e-14) continue;
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[pr][j];
      t[i][pc] = 0.0;
    }
    const double f = obj[pc];
    if (std::fabs(f) > 1e-14) {
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * t[pr][j];
      obj[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Runs the simplex on the current objective row.  allow_art lets artificial
  // columns enter (phase 1 only).  Returns false when unbounded.
  bool iterate(bool allow_art) {
    const std::size_t art_begin = cols - n_art;
    std::size_t stall = 0;
    double last_val = obj[cols];
    for (std::size_t iter = 0; iter < 200000; ++iter) {
      const bool bland = stall > 64;
      std::size_t enter = cols;
      double best = kPivotTol;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allow_art && j >= art_begin) continue;
        if (obj[j] > (bland ? kPivotTol : best)) {
          enter = j;
          if (bland) break;
          best = obj[j];
        }
      }
      if (enter == cols) return true;  // optimal

      std::size_t leave = rows;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        if (t[i][enter] <= kPivotTol) continue;
        const double ratio = rhs(i) / t[i][enter];
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && (leave == rows || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == rows) return false;  // unbounded direction
      pivot(leave, enter);
      if (obj[cols] < last_val - 1e-12) {
        stall = 0;
        last_val = obj[cols];
      } else {
        ++stall;
      }
    }
    return true;  // iteration cap; treat current point as optimal
  }
};

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  const std::size_t n0 = lp.objective.size();
  if (lp.lower.size() != n0 || lp.upper.size() != n0) {
    throw std::invalid_argument("lp bound vectors must match the objective length");
  }
  for (const auto& row : lp.lhs) {
    if (row.size() != n0) throw std::invalid_argument("lp row width must match the objective length");
  }
  if (lp.rhs.size() != lp.lhs.size()) {
    throw std::invalid_argument("lp rhs length must match the row count");
  }
  LpSolution out;
  for (std::size_t j = 0; j < n0; ++j) {
    if (lp.lower[j] > lp.upper[j]) return out;  // infeasible box
  }

  // Expand to standard form: every column non-negative, rows are <=.
  struct Col {
    std::size_t var;
    double sign;
  };
  std::vector<Col> cols;
  std::vector<double> shift(n0, 0.0);
  for (std::size_t j = 0; j < n0; ++j) {
    if (std::isfinite(lp.lower[j])) {
      shift[j] = lp.lower[j];
      cols.push_back({j, 1.0});
    } else {
      cols.push_back({j, 1.0});
      cols.push_back({j, -1.0});
    }
  }
  const std::size_t nc = cols.size();

  std::vector<std::vector<double>> A;
  std::vector<double> g;
  auto push_row = [&](const std::vector<double>& orig, double bound) {
    std::vector<double> row(nc, 0.0);
    double b = bound;
    for (std::size_t c = 0; c < nc; ++c) row[c] = orig[cols[c].var] * cols[c].sign;
    for (std::size_t j = 0; j < n0; ++j) b -= orig[j] * shift[j];
    A.push_back(std::move(row));
    g.push_back(b);
  };
  for (std::size_t i = 0; i < lp.lhs.size(); ++i) push_row(lp.lhs[i], lp.rhs[i]);
  for (std::size_t j = 0; j < n0; ++j) {
    if (!std::isfinite(lp.upper[j])) continue;
    std::vector<double> row(n0, 0.0);
    row[j] = 1.0;
    push_row(row, lp.upper[j]);
  }

  const std::size_t nr = A.size();
  std::size_t n_art = 0;
  for (double v : g)
    if (v < 0.0) ++n_art;

  Tableau tb;
  tb.rows = nr;
  tb.n_struct = nc;
  tb.n_art = n_art;
  tb.cols = nc + nr + n_art;
  tb.t.assign(nr, std::vector<double>(tb.cols + 1, 0.0));
  tb.basis.assign(nr, 0);
  tb.obj.assign(tb.cols + 1, 0.0);

  std::size_t art = nc + nr;
  for (std::size_t i = 0; i < nr; ++i) {
    const double s = g[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < nc; ++c) tb.t[i][c] = s * A[i][c];
    tb.t[i][nc + i] = s;  // slack
    tb.t[i][tb.cols] = s * g[i];
    if (g[i] < 0.0) {
      tb.t[i][art] = 1.0;
      tb.basis[i] = art++;
    } else {
      tb.basis[i] = nc + i;
    }
  }

  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials); canonical reduced costs are the
    // column sums over the rows where an artificial is basic.
    for (std::size_t i = 0; i < nr; ++i) {
      if (tb.basis[i] < nc + nr) continue;
      for (std::size_t j = 0; j <= tb.cols; ++j) tb.obj[j] += tb.t[i][j];
    }
    for (std::size_t j = nc + nr; j < tb.cols; ++j) tb.obj[j] = 0.0;
    tb.iterate(true);
    double infeas = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      if (tb.basis[i] >= nc + nr) infeas += tb.rhs(i);
    }
    if (infeas > 1e-7) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Drive leftover degenerate artificials out of the basis where possible.
    for (std::size_t i = 0; i < nr; ++i) {
      if (tb.basis[i] < nc + nr) continue;
      for (std::size_t j = 0; j < nc + nr; ++j) {
        if (std::fabs(tb.t[i][j]) > kPivotTol) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 objective over the expanded columns.
  std::fill(tb.obj.begin(), tb.obj.end(), 0.0);
  for (std::size_t c = 0; c < nc; ++c) tb.obj[c] = lp.objective[cols[c].var] * cols[c].sign;
  for (std::size_t i = 0; i < nr; ++i) {
    const std::size_t bi = tb.basis[i];
    if (bi >= nc) continue;
    const double cb = tb.obj[bi];
    if (std::fabs(cb) < 1e-14) continue;
    for (std::size_t j = 0; j <= tb.cols; ++j) tb.obj[j] -= cb * tb.t[i][j];
  }
  for (std::size_t i = 0; i < nr; ++i) tb.obj[tb.basis[i]] = 0.0;

  if (!tb.iterate(false)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  std::vector<double> y(nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i) {
    if (tb.basis[i] < nc) y[tb.basis[i]] = tb.rhs(i);
  }
  out.x.assign(n0, 0.0);
  for (std::size_t j = 0; j < n0; ++j) out.x[j] = shift[j];
  for (std::size_t c = 0; c < nc; ++c) out.x[cols[c].var] += cols[c].sign * y[c];
  out.value = 0.0;
  for (std::size_t j = 0; j < n0; ++j) out.value += lp.objective[j] * out.x[j];
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace dse
