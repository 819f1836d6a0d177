#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace trussforge::lp {

// min c.x  s.t.  A x = b,  lo <= x <= hi  (+-inf bounds allowed)
struct LPProblem {
  int num_rows = 0;
  int num_cols = 0;
  Eigen::VectorXd objective;  // size num_cols
  Eigen::VectorXd rhs;        // size num_rows
  Eigen::VectorXd lower;      // size num_cols
  Eigen::VectorXd upper;      // size num_cols

  struct Triplet {
    int row, col;
    double value;
  };
  std::vector<Triplet> entries;  // duplicates are summed

  void resize(int rows, int cols);
  void add_entry(int row, int col, double value) {
    entries.push_back({row, col, value});
  }
  bool dimensions_consistent() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus s);

// Snapshot of a simplex basis for warm starting a structurally identical
// problem. `basic` holds variable indices (>= num_cols means the artificial
// of row index - num_cols); `at_upper[j]` marks nonbasic structural j at its
// upper bound.
struct BasisHint {
  std::vector<int> basic;
  std::vector<std::uint8_t> at_upper;
  bool empty() const { return basic.empty(); }
};

struct LPSolution {
  SolveStatus status = SolveStatus::IterationLimit;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  int iterations = 0;
  Eigen::VectorXd duals;  // row duals at termination (valid when Optimal)
  BasisHint basis;
};

struct SolveOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 0;  // 0 -> 50 * (rows + cols)
  const BasisHint* warm_start = nullptr;
};

LPSolution solve_lp(const LPProblem& problem, const SolveOptions& opts = {});

}  // namespace trussforge::lp
