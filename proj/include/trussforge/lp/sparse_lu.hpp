#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace trussforge::lp {

// LU factorization of a square sparse matrix with Markowitz-style pivoting
// (min column count, threshold 0.1 within the column). Built for simplex
// bases: refactorized periodically, with product-form eta updates layered on
// top by the caller between refactorizations.
class SparseLu {
 public:
  using Column = std::vector<std::pair<int, double>>;  // (row, value)

  // Returns false when the matrix is numerically singular.
  bool factor(int m, const std::vector<Column>& columns);

  int size() const { return m_; }

  void solve(Eigen::VectorXd& x) const;            // B x = b, in place
  void solve_transpose(Eigen::VectorXd& x) const;  // B^T x = b, in place

 private:
  int m_ = 0;
  std::vector<int> pivot_row_;   // step -> original row
  std::vector<int> pivot_col_;   // step -> original column
  std::vector<int> row_step_;    // original row -> step
  std::vector<int> col_step_;    // original col -> step
  std::vector<double> pivot_value_;
  // L column k: (original row, multiplier); rows eliminated at later steps.
  std::vector<Column> l_cols_;
  // U row k: (original col, value) for columns eliminated at later steps.
  std::vector<Column> u_rows_;
};

}  // namespace trussforge::lp
