#include "trussforge/lp/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trussforge::lp {

namespace {
constexpr double kPivotThreshold = 0.1;   // relative threshold within a column
constexpr double kAbsPivotFloor = 1e-13;  // below this a column counts as empty
}  // namespace

bool SparseLu::factor(int m, const std::vector<Column>& input) {
  m_ = m;
  pivot_row_.assign(m, -1);
  pivot_col_.assign(m, -1);
  row_step_.assign(m, -1);
  col_step_.assign(m, -1);
  pivot_value_.assign(m, 0.0);
  l_cols_.assign(m, {});
  u_rows_.assign(m, {});
  if (m == 0) return true;

  // Working copy of the active matrix. Column entry lists may hold stale
  // (already eliminated) rows; they are compacted on access.
  std::vector<Column> cols(input.begin(), input.begin() + m);
  std::vector<std::vector<int>> row_cols(m);  // row -> candidate columns
  std::vector<int> col_count(m, 0), row_count(m, 0);
  std::vector<char> row_done(m, 0), col_done(m, 0);
  for (int c = 0; c < m; ++c) {
    for (auto& [r, v] : cols[c]) {
      row_cols[r].push_back(c);
      ++col_count[c];
      ++row_count[r];
    }
  }

  // Dense scatter workspace for column updates.
  std::vector<double> work(m, 0.0);
  std::vector<int> stamp(m, -1);

  auto compact = [&](int c) {
    auto& col = cols[c];
    col.erase(std::remove_if(col.begin(), col.end(),
                             [&](const auto& e) { return row_done[e.first]; }),
              col.end());
    col_count[c] = static_cast<int>(col.size());
  };

  for (int step = 0; step < m; ++step) {
    // Pivot column: fewest active entries, lowest index on ties.
    int best_col = -1, best_count = std::numeric_limits<int>::max();
    for (int c = 0; c < m; ++c) {
      if (col_done[c]) continue;
      compact(c);
      if (col_count[c] == 0) return false;  // structurally singular
      if (col_count[c] < best_count) {
        best_count = col_count[c];
        best_col = c;
      }
    }
    const int pc = best_col;
    auto& pcol = cols[pc];

    double cmax = 0.0;
    for (auto& [r, v] : pcol) cmax = std::max(cmax, std::abs(v));
    if (cmax < kAbsPivotFloor) return false;

    // Pivot row: numerically eligible, then fewest active row entries.
    int pr = -1;
    int best_rc = std::numeric_limits<int>::max();
    for (auto& [r, v] : pcol) {
      if (std::abs(v) < kPivotThreshold * cmax) continue;
      if (row_count[r] < best_rc || (row_count[r] == best_rc && r < pr)) {
        best_rc = row_count[r];
        pr = r;
      }
    }
    double pval = 0.0;
    for (auto& [r, v] : pcol) {
      if (r == pr) pval = v;
    }

    pivot_row_[step] = pr;
    pivot_col_[step] = pc;
    row_step_[pr] = step;
    col_step_[pc] = step;
    pivot_value_[step] = pval;

    // L multipliers from the rest of the pivot column.
    auto& lcol = l_cols_[step];
    for (auto& [r, v] : pcol) {
      if (r != pr) lcol.emplace_back(r, v / pval);
    }
    row_done[pr] = 1;
    col_done[pc] = 1;
    for (auto& [r, mult] : lcol) --row_count[r];  // pivot col leaves the active set

    // U row: walk columns that may contain the pivot row, update them.
    auto& urow = u_rows_[step];
    std::vector<int>& candidates = row_cols[pr];
    for (int c : candidates) {
      if (col_done[c]) continue;
      compact(c);
      double uval = 0.0;
      bool found = false;
      for (auto& [r, v] : cols[c]) {
        if (r == pr) {
          uval = v;
          found = true;
          break;
        }
      }
      if (!found) continue;
      urow.emplace_back(c, uval);
      // col_c := col_c - uval * L_col, dropping the pivot-row entry.
      // Scatter into `work` (stamped with the visiting column) and gather.
      auto& col = cols[c];
      const int tag = step;
      std::vector<int> rows;
      rows.reserve(col.size() + lcol.size());
      for (auto& [r, v] : col) {
        if (r == pr) continue;
        work[r] = v;
        stamp[r] = tag;
        rows.push_back(r);
      }
      for (const auto& [r, mult] : lcol) {
        if (stamp[r] != tag) {
          work[r] = 0.0;
          stamp[r] = tag;
          rows.push_back(r);
          row_cols[r].push_back(c);
          ++row_count[r];
        }
        work[r] -= uval * mult;
      }
      col.clear();
      for (int r : rows) {
        if (std::abs(work[r]) > 1e-300) {
          col.emplace_back(r, work[r]);
        } else {
          --row_count[r];
        }
        stamp[r] = -1;
      }
      col_count[c] = static_cast<int>(col.size());
    }
    candidates.clear();
  }
  return true;
}

void SparseLu::solve(Eigen::VectorXd& x) const {
  // Forward: y = L^{-1} P x, stored back into step order.
  Eigen::VectorXd y(m_);
  for (int k = 0; k < m_; ++k) {
    const double yk = x[pivot_row_[k]];
    y[k] = yk;
    if (yk != 0.0) {
      for (const auto& [r, mult] : l_cols_[k]) x[r] -= mult * yk;
    }
  }
  // Backward: U z = y in step order, then scatter by pivot column.
  Eigen::VectorXd z(m_);
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = y[k];
    for (const auto& [c, uval] : u_rows_[k]) acc -= uval * z[col_step_[c]];
    z[k] = acc / pivot_value_[k];
  }
  for (int k = 0; k < m_; ++k) x[pivot_col_[k]] = z[k];
}

void SparseLu::solve_transpose(Eigen::VectorXd& x) const {
  // B^T = Q U^T L^T P with the conventions of factor().
  Eigen::VectorXd w(m_);
  for (int k = 0; k < m_; ++k) w[k] = x[pivot_col_[k]];
  // U^T u = w (forward over steps, scattering each solved component).
  for (int k = 0; k < m_; ++k) {
    const double uk = w[k] / pivot_value_[k];
    w[k] = uk;
    if (uk != 0.0) {
      for (const auto& [c, uval] : u_rows_[k]) w[col_step_[c]] -= uval * uk;
    }
  }
  // L^T v = u (backward), then x[pivot_row_[k]] = v_k.
  Eigen::VectorXd v(m_);
  for (int k = m_ - 1; k >= 0; --k) {
    double acc = w[k];
    for (const auto& [r, mult] : l_cols_[k]) acc -= mult * v[row_step_[r]];
    v[k] = acc;
  }
  for (int k = 0; k < m_; ++k) x[pivot_row_[k]] = v[k];
}

}  // namespace trussforge::lp
