#include "trussforge/lp/problem.hpp"
#include "trussforge/lp/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace trussforge::lp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorInterval = 100;
constexpr int kStallLimit = 300;  // degenerate pivots before Bland kicks in
}  // namespace

void LPProblem::resize(int rows, int cols) {
  num_rows = rows;
  num_cols = cols;
  objective = Eigen::VectorXd::Zero(cols);
  rhs = Eigen::VectorXd::Zero(rows);
  lower = Eigen::VectorXd::Constant(cols, 0.0);
  upper = Eigen::VectorXd::Constant(cols, kInf);
}

bool LPProblem::dimensions_consistent() const {
  if (objective.size() != num_cols || rhs.size() != num_rows) return false;
  if (lower.size() != num_cols || upper.size() != num_cols) return false;
  for (int j = 0; j < num_cols; ++j) {
    if (lower[j] > upper[j]) return false;
  }
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= num_rows || t.col < 0 || t.col >= num_cols)
      return false;
  }
  return true;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "?";
}

namespace {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

// Bounded-variable revised simplex. Columns 0..n-1 are structural, columns
// n..n+m-1 the artificials of the two-phase start. Determinism: every scan
// and tie-break works in fixed index order.
class Simplex {
 public:
  Simplex(const LPProblem& p, const SolveOptions& opts)
      : p_(p), opts_(opts), m_(p.num_rows), n_(p.num_cols) {
    build_columns();
  }

  LPSolution run() {
    LPSolution out;
    max_iters_ = opts_.max_iters > 0 ? opts_.max_iters : 50 * (m_ + n_);

    if (!init_basis_from_hint()) init_cold_basis();

    for (int attempt = 0; attempt < 3; ++attempt) {
      restart_requested_ = false;

      // Phase 1: minimize the sum of artificials.
      phase_ = 1;
      SolveStatus st = SolveStatus::Optimal;
      if (artificial_objective() > phase1_done_tol()) {
        st = iterate();
        if (restart_requested_) continue;
        if (st == SolveStatus::IterationLimit) return finish(out, st);
        if (artificial_objective() > 10.0 * phase1_done_tol())
          return finish(out, SolveStatus::Infeasible);
      }
      pin_artificials();

      // Phase 2: the real objective from the feasible basis.
      phase_ = 2;
      st = iterate();
      if (restart_requested_) continue;
      return finish(out, st);
    }
    return finish(out, SolveStatus::IterationLimit);
  }

 private:
  const LPProblem& p_;
  const SolveOptions& opts_;
  int m_, n_;
  int max_iters_ = 0;
  int phase_ = 1;
  int iterations_ = 0;

  // Column-major copy of [A | I] with artificial signs fixed at cold start.
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> art_sign_;

  std::vector<double> lo_, hi_, cost_;
  std::vector<VarState> state_;
  std::vector<int> basic_;       // row position -> variable
  std::vector<int> basic_pos_;   // variable -> row position or -1
  Eigen::VectorXd xb_;           // values of basic variables by row position
  std::vector<double> xn_;       // values of all variables (nonbasic part used)

  SparseLu lu_;
  struct Eta {
    int pos;
    std::vector<std::pair<int, double>> column;  // B^{-1} a_q (sparse-ish, dense stored)
  };
  std::vector<std::pair<int, Eigen::VectorXd>> etas_;

  bool bland_ = false;
  int stall_ = 0;
  bool restart_requested_ = false;

  void build_columns() {
    cols_.assign(n_ + m_, {});
    std::vector<std::vector<std::pair<int, double>>> tmp(n_);
    for (const auto& t : p_.entries) tmp[t.col].emplace_back(t.row, t.value);
    for (int j = 0; j < n_; ++j) {
      auto& col = tmp[j];
      std::sort(col.begin(), col.end());
      // merge duplicates
      auto& out = cols_[j];
      for (const auto& [r, v] : col) {
        if (!out.empty() && out.back().first == r)
          out.back().second += v;
        else
          out.emplace_back(r, v);
      }
      out.erase(std::remove_if(out.begin(), out.end(),
                               [](const auto& e) { return e.second == 0.0; }),
                out.end());
    }
    lo_.assign(n_ + m_, 0.0);
    hi_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p_.lower[j];
      hi_[j] = p_.upper[j];
    }
    art_sign_.assign(m_, 1.0);
  }

  double bound_start_value(int j) const {
    if (std::isfinite(lo_[j])) return lo_[j];
    if (std::isfinite(hi_[j])) return hi_[j];
    return 0.0;
  }

  VarState bound_start_state(int j) const {
    if (std::isfinite(lo_[j])) return VarState::AtLower;
    if (std::isfinite(hi_[j])) return VarState::AtUpper;
    return VarState::FreeZero;
  }

  void init_cold_basis() {
    state_.assign(n_ + m_, VarState::AtLower);
    xn_.assign(n_ + m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      state_[j] = bound_start_state(j);
      xn_[j] = bound_start_value(j);
    }
    // Residual with every structural at its start value decides the
    // artificial signs, so each artificial starts basic and nonnegative.
    Eigen::VectorXd r = p_.rhs;
    for (int j = 0; j < n_; ++j) {
      if (xn_[j] != 0.0) {
        for (const auto& [row, v] : cols_[j]) r[row] -= v * xn_[j];
      }
    }
    basic_.resize(m_);
    basic_pos_.assign(n_ + m_, -1);
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
      cols_[n_ + i] = {{i, art_sign_[i]}};
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = kInf;
      basic_[i] = n_ + i;
      basic_pos_[n_ + i] = i;
      state_[n_ + i] = VarState::Basic;
    }
    refactor();
  }

  bool init_basis_from_hint() {
    const BasisHint* h = opts_.warm_start;
    if (h == nullptr || h->empty()) return false;
    if (static_cast<int>(h->basic.size()) != m_) return false;
    if (static_cast<int>(h->at_upper.size()) != n_) return false;

    state_.assign(n_ + m_, VarState::AtLower);
    xn_.assign(n_ + m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = 1.0;
      cols_[n_ + i] = {{i, 1.0}};
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = 0.0;  // artificials outside the hint stay pinned
      state_[n_ + i] = VarState::AtLower;
    }
    for (int j = 0; j < n_; ++j) {
      if (h->at_upper[j] && std::isfinite(hi_[j])) {
        state_[j] = VarState::AtUpper;
        xn_[j] = hi_[j];
      } else {
        state_[j] = bound_start_state(j);
        xn_[j] = bound_start_value(j);
      }
    }
    basic_.assign(m_, -1);
    basic_pos_.assign(n_ + m_, -1);
    std::vector<char> used(n_ + m_, 0);
    for (int i = 0; i < m_; ++i) {
      int v = h->basic[i];
      if (v < 0 || v >= n_ + m_ || used[v]) return false;
      used[v] = 1;
      basic_[i] = v;
      basic_pos_[v] = i;
      state_[v] = VarState::Basic;
      if (v >= n_) hi_[v] = kInf;  // hinted artificial may carry a value
    }
    if (!refactor()) {
      // Singular hint: keep its nonbasic assignment but restart the basis
      // from artificials; phase 1 then begins near-feasible.
      repair_basis();
      return true;
    }
    compute_xb();
    // A hinted basis that went primal-infeasible (the usual case after a
    // geometry step) is likewise demoted to an artificial basis with the
    // hint's nonbasic states kept.
    const double tol = 1e2 * opts_.feas_tol * (1.0 + rhs_scale());
    for (int i = 0; i < m_; ++i) {
      const int v = basic_[i];
      if (xb_[i] < lo_[v] - tol || xb_[i] > hi_[v] + tol) {
        repair_basis();
        return true;
      }
    }
    // Clamp roundoff-level violations.
    for (int i = 0; i < m_; ++i) {
      const int v = basic_[i];
      xb_[i] = std::clamp(xb_[i], lo_[v] - opts_.feas_tol, hi_[v] + opts_.feas_tol);
    }
    return true;
  }

  double rhs_scale() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s = std::max(s, std::abs(p_.rhs[i]));
    return s;
  }

  double phase1_done_tol() const { return opts_.feas_tol * (1.0 + rhs_scale()); }

  double artificial_objective() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      const int v = basic_[i];
      if (v >= n_) s += std::abs(xb_[i]);
    }
    for (int j = n_; j < n_ + m_; ++j) {
      if (state_[j] != VarState::Basic) s += std::abs(xn_[j]);
    }
    return s;
  }

  void pin_artificials() {
    // Basic artificials at ~0 stay as placeholders for dependent rows; all
    // artificial bounds collapse so none can re-enter or move.
    for (int j = n_; j < n_ + m_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = 0.0;
      if (state_[j] != VarState::Basic) xn_[j] = 0.0;
    }
  }

  bool refactor() {
    std::vector<SparseLu::Column> bcols(m_);
    for (int i = 0; i < m_; ++i) bcols[i] = cols_[basic_[i]];
    // SparseLu wants column index = row position in the basis.
    if (!lu_.factor(m_, bcols)) return false;
    etas_.clear();
    return true;
  }

  void compute_xb() {
    Eigen::VectorXd r = p_.rhs;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      const double xj = xn_[j];
      if (xj != 0.0) {
        for (const auto& [row, v] : cols_[j]) r[row] -= v * xj;
      }
    }
    ftran(r);
    xb_ = r;
  }

  void ftran(Eigen::VectorXd& v) const {
    lu_.solve(v);
    for (const auto& [pos, col] : etas_) {
      const double piv = col[pos];
      const double vp = v[pos] / piv;
      if (vp != 0.0) {
        v -= vp * col;
        v[pos] = vp;
      } else {
        v[pos] = 0.0;
      }
    }
  }

  void btran(Eigen::VectorXd& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const auto& [pos, col] = *it;
      double acc = v[pos];
      acc -= v.dot(col) - v[pos] * col[pos];
      v[pos] = acc / col[pos];
    }
    lu_.solve_transpose(v);
  }

  double cost_of(int j) const {
    if (phase_ == 1) return j >= n_ ? 1.0 : 0.0;
    return j < n_ ? p_.objective[j] : 0.0;
  }

  double objective_now() const {
    double obj = 0.0;
    for (int i = 0; i < m_; ++i) obj += cost_of(basic_[i]) * xb_[i];
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] != VarState::Basic && xn_[j] != 0.0) obj += cost_of(j) * xn_[j];
    }
    return obj;
  }

  SolveStatus iterate() {
    double last_obj = objective_now();
    while (true) {
      if (iterations_ >= max_iters_) return SolveStatus::IterationLimit;

      // Duals for the current phase costs.
      Eigen::VectorXd y(m_);
      for (int i = 0; i < m_; ++i) y[i] = cost_of(basic_[i]);
      btran(y);

      const double cmax = phase_ == 1 ? 1.0 : (1.0 + p_.objective.cwiseAbs().maxCoeff());
      const double dtol = opts_.opt_tol * cmax;

      int enter = -1;
      int enter_dir = +1;
      double best_score = dtol;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        if (j >= n_) continue;  // a nonbasic artificial never re-enters
        if (hi_[j] - lo_[j] <= 0.0) continue;
        double d = cost_of(j);
        for (const auto& [row, v] : cols_[j]) d -= y[row] * v;
        int dir = 0;
        if (state_[j] == VarState::AtLower && d < -dtol) dir = +1;
        else if (state_[j] == VarState::AtUpper && d > dtol) dir = -1;
        else if (state_[j] == VarState::FreeZero && std::abs(d) > dtol)
          dir = d < 0.0 ? +1 : -1;
        if (dir == 0) continue;
        if (bland_) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;

      // Direction through the basis: delta x_B = -dir * B^{-1} a_enter * t.
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_);
      for (const auto& [row, v] : cols_[enter]) alpha[row] = v;
      ftran(alpha);

      const double piv_tol = 1e-10 * (1.0 + alpha.cwiseAbs().maxCoeff());

      double t_limit = std::isfinite(hi_[enter] - lo_[enter])
                           ? hi_[enter] - lo_[enter]
                           : kInf;
      int leave_pos = -1;
      bool leave_to_upper = false;
      double t_best = t_limit;
      double best_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = enter_dir * alpha[i];
        if (std::abs(a) <= piv_tol) continue;
        const int v = basic_[i];
        double t;
        bool to_upper;
        if (a > 0.0) {  // basic value decreases
          if (!std::isfinite(lo_[v])) continue;
          t = (xb_[i] - lo_[v]) / a;
          to_upper = false;
        } else {  // basic value increases
          if (!std::isfinite(hi_[v])) continue;
          t = (xb_[i] - hi_[v]) / a;
          to_upper = true;
        }
        t = std::max(t, 0.0);
        const double tie = 1e-10 * (1.0 + t_best);
        bool take = false;
        if (t < t_best - tie) {
          take = true;
        } else if (t <= t_best + tie && leave_pos >= 0) {
          if (bland_) {
            take = basic_[i] < basic_[leave_pos];
          } else {
            take = std::abs(alpha[i]) > std::abs(best_piv);
          }
        } else if (t <= t_best + tie && leave_pos < 0 && t < t_limit) {
          take = true;
        }
        if (take) {
          t_best = t;
          leave_pos = i;
          leave_to_upper = to_upper;
          best_piv = alpha[i];
        }
      }

      if (!std::isfinite(t_best)) {
        if (phase_ == 1)
          throw std::runtime_error("phase-1 subproblem unbounded (numerical failure)");
        return SolveStatus::Unbounded;
      }

      ++iterations_;

      if (leave_pos < 0 || t_best >= t_limit - 1e-12 * (1.0 + t_limit)) {
        // Bound flip: the entering variable crosses its own range.
        const double t = t_limit;
        for (int i = 0; i < m_; ++i) {
          if (alpha[i] != 0.0) xb_[i] -= enter_dir * t * alpha[i];
        }
        if (state_[enter] == VarState::AtLower) {
          state_[enter] = VarState::AtUpper;
          xn_[enter] = hi_[enter];
        } else {
          state_[enter] = VarState::AtLower;
          xn_[enter] = lo_[enter];
        }
      } else {
        // Pivot: `enter` becomes basic, basic_[leave_pos] goes to a bound.
        const double t = t_best;
        for (int i = 0; i < m_; ++i) {
          if (alpha[i] != 0.0) xb_[i] -= enter_dir * t * alpha[i];
        }
        const int leave = basic_[leave_pos];
        state_[leave] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
        xn_[leave] = leave_to_upper ? hi_[leave] : lo_[leave];
        const double enter_value = xn_[enter] + enter_dir * t;

        basic_[leave_pos] = enter;
        basic_pos_[enter] = leave_pos;
        basic_pos_[leave] = -1;
        state_[enter] = VarState::Basic;
        xb_[leave_pos] = enter_value;

        etas_.emplace_back(leave_pos, alpha);
        if (static_cast<int>(etas_.size()) >= kRefactorInterval ||
            std::abs(alpha[leave_pos]) < 1e-7) {
          if (!refactor()) {
            repair_basis();
            restart_requested_ = true;
            return SolveStatus::IterationLimit;
          }
          compute_xb();
        }
      }

      const double obj = objective_now();
      if (obj < last_obj - 1e-13 * (1.0 + std::abs(last_obj))) {
        stall_ = 0;
        bland_ = false;
      } else if (++stall_ > kStallLimit) {
        bland_ = true;
      }
      last_obj = obj;
    }
  }

  // Fall back to the all-artificial identity basis after a singular
  // factorization. The caller restarts from phase 1, which restores
  // feasibility. Rare; only numerical degeneracy gets here.
  void repair_basis() {
    for (int i = 0; i < m_; ++i) {
      const int v = basic_[i];
      if (v < n_) {
        state_[v] = bound_start_state(v);
        xn_[v] = bound_start_value(v);
      }
      basic_pos_[v] = -1;
    }
    Eigen::VectorXd r = p_.rhs;
    for (int j = 0; j < n_; ++j) {
      if (xn_[j] != 0.0 && state_[j] != VarState::Basic) {
        for (const auto& [row, v] : cols_[j]) r[row] -= v * xn_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
      cols_[n_ + i] = {{i, art_sign_[i]}};
      lo_[n_ + i] = 0.0;
      hi_[n_ + i] = kInf;
      xn_[n_ + i] = 0.0;
      basic_[i] = n_ + i;
      basic_pos_[n_ + i] = i;
      state_[n_ + i] = VarState::Basic;
    }
    if (!refactor())
      throw std::runtime_error("identity basis failed to factor");
    compute_xb();
  }

  LPSolution finish(LPSolution& out, SolveStatus st) {
    // Clean final values from a fresh factorization when possible; the
    // stale eta chain still solves correctly if the refactor fails.
    if (etas_.empty() || refactor()) compute_xb();

    out.status = st;
    out.iterations = iterations_;
    out.x = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] != VarState::Basic) out.x[j] = xn_[j];
    }
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) out.x[basic_[i]] = xb_[i];
    }
    out.objective_value = p_.objective.dot(out.x);

    Eigen::VectorXd y(m_);
    for (int i = 0; i < m_; ++i)
      y[i] = basic_[i] < n_ ? p_.objective[basic_[i]] : 0.0;
    btran(y);
    out.duals = y;

    out.basis.basic = basic_;
    out.basis.at_upper.assign(n_, 0);
    for (int j = 0; j < n_; ++j)
      out.basis.at_upper[j] = state_[j] == VarState::AtUpper ? 1 : 0;
    return out;
  }
};

}  // namespace

LPSolution solve_lp(const LPProblem& problem, const SolveOptions& opts) {
  if (!problem.dimensions_consistent())
    throw std::invalid_argument("LP problem dimensions are inconsistent");
  Simplex s(problem, opts);
  return s.run();
}

}  // namespace trussforge::lp
