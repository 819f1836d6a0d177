#include "trussforge/gsm.hpp"

#include "trussforge/equilibrium.hpp"
#include "trussforge/lp/problem.hpp"

#include <cmath>
#include <limits>

namespace trussforge {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

lp::LPProblem build_reduced(const EquilibriumSystem& sys,
                            const std::vector<double>& lengths) {
  // Variables: w+ then w-, both >= 0; objective sum l^2 (w+ + w-).
  const int E = static_cast<int>(lengths.size());
  lp::LPProblem p;
  p.resize(sys.num_rows, 2 * E);
  for (int b = 0; b < E; ++b) {
    const double l2 = lengths[b] * lengths[b];
    p.objective[b] = l2;
    p.objective[E + b] = l2;
    for (const auto& e : sys.columns[b]) {
      p.add_entry(e.row, b, e.value);
      p.add_entry(e.row, E + b, -e.value);
    }
  }
  p.rhs = -sys.loads[0];
  return p;
}

lp::LPProblem build_area_form(const EquilibriumSystem& sys,
                              const std::vector<double>& lengths, int K) {
  // Variables: w^k_b (free), alpha_b >= 0, two slack columns per (b, k).
  // Rows: per-case equilibrium, then per (b, k)
  //   alpha_b + l_b w^k_b - s1 = 0     (alpha >= -l w)
  //   alpha_b - l_b w^k_b - s2 = 0     (alpha >= +l w)
  const int E = static_cast<int>(lengths.size());
  const int F = sys.num_rows;
  lp::LPProblem p;
  p.resize(K * F + 2 * E * K, K * E + E + 2 * E * K);
  const int alpha0 = K * E;
  const int slack0 = K * E + E;
  for (int j = 0; j < K * E; ++j) {
    p.lower[j] = -kInf;
    p.upper[j] = kInf;
  }
  for (int b = 0; b < E; ++b) p.objective[alpha0 + b] = lengths[b];

  for (int k = 0; k < K; ++k) {
    for (int b = 0; b < E; ++b) {
      for (const auto& e : sys.columns[b])
        p.add_entry(k * F + e.row, k * E + b, e.value);
    }
    for (int r = 0; r < F; ++r) p.rhs[k * F + r] = -sys.loads[k][r];
  }
  for (int k = 0; k < K; ++k) {
    for (int b = 0; b < E; ++b) {
      const int r1 = K * F + 2 * (k * E + b);
      const int r2 = r1 + 1;
      p.add_entry(r1, alpha0 + b, 1.0);
      p.add_entry(r1, k * E + b, lengths[b]);
      p.add_entry(r1, slack0 + 2 * (k * E + b), -1.0);
      p.add_entry(r2, alpha0 + b, 1.0);
      p.add_entry(r2, k * E + b, -lengths[b]);
      p.add_entry(r2, slack0 + 2 * (k * E + b) + 1, -1.0);
    }
  }
  return p;
}

}  // namespace

AlgAResult solve_alg_a(const Truss& truss, const FunctionalSpec& spec,
                       const AlgAOptions& opts) {
  const int K = spec.load_cases;
  const int E = static_cast<int>(truss.bars.size());
  const EquilibriumSystem sys = assemble_C(truss, spec);
  std::vector<double> lengths(E);
  for (int b = 0; b < E; ++b) lengths[b] = truss.bar_length(truss.bars[b]);

  const bool area_form = opts.force_area_form || K > 1;
  lp::LPProblem problem =
      area_form ? build_area_form(sys, lengths, K) : build_reduced(sys, lengths);

  lp::SolveOptions sopts;
  sopts.feas_tol = opts.feas_tol;
  sopts.opt_tol = opts.opt_tol;
  sopts.max_iters = opts.max_iters;
  sopts.warm_start = opts.warm_start;
  const lp::LPSolution sol = lp::solve_lp(problem, sopts);

  if (sol.status == lp::SolveStatus::Infeasible)
    throw UnsupportableSpecError(
        "statically unsupportable spec/topology: no force balance exists");
  if (sol.status == lp::SolveStatus::Unbounded)
    throw std::logic_error("volume LP reported unbounded");
  if (sol.status == lp::SolveStatus::IterationLimit)
    throw std::runtime_error("volume LP hit its iteration limit");

  AlgAResult out;
  out.lp_iterations = sol.iterations;
  out.basis = sol.basis;
  out.force_densities.assign(K, std::vector<double>(E, 0.0));
  out.areas.assign(E, 0.0);
  out.governing_case.assign(E, 0);

  if (area_form) {
    const int alpha0 = K * E;
    for (int k = 0; k < K; ++k)
      for (int b = 0; b < E; ++b) out.force_densities[k][b] = sol.x[k * E + b];
    for (int b = 0; b < E; ++b) out.areas[b] = sol.x[alpha0 + b];
  } else {
    for (int b = 0; b < E; ++b) {
      const double wp = sol.x[b], wm = sol.x[E + b];
      out.force_densities[0][b] = wp - wm;
      out.areas[b] = lengths[b] * (wp + wm);
    }
  }
  for (int b = 0; b < E; ++b) {
    int best = 0;
    double best_force = std::abs(out.force_densities[0][b]) * lengths[b];
    for (int k = 1; k < K; ++k) {
      const double f = std::abs(out.force_densities[k][b]) * lengths[b];
      if (f > best_force) {
        best_force = f;
        best = k;
      }
    }
    out.governing_case[b] = best;
    out.volume += lengths[b] * out.areas[b];
  }
  return out;
}

void apply_alg_a(Truss& truss, const AlgAResult& result) {
  const int K = static_cast<int>(result.force_densities.size());
  for (int b = 0; b < static_cast<int>(truss.bars.size()); ++b) {
    Bar& bar = truss.bars[b];
    bar.area = result.areas[b];
    bar.force_densities.assign(K, 0.0);
    for (int k = 0; k < K; ++k)
      bar.force_densities[k] = result.force_densities[k][b];
    bar.governing_case = result.governing_case[b];
  }
}

}  // namespace trussforge
