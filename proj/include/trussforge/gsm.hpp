#pragma once

#include "trussforge/lp/problem.hpp"
#include "trussforge/model.hpp"

#include <stdexcept>
#include <vector>

namespace trussforge {

// The functional spec admits no force balance on this topology.
struct UnsupportableSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlgAResult {
  std::vector<std::vector<double>> force_densities;  // [case][bar]
  std::vector<double> areas;                         // per bar
  std::vector<int> governing_case;                   // per bar, 0-based
  double volume = 0.0;
  int lp_iterations = 0;
  lp::BasisHint basis;  // reusable for the next solve on the same topology
};

struct AlgAOptions {
  // K = 1 solves the split-density form without explicit area variables
  // (mathematically identical, much smaller basis); setting this forces the
  // general per-case area-variable formulation on any K.
  bool force_area_form = false;
  const lp::BasisHint* warm_start = nullptr;
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 0;
};

// Minimum-volume member forces at fixed geometry: the force-density LP with
// per-case equilibrium and per-bar area coupling. Throws
// UnsupportableSpecError when the LP is infeasible.
AlgAResult solve_alg_a(const Truss& truss, const FunctionalSpec& spec,
                       const AlgAOptions& opts = {});

// Writes densities, areas and governing cases back onto the bars.
void apply_alg_a(Truss& truss, const AlgAResult& result);

}  // namespace trussforge
