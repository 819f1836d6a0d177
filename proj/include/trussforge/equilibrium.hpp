#pragma once

#include "trussforge/model.hpp"

#include <Eigen/Core>

#include <vector>

namespace trussforge {

// Nodal force balance in force-density form, restricted to free DOFs.
// Row (j, axis) for a non-support joint j reads
//   sum over incident bars (j,q):  (p_q - p_j)_axis * w_bar  =  -f_(j,axis)
// so a bar (a,b) contributes (p_b - p_a) at a's rows and (p_a - p_b) at b's.
// Support rows are dropped; reactions are never variables.
struct EquilibriumSystem {
  struct Entry {
    int row;
    double value;
  };

  int num_rows = 0;                         // free DOFs (= d * non-support joints)
  int dimension = 2;
  std::vector<std::vector<Entry>> columns;  // one column of C^T per bar
  std::vector<Eigen::VectorXd> loads;       // f^k restricted to free DOFs
  std::vector<std::pair<int, int>> row_meta;  // row -> (joint id, axis)

  int row_of(int joint_id, int axis) const;  // -1 for support DOFs

  // ||C^T w + f^k||_inf for the given densities.
  double residual(const std::vector<double>& w, int load_case) const;
};

EquilibriumSystem assemble_C(const Truss& truss, const FunctionalSpec& spec);

// Direction-cosine variant: columns of C divided by bar length, as a dense
// (rows x bars) matrix. B^T s = C^T w whenever s = w * l elementwise.
Eigen::MatrixXd assemble_B(const Truss& truss, const FunctionalSpec& spec);

}  // namespace trussforge
