#include "trussforge/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace trussforge {

int EquilibriumSystem::row_of(int joint_id, int axis) const {
  for (int r = 0; r < num_rows; ++r) {
    if (row_meta[r].first == joint_id && row_meta[r].second == axis) return r;
  }
  return -1;
}

double EquilibriumSystem::residual(const std::vector<double>& w,
                                   int load_case) const {
  if (load_case < 0 || load_case >= static_cast<int>(loads.size()))
    throw std::out_of_range("load case out of range");
  Eigen::VectorXd r = loads[load_case];
  for (int b = 0; b < static_cast<int>(columns.size()); ++b) {
    for (const auto& e : columns[b]) r[e.row] += e.value * w[b];
  }
  return r.size() == 0 ? 0.0 : r.template lpNorm<Eigen::Infinity>();
}

EquilibriumSystem assemble_C(const Truss& truss, const FunctionalSpec& spec) {
  EquilibriumSystem sys;
  sys.dimension = truss.dimension;
  const int d = truss.dimension;

  std::unordered_map<int, int> first_row;  // joint id -> first of its d rows
  for (const auto& j : truss.joints) {
    if (j.kind == JointKind::Support) continue;
    first_row[j.id] = sys.num_rows;
    for (int a = 0; a < d; ++a) sys.row_meta.emplace_back(j.id, a);
    sys.num_rows += d;
  }

  sys.columns.resize(truss.bars.size());
  for (int b = 0; b < static_cast<int>(truss.bars.size()); ++b) {
    const Bar& bar = truss.bars[b];
    const Vec3 p1 = truss.joint(bar.j1).pos;
    const Vec3 p2 = truss.joint(bar.j2).pos;
    if ((p2 - p1).norm() == 0.0)
      throw std::invalid_argument("bar with coincident endpoints");
    auto it1 = first_row.find(bar.j1);
    if (it1 != first_row.end()) {
      for (int a = 0; a < d; ++a)
        sys.columns[b].push_back({it1->second + a, p2[a] - p1[a]});
    }
    auto it2 = first_row.find(bar.j2);
    if (it2 != first_row.end()) {
      for (int a = 0; a < d; ++a)
        sys.columns[b].push_back({it2->second + a, p1[a] - p2[a]});
    }
  }

  sys.loads.resize(spec.load_cases);
  for (int k = 0; k < spec.load_cases; ++k) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(sys.num_rows);
    for (const auto& j : truss.joints) {
      auto it = first_row.find(j.id);
      if (it == first_row.end()) continue;
      if (k < static_cast<int>(j.loads.size())) {
        for (int a = 0; a < d; ++a) f[it->second + a] = j.loads[k][a];
      }
    }
    sys.loads[k] = std::move(f);
  }
  return sys;
}

Eigen::MatrixXd assemble_B(const Truss& truss, const FunctionalSpec& spec) {
  const EquilibriumSystem sys = assemble_C(truss, spec);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(sys.num_rows, truss.bars.size());
  for (int b = 0; b < static_cast<int>(truss.bars.size()); ++b) {
    const double len = truss.bar_length(truss.bars[b]);
    if (len == 0.0) throw std::invalid_argument("zero-length bar");
    for (const auto& e : sys.columns[b]) B(e.row, b) = e.value / len;
  }
  return B;
}

double equilibrium_residual(const Truss& truss, const FunctionalSpec& spec,
                            int load_case) {
  if (load_case < 0 || load_case >= spec.load_cases)
    throw std::out_of_range("load case out of range");
  const EquilibriumSystem sys = assemble_C(truss, spec);
  std::vector<double> w(truss.bars.size(), 0.0);
  for (int b = 0; b < static_cast<int>(truss.bars.size()); ++b) {
    const auto& fd = truss.bars[b].force_densities;
    if (load_case < static_cast<int>(fd.size())) w[b] = fd[load_case];
  }
  return sys.residual(w, load_case);
}

}  // namespace trussforge
