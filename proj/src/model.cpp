#include "trussforge/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace trussforge {

const char* to_string(JointKind k) {
  switch (k) {
    case JointKind::Support: return "support";
    case JointKind::Loaded: return "loaded";
    case JointKind::Intermediate: return "intermediate";
  }
  return "?";
}

bool Joint::has_nonzero_load() const {
  for (const auto& f : loads) {
    if (f.norm() > 0.0) return true;
  }
  return false;
}

int Truss::joint_index(int id) const {
  // Joints are kept in ascending id order by every producer; fall back to a
  // linear scan if an operation left them unsorted.
  int lo = 0, hi = static_cast<int>(joints.size()) - 1;
  while (lo <= hi) {
    const int mid = (lo + hi) / 2;
    if (joints[mid].id == id) return mid;
    if (joints[mid].id < id)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  for (int i = 0; i < static_cast<int>(joints.size()); ++i) {
    if (joints[i].id == id) return i;
  }
  return -1;
}

const Joint& Truss::joint(int id) const {
  const int idx = joint_index(id);
  if (idx < 0) throw std::out_of_range("no joint with id " + std::to_string(id));
  return joints[idx];
}

Joint& Truss::joint(int id) {
  const int idx = joint_index(id);
  if (idx < 0) throw std::out_of_range("no joint with id " + std::to_string(id));
  return joints[idx];
}

bool Truss::has_bar(int a, int b) const {
  for (const auto& bar : bars) {
    if ((bar.j1 == a && bar.j2 == b) || (bar.j1 == b && bar.j2 == a)) return true;
  }
  return false;
}

int Truss::next_joint_id() const {
  int m = -1;
  for (const auto& j : joints) m = std::max(m, j.id);
  return m + 1;
}

std::unordered_map<int, int> Truss::build_joint_index() const {
  std::unordered_map<int, int> map;
  map.reserve(joints.size());
  for (int i = 0; i < static_cast<int>(joints.size()); ++i) map[joints[i].id] = i;
  return map;
}

namespace {

std::string joint_label(const Joint& j) {
  std::ostringstream os;
  os << "joint " << j.id << " (" << to_string(j.kind) << ")";
  return os.str();
}

}  // namespace

std::vector<Violation> validate_spec(const FunctionalSpec& spec) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  if (spec.dimension != 2 && spec.dimension != 3)
    add("bad_dimension", "dimension must be 2 or 3");
  if (spec.load_cases < 1) add("bad_load_cases", "load_cases must be >= 1");

  bool any_support = false;
  std::set<int> ids;
  for (const auto& j : spec.joints) {
    if (!ids.insert(j.id).second)
      add("duplicate_id", joint_label(j) + ": duplicate id");
    if (j.kind == JointKind::Intermediate)
      add("intermediate_in_spec",
          joint_label(j) + ": spec may contain support/loaded joints only");
    if (j.kind == JointKind::Support) any_support = true;
    if (!j.pos.allFinite())
      add("nonfinite_position", joint_label(j) + ": position not finite");
    else if (!spec.region.contains(j.pos, spec.dimension))
      add("outside_region", joint_label(j) + ": outside the design region");
    if (static_cast<int>(j.loads.size()) != spec.load_cases)
      add("load_count", joint_label(j) + ": expected " +
                            std::to_string(spec.load_cases) + " load vectors, got " +
                            std::to_string(j.loads.size()));
    if (j.kind == JointKind::Loaded && !j.has_nonzero_load())
      add("loaded_without_load",
          joint_label(j) + ": loaded joint has no nonzero force in any case");
    if (spec.dimension == 2) {
      if (std::abs(j.pos.z()) > 0.0)
        add("z_in_2d", joint_label(j) + ": nonzero z coordinate in a 2D spec");
      for (const auto& f : j.loads) {
        if (std::abs(f.z()) > 0.0)
          add("z_in_2d", joint_label(j) + ": nonzero z load in a 2D spec");
      }
    }
  }
  if (spec.sigma <= 0.0) add("bad_sigma", "sigma must be positive");

  if (!any_support && !spec.joints.empty()) {
    // No supports: every case must be self-equilibrated in force and torque.
    for (int k = 0; k < spec.load_cases; ++k) {
      Vec3 force_sum = Vec3::Zero();
      Vec3 torque_sum = Vec3::Zero();
      double max_load = 0.0;
      for (const auto& j : spec.joints) {
        if (k >= static_cast<int>(j.loads.size())) continue;
        force_sum += j.loads[k];
        torque_sum += j.pos.cross(j.loads[k]);
        max_load = std::max(max_load, j.loads[k].norm());
      }
      const double tol = 1e-9 * std::max(max_load, 1e-300);
      if (force_sum.norm() > tol)
        add("unbalanced_forces", "case " + std::to_string(k) +
                                     ": unbalanced forces (no support present)");
      const double torque_scale = tol;  // loads are O(max_load), arms O(1) model units
      if (torque_sum.norm() > torque_scale * 10.0)
        add("unbalanced_torques", "case " + std::to_string(k) +
                                      ": unbalanced torques (no support present)");
    }
  }
  return out;
}

std::vector<Violation> validate_truss(const Truss& truss) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };
  std::set<int> ids;
  for (const auto& j : truss.joints) {
    if (!ids.insert(j.id).second)
      add("duplicate_id", "duplicate joint id " + std::to_string(j.id));
    if (!j.pos.allFinite())
      add("nonfinite_position", joint_label(j) + ": position not finite");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& b : truss.bars) {
    if (b.j1 == b.j2) {
      add("self_loop", "bar (" + std::to_string(b.j1) + "," + std::to_string(b.j2) +
                           ") is a self loop");
      continue;
    }
    if (!ids.count(b.j1) || !ids.count(b.j2)) {
      add("dangling_bar", "bar (" + std::to_string(b.j1) + "," +
                              std::to_string(b.j2) + ") references a missing joint");
      continue;
    }
    auto key = std::minmax(b.j1, b.j2);
    if (!seen.insert(key).second)
      add("duplicate_bar", "bar (" + std::to_string(key.first) + "," +
                               std::to_string(key.second) + ") appears twice");
    if (truss.bar_length(b) <= 0.0)
      add("zero_length_bar", "bar (" + std::to_string(b.j1) + "," +
                                 std::to_string(b.j2) + ") has zero length");
    if (b.area < 0.0)
      add("negative_area", "bar (" + std::to_string(b.j1) + "," +
                               std::to_string(b.j2) + ") has negative area");
  }
  return out;
}

double total_volume(const Truss& truss) {
  double v = 0.0;
  for (const auto& b : truss.bars) v += truss.bar_length(b) * b.area;
  return v;
}

void OptimizationReport::add_phase(std::string label, const Truss& t,
                                   double seconds) {
  phases.push_back({std::move(label), static_cast<int>(t.bars.size()),
                    total_volume(t), seconds});
}

void OptimizationReport::merge_ops(const std::map<std::string, int>& counts) {
  for (const auto& [k, v] : counts) op_counts[k] += v;
}

}  // namespace trussforge
