#pragma once

#include "trussforge/geometry.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace trussforge {

enum class JointKind { Support, Loaded, Intermediate };

const char* to_string(JointKind k);

struct Joint {
  int id = -1;
  Vec3 pos = Vec3::Zero();
  JointKind kind = JointKind::Intermediate;
  // One force vector per load case; zero vectors allowed. Intermediate
  // joints carry all-zero loads.
  std::vector<Vec3> loads;

  bool has_nonzero_load() const;
};

struct Bar {
  int j1 = -1, j2 = -1;  // joint ids, ordered (orientation j1 -> j2)
  double area = 0.0;
  // Force density w^k = s^k / l per load case. Sign convention: w > 0 is
  // compression, w < 0 tension; declared once here, every module obeys it.
  std::vector<double> force_densities;
  int governing_case = 0;  // 0-based index of the case with max |w^k| * l

  double governing_density() const {
    return force_densities.empty() ? 0.0 : force_densities[governing_case];
  }
};

struct DesignRegion {
  AlignedBox bounds;
  std::vector<AlignedBox> obstacles;

  bool contains(const Vec3& p, int dim) const {
    if (!bounds.contains(p, dim)) return false;
    for (const auto& ob : obstacles) {
      if (ob.strictly_inside(p, dim)) return false;
    }
    return true;
  }
};

struct PipelineParams {
  int grid_n = 0;        // 0 -> default: number of spec joints
  int phase1_rounds = 5;  // P_max1
  int subdiv_levels = 3;  // P_max2
  int alp_max_iters = 500;   // N_max
  int line_search_max = 10;  // S_max
  double prune_factor = 0.002;  // eps1, times mean cross-section
  double merge_factor = 0.01;   // eps2, times mean spec-joint distance
  bool stabilize = false;
};

struct FunctionalSpec {
  int dimension = 2;
  std::vector<Joint> joints;  // Support / Loaded joints only
  int load_cases = 1;
  DesignRegion region;
  double sigma = 1.0;
  PipelineParams params;
};

struct Truss {
  int dimension = 2;
  std::vector<Joint> joints;
  std::vector<Bar> bars;

  int joint_index(int id) const;  // -1 when absent
  const Joint& joint(int id) const;
  Joint& joint(int id);
  bool has_joint(int id) const { return joint_index(id) >= 0; }
  bool has_bar(int a, int b) const;
  int next_joint_id() const;

  double bar_length(const Bar& b) const {
    return (joint(b.j2).pos - joint(b.j1).pos).norm();
  }
  Vec3 bar_direction(const Bar& b) const {
    return (joint(b.j2).pos - joint(b.j1).pos).normalized();
  }

  std::unordered_map<int, int> build_joint_index() const;
};

struct Violation {
  std::string code;
  std::string message;
};

// Empty iff the spec satisfies every structural invariant: joint kinds,
// finite in-region positions, per-joint load-case counts, loaded joints
// actually loaded, and (when no support exists) per-case self-equilibrium
// of forces and torques within 1e-9 relative tolerance.
std::vector<Violation> validate_spec(const FunctionalSpec& spec);

// Structural sanity of a truss (duplicate bars, dangling endpoints,
// zero-length bars); used by tests and by the CLI `check` subcommand.
std::vector<Violation> validate_truss(const Truss& truss);

double total_volume(const Truss& truss);

// Max-norm of C^T w + f over free (non-support) degrees of freedom for one
// load case. Declared here with the other basic measures; implemented on
// top of the equilibrium assembly.
double equilibrium_residual(const Truss& truss, const FunctionalSpec& spec,
                            int load_case);

struct PhaseRecord {
  std::string label;
  int bars = 0;
  double volume = 0.0;
  double seconds = 0.0;
};

struct AlpTrace {
  std::string label;
  std::vector<double> volumes;  // accepted volumes, first entry = start
};

struct OptimizationReport {
  std::vector<PhaseRecord> phases;
  std::vector<AlpTrace> alp_traces;
  std::map<std::string, int> op_counts;

  void add_phase(std::string label, const Truss& t, double seconds);
  void merge_ops(const std::map<std::string, int>& counts);
};

}  // namespace trussforge
