#pragma once

// The laser-illuminated region: the Hermitian operator
//   E 1 - H_perp - W,   W = (hbar Omega / 2) [[0, C-], [C+, 0]],
// its eigenmodes, Omega sweeps with continuity tracking, and crossing
// detection.

#include "wgscatter/coupling.hpp"
#include "wgscatter/physics.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace wgscatter {

struct EMatrixSpec {
  double total_energy_E = 0.0;
  double rabi_frequency = 0.0;
  std::vector<double> transverse_energies; // E_1 .. E_N
  CouplingMatrices coupling;

  /// Spec for the Ne-style problem: E_n from the guide, C from chi.
  static EMatrixSpec make(double energy, double omega, int N, double chi,
                          double width_a, double mass);
  [[nodiscard]] int size() const {
    return static_cast<int>(transverse_energies.size());
  }
};

/// 2N x 2N matrix in the (g_1..g_N, e_1..e_N) channel ordering.
ComplexMatrix build_e_matrix(const EMatrixSpec &spec);

struct LaserEigensystem {
  Eigen::VectorXd eigenvalues; // J, descending
  ComplexMatrix eigenvectors;  // unit columns, largest component real > 0
  ComplexVector wavenumbers;   // q_alpha, Re >= 0, Im >= 0

  [[nodiscard]] int size() const { return static_cast<int>(eigenvalues.size()); }
};

LaserEigensystem diagonalize(const ComplexMatrix &matrix, double mass);

/// Level label <-> zeroth-order (n, branch). Labels are ordered as the
/// levels at small Omega: (1,+), (1,-), (2,+), (2,-), ...
inline int label_mode(int label) { return label / 2 + 1; }
inline int label_branch(int label) { return label % 2 == 0 ? +1 : -1; }
inline int level_label(int n, int branch) { return 2 * (n - 1) + (branch > 0 ? 0 : 1); }

struct LevelDiagram {
  std::vector<double> omega_grid;
  // levels[k][label]: tracked eigenvalue at grid point k.
  std::vector<std::vector<double>> levels;
  // sorted_position[k][label]: index into the descending spectrum at k.
  std::vector<std::vector<int>> sorted_position;
  // track_permutations[k][alpha]: descending index at k+1 assigned to the
  // descending index alpha at k.
  std::vector<std::vector<int>> track_permutations;
  // populations[k][label], filled by callers that solve the scattering problem.
  std::optional<std::vector<std::vector<double>>> populations;

  EMatrixSpec base; // rabi_frequency ignored
  double mass = 0.0;

  [[nodiscard]] int level_count() const { return 2 * base.size(); }
};

/// Tracks levels over an explicit Omega grid by greedy eigenvector overlap.
/// Independent diagonalizations are spread over `jobs` threads.
LevelDiagram sweep_levels(const EMatrixSpec &base, double mass,
                          std::span<const double> omega_grid, int jobs = 1);

/// Linear grid between omega_min and omega_max; a range of width zero is a
/// single diagonalization.
LevelDiagram sweep_levels(const EMatrixSpec &base, double mass,
                          double omega_min, double omega_max, int grid_points,
                          int jobs = 1);

enum class CrossingClass { permitted, avoided };
std::string_view to_string(CrossingClass c);

struct Crossing {
  std::pair<int, int> levels;        // tracked labels, upper first
  int position = 0;                  // descending index of the upper level
  double omega_star = 0.0;           // rad/s
  double min_gap = 0.0;              // J
  CrossingClass classification = CrossingClass::permitted;
  std::pair<int, int> zeroth_order_label{0, 0}; // (n, n'), n < n'
  double predicted_omega = 0.0;      // (E_n' - E_n) / hbar
  double permitted_threshold = 0.0;  // J
};

struct CrossingOptions {
  double omega_rel_tolerance = 1e-6;
  // Minimum |d gap / d Omega| on both flanks, in units of hbar.
  double flank_slope = 0.05;
};

/// Sorted-spectrum gap between descending positions p and p+1.
double adjacent_gap(const EMatrixSpec &base, double omega, int p);

std::vector<Crossing> detect_crossings(const LevelDiagram &diagram, double chi,
                                       const CrossingOptions &options = {});

} // namespace wgscatter
