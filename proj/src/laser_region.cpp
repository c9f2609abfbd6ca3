#include "wgscatter/laser_region.hpp"

#include "wgscatter/analytics.hpp"
#include "wgscatter/parallel.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wgscatter {
namespace {

using constants::hbar;

constexpr double kOverlapTieTolerance = 1e-6;
constexpr double kHermiticityTolerance = 1e-10;
// Relative to |E|; eigenvalue rounding of the gap stays well below this.
constexpr double kGapFloor = 1e-10;

void fix_phase(ComplexMatrix &vectors) {
  for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
    auto v = vectors.col(col);
    const double largest = v.cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) >= largest * (1.0 - 1e-9)) {
        pick = i;
        break;
      }
    }
    const Complex phase = std::conj(v(pick)) / std::abs(v(pick));
    v *= phase;
    v(pick) = std::abs(v(pick));
  }
}

struct PointSpectrum {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

PointSpectrum spectrum_at(const EMatrixSpec &base, double mass, double omega) {
  EMatrixSpec spec = base;
  spec.rabi_frequency = omega;
  auto sys = diagonalize(build_e_matrix(spec), mass);
  return {std::move(sys.eigenvalues), std::move(sys.eigenvectors)};
}

// Greedy maximal-overlap assignment prev index -> next index.
std::vector<int> assign_by_overlap(const PointSpectrum &prev,
                                   const PointSpectrum &next, double omega) {
  const auto n = static_cast<int>(prev.values.size());
  const Eigen::MatrixXd overlap =
      (prev.vectors.adjoint() * next.vectors).cwiseAbs();

  struct Candidate {
    double value;
    int row;
    int col;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      candidates.push_back({overlap(i, j), i, j});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &a, const Candidate &b) {
                     return a.value > b.value;
                   });

  std::vector<int> assigned(n, -1);
  std::vector<bool> taken(n, false);
  for (const auto &c : candidates) {
    if (assigned[c.row] >= 0 || taken[c.col])
      continue;
    int best = c.col;
    bool tie = false;
    for (int j = 0; j < n; ++j) {
      if (j == c.col || taken[j])
        continue;
      if (overlap(c.row, j) > c.value - kOverlapTieTolerance) {
        tie = true;
        if (std::abs(next.values(j) - prev.values(c.row)) <
            std::abs(next.values(best) - prev.values(c.row)))
          best = j;
      }
    }
    if (tie)
      spdlog::debug("ambiguous level assignment at Omega={:.6e}: level {} -> "
                    "{} by eigenvalue proximity",
                    omega, c.row, best);
    assigned[c.row] = best;
    taken[best] = true;
  }
  return assigned;
}

double square(double x) { return x * x; }

// Eigenvectors of the mode-diagonal part of the operator (intermode
// coupling dropped), columns ordered by level label (1,+), (1,-), (2,+), ...
ComplexMatrix mode_diagonal_references(const CouplingMatrices &c) {
  const int N = c.size();
  ComplexMatrix refs = ComplexMatrix::Zero(2 * N, 2 * N);
  const double s = 1.0 / std::sqrt(2.0);
  for (int n = 1; n <= N; ++n) {
    const Complex cm = c.c_minus(n - 1, n - 1);
    const Complex u = std::abs(cm) > 0.0 ? cm / std::abs(cm) : Complex(1.0);
    for (int branch : {+1, -1}) {
      const int label = level_label(n, branch);
      refs(n - 1, label) = -static_cast<double>(branch) * u * s;
      refs(N + n - 1, label) = s;
    }
  }
  return refs;
}

} // namespace

std::string_view to_string(CrossingClass c) {
  return c == CrossingClass::permitted ? "permitted" : "avoided";
}

EMatrixSpec EMatrixSpec::make(double energy, double omega, int N, double chi,
                              double width_a, double mass) {
  EMatrixSpec spec;
  spec.total_energy_E = energy;
  spec.rabi_frequency = omega;
  spec.transverse_energies.resize(N);
  for (int n = 1; n <= N; ++n)
    spec.transverse_energies[n - 1] = transverse_energy(n, width_a, mass);
  spec.coupling = coupling_matrices(N, chi);
  return spec;
}

ComplexMatrix build_e_matrix(const EMatrixSpec &spec) {
  const int N = spec.size();
  if (spec.coupling.c_plus.rows() != N || spec.coupling.c_plus.cols() != N ||
      spec.coupling.c_minus.rows() != N || spec.coupling.c_minus.cols() != N)
    throw ConfigError("coupling matrices are " +
                      std::to_string(spec.coupling.c_plus.rows()) + "x" +
                      std::to_string(spec.coupling.c_plus.cols()) +
                      " but there are " + std::to_string(N) +
                      " transverse energies");
  const double half = 0.5 * hbar * spec.rabi_frequency;
  ComplexMatrix m = ComplexMatrix::Zero(2 * N, 2 * N);
  for (int n = 0; n < N; ++n) {
    const double diag = spec.total_energy_E - spec.transverse_energies[n];
    m(n, n) = diag;
    m(N + n, N + n) = diag;
  }
  m.topRightCorner(N, N) = -half * spec.coupling.c_minus;
  m.bottomLeftCorner(N, N) = -half * spec.coupling.c_plus;
  return m;
}

LaserEigensystem diagonalize(const ComplexMatrix &matrix, double mass) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw ConfigError("diagonalize needs a non-empty square matrix");
  const double scale = matrix.cwiseAbs().maxCoeff();
  const double residual = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (residual > kHermiticityTolerance * scale)
    throw NumericalError("matrix is not Hermitian (residual " +
                         std::to_string(residual / scale) + " relative)");

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw NumericalError("Hermitian eigensolver failed to converge");

  const auto n = matrix.rows();
  LaserEigensystem sys;
  sys.eigenvalues = solver.eigenvalues().reverse();
  sys.eigenvectors = solver.eigenvectors().rowwise().reverse();
  fix_phase(sys.eigenvectors);
  sys.wavenumbers.resize(n);
  for (Eigen::Index a = 0; a < n; ++a)
    sys.wavenumbers(a) = wavenumber_from_kinetic(sys.eigenvalues(a), mass);
  return sys;
}

LevelDiagram sweep_levels(const EMatrixSpec &base, double mass,
                          std::span<const double> omega_grid, int jobs) {
  if (omega_grid.empty())
    throw ConfigError("level sweep needs at least one Omega value");
  const int N = base.size();
  const int levels = 2 * N;
  const std::size_t points = omega_grid.size();

  std::vector<PointSpectrum> spectra(points);
  parallel_for(points, jobs, [&](std::size_t k) {
    spectra[k] = spectrum_at(base, mass, omega_grid[k]);
  });

  // A zero-Omega start is exactly degenerate in every (g_n, e_n) pair; the
  // zero-coupling eigenvectors are a valid basis there and fix the labels.
  if (omega_grid[0] == 0.0) {
    auto &s = spectra[0];
    for (int label = 0; label < levels; ++label) {
      const int n = label_mode(label);
      s.values(label) = base.total_energy_E - base.transverse_energies[n - 1];
      s.vectors.col(label) =
          analytics::nocoupling_eigenvector(n, label_branch(label), N);
    }
  }

  LevelDiagram d;
  d.omega_grid.assign(omega_grid.begin(), omega_grid.end());
  d.base = base;
  d.mass = mass;
  d.levels.assign(points, std::vector<double>(levels));
  d.sorted_position.assign(points, std::vector<int>(levels));
  d.track_permutations.reserve(points > 0 ? points - 1 : 0);

  std::vector<int> position(levels);
  std::iota(position.begin(), position.end(), 0);
  for (std::size_t k = 0; k < points; ++k) {
    if (k > 0) {
      auto step = assign_by_overlap(spectra[k - 1], spectra[k], omega_grid[k]);
      for (auto &p : position)
        p = step[p];
      d.track_permutations.push_back(std::move(step));
    }
    for (int label = 0; label < levels; ++label) {
      d.sorted_position[k][label] = position[label];
      d.levels[k][label] = spectra[k].values(position[label]);
    }
  }
  return d;
}

LevelDiagram sweep_levels(const EMatrixSpec &base, double mass,
                          double omega_min, double omega_max, int grid_points,
                          int jobs) {
  if (omega_min == omega_max) {
    const double single = omega_min;
    return sweep_levels(base, mass, std::span<const double>(&single, 1), jobs);
  }
  if (grid_points < 2)
    throw ConfigError("level sweep needs at least 2 grid points");
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k)
    grid[k] = omega_min + (omega_max - omega_min) * k / (grid_points - 1);
  grid.back() = omega_max;
  return sweep_levels(base, mass, std::span<const double>(grid), jobs);
}

double adjacent_gap(const EMatrixSpec &base, double omega, int p) {
  EMatrixSpec spec = base;
  spec.rabi_frequency = omega;
  const Eigen::VectorXd values =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(build_e_matrix(spec),
                                                   Eigen::EigenvaluesOnly)
          .eigenvalues()
          .reverse();
  return values(p) - values(p + 1);
}

std::vector<Crossing> detect_crossings(const LevelDiagram &diagram,
                                       double chi_value,
                                       const CrossingOptions &options) {
  std::vector<Crossing> found;
  const auto &grid = diagram.omega_grid;
  const std::size_t points = grid.size();
  if (points < 3)
    return found;
  const int levels = diagram.level_count();
  const int N = diagram.base.size();
  const double energy = diagram.base.total_energy_E;

  // Descending spectra are recovered from the tracked levels.
  std::vector<std::vector<double>> sorted(points, std::vector<double>(levels));
  for (std::size_t k = 0; k < points; ++k)
    for (int label = 0; label < levels; ++label)
      sorted[k][diagram.sorted_position[k][label]] = diagram.levels[k][label];

  const double slope_threshold = options.flank_slope * hbar;
  const auto gap_at = [&](std::size_t k, int p) {
    return sorted[k][p] - sorted[k][p + 1];
  };

  for (int p = 0; p + 1 < levels; ++p) {
    for (std::size_t k = 1; k + 1 < points; ++k) {
      const double g = gap_at(k, p);
      if (!(g < gap_at(k - 1, p) && g <= gap_at(k + 1, p)))
        continue;

      // Both flanks must open up at a finite rate; parallel levels only
      // produce rounding-level minima.
      double left_slope = 0.0;
      for (std::size_t i = k; i > 0 && gap_at(i - 1, p) > gap_at(i, p); --i)
        left_slope = std::max(left_slope, (gap_at(i - 1, p) - gap_at(i, p)) /
                                              (grid[i] - grid[i - 1]));
      double right_slope = 0.0;
      for (std::size_t i = k; i + 1 < points && gap_at(i + 1, p) > gap_at(i, p); ++i)
        right_slope = std::max(right_slope, (gap_at(i + 1, p) - gap_at(i, p)) /
                                                (grid[i + 1] - grid[i]));
      if (left_slope < slope_threshold || right_slope < slope_threshold)
        continue;

      // Golden-section refinement of the sorted-pair gap on the bracket.
      const auto f = [&](double w) {
        return adjacent_gap(diagram.base, w, p);
      };
      const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
      double lo = grid[k - 1];
      double hi = grid[k + 1];
      double x1 = hi - ratio * (hi - lo);
      double x2 = lo + ratio * (hi - lo);
      double f1 = f(x1);
      double f2 = f(x2);
      const double tol = options.omega_rel_tolerance * std::max(std::abs(grid[k]), 1.0);
      while (hi - lo > tol) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - ratio * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + ratio * (hi - lo);
          f2 = f(x2);
        }
      }
      double omega_star = f1 < f2 ? x1 : x2;
      double min_gap = std::min(f1, f2);

      // Two-level closing gap^2 = gap*^2 + s^2 (w - w*)^2 is a parabola in w;
      // its vertex resolves gaps far below the bracket width.
      {
        const double ta = lo - omega_star;
        const double tc = hi - omega_star;
        const double yb = square(min_gap);
        const double da = (square(f(lo)) - yb) / ta;
        const double dc = (square(f(hi)) - yb) / tc;
        if (ta < 0.0 && tc > 0.0) {
          const double A = (da - dc) / (ta - tc);
          const double B = da - A * ta;
          if (A > 0.0) {
            const double vertex = -B / (2.0 * A);
            if (vertex >= ta && vertex <= tc) {
              omega_star += vertex;
              min_gap = std::min(min_gap, std::sqrt(std::max(0.0, yb - B * B / (4.0 * A))));
            }
          }
        }
      }

      Crossing c;
      c.position = p;
      c.omega_star = omega_star;
      c.min_gap = min_gap;
      // Tracked labels occupying positions p and p+1 at the grid minimum.
      for (int label = 0; label < levels; ++label) {
        if (diagram.sorted_position[k][label] == p)
          c.levels.first = label;
        if (diagram.sorted_position[k][label] == p + 1)
          c.levels.second = label;
      }

      // Zeroth-order label: the two mode-diagonal states carrying most of the
      // weight of the crossing pair at omega*. Falls back to the nearest
      // resonance (E_n' - E_n)/hbar when both belong to one mode.
      std::pair<int, int> by_overlap{0, 0};
      {
        const PointSpectrum at = spectrum_at(diagram.base, diagram.mass, omega_star);
        const ComplexMatrix refs = mode_diagonal_references(diagram.base.coupling);
        const Eigen::VectorXd weight =
            (refs.adjoint() * at.vectors.col(p)).cwiseAbs2() +
            (refs.adjoint() * at.vectors.col(p + 1)).cwiseAbs2();
        Eigen::Index first = 0;
        weight.maxCoeff(&first);
        Eigen::VectorXd rest = weight;
        rest(first) = -1.0;
        Eigen::Index second = 0;
        rest.maxCoeff(&second);
        const int na = label_mode(static_cast<int>(first));
        const int nb = label_mode(static_cast<int>(second));
        if (na != nb)
          by_overlap = {std::min(na, nb), std::max(na, nb)};
      }

      const double eps_star = 0.5 * (sorted[k][p] + sorted[k][p + 1]);
      double best = std::numeric_limits<double>::infinity();
      double best_odd = std::numeric_limits<double>::infinity();
      double odd_gap = 0.0;
      for (int n = 1; n <= N; ++n) {
        for (int n2 = n + 1; n2 <= N; ++n2) {
          const double w = (diagram.base.transverse_energies[n2 - 1] -
                            diagram.base.transverse_energies[n - 1]) / hbar;
          const double dw = std::abs(omega_star - w) / w;
          const double de =
              std::abs(eps_star - (energy - diagram.base.transverse_energies[n - 1] -
                                   0.5 * hbar * omega_star)) /
              std::abs(energy);
          const double score = dw + 1e-3 * de;
          if (score < best) {
            best = score;
            c.zeroth_order_label = {n, n2};
            c.predicted_omega = w;
          }
          if ((n + n2) % 2 == 1 && dw < best_odd) {
            best_odd = dw;
            odd_gap = analytics::splitting(n, n2, chi_value, omega_star);
          }
        }
      }

      if (by_overlap.first != 0) {
        c.zeroth_order_label = by_overlap;
        c.predicted_omega = (diagram.base.transverse_energies[by_overlap.second - 1] -
                             diagram.base.transverse_energies[by_overlap.first - 1]) /
                            hbar;
      }
      c.permitted_threshold = std::max(kGapFloor * std::abs(energy), 0.05 * odd_gap);
      c.classification = c.min_gap < c.permitted_threshold
                             ? CrossingClass::permitted
                             : CrossingClass::avoided;
      found.push_back(c);
    }
  }
  std::sort(found.begin(), found.end(), [](const Crossing &a, const Crossing &b) {
    return a.omega_star < b.omega_star;
  });
  return found;
}

} // namespace wgscatter
