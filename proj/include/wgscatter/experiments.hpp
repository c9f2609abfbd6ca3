#pragma once

// Configuration-driven runs. Each returns the rendered primary output (CSV or
// JSON) together with the largest unitarity deficit seen, so the caller can
// decide the exit status. Sweep points are computed on a worker pool and
// emitted in sweep order.

#include "wgscatter/config.hpp"
#include "wgscatter/laser_region.hpp"
#include "wgscatter/scattering.hpp"

#include <string>
#include <vector>

namespace wgscatter {

/// Deficits above this make the runner report an invariant violation.
inline constexpr double kMaxUnitarityDeficit = 1e-8;

struct ExperimentResult {
  std::string text;   // CSV or JSON
  std::string report; // crossing report of a levels run, empty otherwise
  bool scattering = false;
  double max_unitarity_deficit = 0.0;
  std::vector<std::string> diagnostics;

  [[nodiscard]] bool unitarity_ok() const {
    return !scattering || max_unitarity_deficit <= kMaxUnitarityDeficit;
  }
};

ScatteringProblem make_problem(const ExperimentConfig &config, double omega,
                               double chi, double length_L, int N);

ExperimentResult run_coupling_scan(const ExperimentConfig &config);
ExperimentResult run_converge(const ExperimentConfig &config);
ExperimentResult run_levels(const ExperimentConfig &config);
ExperimentResult run_scatter(const ExperimentConfig &config);
ExperimentResult run_sweep_L(const ExperimentConfig &config);
ExperimentResult run_sweep_chi(const ExperimentConfig &config);
ExperimentResult run_crossings(const ExperimentConfig &config);

ExperimentResult run_experiment(const ExperimentConfig &config);

/// Energy splittings around a crossing at omega*: the spectator level
/// eps_{n,+} against the upper and lower crossing levels, and upper - lower.
struct SplittingScales {
  double spectator = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  [[nodiscard]] double spectator_upper() const { return spectator - upper; }
  [[nodiscard]] double spectator_lower() const { return spectator - lower; }
  [[nodiscard]] double upper_lower() const { return upper - lower; }
};

SplittingScales splitting_scales(const LevelDiagram &diagram, const Crossing &c);

} // namespace wgscatter
