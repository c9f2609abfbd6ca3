#pragma once

// Experiment configuration: one TOML document plus dotted-key overrides.
//
//   [atom]       mass_u | mass_kg
//   [guide]      width
//   [laser]      omega, chi | kL, length
//   [incidence]  velocity, state, mode
//   [model]      N
//   [sweep.omega], [sweep.chi], [sweep.L]   min, max, points, scale | list
//   [converge]   N_list, N_reference
//   [coupling_scan] pairs
//   [levels]     populate
//   [crossings]  pair, window, points
//   [output]     path, layout, jobs, report
//
// Unknown keys are rejected. Every key can be overridden from the command
// line; overrides win over the file.

#include "wgscatter/physics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wgscatter {

enum class ExperimentKind {
  coupling_scan,
  levels,
  scatter,
  sweep_L,
  sweep_chi,
  converge,
  crossings
};

std::string_view to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(std::string_view s);

enum class GridScale { linear, log };

struct SweepRange {
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  GridScale scale = GridScale::linear;
  std::vector<double> list; // when non-empty, replaces min/max/points

  /// Grid values in sweep order. One point means min.
  [[nodiscard]] std::vector<double> values() const;
  void validate(std::string_view name) const;
};

enum class OutputLayout { long_form, wide };

struct OutputSpec {
  std::string path;   // empty: stdout
  std::string report; // crossing report for levels; empty: derived from path
  OutputLayout layout = OutputLayout::long_form;
  int jobs = 0;       // 0: number of logical processors
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::scatter;

  AtomSpec atom;
  WaveguideSpec guide;
  std::optional<double> omega;        // unset: per-experiment default
  double chi = 0.0;
  double region_length_L = 1e-6;
  IncidenceSpec incidence;
  int truncation_N = 6;

  std::optional<SweepRange> omega_sweep;
  std::optional<SweepRange> chi_sweep;
  std::optional<SweepRange> L_sweep;

  std::vector<int> N_list;
  std::optional<int> N_reference;
  std::vector<std::pair<int, int>> pairs;
  bool populate = false;
  std::pair<int, int> crossing_pair{1, 2};
  double crossing_window = 0.2; // relative half-width around the prediction
  int crossing_points = 401;

  OutputSpec output;

  /// Rabi frequency (E_n' - E_n) / hbar of a mode pair in this guide.
  [[nodiscard]] double resonance_omega(int n, int n2) const;
  /// The explicit omega, or the experiment default.
  [[nodiscard]] double effective_omega() const;
  [[nodiscard]] int effective_jobs() const;
  void validate() const;
};

/// Fills every unset experiment default (omega, sweep grids, mode pairs).
void resolve_defaults(ExperimentConfig &config);

/// Parses a TOML document, applies "dotted.key=value" overrides (values are
/// read as TOML, falling back to a bare string), resolves defaults and
/// validates.
ExperimentConfig load_config(ExperimentKind kind, std::string_view toml_text,
                             const std::vector<std::string> &overrides);

ExperimentConfig load_config_file(ExperimentKind kind, const std::string &path,
                                  const std::vector<std::string> &overrides);

/// Fully resolved parameters as ordered key/value pairs, for provenance.
std::vector<std::pair<std::string, std::string>>
describe(const ExperimentConfig &config);

} // namespace wgscatter
