#pragma once

// Mode matching at x = 0 and x = L for a single incident channel.
//
// Outside the laser: psi_c(x <= 0) = delta_{c,c0} e^{i k_c x} + R_c e^{-i k_c x}
//                    psi_c(x >= L) = T~_c e^{i k_c (x - L)},  T~_c = T_c e^{i k_c L}
// Inside:            psi(x) = sum_a [A_a e^{i q_a x} + B~_a e^{i q_a (L - x)}] |eps_a>
//
// Both interior exponentials stay bounded by one for Im q >= 0, which keeps
// the 8N x 8N system well scaled even when kappa L is huge.

#include "wgscatter/laser_region.hpp"
#include "wgscatter/physics.hpp"

#include <optional>
#include <vector>

namespace wgscatter {

struct ScatteringProblem {
  AtomSpec atom;
  WaveguideSpec guide;
  LaserSpec laser;
  IncidenceSpec incidence;
  ModelConfig config;
  // When set, replaces the energy derived from the incident velocity.
  std::optional<double> total_energy_override;

  [[nodiscard]] double energy() const;
  [[nodiscard]] double chi() const;
  /// Throws ConfigError on any violated invariant, including a channel
  /// within relative 1e-9 of threshold and a closed incident channel.
  void validate() const;
};

struct ChannelProbability {
  Channel channel;
  bool open = false;
  double reflection = 0.0;   // |R|^2 Re(k_c)/k_c0, zero when closed
  double transmission = 0.0; // |T|^2 Re(k_c)/k_c0, zero when closed
  double reflection_modulus = 0.0;
  double transmission_modulus = 0.0; // |T~| for closed channels
};

struct ScatteringSolution {
  int truncation_N = 0;
  double energy = 0.0;
  double length_L = 0.0;
  std::size_t incident_index = 0;
  ComplexVector channel_wavenumbers; // k_c
  ComplexVector reflection;          // R
  ComplexVector transmission;        // T for open channels, T~ for closed
  ComplexVector transmission_tilde;  // T~
  ComplexVector forward;             // A
  ComplexVector backward_rescaled;   // B~
  LaserEigensystem eigensystem;
  std::vector<ChannelProbability> probabilities;
  double unitarity_deficit = 0.0;
  double condition_estimate = 0.0; // 1 / rcond of the matching matrix

  [[nodiscard]] const ChannelProbability &probability(const Channel &c) const {
    return probabilities.at(c.index(truncation_N));
  }
  /// B_a of the raw e^{-i q x} parametrization; overflows for strongly
  /// evanescent modes.
  [[nodiscard]] ComplexVector backward_raw() const;
};

/// Condition-number ceiling (1/rcond) of the matching system.
inline constexpr double kMaxConditionEstimate = 1e12;
inline constexpr double kThresholdMargin = 1e-9;

ScatteringSolution solve(const ScatteringProblem &problem);

/// Same, with an already assembled laser-region operator for the problem.
ScatteringSolution solve(const ScatteringProblem &problem,
                         const EMatrixSpec &region);

std::vector<ChannelProbability> channel_probabilities(const ScatteringSolution &s);
double unitarity_deficit(const ScatteringSolution &s);

/// Residuals of the four matching blocks when the solution is substituted
/// back, relative to the unit incident amplitude (derivative blocks scaled
/// by k_c0).
double matching_residual(const ScatteringSolution &s);

/// |psi_c(x)|^2 inside the laser region.
double interior_population(const ScatteringSolution &s, double x,
                           const Channel &channel);

/// Flux-weighted share of each interior eigenmode (descending eigenvalue
/// order), normalized to one; all zero when no interior mode propagates.
std::vector<double> level_populations(const ScatteringSolution &s);

} // namespace wgscatter
