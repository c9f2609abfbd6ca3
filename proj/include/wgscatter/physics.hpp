#pragma once

// Units, constants and the single-particle quantities shared by every other
// part of the solver. Everything is SI, double precision.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wgscatter {

using Complex = std::complex<double>;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double atomic_mass_unit = 1.66053907e-27; // kg
inline constexpr double neon_mass_u = 20.1797;
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

/// Raised when a problem description violates a documented invariant.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a linear-algebra step cannot deliver a trustworthy result
/// (singular matching system, eigensolver failure, quadrature failure).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class InternalState { ground, excited };

std::string_view to_string(InternalState s);
InternalState parse_internal_state(std::string_view s);

/// (internal state, transverse mode). Mode numbers are 1-based.
struct Channel {
  InternalState internal = InternalState::ground;
  int mode_n = 1;

  /// 0-based position in the 2N channel vector: g-block first, then e-block.
  [[nodiscard]] std::size_t index(int truncation_N) const;
  [[nodiscard]] static Channel from_index(std::size_t index, int truncation_N);

  friend bool operator==(const Channel &, const Channel &) = default;
};

std::string to_string(const Channel &c);

struct AtomSpec {
  double mass = constants::neon_mass_u * constants::atomic_mass_unit; // kg

  static AtomSpec neon() { return {}; }
  static AtomSpec from_mass_u(double mass_u);
  void validate() const;
};

struct WaveguideSpec {
  double width_a = 1e-6; // m
  void validate() const;
};

struct LaserSpec {
  double rabi_frequency_omega = 0.0; // rad/s
  double wavenumber_kL = 0.0;        // rad/m
  double region_length_L = 1e-6;     // m

  /// Laser wavenumber for a given transverse coupling parameter chi = kL a / pi.
  static double wavenumber_for_chi(double chi, double width_a);
  void validate() const;
};

struct IncidenceSpec {
  double incident_velocity_v = 0.1; // m/s, longitudinal
  Channel incident_channel{};
  void validate() const;
};

struct ModelConfig {
  int truncation_N = 6;
  void validate() const;
};

/// Hard-wall transverse energy hbar^2 (n pi / a)^2 / (2 m).
double transverse_energy(int n, double width_a, double mass);

/// Total energy fixed by the incident channel: m v^2 / 2 + E_{n0}.
double total_energy(const IncidenceSpec &inc, const AtomSpec &atom,
                    const WaveguideSpec &guide);

/// Longitudinal wavenumber sqrt(2 m (E - E_n)) / hbar on the branch with
/// Re k >= 0 and Im k >= 0: real for open channels, positive imaginary for
/// closed ones, exactly zero at threshold.
Complex longitudinal_wavenumber(double energy, double transverse_energy,
                                double mass);

/// Same branch convention applied to a longitudinal kinetic energy.
Complex wavenumber_from_kinetic(double kinetic_energy, double mass);

/// chi = kL a / pi.
double chi(double wavenumber_kL, double width_a);
/// Lamb-Dicke parameter eta = kL a.
double lamb_dicke_eta(double wavenumber_kL, double width_a);

} // namespace wgscatter
