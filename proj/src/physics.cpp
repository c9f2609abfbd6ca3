#include "wgscatter/physics.hpp"

#include <cmath>

namespace wgscatter {

std::string_view to_string(InternalState s) {
  return s == InternalState::ground ? "g" : "e";
}

InternalState parse_internal_state(std::string_view s) {
  if (s == "g" || s == "ground")
    return InternalState::ground;
  if (s == "e" || s == "excited")
    return InternalState::excited;
  throw ConfigError("internal state must be 'g' or 'e', got '" +
                    std::string(s) + "'");
}

std::size_t Channel::index(int truncation_N) const {
  if (mode_n < 1 || mode_n > truncation_N)
    throw ConfigError("channel mode " + std::to_string(mode_n) +
                      " outside truncation N=" + std::to_string(truncation_N));
  const auto offset = internal == InternalState::ground ? 0 : truncation_N;
  return static_cast<std::size_t>(offset + mode_n - 1);
}

Channel Channel::from_index(std::size_t index, int truncation_N) {
  const auto n = static_cast<std::size_t>(truncation_N);
  if (index >= 2 * n)
    throw ConfigError("channel index out of range");
  if (index < n)
    return {InternalState::ground, static_cast<int>(index) + 1};
  return {InternalState::excited, static_cast<int>(index - n) + 1};
}

std::string to_string(const Channel &c) {
  return std::string(to_string(c.internal)) + std::to_string(c.mode_n);
}

AtomSpec AtomSpec::from_mass_u(double mass_u) {
  AtomSpec a{mass_u * constants::atomic_mass_unit};
  a.validate();
  return a;
}

void AtomSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw ConfigError("atom mass must be positive");
}

void WaveguideSpec::validate() const {
  if (!(width_a > 0.0) || !std::isfinite(width_a))
    throw ConfigError("waveguide width must be positive");
}

double LaserSpec::wavenumber_for_chi(double chi_value, double width_a) {
  return constants::pi * chi_value / width_a;
}

void LaserSpec::validate() const {
  if (!(rabi_frequency_omega >= 0.0) || !std::isfinite(rabi_frequency_omega))
    throw ConfigError("Rabi frequency must be non-negative");
  if (!(wavenumber_kL >= 0.0) || !std::isfinite(wavenumber_kL))
    throw ConfigError("laser wavenumber must be non-negative");
  if (!(region_length_L > 0.0) || !std::isfinite(region_length_L))
    throw ConfigError("laser region length must be positive");
}

void IncidenceSpec::validate() const {
  if (!(incident_velocity_v > 0.0) || !std::isfinite(incident_velocity_v))
    throw ConfigError("incident velocity must be positive");
  if (incident_channel.mode_n < 1)
    throw ConfigError("incident mode must be >= 1");
}

void ModelConfig::validate() const {
  if (truncation_N < 1)
    throw ConfigError("truncation N must be >= 1");
}

double transverse_energy(int n, double width_a, double mass) {
  const double kn = n * constants::pi / width_a;
  return constants::hbar * constants::hbar * kn * kn / (2.0 * mass);
}

double total_energy(const IncidenceSpec &inc, const AtomSpec &atom,
                    const WaveguideSpec &guide) {
  const double v = inc.incident_velocity_v;
  return 0.5 * atom.mass * v * v +
         transverse_energy(inc.incident_channel.mode_n, guide.width_a,
                           atom.mass);
}

Complex wavenumber_from_kinetic(double kinetic_energy, double mass) {
  const double root =
      std::sqrt(2.0 * mass * std::abs(kinetic_energy)) / constants::hbar;
  if (kinetic_energy >= 0.0)
    return {root, 0.0};
  return {0.0, root};
}

Complex longitudinal_wavenumber(double energy, double transverse_energy_n,
                                double mass) {
  return wavenumber_from_kinetic(energy - transverse_energy_n, mass);
}

double chi(double wavenumber_kL, double width_a) {
  return wavenumber_kL * width_a / constants::pi;
}

double lamb_dicke_eta(double wavenumber_kL, double width_a) {
  return wavenumber_kL * width_a;
}

} // namespace wgscatter
