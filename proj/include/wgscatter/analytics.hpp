#pragma once

// Closed-form no-coupling and weak-coupling predictions. These are the
// oracles the numerical solver is compared against, so none of them call
// into the laser-region or scattering code.

#include "wgscatter/coupling.hpp"
#include "wgscatter/physics.hpp"

#include <utility>

namespace wgscatter::analytics {

/// Limits above which the approximations are not trusted.
inline constexpr double kSemiclassicalLimit = 0.1; // hbar Omega / m v^2
inline constexpr double kWeakCouplingLimit = 0.3;  // chi

/// Emitted alongside every approximate result so callers can gate
/// comparisons; nothing here refuses to evaluate outside its range.
struct Validity {
  double semiclassical_parameter = 0.0; // hbar Omega / (m v^2)
  double chi = 0.0;
  bool semiclassical = true;
  bool weak_coupling = true;

  [[nodiscard]] bool ok() const { return semiclassical && weak_coupling; }
};

Validity make_validity(double semiclassical_parameter, double chi = 0.0);

struct ZerothOrderLevel {
  int mode_n = 1;
  int branch = +1;     // +1 or -1
  double epsilon = 0.0; // J
  Complex q;            // rad/m
};

/// eps_{n,+-} = E - E_n +- hbar Omega / 2; first the + branch, then -.
std::pair<ZerothOrderLevel, ZerothOrderLevel>
nocoupling_levels(double energy, double omega, int n, double width_a,
                  double mass);

/// (-+|g,n> + |e,n>)/sqrt2 in the 2N channel basis, for branch = +-1.
ComplexVector nocoupling_eigenvector(int n, int branch, int N);

struct SemiclassicalQ {
  double q_plus = 0.0;
  double q_minus = 0.0;
  Validity validity;
};

/// q1+- ~ k1 (1 +- hbar Omega / (2 m v^2)).
SemiclassicalQ semiclassical_q1(double k1, double omega, double mass,
                                double velocity);

struct NocouplingAmplitudes {
  double A_plus = 0.0;
  double A_minus = 0.0;
  double B_plus = 0.0;
  double B_minus = 0.0;
  Validity validity;
};

NocouplingAmplitudes nocoupling_amplitudes(double k1, double q1_plus,
                                           double q1_minus);

struct NocouplingTransmission {
  double ground = 1.0;  // |T_{g,1}|^2
  double excited = 0.0; // |T_{e,1}|^2
  Validity validity;
};

/// cos^2 / sin^2 of (q1+ - q1-) L / 2. Also the interior profile when L is
/// replaced by x.
NocouplingTransmission nocoupling_transmission(double q1_plus, double q1_minus,
                                               double L);

/// First-order energy splitting at the (n, n') Rabi resonance:
/// 8 n n' chi [1 - (-1)^{n+n'}] (hbar Omega / 2) / ((n+n')^2 (n-n')^2 pi).
double splitting(int n, int n2, double chi, double omega);

/// Rabi frequency at which eps_{n,-} and eps_{n',+} cross at chi = 0.
double resonance_omega(int n, int n2, double width_a, double mass);

struct CrossingStates {
  ComplexVector greater; // (i|eps_{1,-}> + |eps_{n,+}>)/sqrt2
  ComplexVector less;    // (|eps_{1,-}> + i|eps_{n,+}>)/sqrt2
};

CrossingStates crossing_states(int n, int N);

struct ResonanceTriple {
  double q1_plus = 0.0;
  double q_greater = 0.0;
  double q_less = 0.0;
  double splitting = 0.0; // J
  Validity validity;
};

/// Wavenumbers at the (1, n) resonance: q1+ from eps_{1,+}, and q_{>,<} from
/// eps_{1,-} +- splitting/2 by exact square roots.
ResonanceTriple resonance_triple(double energy, double omega, int n,
                                 double chi, double width_a, double mass);

struct ResonanceAmplitudes {
  Complex A1_plus, B1_plus;
  Complex A_greater, B_greater;
  Complex A_less, B_less;
  Validity validity;
};

ResonanceAmplitudes resonance_amplitudes(double k1, double q1_plus,
                                         double q_greater, double q_less);

struct ResonanceTransmission {
  double ground_1 = 1.0;  // |T_{g,1}|^2
  double excited_1 = 0.0; // |T_{e,1}|^2
  double ground_n = 0.0;  // |T_{g,n}|^2
  double excited_n = 0.0; // |T_{e,n}|^2
  Validity validity;

  [[nodiscard]] double sum() const {
    return ground_1 + excited_1 + ground_n + excited_n;
  }
};

ResonanceTransmission resonance_transmission(double q1_plus, double q_greater,
                                             double q_less, double L);

} // namespace wgscatter::analytics
