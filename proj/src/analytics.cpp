#include "wgscatter/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace wgscatter::analytics {
namespace {

using constants::hbar;
using constants::pi;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double sq(double x) { return x * x; }

double deviation(double q, double k) { return std::abs(sq(q / k) - 1.0); }

} // namespace

Validity make_validity(double semiclassical_parameter, double chi) {
  Validity v;
  v.semiclassical_parameter = semiclassical_parameter;
  v.chi = chi;
  v.semiclassical = semiclassical_parameter <= kSemiclassicalLimit;
  v.weak_coupling = std::abs(chi) <= kWeakCouplingLimit;
  return v;
}

std::pair<ZerothOrderLevel, ZerothOrderLevel>
nocoupling_levels(double energy, double omega, int n, double width_a,
                  double mass) {
  const double base = energy - transverse_energy(n, width_a, mass);
  const double half = 0.5 * hbar * omega;
  ZerothOrderLevel plus{n, +1, base + half, {}};
  ZerothOrderLevel minus{n, -1, base - half, {}};
  plus.q = wavenumber_from_kinetic(plus.epsilon, mass);
  minus.q = wavenumber_from_kinetic(minus.epsilon, mass);
  return {plus, minus};
}

ComplexVector nocoupling_eigenvector(int n, int branch, int N) {
  ComplexVector v = ComplexVector::Zero(2 * N);
  v(n - 1) = branch > 0 ? -kInvSqrt2 : kInvSqrt2;
  v(N + n - 1) = kInvSqrt2;
  return v;
}

SemiclassicalQ semiclassical_q1(double k1, double omega, double mass,
                                double velocity) {
  const double s = hbar * omega / (mass * velocity * velocity);
  return {k1 * (1.0 + 0.5 * s), k1 * (1.0 - 0.5 * s), make_validity(s)};
}

NocouplingAmplitudes nocoupling_amplitudes(double k1, double q1_plus,
                                           double q1_minus) {
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  NocouplingAmplitudes a;
  a.A_plus = -c * (1.0 + k1 / q1_plus);
  a.B_plus = -c * (1.0 - k1 / q1_plus);
  a.A_minus = c * (1.0 + k1 / q1_minus);
  a.B_minus = c * (1.0 - k1 / q1_minus);
  a.validity = make_validity(
      std::max(deviation(q1_plus, k1), deviation(q1_minus, k1)));
  return a;
}

NocouplingTransmission nocoupling_transmission(double q1_plus, double q1_minus,
                                               double L) {
  const double phase = 0.5 * (q1_plus - q1_minus) * L;
  NocouplingTransmission t;
  t.ground = sq(std::cos(phase));
  t.excited = sq(std::sin(phase));
  const double p2 = sq(q1_plus);
  const double m2 = sq(q1_minus);
  t.validity = make_validity(p2 + m2 > 0.0 ? std::abs(p2 - m2) / (p2 + m2) : 0.0);
  return t;
}

double splitting(int n, int n2, double chi, double omega) {
  if ((n + n2) % 2 == 0)
    return 0.0;
  const double num = 8.0 * n * n2 * chi * 2.0;
  const double den = sq(n + n2) * sq(n - n2) * pi;
  return num / den * (0.5 * hbar * omega);
}

double resonance_omega(int n, int n2, double width_a, double mass) {
  return (transverse_energy(n2, width_a, mass) -
          transverse_energy(n, width_a, mass)) /
         hbar;
}

CrossingStates crossing_states(int n, int N) {
  const ComplexVector lower_mode = nocoupling_eigenvector(1, -1, N);
  const ComplexVector upper_mode = nocoupling_eigenvector(n, +1, N);
  const Complex i(0.0, 1.0);
  CrossingStates s;
  s.greater = (i * lower_mode + upper_mode) * kInvSqrt2;
  s.less = (lower_mode + i * upper_mode) * kInvSqrt2;
  return s;
}

ResonanceTriple resonance_triple(double energy, double omega, int n,
                                 double chi, double width_a, double mass) {
  const auto [plus1, minus1] = nocoupling_levels(energy, omega, 1, width_a, mass);
  ResonanceTriple r;
  r.splitting = splitting(1, n, chi, omega);
  const double lambda = 0.5 * r.splitting;
  r.q1_plus = plus1.q.real();
  r.q_greater = wavenumber_from_kinetic(minus1.epsilon + lambda, mass).real();
  r.q_less = wavenumber_from_kinetic(minus1.epsilon - lambda, mass).real();
  const double kinetic = energy - transverse_energy(1, width_a, mass);
  r.validity = make_validity(hbar * omega / (2.0 * kinetic), chi);
  return r;
}

ResonanceAmplitudes resonance_amplitudes(double k1, double q1_plus,
                                         double q_greater, double q_less) {
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  const Complex i(0.0, 1.0);
  ResonanceAmplitudes a;
  a.A1_plus = -c * (1.0 + k1 / q1_plus);
  a.B1_plus = -c * (1.0 - k1 / q1_plus);
  a.A_greater = -0.25 * i * (1.0 + k1 / q_greater);
  a.B_greater = -0.25 * i * (1.0 - k1 / q_greater);
  a.A_less = 0.25 * (1.0 + k1 / q_less);
  a.B_less = 0.25 * (1.0 - k1 / q_less);
  a.validity = make_validity(std::max(
      {deviation(q1_plus, k1), deviation(q_greater, k1), deviation(q_less, k1)}));
  return a;
}

ResonanceTransmission resonance_transmission(double q1_plus, double q_greater,
                                             double q_less, double L) {
  const double pg = 0.5 * (q1_plus - q_greater) * L;
  const double pl = 0.5 * (q1_plus - q_less) * L;
  const double beat = sq(std::sin(0.5 * (q_greater - q_less) * L));
  ResonanceTransmission t;
  t.ground_1 = 0.5 * sq(std::cos(pg)) + 0.5 * sq(std::cos(pl)) - 0.25 * beat;
  t.excited_1 = 0.5 * sq(std::sin(pg)) + 0.5 * sq(std::sin(pl)) - 0.25 * beat;
  t.ground_n = 0.25 * beat;
  t.excited_n = 0.25 * beat;
  const double p2 = sq(q1_plus);
  const double g2 = sq(q_greater);
  t.validity = make_validity(p2 + g2 > 0.0 ? std::abs(p2 - g2) / (p2 + g2) : 0.0);
  return t;
}

} // namespace wgscatter::analytics
