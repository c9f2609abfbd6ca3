#include "wgscatter/analytics.hpp"
#include "wgscatter/scattering.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wgscatter;
using namespace wgscatter::analytics;

namespace {
const double kMass = AtomSpec::neon().mass;
double energy() { return total_energy({}, AtomSpec::neon(), WaveguideSpec{}); }
double k1() {
  return longitudinal_wavenumber(energy(), transverse_energy(1, 1e-6, kMass), kMass).real();
}
} // namespace

TEST(Analytics, NocouplingLevelsAreSplitByHbarOmega) {
  const auto [p, m] = nocoupling_levels(energy(), 4e4, 2, 1e-6, kMass);
  EXPECT_EQ(p.branch, +1);
  EXPECT_EQ(m.branch, -1);
  EXPECT_NEAR((p.epsilon - m.epsilon) / (constants::hbar * 4e4), 1.0, 1e-12);
  EXPECT_NEAR(0.5 * (p.epsilon + m.epsilon), energy() - transverse_energy(2, 1e-6, kMass), 1e-44);
}

TEST(Analytics, EvanescentBranchIsImaginary) {
  const auto [p, m] = nocoupling_levels(energy(), 1e8, 1, 1e-6, kMass);
  EXPECT_GT(p.q.real(), 0.0);
  EXPECT_EQ(m.q.real(), 0.0);
  EXPECT_GT(m.q.imag(), 0.0);
}

TEST(Analytics, SemiclassicalWavenumbersAgreeToSecondOrder) {
  const double omega = 2e4;
  const auto sc = semiclassical_q1(k1(), omega, kMass, 0.1);
  const auto [p, m] = nocoupling_levels(energy(), omega, 1, 1e-6, kMass);
  const double s = sc.validity.semiclassical_parameter;
  EXPECT_LT(s, kSemiclassicalLimit);
  EXPECT_TRUE(sc.validity.semiclassical);
  EXPECT_LT(std::abs(sc.q_plus - p.q.real()) / k1(), s * s);
  EXPECT_LT(std::abs(sc.q_minus - m.q.real()) / k1(), s * s);
  EXPECT_FALSE(semiclassical_q1(k1(), 1e7, kMass, 0.1).validity.semiclassical);
}

TEST(Analytics, NocouplingAmplitudesReduceToPlainProjection) {
  const auto a = nocoupling_amplitudes(k1(), k1(), k1());
  EXPECT_NEAR(a.A_plus, -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.A_minus, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(a.B_plus, 0.0);
  EXPECT_EQ(a.B_minus, 0.0);
}

TEST(Analytics, NocouplingTransmissionIsProbabilityPair) {
  const auto t = nocoupling_transmission(1.1e5, 0.9e5, 7e-6);
  EXPECT_NEAR(t.ground + t.excited, 1.0, 1e-15);
  EXPECT_NEAR(t.ground, std::pow(std::cos(0.5 * 0.2e5 * 7e-6), 2), 1e-15);
}

TEST(Analytics, SplittingValues) {
  EXPECT_EQ(splitting(1, 3, 0.2, 1e5), 0.0);
  const double h = 0.5 * constants::hbar * 1e5;
  EXPECT_NEAR(splitting(1, 2, 0.2, 1e5) / h, 16.0 * 0.2 * 2.0 / (9.0 * M_PI), 1e-14);
  EXPECT_NEAR(splitting(2, 3, 0.2, 1e5) / h, 8.0 * 6.0 * 0.2 * 2.0 / (25.0 * M_PI), 1e-14);
  EXPECT_DOUBLE_EQ(splitting(1, 2, 0.2, 1e5), splitting(2, 1, 0.2, 1e5));
}

TEST(Analytics, ResonanceOmegaOfNeonInOneMicron) {
  const double w = resonance_omega(1, 2, 1e-6, kMass);
  EXPECT_NEAR(w, 3.0 * transverse_energy(1, 1e-6, kMass) / constants::hbar, 1e-9);
  EXPECT_NEAR(w / 0.47e5, 1.0, 0.02);
}

TEST(Analytics, CrossingStatesAreOrthonormal) {
  const auto s = crossing_states(3, 5);
  EXPECT_NEAR(s.greater.norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.less.norm(), 1.0, 1e-15);
  EXPECT_LT(std::abs(s.greater.dot(s.less)), 1e-15);
}

TEST(Analytics, ResonanceTripleOrderingAndValidity) {
  const double w = resonance_omega(1, 2, 1e-6, kMass);
  const auto r = resonance_triple(energy(), w, 2, 0.1, 1e-6, kMass);
  EXPECT_GT(r.q1_plus, r.q_greater);
  EXPECT_GT(r.q_greater, r.q_less);
  EXPECT_TRUE(r.validity.ok());
  EXPECT_FALSE(resonance_triple(energy(), w, 2, 0.5, 1e-6, kMass).validity.weak_coupling);
}

TEST(Analytics, ResonanceTransmissionConservesProbability) {
  for (double L : {1e-6, 3e-5, 1.2e-4}) {
    const auto t = resonance_transmission(1.01e5, 0.99e5, 0.985e5, L);
    EXPECT_NEAR(t.sum(), 1.0, 1e-14);
    EXPECT_DOUBLE_EQ(t.ground_n, t.excited_n);
    EXPECT_LE(t.ground_n, 0.25);
  }
}

TEST(Analytics, ResonanceTransmissionTracksSolverAtWeakCoupling) {
  // Slow beat envelope at small chi, compared where the fast asymmetry is small.
  const double chi = 0.02;
  const double w = resonance_omega(1, 2, 1e-6, kMass);
  const auto r = resonance_triple(energy(), w, 2, chi, 1e-6, kMass);
  for (double L : {1e-4, 3e-4, 5e-4}) {
    ScatteringProblem p;
    p.laser.rabi_frequency_omega = w;
    p.laser.wavenumber_kL = LaserSpec::wavenumber_for_chi(chi, 1e-6);
    p.laser.region_length_L = L;
    p.config.truncation_N = 3;
    const auto s = solve(p);
    const auto t = resonance_transmission(r.q1_plus, r.q_greater, r.q_less, L);
    const double tg2 = s.probability({InternalState::ground, 2}).transmission;
    const double te2 = s.probability({InternalState::excited, 2}).transmission;
    EXPECT_NEAR(0.5 * (tg2 + te2), t.ground_n, 0.02) << "L=" << L;
  }
}
