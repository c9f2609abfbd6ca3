#include "wgscatter/physics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wgscatter;

namespace {
const double kHbar = 1.054571817e-34;
const double kNeon = 20.1797 * 1.66053907e-27;
} // namespace

TEST(Physics, TransverseEnergyOfNeonInOneMicron) {
  const double expected = kHbar * kHbar * M_PI * M_PI / (2.0 * kNeon * 1e-12);
  EXPECT_NEAR(transverse_energy(1, 1e-6, kNeon) / expected, 1.0, 1e-14);
  EXPECT_NEAR(transverse_energy(1, 1e-6, kNeon), 1.637790e-30, 1e-35);
  EXPECT_DOUBLE_EQ(transverse_energy(3, 1e-6, kNeon), 9.0 * transverse_energy(1, 1e-6, kNeon));
}

TEST(Physics, TotalEnergyAddsKineticAndTransverse) {
  IncidenceSpec inc;
  const double E = total_energy(inc, AtomSpec::neon(), WaveguideSpec{});
  EXPECT_NEAR(E, 0.5 * kNeon * 0.01 + transverse_energy(1, 1e-6, kNeon), 1e-40);
  inc.incident_channel.mode_n = 2;
  EXPECT_NEAR(total_energy(inc, AtomSpec::neon(), WaveguideSpec{}),
              0.5 * kNeon * 0.01 + transverse_energy(2, 1e-6, kNeon), 1e-40);
}

TEST(Physics, WavenumberBranches) {
  const double E = 1e-28;
  const Complex open = longitudinal_wavenumber(E, 0.25e-28, kNeon);
  EXPECT_GT(open.real(), 0.0);
  EXPECT_EQ(open.imag(), 0.0);
  EXPECT_NEAR(open.real(), std::sqrt(2.0 * kNeon * 0.75e-28) / kHbar, 1e-6);

  const Complex closed = longitudinal_wavenumber(E, 3e-28, kNeon);
  EXPECT_EQ(closed.real(), 0.0);
  EXPECT_NEAR(closed.imag(), std::sqrt(2.0 * kNeon * 2e-28) / kHbar, 1e-6);

  EXPECT_EQ(longitudinal_wavenumber(E, E, kNeon), Complex(0.0, 0.0));
}

TEST(Physics, IncidentWavenumberMatchesVelocity) {
  const double E = total_energy({}, AtomSpec::neon(), WaveguideSpec{});
  const Complex k1 = longitudinal_wavenumber(E, transverse_energy(1, 1e-6, kNeon), kNeon);
  EXPECT_NEAR(k1.real() * kHbar / kNeon, 0.1, 1e-15);
}

TEST(Physics, ChannelIndexRoundTrip) {
  for (int N : {1, 2, 6}) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(2 * N); ++i) {
      const Channel c = Channel::from_index(i, N);
      EXPECT_EQ(c.index(N), i);
    }
  }
  EXPECT_EQ((Channel{InternalState::excited, 1}).index(3), 3u);
  EXPECT_EQ(to_string(Channel{InternalState::excited, 4}), "e4");
  EXPECT_THROW((Channel{InternalState::ground, 4}).index(3), ConfigError);
  EXPECT_THROW(Channel::from_index(6, 3), ConfigError);
}

TEST(Physics, ParseInternalState) {
  EXPECT_EQ(parse_internal_state("g"), InternalState::ground);
  EXPECT_EQ(parse_internal_state("excited"), InternalState::excited);
  EXPECT_THROW(parse_internal_state("x"), ConfigError);
}

TEST(Physics, ChiAndLambDicke) {
  const double kL = LaserSpec::wavenumber_for_chi(0.7, 2e-6);
  EXPECT_NEAR(chi(kL, 2e-6), 0.7, 1e-15);
  EXPECT_NEAR(lamb_dicke_eta(kL, 2e-6), 0.7 * M_PI, 1e-14);
}

TEST(Physics, ValidationRejectsNonPhysical) {
  EXPECT_THROW(AtomSpec::from_mass_u(-1.0), ConfigError);
  EXPECT_THROW((WaveguideSpec{0.0}).validate(), ConfigError);
  EXPECT_THROW((LaserSpec{-1.0, 0.0, 1e-6}).validate(), ConfigError);
  EXPECT_THROW((LaserSpec{1.0, 0.0, 0.0}).validate(), ConfigError);
  IncidenceSpec inc;
  inc.incident_velocity_v = 0.0;
  EXPECT_THROW(inc.validate(), ConfigError);
  EXPECT_THROW((ModelConfig{0}).validate(), ConfigError);
}
