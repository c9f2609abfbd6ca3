#include "wgscatter/config.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wgscatter;

TEST(Config, DefaultsArePhysicalBaseline) {
  const auto c = load_config(ExperimentKind::scatter, "", {});
  EXPECT_NEAR(c.atom.mass, 20.1797 * 1.66053907e-27, 1e-40);
  EXPECT_EQ(c.guide.width_a, 1e-6);
  EXPECT_EQ(c.incidence.incident_velocity_v, 0.1);
  EXPECT_EQ(c.truncation_N, 6);
  EXPECT_EQ(*c.omega, 1e8);
}

TEST(Config, SweepLDefaultsToFirstResonance) {
  const auto c = load_config(ExperimentKind::sweep_L, "", {});
  EXPECT_NEAR(*c.omega / c.resonance_omega(1, 2), 1.0, 1e-15);
  ASSERT_TRUE(c.chi_sweep);
  EXPECT_EQ(c.chi_sweep->values().size(), 3u);
}

TEST(Config, ParsesTomlAndOverridesWin) {
  const char *doc = R"(
[guide]
width = 1e-7
[laser]
omega = 2e4
chi = 0.5
length = 3e-6
[incidence]
state = "e"
mode = 1
[model]
N = 4
[sweep.chi]
min = 0.0
max = 2.0
points = 5
)";
  const auto c = load_config(ExperimentKind::sweep_chi, doc, {"laser.chi=0.25", "model.N=3"});
  EXPECT_EQ(c.guide.width_a, 1e-7);
  EXPECT_EQ(*c.omega, 2e4);
  EXPECT_EQ(c.chi, 0.25);
  EXPECT_EQ(c.truncation_N, 3);
  EXPECT_EQ(c.incidence.incident_channel.internal, InternalState::excited);
  const auto v = c.chi_sweep->values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v[1], 0.5);
  EXPECT_EQ(v.back(), 2.0);
}

TEST(Config, OverrideStringFallbackAndNestedTables) {
  const auto c = load_config(ExperimentKind::converge, "",
                             {"incidence.state=g", "converge.N_list=[2, 3]",
                              "sweep.chi.list=[0.9]", "output.layout=wide"});
  EXPECT_EQ(c.N_list, (std::vector<int>{2, 3}));
  EXPECT_EQ(*c.N_reference, 11);
  EXPECT_EQ(c.chi_sweep->values(), std::vector<double>{0.9});
  EXPECT_EQ(c.output.layout, OutputLayout::wide);
}

TEST(Config, KLAlternativeToChi) {
  const auto c = load_config(ExperimentKind::scatter, "[laser]\nkL = 1570796.3267948966\n", {});
  EXPECT_NEAR(c.chi, 0.5, 1e-12);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "[laser]\nkL = 1.0\nchi = 0.1\n", {}),
               ConfigError);
}

TEST(Config, UnknownKeysAndBadValuesAreRejected) {
  EXPECT_THROW(load_config(ExperimentKind::scatter, "[laser]\ncolour = 1\n", {}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "[lasers]\nomega = 1\n", {}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "", {"model.N=0"}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "", {"model.N=two"}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "", {"laser.length=-1"}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "", {"noequals"}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::scatter, "[model\n", {}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::sweep_chi, "", {"sweep.chi.min=2", "sweep.chi.max=1"}),
               ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::sweep_L, "", {"sweep.L.list=[0.0]"}), ConfigError);
  EXPECT_THROW(load_config(ExperimentKind::crossings, "", {"crossings.pair=[2, 2]"}), ConfigError);
  EXPECT_THROW(load_config_file(ExperimentKind::scatter, "/nonexistent.toml", {}), ConfigError);
  EXPECT_THROW(parse_experiment_kind("plot"), ConfigError);
}

TEST(Config, LogSweepIsGeometric) {
  SweepRange r{1e4, 1e8, 5, GridScale::log, {}};
  const auto v = r.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_NEAR(v[1], 1e5, 1e-6);
  EXPECT_EQ(v.back(), 1e8);
  r.min = 0.0;
  EXPECT_THROW(r.validate("x"), ConfigError);
}

TEST(Config, SinglePointSweep) {
  const auto c = load_config(ExperimentKind::sweep_L, "", {"sweep.L.min=2e-6", "sweep.L.points=1"});
  EXPECT_EQ(c.L_sweep->values(), std::vector<double>{2e-6});
}

TEST(Config, DescribeIsCompleteAndStable) {
  const auto a = describe(load_config(ExperimentKind::levels, "", {"output.jobs=3"}));
  const auto b = describe(load_config(ExperimentKind::levels, "", {"output.jobs=1"}));
  EXPECT_EQ(a, b);
  bool has_grid = false;
  for (const auto &[k, v] : a)
    has_grid = has_grid || k == "sweep.omega";
  EXPECT_TRUE(has_grid);
}

TEST(Config, ExperimentKindNames) {
  for (auto k : {ExperimentKind::coupling_scan, ExperimentKind::levels, ExperimentKind::scatter,
                 ExperimentKind::sweep_L, ExperimentKind::sweep_chi, ExperimentKind::converge,
                 ExperimentKind::crossings})
    EXPECT_EQ(parse_experiment_kind(to_string(k)), k);
}
