#include "wgscatter/experiments.hpp"

#include "wgscatter/analytics.hpp"
#include "wgscatter/coupling.hpp"
#include "wgscatter/csv.hpp"
#include "wgscatter/parallel.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace wgscatter {
namespace {

using nlohmann::json;

CsvTable make_table(const ExperimentConfig &config, std::vector<std::string> columns) {
  CsvTable t(std::move(columns));
  for (auto &[k, v] : describe(config))
    t.add_meta(k, v);
  return t;
}

json provenance(const ExperimentConfig &config) {
  json p = json::object();
  for (auto &[k, v] : describe(config))
    p[k] = v;
  return p;
}

std::string render(const CsvTable &t) {
  std::ostringstream out;
  t.write(out);
  return out.str();
}

std::vector<Channel> open_channels(const ScatteringSolution &s) {
  std::vector<Channel> out;
  for (const auto &p : s.probabilities)
    if (p.open)
      out.push_back(p.channel);
  return out;
}

// Shared by sweep-L and sweep-chi: one solve per (chi, L) point.
ExperimentResult run_transmission_grid(const ExperimentConfig &config,
                                       const std::vector<double> &chis,
                                       const std::vector<double> &lengths) {
  const double omega = config.effective_omega();
  const int N = config.truncation_N;
  const std::size_t nl = lengths.size();
  std::vector<ScatteringSolution> solutions(chis.size() * nl);
  parallel_for(solutions.size(), config.effective_jobs(), [&](std::size_t i) {
    solutions[i] = solve(make_problem(config, omega, chis[i / nl], lengths[i % nl], N));
  });

  ExperimentResult r;
  r.scattering = true;
  const auto channels = open_channels(solutions.front());
  std::vector<std::string> cols = {"chi", "L"};
  if (config.output.layout == OutputLayout::wide) {
    for (const auto &c : channels)
      cols.push_back("R_" + to_string(c));
    for (const auto &c : channels)
      cols.push_back("T_" + to_string(c));
  } else {
    cols.insert(cols.end(), {"state", "n", "prob_R", "prob_T"});
  }
  cols.push_back("unitarity_deficit");
  CsvTable t = make_table(config, cols);
  t.add_meta("total_energy_J", solutions.front().energy);
  t.add_meta("open_channels", static_cast<double>(channels.size()));

  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const auto &s = solutions[i];
    const double chi = chis[i / nl];
    const double L = lengths[i % nl];
    r.max_unitarity_deficit = std::max(r.max_unitarity_deficit, s.unitarity_deficit);
    if (config.output.layout == OutputLayout::wide) {
      std::vector<CsvCell> row = {chi, L};
      for (const auto &c : channels)
        row.emplace_back(s.probability(c).reflection);
      for (const auto &c : channels)
        row.emplace_back(s.probability(c).transmission);
      row.emplace_back(s.unitarity_deficit);
      t.add_row(std::move(row));
    } else {
      for (const auto &c : channels) {
        const auto &p = s.probability(c);
        t.add_row({chi, L, std::string(to_string(c.internal)),
                   static_cast<long long>(c.mode_n), p.reflection, p.transmission,
                   s.unitarity_deficit});
      }
    }
  }
  r.text = render(t);
  return r;
}

json crossing_json(const LevelDiagram &diagram, const Crossing &c, double chi) {
  const auto [n, n2] = c.zeroth_order_label;
  const double perturbative = analytics::splitting(n, n2, chi, c.omega_star);
  const SplittingScales s = splitting_scales(diagram, c);
  json j;
  j["pair"] = {n, n2};
  j["levels"] = {c.levels.first, c.levels.second};
  j["omega_star"] = c.omega_star;
  j["predicted_omega"] = c.predicted_omega;
  j["relative_shift"] = (c.omega_star - c.predicted_omega) / c.predicted_omega;
  j["gap"] = c.min_gap;
  j["perturbative_gap"] = perturbative;
  j["permitted_threshold"] = c.permitted_threshold;
  j["class"] = std::string(to_string(c.classification));
  j["splitting_scales"] = {
      {"spectator_minus_upper_J", s.spectator_upper()},
      {"spectator_minus_lower_J", s.spectator_lower()},
      {"upper_minus_lower_J", s.upper_lower()},
  };
  return j;
}

} // namespace

ScatteringProblem make_problem(const ExperimentConfig &config, double omega,
                               double chi, double length_L, int N) {
  ScatteringProblem p;
  p.atom = config.atom;
  p.guide = config.guide;
  p.laser.rabi_frequency_omega = omega;
  p.laser.wavenumber_kL = LaserSpec::wavenumber_for_chi(chi, config.guide.width_a);
  p.laser.region_length_L = length_L;
  p.incidence = config.incidence;
  p.config.truncation_N = N;
  return p;
}

SplittingScales splitting_scales(const LevelDiagram &diagram, const Crossing &c) {
  EMatrixSpec spec = diagram.base;
  spec.rabi_frequency = c.omega_star;
  const LaserEigensystem sys = diagonalize(build_e_matrix(spec), diagram.mass);
  SplittingScales s;
  s.upper = sys.eigenvalues(c.position);
  s.lower = sys.eigenvalues(c.position + 1);
  // Spectator: the remaining level nearest the mode-diagonal eps_{n,+}.
  const int n = c.zeroth_order_label.first;
  const double target =
      spec.total_energy_E - spec.transverse_energies[n - 1] +
      0.5 * constants::hbar * c.omega_star * std::abs(spec.coupling.c_plus(n - 1, n - 1));
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < sys.size(); ++a) {
    if (a == c.position || a == c.position + 1)
      continue;
    if (std::abs(sys.eigenvalues(a) - target) < best) {
      best = std::abs(sys.eigenvalues(a) - target);
      s.spectator = sys.eigenvalues(a);
    }
  }
  return s;
}

ExperimentResult run_coupling_scan(const ExperimentConfig &config) {
  const std::vector<double> chis = config.chi_sweep->values();
  const auto &pairs = config.pairs;
  std::vector<std::array<Complex, 2>> values(chis.size() * pairs.size());
  parallel_for(values.size(), config.effective_jobs(), [&](std::size_t i) {
    const auto [n, n2] = pairs[i % pairs.size()];
    const double chi = chis[i / pairs.size()];
    values[i] = {coupling_element_closed(n, n2, CouplingSign::plus, chi),
                 coupling_element_closed(n, n2, CouplingSign::minus, chi)};
  });
  CsvTable t = make_table(config, {"chi", "n", "n_prime", "sign", "re", "im", "modulus"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto [n, n2] = pairs[i % pairs.size()];
    const double chi = chis[i / pairs.size()];
    for (int k = 0; k < 2; ++k) {
      const Complex v = values[i][k];
      t.add_row({chi, static_cast<long long>(n), static_cast<long long>(n2),
                 std::string(k == 0 ? "+" : "-"), v.real(), v.imag(), std::abs(v)});
    }
  }
  ExperimentResult r;
  r.text = render(t);
  return r;
}

ExperimentResult run_converge(const ExperimentConfig &config) {
  const std::vector<double> chis = config.chi_sweep->values();
  std::vector<int> Ns = config.N_list;
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  const int reference = *config.N_reference;
  if (std::find(Ns.begin(), Ns.end(), reference) == Ns.end())
    Ns.push_back(reference);
  const double omega = config.effective_omega();

  std::vector<ScatteringSolution> sol(chis.size() * Ns.size());
  parallel_for(sol.size(), config.effective_jobs(), [&](std::size_t i) {
    sol[i] = solve(make_problem(config, omega, chis[i / Ns.size()],
                                config.region_length_L, Ns[i % Ns.size()]));
  });

  ExperimentResult r;
  r.scattering = true;
  CsvTable t = make_table(config, {"chi", "N", "R_g1", "unitarity_deficit", "is_reference"});
  const Channel g1{InternalState::ground, 1};
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const int N = Ns[i % Ns.size()];
    r.max_unitarity_deficit = std::max(r.max_unitarity_deficit, sol[i].unitarity_deficit);
    t.add_row({chis[i / Ns.size()], static_cast<long long>(N),
               sol[i].probability(g1).reflection, sol[i].unitarity_deficit,
               static_cast<long long>(N == reference ? 1 : 0)});
  }
  r.text = render(t);
  return r;
}

ExperimentResult run_levels(const ExperimentConfig &config) {
  const auto grid = config.omega_sweep->values();
  const double energy = total_energy(config.incidence, config.atom, config.guide);
  const EMatrixSpec base = EMatrixSpec::make(energy, 0.0, config.truncation_N, config.chi,
                                             config.guide.width_a, config.atom.mass);
  LevelDiagram d = sweep_levels(base, config.atom.mass, grid, config.effective_jobs());

  ExperimentResult r;
  std::vector<double> deficits;
  if (config.populate) {
    r.scattering = true;
    const int levels = d.level_count();
    std::vector<std::vector<double>> pops(grid.size(), std::vector<double>(levels));
    deficits.resize(grid.size());
    parallel_for(grid.size(), config.effective_jobs(), [&](std::size_t k) {
      const auto s = solve(make_problem(config, grid[k], config.chi, config.region_length_L,
                                        config.truncation_N));
      const auto shares = level_populations(s);
      for (int label = 0; label < levels; ++label)
        pops[k][label] = shares[d.sorted_position[k][label]];
      deficits[k] = s.unitarity_deficit;
    });
    d.populations = std::move(pops);
  }

  std::vector<std::string> cols = {"omega", "level_index", "n", "branch", "epsilon_J"};
  if (config.populate)
    cols.insert(cols.end(), {"population", "unitarity_deficit"});
  CsvTable t = make_table(config, cols);
  t.add_meta("total_energy_J", energy);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int label = 0; label < d.level_count(); ++label) {
      std::vector<CsvCell> row = {grid[k], static_cast<long long>(label),
                                  static_cast<long long>(label_mode(label)),
                                  std::string(label_branch(label) > 0 ? "+" : "-"),
                                  d.levels[k][label]};
      if (config.populate) {
        row.emplace_back((*d.populations)[k][label]);
        row.emplace_back(deficits[k]);
        r.max_unitarity_deficit = std::max(r.max_unitarity_deficit, deficits[k]);
      }
      t.add_row(std::move(row));
    }
  }
  r.text = render(t);

  json report;
  report["provenance"] = provenance(config);
  report["crossings"] = json::array();
  for (const auto &c : detect_crossings(d, config.chi))
    report["crossings"].push_back(crossing_json(d, c, config.chi));
  r.report = report.dump(2) + "\n";
  return r;
}

ExperimentResult run_scatter(const ExperimentConfig &config) {
  const auto s = solve(make_problem(config, config.effective_omega(), config.chi,
                                    config.region_length_L, config.truncation_N));
  CsvTable t = make_table(config, {"state", "n", "re_R", "im_R", "re_T", "im_T", "prob_R",
                                   "prob_T", "open", "unitarity_deficit"});
  t.add_meta("total_energy_J", s.energy);
  t.add_meta("unitarity_deficit", s.unitarity_deficit);
  t.add_meta("condition_estimate", s.condition_estimate);
  t.add_meta("matching_residual", matching_residual(s));
  for (const auto &p : s.probabilities) {
    const auto c = static_cast<Eigen::Index>(p.channel.index(s.truncation_N));
    t.add_row({std::string(to_string(p.channel.internal)),
               static_cast<long long>(p.channel.mode_n), s.reflection(c).real(),
               s.reflection(c).imag(), s.transmission(c).real(), s.transmission(c).imag(),
               p.reflection, p.transmission, static_cast<long long>(p.open ? 1 : 0),
               s.unitarity_deficit});
  }
  ExperimentResult r;
  r.scattering = true;
  r.max_unitarity_deficit = s.unitarity_deficit;
  r.text = render(t);
  return r;
}

ExperimentResult run_sweep_L(const ExperimentConfig &config) {
  return run_transmission_grid(config, config.chi_sweep->values(), config.L_sweep->values());
}

ExperimentResult run_sweep_chi(const ExperimentConfig &config) {
  const std::vector<double> lengths = config.L_sweep ? config.L_sweep->values()
                                                     : std::vector<double>{config.region_length_L};
  return run_transmission_grid(config, config.chi_sweep->values(), lengths);
}

ExperimentResult run_crossings(const ExperimentConfig &config) {
  const auto [n, n2] = config.crossing_pair;
  const double predicted = config.resonance_omega(n, n2);
  const double lo = config.omega ? *config.omega * (1.0 - config.crossing_window)
                                 : predicted * (1.0 - config.crossing_window);
  const double hi = config.omega ? *config.omega * (1.0 + config.crossing_window)
                                 : predicted * (1.0 + config.crossing_window);
  const double energy = total_energy(config.incidence, config.atom, config.guide);
  const EMatrixSpec base = EMatrixSpec::make(energy, 0.0, config.truncation_N, config.chi,
                                             config.guide.width_a, config.atom.mass);
  const LevelDiagram d = sweep_levels(base, config.atom.mass, lo, hi, config.crossing_points,
                                      config.effective_jobs());

  ExperimentResult r;
  json report;
  report["provenance"] = provenance(config);
  report["window"] = {lo, hi};
  report["predicted_omega"] = predicted;
  report["crossings"] = json::array();
  std::vector<std::string> others;
  for (const auto &c : detect_crossings(d, config.chi)) {
    if (c.zeroth_order_label == config.crossing_pair)
      report["crossings"].push_back(crossing_json(d, c, config.chi));
    else
      others.push_back("(" + std::to_string(c.zeroth_order_label.first) + "," +
                       std::to_string(c.zeroth_order_label.second) + ") at omega " +
                       format_double(c.omega_star));
  }
  if (report["crossings"].empty()) {
    std::string msg = "no (" + std::to_string(n) + "," + std::to_string(n2) +
                      ") crossing found in the window";
    if (!others.empty()) {
      msg += "; other crossings:";
      for (const auto &o : others)
        msg += " " + o;
    }
    report["diagnostic"] = msg;
    r.diagnostics.push_back(msg);
    spdlog::warn("{}", msg);
  }
  r.text = report.dump(2) + "\n";
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  switch (config.kind) {
  case ExperimentKind::coupling_scan: return run_coupling_scan(config);
  case ExperimentKind::converge: return run_converge(config);
  case ExperimentKind::levels: return run_levels(config);
  case ExperimentKind::scatter: return run_scatter(config);
  case ExperimentKind::sweep_L: return run_sweep_L(config);
  case ExperimentKind::sweep_chi: return run_sweep_chi(config);
  case ExperimentKind::crossings: return run_crossings(config);
  }
  throw ConfigError("unknown experiment kind");
}

} // namespace wgscatter
