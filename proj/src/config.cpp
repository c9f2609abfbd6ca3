#include "wgscatter/config.hpp"

#include "wgscatter/parallel.hpp"

#include <toml.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wgscatter {
namespace {

using Schema = std::map<std::string, std::set<std::string>>;

const Schema &schema() {
  static const Schema s = {
      {"atom", {"mass_u", "mass_kg"}},
      {"guide", {"width"}},
      {"laser", {"omega", "chi", "kL", "length"}},
      {"incidence", {"velocity", "state", "mode"}},
      {"model", {"N"}},
      {"sweep.omega", {"min", "max", "points", "scale", "list"}},
      {"sweep.chi", {"min", "max", "points", "scale", "list"}},
      {"sweep.L", {"min", "max", "points", "scale", "list"}},
      {"converge", {"N_list", "N_reference"}},
      {"coupling_scan", {"pairs"}},
      {"levels", {"populate"}},
      {"crossings", {"pair", "window", "points"}},
      {"output", {"path", "layout", "jobs", "report"}},
  };
  return s;
}

void check_keys(const toml::table &table, const std::string &prefix) {
  for (const auto &[key, node] : table) {
    const std::string name = prefix.empty() ? std::string(key.str())
                                            : prefix + "." + std::string(key.str());
    const auto section = schema().find(prefix);
    if (section != schema().end()) {
      if (!section->second.count(std::string(key.str())))
        throw ConfigError("unknown config key '" + name + "'");
      continue;
    }
    if (!node.is_table())
      throw ConfigError("unknown config key '" + name + "'");
    const bool known = std::any_of(schema().begin(), schema().end(), [&](const auto &e) {
      return e.first == name || e.first.rfind(name + ".", 0) == 0;
    });
    if (!known)
      throw ConfigError("unknown config section '" + name + "'");
    check_keys(*node.as_table(), name);
  }
}

const toml::node *find(const toml::table &root, std::string_view dotted) {
  const toml::node *node = &root;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const std::size_t dot = dotted.find('.', start);
    const std::string_view part =
        dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start);
    const auto *table = node->as_table();
    if (!table)
      return nullptr;
    node = table->get(part);
    if (!node)
      return nullptr;
    if (dot == std::string_view::npos)
      break;
    start = dot + 1;
  }
  return node;
}

double as_double(const toml::node &n, std::string_view key) {
  if (auto v = n.value<double>(); v && (n.is_floating_point() || n.is_integer()))
    return *v;
  throw ConfigError("config key '" + std::string(key) + "' must be a number");
}

int as_int(const toml::node &n, std::string_view key) {
  if (n.is_integer())
    return static_cast<int>(*n.value<int64_t>());
  throw ConfigError("config key '" + std::string(key) + "' must be an integer");
}

std::string as_string(const toml::node &n, std::string_view key) {
  if (n.is_string())
    return *n.value<std::string>();
  throw ConfigError("config key '" + std::string(key) + "' must be a string");
}

bool as_bool(const toml::node &n, std::string_view key) {
  if (n.is_boolean())
    return *n.value<bool>();
  throw ConfigError("config key '" + std::string(key) + "' must be true or false");
}

std::vector<double> as_double_list(const toml::node &n, std::string_view key) {
  const auto *arr = n.as_array();
  if (!arr)
    return {as_double(n, key)};
  std::vector<double> out;
  for (const auto &e : *arr)
    out.push_back(as_double(e, key));
  return out;
}

std::vector<int> as_int_list(const toml::node &n, std::string_view key) {
  const auto *arr = n.as_array();
  if (!arr)
    return {as_int(n, key)};
  std::vector<int> out;
  for (const auto &e : *arr)
    out.push_back(as_int(e, key));
  return out;
}

std::pair<int, int> as_pair(const toml::node &n, std::string_view key) {
  const auto v = as_int_list(n, key);
  if (v.size() != 2)
    throw ConfigError("config key '" + std::string(key) + "' must be a pair [n, n']");
  return {v[0], v[1]};
}

template <class F> void with(const toml::table &root, std::string_view key, F &&f) {
  if (const auto *n = find(root, key))
    f(*n);
}

std::optional<SweepRange> read_sweep(const toml::table &root, const std::string &name) {
  const auto *node = find(root, name);
  if (!node)
    return std::nullopt;
  SweepRange r;
  bool has_range = false;
  with(root, name + ".min", [&](const auto &n) { r.min = as_double(n, name + ".min"); has_range = true; });
  with(root, name + ".max", [&](const auto &n) { r.max = as_double(n, name + ".max"); has_range = true; });
  with(root, name + ".points", [&](const auto &n) { r.points = as_int(n, name + ".points"); });
  with(root, name + ".scale", [&](const auto &n) {
    const auto s = as_string(n, name + ".scale");
    if (s == "linear")
      r.scale = GridScale::linear;
    else if (s == "log")
      r.scale = GridScale::log;
    else
      throw ConfigError("config key '" + name + ".scale' must be 'linear' or 'log'");
  });
  with(root, name + ".list", [&](const auto &n) { r.list = as_double_list(n, name + ".list"); });
  if (has_range && !r.list.empty())
    throw ConfigError("'" + name + "' sets both a range and a list");
  if (!has_range && r.list.empty())
    throw ConfigError("'" + name + "' needs min/max or a list");
  if (has_range && !find(root, name + ".max"))
    r.max = r.min;
  return r;
}

// Splits "a.b.c=value" and stores value, parsed as TOML when possible.
void apply_override(toml::table &root, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty())
      throw ConfigError("override key '" + key + "' has an empty component");
    parts.push_back(part);
  }
  toml::table *table = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    auto *next = table->get(parts[i]);
    if (!next) {
      table->insert(parts[i], toml::table{});
      next = table->get(parts[i]);
    }
    if (!next->is_table())
      throw ConfigError("override key '" + key + "' descends into a value");
    table = next->as_table();
  }

  try {
    toml::table parsed = toml::parse("v = " + value);
    table->insert_or_assign(parts.back(), std::move(*parsed.get("v")));
  } catch (const toml::parse_error &) {
    table->insert_or_assign(parts.back(), value);
  }
}

ExperimentConfig from_table(ExperimentKind kind, const toml::table &root) {
  check_keys(root, "");
  ExperimentConfig c;
  c.kind = kind;

  const bool mass_u = find(root, "atom.mass_u") != nullptr;
  const bool mass_kg = find(root, "atom.mass_kg") != nullptr;
  if (mass_u && mass_kg)
    throw ConfigError("set only one of atom.mass_u and atom.mass_kg");
  with(root, "atom.mass_u", [&](const auto &n) {
    c.atom.mass = as_double(n, "atom.mass_u") * constants::atomic_mass_unit;
  });
  with(root, "atom.mass_kg", [&](const auto &n) { c.atom.mass = as_double(n, "atom.mass_kg"); });
  with(root, "guide.width", [&](const auto &n) { c.guide.width_a = as_double(n, "guide.width"); });

  with(root, "laser.omega", [&](const auto &n) { c.omega = as_double(n, "laser.omega"); });
  const bool has_chi = find(root, "laser.chi") != nullptr;
  const bool has_kL = find(root, "laser.kL") != nullptr;
  if (has_chi && has_kL)
    throw ConfigError("set only one of laser.chi and laser.kL");
  with(root, "laser.chi", [&](const auto &n) { c.chi = as_double(n, "laser.chi"); });
  with(root, "laser.kL", [&](const auto &n) {
    c.chi = wgscatter::chi(as_double(n, "laser.kL"), c.guide.width_a);
  });
  with(root, "laser.length", [&](const auto &n) { c.region_length_L = as_double(n, "laser.length"); });

  with(root, "incidence.velocity", [&](const auto &n) {
    c.incidence.incident_velocity_v = as_double(n, "incidence.velocity");
  });
  with(root, "incidence.state", [&](const auto &n) {
    c.incidence.incident_channel.internal = parse_internal_state(as_string(n, "incidence.state"));
  });
  with(root, "incidence.mode", [&](const auto &n) {
    c.incidence.incident_channel.mode_n = as_int(n, "incidence.mode");
  });
  with(root, "model.N", [&](const auto &n) { c.truncation_N = as_int(n, "model.N"); });

  c.omega_sweep = read_sweep(root, "sweep.omega");
  c.chi_sweep = read_sweep(root, "sweep.chi");
  c.L_sweep = read_sweep(root, "sweep.L");

  with(root, "converge.N_list", [&](const auto &n) { c.N_list = as_int_list(n, "converge.N_list"); });
  with(root, "converge.N_reference", [&](const auto &n) {
    c.N_reference = as_int(n, "converge.N_reference");
  });
  with(root, "coupling_scan.pairs", [&](const auto &n) {
    const auto *arr = n.as_array();
    if (!arr)
      throw ConfigError("coupling_scan.pairs must be a list of [n, n'] pairs");
    for (const auto &e : *arr)
      c.pairs.push_back(as_pair(e, "coupling_scan.pairs"));
  });
  with(root, "levels.populate", [&](const auto &n) { c.populate = as_bool(n, "levels.populate"); });
  with(root, "crossings.pair", [&](const auto &n) { c.crossing_pair = as_pair(n, "crossings.pair"); });
  with(root, "crossings.window", [&](const auto &n) {
    c.crossing_window = as_double(n, "crossings.window");
  });
  with(root, "crossings.points", [&](const auto &n) {
    c.crossing_points = as_int(n, "crossings.points");
  });

  with(root, "output.path", [&](const auto &n) { c.output.path = as_string(n, "output.path"); });
  with(root, "output.report", [&](const auto &n) { c.output.report = as_string(n, "output.report"); });
  with(root, "output.jobs", [&](const auto &n) { c.output.jobs = as_int(n, "output.jobs"); });
  with(root, "output.layout", [&](const auto &n) {
    const auto s = as_string(n, "output.layout");
    if (s == "long")
      c.output.layout = OutputLayout::long_form;
    else if (s == "wide")
      c.output.layout = OutputLayout::wide;
    else
      throw ConfigError("output.layout must be 'long' or 'wide'");
  });
  return c;
}

// Shortest representation that reads back to the same double.
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string describe_sweep(const SweepRange &r) {
  if (!r.list.empty()) {
    std::string s = "[";
    for (std::size_t i = 0; i < r.list.size(); ++i)
      s += (i ? ", " : "") + fmt_double(r.list[i]);
    return s + "]";
  }
  return fmt_double(r.min) + ":" + fmt_double(r.max) + ":" + std::to_string(r.points) +
         (r.scale == GridScale::log ? ":log" : ":linear");
}

} // namespace

std::string_view to_string(ExperimentKind k) {
  switch (k) {
  case ExperimentKind::coupling_scan: return "coupling-scan";
  case ExperimentKind::levels: return "levels";
  case ExperimentKind::scatter: return "scatter";
  case ExperimentKind::sweep_L: return "sweep-L";
  case ExperimentKind::sweep_chi: return "sweep-chi";
  case ExperimentKind::converge: return "converge";
  case ExperimentKind::crossings: return "crossings";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::coupling_scan, ExperimentKind::levels,
                 ExperimentKind::scatter, ExperimentKind::sweep_L,
                 ExperimentKind::sweep_chi, ExperimentKind::converge,
                 ExperimentKind::crossings})
    if (to_string(k) == s)
      return k;
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

std::vector<double> SweepRange::values() const {
  if (!list.empty())
    return list;
  if (points == 1)
    return {min};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    v[i] = scale == GridScale::linear ? min + t * (max - min)
                                      : min * std::pow(max / min, t);
  }
  v.back() = max;
  return v;
}

void SweepRange::validate(std::string_view name) const {
  const std::string n(name);
  if (!list.empty()) {
    for (double x : list)
      if (!std::isfinite(x))
        throw ConfigError("sweep '" + n + "' list holds a non-finite value");
    return;
  }
  if (points < 1)
    throw ConfigError("sweep '" + n + "' needs at least one point");
  if (!std::isfinite(min) || !std::isfinite(max) || max < min)
    throw ConfigError("sweep '" + n + "' range is empty or reversed");
  if (points > 1 && max == min)
    throw ConfigError("sweep '" + n + "' has several points on a zero-width range");
  if (scale == GridScale::log && !(min > 0.0))
    throw ConfigError("sweep '" + n + "' with log scale needs min > 0");
}

double ExperimentConfig::resonance_omega(int n, int n2) const {
  return (transverse_energy(n2, guide.width_a, atom.mass) -
          transverse_energy(n, guide.width_a, atom.mass)) /
         constants::hbar;
}

double ExperimentConfig::effective_omega() const {
  if (omega)
    return *omega;
  if (kind == ExperimentKind::sweep_L)
    return resonance_omega(1, 2);
  return 1e8;
}

int ExperimentConfig::effective_jobs() const {
  return output.jobs > 0 ? output.jobs : default_jobs();
}

void resolve_defaults(ExperimentConfig &c) {
  if (!c.omega && c.kind != ExperimentKind::levels && c.kind != ExperimentKind::crossings)
    c.omega = c.effective_omega();
  const double w12 = c.resonance_omega(1, 2);
  switch (c.kind) {
  case ExperimentKind::coupling_scan:
    if (!c.chi_sweep)
      c.chi_sweep = SweepRange{0.0, 8.0, 801, GridScale::linear, {}};
    if (c.pairs.empty())
      c.pairs = {{1, 1}, {2, 2}, {1, 2}, {1, 3}, {2, 3}};
    break;
  case ExperimentKind::converge:
    if (!c.chi_sweep)
      c.chi_sweep = SweepRange{0.0, 4.0, 401, GridScale::linear, {}};
    if (c.N_list.empty())
      c.N_list = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    if (!c.N_reference)
      c.N_reference = std::max(11, *std::max_element(c.N_list.begin(), c.N_list.end()));
    break;
  case ExperimentKind::levels:
    if (!c.omega_sweep) {
      // Log-grid step of 400 points per decade, applied linearly from zero.
      const double step = (std::pow(10.0, 1.0 / 400.0) - 1.0) * w12;
      const double top = 3.0 * w12;
      c.omega_sweep = SweepRange{0.0, top, static_cast<int>(std::ceil(top / step)) + 1,
                                 GridScale::linear, {}};
    }
    break;
  case ExperimentKind::sweep_L:
    if (!c.L_sweep)
      c.L_sweep = SweepRange{1e-7, 2.5e-4, 2500, GridScale::linear, {}};
    if (!c.chi_sweep)
      c.chi_sweep = SweepRange{0.0, 0.0, 1, GridScale::linear,
                               {0.0, 0.3 / constants::pi, 0.6 / constants::pi}};
    break;
  case ExperimentKind::sweep_chi:
    if (!c.chi_sweep)
      c.chi_sweep = SweepRange{0.0, 4.0, 401, GridScale::linear, {}};
    break;
  case ExperimentKind::scatter:
  case ExperimentKind::crossings:
    break;
  }
}

void ExperimentConfig::validate() const {
  atom.validate();
  guide.validate();
  incidence.validate();
  if (omega && (!(*omega >= 0.0) || !std::isfinite(*omega)))
    throw ConfigError("Rabi frequency must be non-negative");
  if (!(chi >= 0.0) || !std::isfinite(chi))
    throw ConfigError("chi must be non-negative");
  if (!(region_length_L > 0.0) || !std::isfinite(region_length_L))
    throw ConfigError("laser region length must be positive");
  if (truncation_N < 1)
    throw ConfigError("truncation N must be >= 1");
  if (incidence.incident_channel.mode_n > truncation_N &&
      kind != ExperimentKind::coupling_scan && kind != ExperimentKind::converge)
    throw ConfigError("incident mode exceeds truncation N");
  if (omega_sweep)
    omega_sweep->validate("sweep.omega");
  if (chi_sweep) {
    chi_sweep->validate("sweep.chi");
    for (double x : chi_sweep->values())
      if (x < 0.0)
        throw ConfigError("sweep 'sweep.chi' reaches negative chi");
  }
  if (L_sweep) {
    L_sweep->validate("sweep.L");
    for (double x : L_sweep->values())
      if (!(x > 0.0))
        throw ConfigError("sweep 'sweep.L' must stay positive");
  }
  for (int n : N_list)
    if (n < 1)
      throw ConfigError("converge.N_list entries must be >= 1");
  if (N_reference && *N_reference < 1)
    throw ConfigError("converge.N_reference must be >= 1");
  for (const auto &[n, n2] : pairs)
    if (n < 1 || n2 < 1)
      throw ConfigError("coupling_scan.pairs entries must be >= 1");
  if (crossing_pair.first < 1 || crossing_pair.second <= crossing_pair.first)
    throw ConfigError("crossings.pair must satisfy 1 <= n < n'");
  if (kind == ExperimentKind::crossings && crossing_pair.second > truncation_N)
    throw ConfigError("crossings.pair exceeds truncation N");
  if (!(crossing_window > 0.0 && crossing_window < 1.0))
    throw ConfigError("crossings.window must lie in (0, 1)");
  if (crossing_points < 3)
    throw ConfigError("crossings.points must be >= 3");
  if (output.jobs < 0)
    throw ConfigError("output.jobs must be >= 0");
}

ExperimentConfig load_config(ExperimentKind kind, std::string_view toml_text,
                             const std::vector<std::string> &overrides) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error &e) {
    std::ostringstream msg;
    msg << "config parse error: " << e.description() << " (line "
        << e.source().begin.line << ")";
    throw ConfigError(msg.str());
  }
  for (const auto &o : overrides)
    apply_override(root, o);
  ExperimentConfig c = from_table(kind, root);
  resolve_defaults(c);
  c.validate();
  return c;
}

ExperimentConfig load_config_file(ExperimentKind kind, const std::string &path,
                                  const std::vector<std::string> &overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return load_config(kind, text, overrides);
}

std::vector<std::pair<std::string, std::string>>
describe(const ExperimentConfig &c) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("experiment", std::string(to_string(c.kind)));
  out.emplace_back("atom.mass_kg", fmt_double(c.atom.mass));
  out.emplace_back("guide.width", fmt_double(c.guide.width_a));
  if (c.omega)
    out.emplace_back("laser.omega", fmt_double(*c.omega));
  out.emplace_back("laser.chi", fmt_double(c.chi));
  out.emplace_back("laser.length", fmt_double(c.region_length_L));
  out.emplace_back("incidence.velocity", fmt_double(c.incidence.incident_velocity_v));
  out.emplace_back("incidence.state", std::string(to_string(c.incidence.incident_channel.internal)));
  out.emplace_back("incidence.mode", std::to_string(c.incidence.incident_channel.mode_n));
  out.emplace_back("model.N", std::to_string(c.truncation_N));
  if (c.omega_sweep)
    out.emplace_back("sweep.omega", describe_sweep(*c.omega_sweep));
  if (c.chi_sweep)
    out.emplace_back("sweep.chi", describe_sweep(*c.chi_sweep));
  if (c.L_sweep)
    out.emplace_back("sweep.L", describe_sweep(*c.L_sweep));
  switch (c.kind) {
  case ExperimentKind::converge: {
    std::string s = "[";
    for (std::size_t i = 0; i < c.N_list.size(); ++i)
      s += (i ? ", " : "") + std::to_string(c.N_list[i]);
    out.emplace_back("converge.N_list", s + "]");
    out.emplace_back("converge.N_reference", std::to_string(*c.N_reference));
    break;
  }
  case ExperimentKind::coupling_scan: {
    std::string s = "[";
    for (std::size_t i = 0; i < c.pairs.size(); ++i)
      s += (i ? ", " : "") + std::string("[") + std::to_string(c.pairs[i].first) + ", " +
           std::to_string(c.pairs[i].second) + "]";
    out.emplace_back("coupling_scan.pairs", s + "]");
    break;
  }
  case ExperimentKind::levels:
    out.emplace_back("levels.populate", c.populate ? "true" : "false");
    break;
  case ExperimentKind::crossings:
    out.emplace_back("crossings.pair", "[" + std::to_string(c.crossing_pair.first) + ", " +
                                           std::to_string(c.crossing_pair.second) + "]");
    out.emplace_back("crossings.window", fmt_double(c.crossing_window));
    out.emplace_back("crossings.points", std::to_string(c.crossing_points));
    break;
  default:
    break;
  }
  out.emplace_back("output.layout", c.output.layout == OutputLayout::wide ? "wide" : "long");
  return out;
}

} // namespace wgscatter
