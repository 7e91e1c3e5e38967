#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/core/units.hpp"

namespace dqed::cli {
namespace {

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

// Unknown keys are usually typos or keys that TOML attached to the wrong
// table (a top-level key written after a [table] header), so reject them.
void only_keys(const toml::table& t, std::initializer_list<std::string_view> keys, const std::string& path) {
  for (const auto& [k, v] : t) {
    bool known = false;
    for (std::string_view a : keys) known = known || k.str() == a;
    if (!known) {
      const std::string field = path.empty() ? std::string(k.str()) : path + "." + std::string(k.str());
      throw ValidationError(field, "unknown key");
    }
  }
}

double number(const toml::node* n, const std::string& field) {
  if (!n) throw ValidationError(field, "required");
  if (auto v = n->value<double>()) return *v;
  throw ValidationError(field, "must be a number");
}

double number_or(const toml::table& t, const char* key, double fallback, const std::string& field) {
  const toml::node* n = t.get(key);
  return n ? number(n, field) : fallback;
}

std::string text(const toml::node* n, const std::string& field) {
  if (!n) throw ValidationError(field, "required");
  if (auto v = n->value<std::string>()) return *v;
  throw ValidationError(field, "must be a string");
}

const toml::table& table(const toml::node* n, const std::string& field) {
  if (!n) throw ValidationError(field, "required");
  if (const toml::table* t = n->as_table()) return *t;
  throw ValidationError(field, "must be a table");
}

std::vector<double> numbers(const toml::node* n, const std::string& field) {
  if (!n) throw ValidationError(field, "required");
  const toml::array* a = n->as_array();
  if (!a) throw ValidationError(field, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < a->size(); ++i) out.push_back(number(a->get(i), idx(field, i)));
  if (out.empty()) throw ValidationError(field, "must not be empty");
  return out;
}

// Converts a value written in the scenario's unit system to natural units.
struct Units {
  UnitSystem sys;
  units::Scale scale;
  double frequency(double v) const { return sys == UnitSystem::si ? scale.omega_to_natural(v) : v; }
  double wavenumber(double v) const { return sys == UnitSystem::si ? scale.wavenumber_to_natural(v) : v; }
  double length(double v) const { return sys == UnitSystem::si ? scale.length_to_natural(v) : v; }
  double speed(double v) const { return sys == UnitSystem::si ? v / units::c_si : v; }
};

DrudeLorentzParams oscillator(const toml::table& t, const std::string& field, const Units& u, bool lossy) {
  DrudeLorentzParams p;
  if (field.ends_with("electric") || field.ends_with("magnetic"))
    only_keys(t, {"plasma_frequency", "damping", "resonance"}, field);
  p.plasma_frequency = u.frequency(number(t.get("plasma_frequency"), field + ".plasma_frequency"));
  p.damping = u.frequency(number_or(t, "damping", 0.0, field + ".damping"));
  p.resonance = u.frequency(number_or(t, "resonance", 0.0, field + ".resonance"));
  if (p.plasma_frequency < 0.0) throw ValidationError(field + ".plasma_frequency", "must be >= 0");
  if (p.resonance < 0.0) throw ValidationError(field + ".resonance", "must be >= 0");
  if (lossy ? !(p.damping > 0.0) : p.damping < 0.0)
    throw ValidationError(field + ".damping", lossy ? "must be > 0" : "must be >= 0");
  return p;
}

MediumSpec parse_medium(const std::string& name, const toml::table& t, const Units& u) {
  const std::string base = "media." + name;
  only_keys(t, {"type", "epsilon", "plasma_frequency", "damping", "resonance", "beta", "electric", "magnetic"}, base);
  MediumSpec m;
  m.name = name;
  m.type = text(t.get("type"), base + ".type");
  if (m.type == "vacuum") {
  } else if (m.type == "dielectric") {
    const std::vector<double> e = numbers(t.get("epsilon"), base + ".epsilon");
    if (e.size() != 2) throw ValidationError(base + ".epsilon", "must be [re, im]");
    if (e[1] < 0.0) throw ValidationError(base + ".epsilon", "imaginary part must be >= 0 (passive)");
    m.epsilon = cd(e[0], e[1]);
  } else if (m.type == "drude") {
    m.electric = oscillator(t, base, u, false);
  } else if (m.type == "hydrodynamic") {
    m.electric = oscillator(t, base, u, true);
    m.beta = u.speed(number(t.get("beta"), base + ".beta"));
    if (m.beta < 0.0) throw ValidationError(base + ".beta", "must be >= 0");
  } else if (m.type == "magnetodielectric") {
    m.electric = oscillator(table(t.get("electric"), base + ".electric"), base + ".electric", u, false);
    m.magnetic = oscillator(table(t.get("magnetic"), base + ".magnetic"), base + ".magnetic", u, false);
  } else {
    throw ValidationError(base + ".type",
                          "unknown medium type '" + m.type +
                              "' (vacuum, dielectric, drude, hydrodynamic, magnetodielectric)");
  }
  return m;
}

std::string medium_ref(const toml::table& g, const char* key, const Scenario& s) {
  const std::string field = std::string("geometry.") + key;
  const std::string name = text(g.get(key), field);
  if (!s.media.count(name)) throw ValidationError(field, "medium '" + name + "' is not defined under [media]");
  return name;
}

const std::map<GeometryKind, std::set<std::string>>& allowed_outputs() {
  static const std::map<GeometryKind, std::set<std::string>> m{
      {GeometryKind::bulk, {"dispersion", "green"}},
      {GeometryKind::half_space, {"impedance"}},
      {GeometryKind::slab, {"green", "admittance"}},
      {GeometryKind::grid, {"integral-relation", "kernel"}},
  };
  return m;
}

}  // namespace

HomogeneousKSpace MediumSpec::model() const {
  if (type == "vacuum") return HomogeneousKSpace::vacuum();
  if (type == "dielectric") return HomogeneousKSpace::dielectric(epsilon);
  if (type == "drude") return HomogeneousKSpace::local_drude(electric);
  if (type == "hydrodynamic") return HomogeneousKSpace::hydrodynamic(electric.plasma_frequency, electric.damping, beta);
  if (type == "magnetodielectric") return HomogeneousKSpace::magnetodielectric(electric, magnetic);
  throw ValidationError("media." + name + ".type", "unknown medium type");
}

std::string MediumSpec::schema() const {
  std::ostringstream os;
  os.precision(17);
  os << "medium/v1;type=" << type << ";eps=" << epsilon.real() << "," << epsilon.imag() << ";electric="
     << electric.plasma_frequency << "," << electric.damping << "," << electric.resonance << ";magnetic="
     << magnetic.plasma_frequency << "," << magnetic.damping << "," << magnetic.resonance << ";beta=" << beta;
  return os.str();
}

const MediumSpec& Scenario::medium(const std::string& n) const {
  auto it = media.find(n);
  if (it == media.end()) throw ValidationError("media." + n, "not defined");
  return it->second;
}

Scenario parse_scenario(const std::string& toml_text, std::optional<UnitSystem> units_override) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " (line " << e.source().begin.line << ")";
    throw ValidationError("<toml>", os.str());
  }

  only_keys(root, {"schema", "name", "seed", "units", "length_scale_m", "media", "geometry", "sweep", "outputs",
                   "checks", "tolerances", "cache"},
            "");
  Scenario s;
  const double schema = number(root.get("schema"), "schema");
  if (schema != 1.0) throw ValidationError("schema", "only schema version 1 is supported");
  s.name = text(root.get("name"), "name");
  if (s.name.empty()) throw ValidationError("name", "must not be empty");
  for (char c : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      throw ValidationError("name", "use letters, digits, '_' or '-' only");
  if (const toml::node* n = root.get("seed")) {
    auto v = n->value<std::int64_t>();
    if (!v || *v < 0) throw ValidationError("seed", "must be a non-negative integer");
    s.seed = static_cast<std::uint64_t>(*v);
  }

  if (const toml::node* n = root.get("units")) {
    const std::string u = text(n, "units");
    if (u == "si") s.units = UnitSystem::si;
    else if (u == "natural") s.units = UnitSystem::natural;
    else throw ValidationError("units", "must be 'si' or 'natural'");
  }
  if (units_override) s.units = *units_override;
  s.length_scale_m = number_or(root, "length_scale_m", 1e-6, "length_scale_m");
  if (!(s.length_scale_m > 0.0)) throw ValidationError("length_scale_m", "must be > 0");
  const Units u{s.units, units::Scale{s.length_scale_m}};

  const toml::table& media = table(root.get("media"), "media");
  for (const auto& [key, node] : media) {
    const std::string name(key.str());
    s.media[name] = parse_medium(name, table(&node, "media." + name), u);
  }
  if (s.media.empty()) throw ValidationError("media", "define at least one medium");

  const toml::table& g = table(root.get("geometry"), "geometry");
  only_keys(g, {"kind", "medium", "lower", "slab", "upper", "d", "heights", "n", "cell"}, "geometry");
  const std::string kind = text(g.get("kind"), "geometry.kind");
  Geometry& geo = s.geometry;
  if (kind == "bulk" || kind == "half-space" || kind == "grid") {
    geo.kind = kind == "bulk" ? GeometryKind::bulk : kind == "grid" ? GeometryKind::grid : GeometryKind::half_space;
    geo.medium = medium_ref(g, "medium", s);
  } else if (kind == "slab") {
    geo.kind = GeometryKind::slab;
    geo.lower = medium_ref(g, "lower", s);
    geo.slab = medium_ref(g, "slab", s);
    geo.upper = medium_ref(g, "upper", s);
    geo.d = u.length(number(g.get("d"), "geometry.d"));
    if (!(geo.d > 0.0)) throw ValidationError("geometry.d", "must be > 0");
    if (const toml::node* h = g.get("heights")) {
      const toml::array* a = h->as_array();
      if (!a) throw ValidationError("geometry.heights", "must be an array of [z_p, z] pairs");
      for (std::size_t i = 0; i < a->size(); ++i) {
        const std::vector<double> p = numbers(a->get(i), idx("geometry.heights", i));
        if (p.size() != 2) throw ValidationError(idx("geometry.heights", i), "must be [z_p, z]");
        const double zp = u.length(p[0]), z = u.length(p[1]);
        if (!(zp > 0.0 && zp < geo.d && z > 0.0 && z < geo.d))
          throw ValidationError(idx("geometry.heights", i), "heights must lie strictly inside (0, d)");
        if (zp == z) throw ValidationError(idx("geometry.heights", i), "z_p and z must differ");
        geo.heights.push_back({zp, z});
      }
    } else {
      geo.heights.push_back({0.3 * geo.d, 0.7 * geo.d});
    }
  } else {
    throw ValidationError("geometry.kind", "must be one of bulk, half-space, slab, grid");
  }
  if (geo.kind == GeometryKind::grid) {
    const double n = number(g.get("n"), "geometry.n");
    if (n != std::floor(n) || n < 2 || n > 10) throw ValidationError("geometry.n", "must be an integer in [2, 10]");
    geo.n = static_cast<int>(n);
    geo.cell = u.length(number(g.get("cell"), "geometry.cell"));
    if (!(geo.cell > 0.0)) throw ValidationError("geometry.cell", "must be > 0");
  }

  const toml::table& sweep = table(root.get("sweep"), "sweep");
  only_keys(sweep, {"q", "omega", "omega_imag"}, "sweep");
  for (double w : numbers(sweep.get("omega"), "sweep.omega")) s.omega.push_back(u.frequency(w));
  s.omega_imag = u.frequency(number_or(sweep, "omega_imag", 0.0, "sweep.omega_imag"));
  if (s.omega_imag < 0.0) throw ValidationError("sweep.omega_imag", "must be >= 0 (upper half plane)");
  for (std::size_t i = 0; i < s.omega.size(); ++i)
    if (s.omega[i] == 0.0 && s.omega_imag == 0.0) throw ValidationError(idx("sweep.omega", i), "w = 0 is singular");
  if (geo.kind != GeometryKind::grid) {
    for (double q : numbers(sweep.get("q"), "sweep.q")) s.q.push_back(u.wavenumber(q));
    for (std::size_t i = 0; i < s.q.size(); ++i)
      if (s.q[i] < 0.0) throw ValidationError(idx("sweep.q", i), "must be >= 0");
  }

  if (const toml::node* n = root.get("outputs")) {
    const toml::array* a = n->as_array();
    if (!a) throw ValidationError("outputs", "must be an array of strings");
    const auto& allowed = allowed_outputs().at(geo.kind);
    for (std::size_t i = 0; i < a->size(); ++i) {
      const std::string o = text(a->get(i), idx("outputs", i));
      if (!allowed.count(o)) throw ValidationError(idx("outputs", i), "'" + o + "' is not available for this geometry");
      s.outputs.push_back(o);
      if (o == "integral-relation" && s.omega_imag != 0.0)
        throw ValidationError(idx("outputs", i), "the integral relation needs real frequencies (omega_imag = 0)");
    }
  }

  if (const toml::node* n = root.get("checks")) {
    const toml::array* a = n->as_array();
    if (!a) throw ValidationError("checks", "must be an array of tables");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < a->size(); ++i) {
      const std::string base = idx("checks", i);
      const toml::table& t = table(a->get(i), base);
      only_keys(t, {"name", "expect"}, base);
      CheckRequest c;
      c.name = text(t.get("name"), base + ".name");
      if (!find_check(c.name)) throw ValidationError(base + ".name", "unknown check '" + c.name + "'");
      if (!seen.insert(c.name).second) throw ValidationError(base + ".name", "check listed twice");
      const std::string expect = t.get("expect") ? text(t.get("expect"), base + ".expect") : "pass";
      if (expect != "pass" && expect != "fail") throw ValidationError(base + ".expect", "must be 'pass' or 'fail'");
      c.expect_pass = expect == "pass";
      s.checks.push_back(c);
    }
  }

  if (const toml::node* n = root.get("tolerances")) {
    const toml::table& t = table(n, "tolerances");
    only_keys(t, {"rel"}, "tolerances");
    s.rel_tol = number_or(t, "rel", s.rel_tol, "tolerances.rel");
    if (!(s.rel_tol > 0.0)) throw ValidationError("tolerances.rel", "must be > 0");
  }
  if (const toml::node* n = root.get("cache")) {
    const toml::table& t = table(n, "cache");
    only_keys(t, {"kernels"}, "cache");
    if (const toml::node* k = t.get("kernels")) {
      auto v = k->value<bool>();
      if (!v) throw ValidationError("cache.kernels", "must be a boolean");
      s.cache_kernels = *v;
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file, std::optional<UnitSystem> units_override) {
  std::ifstream in(file);
  if (!in) throw ValidationError("<file>", "cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), units_override);
}

}  // namespace dqed::cli
