#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/core/units.hpp"
#include "support.hpp"

using namespace dqed;
using namespace dqed::cli;

namespace {

const char* slab_toml = R"(
schema = 1
name = "t"
outputs = ["green"]

[media.vac]
type = "vacuum"

[media.glass]
type = "dielectric"
epsilon = [2.25, 0.01]

[geometry]
kind = "slab"
lower = "vac"
slab = "glass"
upper = "vac"
d = 1.0

[sweep]
q = [0.5, 1.5]
omega = [0.4]
omega_imag = 0.02
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string field_of(const std::string& toml) {
  try {
    parse_scenario(toml);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("dqed_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(slab_toml);
  CHECK(s.name == "t");
  CHECK(s.seed == 12345);
  CHECK(s.geometry.kind == GeometryKind::slab);
  CHECK(s.geometry.d == 1.0);
  CHECK(s.geometry.heights.size() == 1);
  CHECK(s.q == std::vector<double>{0.5, 1.5});
  CHECK(s.omega_imag == 0.02);
  CHECK(s.medium("glass").epsilon == cd(2.25, 0.01));
  CHECK(s.medium("glass").model().eval(1.0, 0.5).first == conductivity_from_epsilon(cd(2.25, 0.01), 0.5));
}

TEST_CASE("validation errors name the offending field") {
  CHECK(field_of(replace(slab_toml, "d = 1.0\n", "")) == "geometry.d");
  CHECK(field_of(replace(slab_toml, "d = 1.0", "d = -1.0")) == "geometry.d");
  CHECK(field_of(replace(slab_toml, "slab = \"glass\"", "slab = \"gold\"")) == "geometry.slab");
  CHECK(field_of(replace(slab_toml, "q = [0.5, 1.5]", "q = []")) == "sweep.q");
  CHECK(field_of(replace(slab_toml, "q = [0.5, 1.5]", "q = [0.5, -1.5]")) == "sweep.q[1]");
  CHECK(field_of(replace(slab_toml, "epsilon = [2.25, 0.01]", "epsilon = [2.25, -0.01]")) == "media.glass.epsilon");
  CHECK(field_of(replace(slab_toml, "type = \"vacuum\"", "type = \"plasma\"")) == "media.vac.type");
  CHECK(field_of(replace(slab_toml, "outputs = [\"green\"]", "outputs = [\"impedance\"]")) == "outputs[0]");
  CHECK(field_of(replace(slab_toml, "schema = 1", "schema = 2")) == "schema");
  CHECK(field_of(slab_toml + std::string("[tolerances]\nrel = 0.0\n")) == "tolerances.rel");
  CHECK(field_of(slab_toml + std::string("[[checks]]\nname = \"no-such-check\"\n")) == "checks[0].name");
  // A top-level key written after a table header lands in that table.
  CHECK(field_of(slab_toml + std::string("seeds = 3\n")) == "sweep.seeds");
  CHECK(field_of("schema = 1\nname = \"x\"\n[media") == "<toml>");
}

TEST_CASE("SI inputs are converted to natural units") {
  const std::string si = replace(replace(replace(slab_toml, "schema = 1", "schema = 1\nunits = \"si\"\nlength_scale_m = 1e-7"),
                                         "omega = [0.4]", "omega = [3e15]"),
                                 "d = 1.0", "d = 2e-7");
  std::string text = replace(si, "q = [0.5, 1.5]", "q = [5e6, 1.5e7]");
  text = replace(text, "omega_imag = 0.02", "omega_imag = 0.0");
  const Scenario s = parse_scenario(text);
  const units::Scale sc{1e-7};
  CHECK(s.omega[0] == doctest::Approx(sc.omega_to_natural(3e15)));
  CHECK(s.q[1] == doctest::Approx(1.5));
  CHECK(s.geometry.d == doctest::Approx(2.0));
  // The override reinterprets the same numbers in natural units.
  CHECK(parse_scenario(text, UnitSystem::natural).geometry.d == 2e-7);
  const Scenario hydro = parse_scenario(
      "schema = 1\nname = \"h\"\nunits = \"si\"\n[media.m]\ntype = \"hydrodynamic\"\nplasma_frequency = 1e15\n"
      "damping = 1e13\nbeta = 1e6\n[geometry]\nkind = \"bulk\"\nmedium = \"m\"\n[sweep]\nq = [1e6]\nomega = [1e15]\n");
  CHECK(hydro.medium("m").beta == doctest::Approx(1e6 / units::c_si));
}

TEST_CASE("check registry") {
  const std::set<std::string> required{"kernel-sqrt", "gauge", "projectors", "kk", "schwarz", "integral-relation",
                                       "reciprocity", "e3-identity", "slab-local-oracle", "kf-vacuum",
                                       "perturbative-scaling", "naive-negative"};
  std::set<std::string> names;
  for (const CheckInfo* c : list_checks()) {
    CHECK_FALSE(c->description.empty());
    CHECK_FALSE(c->anchor.empty());
    CHECK(names.insert(c->name).second);
  }
  CHECK(names.size() >= 12);
  for (const auto& n : required) CHECK(names.count(n) == 1);

  const auto slab = list_checks("planar_slab");
  CHECK_FALSE(slab.empty());
  CHECK(slab.size() < names.size());
  for (const CheckInfo* c : slab) CHECK(c->module == "planar_slab");
  CHECK(list_checks("no-such-module").empty());
  CHECK_FALSE(find_check("naive-negative")->expect_pass);
}

TEST_CASE("checks are reproducible for a fixed seed") {
  const CheckInfo* c = find_check("e3-identity");
  const CheckResult a = run_check(*c, 99), b = run_check(*c, 99);
  CHECK(a.status == Status::pass);
  CHECK(a.measured == b.measured);
}

TEST_CASE("number formatting round-trips") {
  dqed::test::Rng r(51);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(dqed::test::uniform(r, -1, 1), static_cast<int>(r() % 200) - 100);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("SHA-256 known answers") {
  CHECK(hex(sha256("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex(sha256("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("kernel files") {
  const auto dir = scratch("kernels");
  dqed::test::Rng r(52);
  MatXc m(6, 6);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = dqed::test::cuniform(r, -1, 1);
  const Sha256 h = sha256("model A");
  save_kernel(dir / "k.bin", m, h);
  CHECK(std::filesystem::file_size(dir / "k.bin") == 8 + 4 + 8 + 8 + 32 + 36 * 16);
  const auto back = load_kernel(dir / "k.bin", h);
  REQUIRE(back);
  CHECK(*back == m);
  CHECK_FALSE(load_kernel(dir / "k.bin", sha256("model B")));
  CHECK_FALSE(load_kernel(dir / "missing.bin", h));
  std::filesystem::resize_file(dir / "k.bin", 100);
  CHECK_FALSE(load_kernel(dir / "k.bin", h));
}

TEST_CASE("kernel cache rebuilds when the model schema changes") {
  const auto dir = scratch("cache");
  const GridPtr g = Grid::periodic_box({2, 2, 2}, {1, 1, 1});
  KernelCache cache(dir);
  int builds = 0;
  auto make = [&](double v) {
    return [&, v] {
      ++builds;
      return DiscreteKernel::identity(g) * cd(v);
    };
  };
  bool hit = true;
  const DiscreteKernel a = cache.get_or_build("medium a", g, make(1.0), &hit);
  CHECK_FALSE(hit);
  const DiscreteKernel b = cache.get_or_build("medium a", g, make(1.0), &hit);
  CHECK(hit);
  CHECK(b.m == a.m);
  const DiscreteKernel c = cache.get_or_build("medium b", g, make(2.0), &hit);
  CHECK_FALSE(hit);
  CHECK(c.m(0, 0) == cd(2.0));
  CHECK(builds == 2);
}

TEST_CASE("parallel_for") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::count(hits.begin(), hits.end(), 1) == 1000);
  CHECK_THROWS_AS(parallel_for(100, 3, [](std::size_t i) {
                    if (i == 42) throw ParameterError("boom");
                  }),
                  ParameterError);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  const Scenario s = load_scenario(std::filesystem::path(DQED_SOURCE_DIR) / "scenarios/vacuum_slab.toml");
  std::ostringstream log;
  RunOptions one{scratch("run1"), 1, {}}, four{scratch("run4"), 4, {}};
  const RunReport a = run_scenario(s, one, log);
  const RunReport b = run_scenario(s, four, log);
  CHECK(a.as_expected());
  REQUIRE(a.outputs.size() == 2);
  for (const char* f : {"slab_green.csv", "slab_admittance.csv", "report.json"})
    CHECK(slurp(one.out_dir / s.name / f) == slurp(four.out_dir / s.name / f));
  CHECK(slurp(one.out_dir / s.name / "report.json").find("seconds") == std::string::npos);
}

TEST_CASE("the naive kernel demo fails the negative check as expected") {
  const Scenario s = load_scenario(std::filesystem::path(DQED_SOURCE_DIR) / "scenarios/naive_kernel_demo.toml");
  std::ostringstream log;
  const RunReport rep = run_scenario(s, RunOptions{scratch("naive"), 2, {}}, log);
  CHECK(rep.as_expected());
  bool saw = false;
  for (std::size_t i = 0; i < rep.checks.size(); ++i)
    if (rep.checks[i].name == "naive-negative") {
      saw = true;
      CHECK(rep.checks[i].status == Status::fail);
      CHECK_FALSE(rep.expected_pass[i]);
    }
  CHECK(saw);
}
