#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dqed/core/grid.hpp"
#include "dqed/response_models.hpp"

namespace dqed::cli {

// ---- scenario ---------------------------------------------------------------

enum class UnitSystem { natural, si };

// A named medium as written in the scenario, already in natural units.
struct MediumSpec {
  std::string name;
  std::string type;  // vacuum | dielectric | drude | hydrodynamic | magnetodielectric
  cd epsilon = 1.0;
  DrudeLorentzParams electric;
  DrudeLorentzParams magnetic;
  double beta = 0.0;

  HomogeneousKSpace model() const;
  // Canonical text of every parameter; feeds the kernel-cache hash.
  std::string schema() const;
};

enum class GeometryKind { bulk, half_space, slab, grid };

struct Geometry {
  GeometryKind kind = GeometryKind::bulk;
  std::string medium;                     // bulk, half-space, grid
  std::string lower, slab, upper;         // slab
  double d = 0.0;                         // slab thickness
  std::vector<std::array<double, 2>> heights;  // slab (z_p, z) pairs
  int n = 0;                              // grid points per edge
  double cell = 0.0;                      // grid box edge
};

struct CheckRequest {
  std::string name;
  bool expect_pass = true;
};

struct Scenario {
  int schema = 1;
  std::string name;
  std::uint64_t seed = 12345;
  UnitSystem units = UnitSystem::natural;
  double length_scale_m = 1e-6;  // ℓ when units = si
  std::map<std::string, MediumSpec> media;
  Geometry geometry;
  std::vector<double> q;      // lateral or bulk wavenumbers
  std::vector<double> omega;  // real parts
  double omega_imag = 0.0;
  std::vector<std::string> outputs;
  std::vector<CheckRequest> checks;
  double rel_tol = 1e-9;
  bool cache_kernels = false;

  const MediumSpec& medium(const std::string& name) const;
};

// Throws ValidationError naming the offending field (dotted path).
Scenario load_scenario(const std::filesystem::path& file, std::optional<UnitSystem> units_override = {});
Scenario parse_scenario(const std::string& toml_text, std::optional<UnitSystem> units_override = {});

// ---- checks -----------------------------------------------------------------

enum class Status { pass, fail, error };
const char* status_name(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::error;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;  // reported apart from deterministic outputs
};

struct CheckInfo {
  std::string name;
  std::string module;
  std::string description;
  std::string anchor;  // where the verified relation comes from, in words
  bool expect_pass = true;
  std::function<CheckResult(std::uint64_t seed)> run;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(const std::string& name);
// Entries whose name or module contains `filter` (all when empty).
std::vector<const CheckInfo*> list_checks(const std::string& filter = "");
CheckResult run_check(const CheckInfo& c, std::uint64_t seed);

// ---- outputs ----------------------------------------------------------------

// CSV with a header row; complex columns are written as <name>_re, <name>_im.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns,
            std::vector<bool> complex_column);
  void row(const std::vector<cd>& values);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<bool> complex_;
  std::string buffer_;
};

// Shortest decimal form that round-trips, so output is byte-identical across runs.
std::string format_double(double v);

// ---- kernel cache -----------------------------------------------------------

using Sha256 = std::array<std::uint8_t, 32>;
Sha256 sha256(const std::string& text);
std::string hex(const Sha256& h);

// Binary layout: magic "DQEDKRN1", u32 schema version, u64 rows, u64 cols,
// 32-byte SHA-256 of the model schema, then rows·cols complex doubles
// (re, im) in row-major order. Little-endian host order.
void save_kernel(const std::filesystem::path& file, const MatXc& m, const Sha256& schema_hash);
// nullopt when the file is missing, malformed, or was built for another schema.
std::optional<MatXc> load_kernel(const std::filesystem::path& file, const Sha256& schema_hash);

class KernelCache {
 public:
  explicit KernelCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  DiscreteKernel get_or_build(const std::string& schema, GridPtr grid,
                              const std::function<DiscreteKernel()>& build, bool* hit = nullptr);

 private:
  std::filesystem::path dir_;
};

// ---- runner -----------------------------------------------------------------

struct RunOptions {
  std::filesystem::path out_dir = "out";
  int threads = 1;
  std::optional<UnitSystem> units;
};

struct RunReport {
  std::string scenario;
  std::vector<CheckResult> checks;
  std::vector<bool> expected_pass;
  std::vector<std::filesystem::path> outputs;
  double seconds = 0.0;

  // True when every check ended as its scenario expected.
  bool as_expected() const;
};

RunReport run_scenario(const Scenario& s, const RunOptions& opt, std::ostream& log);

// Runs fn(i) for i in [0, n) on `threads` workers; results land by index.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace dqed::cli
