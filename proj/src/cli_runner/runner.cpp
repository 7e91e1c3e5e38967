#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dqed/bulk_green.hpp"
#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"
#include "dqed/grid_green_solver.hpp"
#include "dqed/planar_slab.hpp"

namespace dqed::cli {
namespace {

using Row = std::vector<cd>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::string> tensor_columns(const std::string& prefix) {
  std::vector<std::string> c;
  for (const char* a : {"x", "y", "z"})
    for (const char* b : {"x", "y", "z"}) c.push_back(prefix + a + b);
  return c;
}

void append_tensor(Row& row, const Mat3c& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
}

void append_block(Row& row, const TangentialBlock& b) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) row.push_back(b(i, j));
}

// One output table: columns plus rows computed independently, by index.
struct Table {
  std::string file;
  std::vector<std::string> columns;
  std::vector<bool> complex;
  std::size_t rows = 0;
  std::function<Row(std::size_t)> compute;
};

void add(Table& t, const std::string& name, bool is_complex) {
  t.columns.push_back(name);
  t.complex.push_back(is_complex);
}

cd frequency(const Scenario& s, std::size_t i) { return cd(s.omega[i], s.omega_imag); }

Table bulk_table(const Scenario& s, const std::string& out) {
  const HomogeneousKSpace m = s.medium(s.geometry.medium).model();
  Table t;
  t.file = "bulk_" + out + ".csv";
  t.rows = s.q.size() * s.omega.size();
  add(t, "q", false);
  add(t, "omega", true);
  if (out == "dispersion") {
    add(t, "d_perp", true);
    add(t, "d_par", true);
    t.compute = [&s, m](std::size_t i) {
      const double q = s.q[i / s.omega.size()];
      const cd w = frequency(s, i % s.omega.size());
      const DispersionPair d = dispersion(m, q, w);
      return Row{q, w, d.perp, d.par};
    };
  } else {
    for (const auto& c : tensor_columns("g_")) add(t, c, true);
    t.compute = [&s, m](std::size_t i) {
      const double q = s.q[i / s.omega.size()];
      const cd w = frequency(s, i % s.omega.size());
      Row row{q, w};
      append_tensor(row, bulk_green_k(m, Vec3(q, 0.0, 0.0), w));
      return row;
    };
  }
  return t;
}

Table impedance_table(const Scenario& s) {
  const HomogeneousKSpace m = s.medium(s.geometry.medium).model();
  Table t;
  t.file = "half_space_impedance.csv";
  t.rows = s.q.size() * s.omega.size();
  add(t, "q", false);
  add(t, "omega", true);
  add(t, "z_s", true);
  add(t, "z_p", true);
  add(t, "error", false);
  const QuadratureSpec spec{.rel_tol = s.rel_tol};
  t.compute = [&s, m, spec](std::size_t i) {
    const double q = s.q[i / s.omega.size()];
    const cd w = frequency(s, i % s.omega.size());
    const ImpedancePair z = kliever_fuchs(m, q, w, spec);
    return Row{q, w, z.zs, z.zp, z.error};
  };
  return t;
}

SlabMedia slab_media(const Scenario& s) {
  const Geometry& g = s.geometry;
  return {s.medium(g.lower).model(), s.medium(g.slab).model(), s.medium(g.upper).model(), g.d};
}

Table slab_table(const Scenario& s, const std::string& out) {
  const SlabMedia media = slab_media(s);
  const QuadratureSpec spec{.rel_tol = s.rel_tol};
  Table t;
  add(t, "q", false);
  add(t, "omega", true);
  if (out == "green") {
    // Lateral wavevector Q = (q, 0). Each row also carries the reciprocity
    // error |G(z_p, z, Q) − Gᵀ(z, z_p, −Q)| / |G|.
    t.file = "slab_green.csv";
    const std::size_t nh = s.geometry.heights.size();
    t.rows = s.q.size() * s.omega.size();
    add(t, "z_p", false);
    add(t, "z", false);
    for (const auto& c : tensor_columns("g_")) add(t, c, true);
    add(t, "reciprocity", false);
    t.compute = [&s, media, spec, nh](std::size_t i) {
      const Vec2 q(s.q[i / s.omega.size()], 0.0);
      const cd w = frequency(s, i % s.omega.size());
      const SlabGreen plus(media, q, w, spec), minus(media, -q, w, spec);
      Row all;
      for (std::size_t h = 0; h < nh; ++h) {
        const auto [zp, z] = s.geometry.heights[h];
        const Mat3c g = plus.green(zp, z);
        const Mat3c gt = minus.green(z, zp).transpose();
        Row row{q.x(), w, zp, z};
        append_tensor(row, g);
        row.push_back((g - gt).norm() / g.norm());
        all.insert(all.end(), row.begin(), row.end());
      }
      return all;
    };
  } else {
    t.file = "slab_admittance.csv";
    t.rows = s.q.size() * s.omega.size();
    for (const char* b : {"y00_", "ydd_"})
      for (const char* c : {"ss", "sq", "qs", "qq"}) add(t, std::string(b) + c, true);
    t.compute = [&s, media, spec](std::size_t i) {
      const Vec2 q(s.q[i / s.omega.size()], 0.0);
      const cd w = frequency(s, i % s.omega.size());
      const SlabAdmittance y = slab_admittance(media, q, w, spec);
      Row row{q.x(), w};
      append_block(row, y.y00);
      append_block(row, y.ydd);
      return row;
    };
  }
  return t;
}

GridPtr scenario_grid(const Scenario& s) {
  const int n = s.geometry.n;
  const double l = s.geometry.cell;
  return Grid::periodic_box({n, n, n}, {l, l, l});
}

std::string kernel_schema(const Scenario& s, cd w) {
  return "kernel/v1;" + s.medium(s.geometry.medium).schema() + ";n=" + std::to_string(s.geometry.n) +
         ";cell=" + format_double(s.geometry.cell) + ";w=" + format_double(w.real()) + "," +
         format_double(w.imag());
}

struct GridContext {
  std::filesystem::path kernel_dir;
  std::filesystem::path cache_dir;
  std::mutex cache_mutex;
};

DiscreteKernel grid_kernel(const Scenario& s, cd w, GridContext& ctx, bool* hit) {
  const GridPtr g = scenario_grid(s);
  const HomogeneousKSpace m = s.medium(s.geometry.medium).model();
  auto build = [&] { return homogeneous_kernel(m, w, g); };
  if (!s.cache_kernels) {
    if (hit) *hit = false;
    return build();
  }
  // Cache files are keyed by content hash, so concurrent writers would only
  // race on identical data; serialize anyway to keep the rename atomic.
  std::lock_guard<std::mutex> lock(ctx.cache_mutex);
  return KernelCache(ctx.cache_dir).get_or_build(kernel_schema(s, w), g, build, hit);
}

Table grid_table(const Scenario& s, const std::string& out, GridContext& ctx) {
  Table t;
  add(t, "omega", true);
  t.rows = s.omega.size();
  if (out == "integral-relation") {
    t.file = "grid_integral_relation.csv";
    add(t, "residual", false);
    add(t, "solve_residual", false);
    add(t, "reciprocity", false);
    add(t, "decay_lengths_across", false);
    t.compute = [&s, &ctx](std::size_t i) {
      const cd w = frequency(s, i);
      const DiscreteKernel q = grid_kernel(s, w, ctx, nullptr);
      const GreenSolution g = solve_green(build_H(q, w));
      const double r = verify_integral_relation(g, hermitian_split(q).sigma);
      return Row{w, r, g.residual, g.reciprocity, preflight(q, w).lengths_across};
    };
  } else {
    // The kernel matrix goes to kernels/kernel_<i>.bin; the table holds a summary.
    t.file = "grid_kernel.csv";
    add(t, "dim", false);
    add(t, "norm", false);
    t.compute = [&s, &ctx](std::size_t i) {
      const cd w = frequency(s, i);
      const DiscreteKernel q = grid_kernel(s, w, ctx, nullptr);
      save_kernel(ctx.kernel_dir / ("kernel_" + std::to_string(i) + ".bin"), q.m,
                  sha256(kernel_schema(s, w)));
      return Row{w, static_cast<double>(q.dim()), q.m.norm()};
    };
  }
  return t;
}

std::string units_name(UnitSystem u) { return u == UnitSystem::si ? "si" : "natural"; }

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + p.string());
  os << text;
}

}  // namespace

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first) first = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

bool RunReport::as_expected() const {
  for (std::size_t i = 0; i < checks.size(); ++i)
    if (checks[i].status == Status::error || (checks[i].status == Status::pass) != expected_pass[i]) return false;
  return true;
}

RunReport run_scenario(const Scenario& s, const RunOptions& opt, std::ostream& log) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.scenario = s.name;
  const std::filesystem::path dir = opt.out_dir / s.name;
  std::filesystem::create_directories(dir);

  GridContext ctx;
  ctx.kernel_dir = dir / "kernels";
  ctx.cache_dir = opt.out_dir / "cache";

  nlohmann::json timings = nlohmann::json::object();
  for (const std::string& out : s.outputs) {
    const auto t1 = Clock::now();
    Table t;
    try {
      switch (s.geometry.kind) {
        case GeometryKind::bulk: t = bulk_table(s, out); break;
        case GeometryKind::half_space: t = impedance_table(s); break;
        case GeometryKind::slab: t = slab_table(s, out); break;
        case GeometryKind::grid: t = grid_table(s, out, ctx); break;
      }
      std::vector<Row> rows(t.rows);
      parallel_for(t.rows, opt.threads, [&](std::size_t i) { rows[i] = t.compute(i); });
      CsvWriter csv(dir / t.file, t.columns, t.complex);
      // A job may return several table rows back to back (one per slab height pair).
      const std::size_t width = t.complex.size();
      for (const Row& r : rows)
        for (std::size_t k = 0; k < r.size(); k += width) csv.row(Row(r.begin() + k, r.begin() + k + width));
    } catch (const Error& e) {
      throw Error("scenario '" + s.name + "', output '" + out + "': " + e.what());
    }
    rep.outputs.push_back(dir / t.file);
    timings["outputs"][out] = seconds_since(t1);
    log << "wrote " << (dir / t.file).string() << "\n";
  }

  rep.checks.resize(s.checks.size());
  for (const CheckRequest& c : s.checks) rep.expected_pass.push_back(c.expect_pass);
  parallel_for(s.checks.size(), opt.threads, [&](std::size_t i) {
    rep.checks[i] = run_check(*find_check(s.checks[i].name), s.seed);
  });

  nlohmann::json checks = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const CheckResult& c = rep.checks[i];
    const bool ok = c.status != Status::error && (c.status == Status::pass) == rep.expected_pass[i];
    log << c.name << ": " << status_name(c.status) << (rep.expected_pass[i] ? "" : " (expected fail)")
        << (ok ? "" : "  <-- unexpected") << "  measured " << c.measured << " threshold " << c.threshold << "\n";
    checks.push_back({{"name", c.name},
                      {"status", status_name(c.status)},
                      {"expected", rep.expected_pass[i] ? "pass" : "fail"},
                      {"as_expected", ok},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail}});
    timings["checks"][c.name] = c.seconds;
  }

  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& p : rep.outputs) outputs.push_back(p.filename().string());
  const nlohmann::json report{{"scenario", s.name},
                              {"seed", s.seed},
                              {"input_units", units_name(s.units)},
                              {"output_units", "natural"},
                              {"checks", checks},
                              {"outputs", outputs},
                              {"as_expected", rep.as_expected()}};
  write_text(dir / "report.json", report.dump(2) + "\n");

  rep.seconds = seconds_since(t0);
  timings["total"] = rep.seconds;
  write_text(dir / "timings.json", timings.dump(2) + "\n");
  log << "report: " << (dir / "report.json").string() << "\n";
  return rep;
}

}  // namespace dqed::cli
