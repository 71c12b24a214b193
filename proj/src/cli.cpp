#include "minksum/cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "minksum/baselines.hpp"
#include "minksum/collision.hpp"
#include "minksum/cspace.hpp"
#include "minksum/io.hpp"
#include "minksum/random_bodies.hpp"
#include "minksum/svg.hpp"
#include "minksum/timing.hpp"

namespace mink {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Mean-error gates for `validate`.
constexpr double kImplicitGate2D = 1e-12;
constexpr double kImplicitGate3D = 1e-8;
constexpr double kGradientGate = 1e-5;
constexpr double kSupportGate = 1e-9;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Command, seed, echoed options, per-stage wall time and written files.
struct Manifest {
  Manifest(std::string cmd, std::uint64_t s) : command(std::move(cmd)), seed(s) {}

  std::string command;
  std::uint64_t seed = 0;
  json config = json::object();
  json stages = json::object();
  std::vector<std::string> files;

  template <typename F>
  auto timed(const std::string& stage, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      stages[stage] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto r = fn();
      finish();
      return r;
    }
  }

  json to_json() const {
    return json{{"command", command}, {"seed", seed}, {"config", config},
                {"wall_seconds", stages}, {"files", files}};
  }
};

struct Common {
  std::uint64_t seed = 1;
  std::optional<int> grid;
  std::string mode = "contact";
  std::string method = "normal";
  std::string format = "csv";
  std::string out;
  std::string manifest;
  SolverConfig solver;
};

void apply_thread_cap() {
  if (const char* env = std::getenv("MINKSUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) omp_set_num_threads(static_cast<int>(n));
  }
}

GridSpec grid_for(int dim, int n) {
  if (n < 1 || (dim == 3 && n < 3)) {
    throw UsageError("--grid must be >= " + std::string(dim == 2 ? "1" : "3"));
  }
  return dim == 2 ? GridSpec::planar(n) : GridSpec::spatial(n, n);
}

void emit(const std::string& text, const std::string& path, std::ostream& out, Manifest& m) {
  if (path.empty()) {
    out << text;
    return;
  }
  write_text(path, text);
  m.files.push_back(path);
}

void finish_manifest(Manifest& m, const std::string& path) {
  if (path.empty()) return;
  write_text(path, m.to_json().dump(2) + "\n");
}

std::pair<BodyInstance, BodyInstance> load_pair(const std::vector<std::string>& files) {
  if (files.size() != 2) throw UsageError("expected two body files");
  BodyInstance b1 = read_body(files[0]);
  BodyInstance b2 = read_body(files[1]);
  if (b1.dim() != b2.dim()) throw FormatError("body files have different dimensions");
  return {std::move(b1), std::move(b2)};
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--max-iters", cfg.max_iters, "LM iteration cap");
  cmd->add_option("--residual-tol", cfg.residual_tol, "LM residual tolerance");
  cmd->add_option("--step-tol", cfg.step_tol, "LM step tolerance");
  cmd->add_option("--damping", cfg.damping_init, "LM initial damping");
  cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step");
}

json solver_json(const SolverConfig& c) {
  return json{{"max_iters", c.max_iters},       {"residual_tol", c.residual_tol},
              {"step_tol", c.step_tol},         {"damping_init", c.damping_init},
              {"damping_up", c.damping_up},     {"damping_down", c.damping_down},
              {"fd_step", c.fd_step}};
}

int cmd_minksum(const Common& c, const std::vector<std::string>& files, std::ostream& out) {
  Manifest m("minksum", c.seed);
  auto [b1, b2] = m.timed("load", [&] { return load_pair(files); });
  const int dim = b1.dim();
  const int n = c.grid.value_or(dim == 2 ? 1000 : 100);
  m.config = {{"grid", n}, {"mode", c.mode}, {"format", c.format}};
  const MinkSumQuery query{b1, b2, sum_mode_from_string(c.mode)};
  const std::vector<SphericalParam> grid = make_grid(grid_for(dim, n));
  const BoundaryCloud cloud = m.timed("cloud", [&] { return boundary_cloud(query, grid); });
  m.timed("write", [&] {
    if (cloud_format_from_string(c.format) == CloudFormat::csv) {
      emit(cloud_to_csv(cloud), c.out, out, m);
    } else {
      emit(cloud_to_json(cloud).dump(1) + "\n", c.out, out, m);
    }
  });
  finish_manifest(m, c.manifest);
  return 0;
}

int cmd_validate(const Common& c, const std::vector<std::string>& files, int random_dim,
                 int support_grid, std::ostream& out, std::ostream& err) {
  Manifest m("validate", c.seed);
  std::optional<BodyInstance> b1, b2;
  if (!files.empty()) {
    auto pair = load_pair(files);
    b1 = std::move(pair.first);
    b2 = std::move(pair.second);
  } else if (random_dim == 2 || random_dim == 3) {
    Rng rng(c.seed);
    b1 = random_body(random_dim, rng);
    b2 = random_body(random_dim, rng);
  } else {
    throw UsageError("validate needs two body files or --random-dim 2|3");
  }
  const int dim = b1->dim();
  const int n = c.grid.value_or(dim == 2 ? 1000 : 100);
  const int ns = support_grid > 0 ? support_grid : (dim == 2 ? 50 : 30);
  m.config = {{"grid", n}, {"support_grid", ns}, {"random_dim", random_dim}};

  const MinkSumQuery query{*b1, *b2, SumMode::contact};
  const KissingReport report = m.timed("kissing", [&] {
    const std::vector<SphericalParam> grid = make_grid(grid_for(dim, n));
    return kissing_errors(query, boundary_cloud(query, grid));
  });
  const double violation = m.timed("support", [&] {
    const std::vector<SphericalParam> grid = make_grid(grid_for(dim, ns));
    const BoundaryCloud cloud = boundary_cloud(query, grid);
    return support_check(cloud, sample_surface(*b1, grid), sample_surface(*b2, grid));
  });

  const double implicit_gate = dim == 2 ? kImplicitGate2D : kImplicitGate3D;
  const bool pass = report.mean_implicit <= implicit_gate && report.mean_gradient <= kGradientGate &&
                    violation <= kSupportGate;
  json j{{"dim", dim},
         {"bodies", {body_to_json(*b1), body_to_json(*b2)}},
         {"kissing", report_to_json(report)},
         {"support", {{"max_violation", violation}, {"grid", ns}}},
         {"thresholds",
          {{"mean_implicit", implicit_gate}, {"mean_gradient", kGradientGate}, {"support", kSupportGate}}},
         {"pass", pass}};
  emit(j.dump(2) + "\n", c.out, out, m);
  finish_manifest(m, c.manifest);
  if (!pass) err << "validate: threshold exceeded\n";
  return pass ? 0 : 1;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v < 3) throw std::invalid_argument(item);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw UsageError("--sizes: '" + item + "' is not an integer >= 3");
    }
  }
  if (sizes.size() < 2) throw UsageError("--sizes needs at least two values");
  return sizes;
}

int cmd_bench(const Common& c, const std::vector<std::string>& files, int dim,
              const std::string& sizes_text, int reps, bool check, std::ostream& out,
              std::ostream& err) {
  Manifest m("bench", c.seed);
  const std::vector<std::size_t> sizes = parse_sizes(sizes_text);
  std::optional<MinkSumQuery> query;
  if (!files.empty()) {
    auto [b1, b2] = load_pair(files);
    query = MinkSumQuery{b1, b2, sum_mode_from_string(c.mode)};
  } else {
    if (dim != 2 && dim != 3) throw UsageError("--dim must be 2 or 3");
    Rng rng(c.seed);
    BodyInstance b1 = random_body(dim, rng);
    BodyInstance b2 = random_body(dim, rng);
    query = MinkSumQuery{b1, b2, sum_mode_from_string(c.mode)};
  }
  m.config = {{"sizes", sizes}, {"reps", reps}, {"mode", c.mode}};
  const std::vector<SweepRow> rows = m.timed("sweep", [&] { return timing_sweep(*query, sizes, reps); });

  std::string csv = "n,closed_form_s,hull_s,edge_sort_s\n";
  std::vector<double> n, tc, th;
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g\n", r.n, r.closed_form, r.hull, r.edge_sort);
    csv += buf;
    n.push_back(static_cast<double>(r.n));
    tc.push_back(r.closed_form);
    th.push_back(r.hull);
  }
  emit(csv, c.out, out, m);

  const LinearFit fit = fit_line(n, tc);
  bool ok = fit.r2 >= 0.95;
  err << "closed-form linear fit: R^2 = " << fit.r2 << "\n";
  if (query->body1.dim() == 2) {
    const double expo = loglog_exponent(n, th);
    err << "hull baseline log-log exponent: " << expo << "\n";
    ok = ok && expo > 1.3;
  }
  finish_manifest(m, c.manifest);
  return check && !ok ? 1 : 0;
}

int cmd_cspace(const Common& c, const std::string& scene_file, int n_orient, std::ostream& out) {
  Manifest m("cspace", c.seed);
  if (c.out.empty()) throw UsageError("cspace needs --out DIR");
  const Scene scene = m.timed("load", [&] { return read_scene(scene_file); });
  const int dim = scene.dim();
  const int n = c.grid.value_or(dim == 2 ? 50 : 10);
  const CloudFormat format = cloud_format_from_string(c.format);
  m.config = {{"grid", n}, {"orientations", n_orient}, {"format", c.format},
              {"obstacles", scene.obstacles.size()}};

  const std::vector<Orientation> orient = sample_orientations(dim, n_orient, c.seed);
  const std::vector<SphericalParam> grid = make_grid(grid_for(dim, n));
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CSlice> slices = cobstacle_slices(scene, orient, grid);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.stages["slices"] = secs;

  fs::create_directories(c.out);
  json failures = json::array();
  std::size_t n_points = 0;
  m.timed("write", [&] {
    for (std::size_t o = 0; o < slices.size(); ++o) {
      for (std::size_t i = 0; i < slices[o].clouds.size(); ++i) {
        if (!slices[o].failures[i].empty()) {
          failures.push_back({{"orientation", o}, {"obstacle", i}, {"error", slices[o].failures[i]}});
          continue;
        }
        n_points += slices[o].clouds[i].size();
        char name[64];
        std::snprintf(name, sizeof name, "slice_%03zu_obstacle_%03zu.%s", o, i,
                      format == CloudFormat::csv ? "csv" : "json");
        const fs::path path = fs::path(c.out) / name;
        write_point_cloud(slices[o].clouds[i], path, format);
        m.files.push_back(path.string());
      }
    }
  });

  json orientations = json::array();
  for (const Orientation& o : orient) {
    if (dim == 2) {
      orientations.push_back(o.angle);
    } else {
      orientations.push_back({o.quat.w(), o.quat.x(), o.quat.y(), o.quat.z()});
    }
  }
  m.config["orientation_values"] = orientations;
  const double us_per_point = n_points ? 1e6 * secs / static_cast<double>(n_points) : 0.0;
  json manifest = m.to_json();
  manifest["points"] = n_points;
  manifest["us_per_point"] = us_per_point;
  manifest["failures"] = failures;
  const fs::path manifest_path = fs::path(c.out) / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");
  if (!c.manifest.empty()) write_text(c.manifest, manifest.dump(2) + "\n");

  out << "slices: " << slices.size() << " x " << scene.obstacles.size() << " obstacles, " << n_points
      << " points, " << secs << " s, " << us_per_point << " us/point\n";
  return failures.empty() ? 0 : 1;
}

int cmd_collide(const Common& c, const std::vector<std::string>& files, std::ostream& out) {
  Manifest m("collide", c.seed);
  auto [b1, b2] = load_pair(files);
  try {
    c.solver.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  m.config = {{"method", c.method}, {"solver", solver_json(c.solver)}};
  const ProximityResult r =
      m.timed("query", [&] { return proximity_query(b1, b2, method_from_string(c.method), c.solver); });
  emit(result_to_json(r).dump(2) + "\n", c.out, out, m);
  finish_manifest(m, c.manifest);
  return r.status == ContactStatus::inconclusive ? 1 : 0;
}

int cmd_plot2d(const Common& c, const std::vector<std::string>& files,
               const std::vector<std::string>& cloud_files, int placements) {
  Manifest m("plot2d", c.seed);
  if (c.out.empty()) throw UsageError("plot2d needs --out FILE.svg");
  auto [b1, b2] = load_pair(files);
  if (b1.dim() != 2) throw UsageError("plot2d draws 2D bodies only");
  std::vector<std::vector<Vec>> boundaries;
  if (cloud_files.empty()) {
    const MinkSumQuery query{b1, b2, sum_mode_from_string(c.mode)};
    boundaries.push_back(boundary_cloud(query, make_grid(grid_for(2, c.grid.value_or(200)))).points);
  } else {
    for (const std::string& f : cloud_files) {
      CloudData data = read_point_cloud(f);
      if (data.dim != 2) throw UsageError("plot2d: cloud '" + f + "' is not 2D");
      boundaries.push_back(std::move(data.points));
    }
  }
  SvgStyle style;
  style.placements = placements;
  m.config = {{"placements", placements}, {"clouds", cloud_files}};
  write_text(c.out, svg2d(b1, b2, boundaries, style));
  m.files.push_back(c.out);
  finish_manifest(m, c.manifest);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  apply_thread_cap();

  CLI::App app{"Closed-form Minkowski sums of superquadrics"};
  app.require_subcommand(1);
  Common c;
  std::vector<std::string> files;
  std::vector<std::string> cloud_files;
  std::string scene_file;
  std::string sizes = "100,400,1600";
  int random_dim = 0;
  int support_grid = 0;
  int dim = 2;
  int reps = 5;
  int n_orient = 50;
  int placements = 0;
  bool check = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--grid", c.grid, "points per parameter axis");
    cmd->add_option("--out", c.out, "output path (stdout when omitted)");
    cmd->add_option("--manifest", c.manifest, "write a run manifest JSON here");
  };
  const auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", c.mode, "contact or sum")->check(CLI::IsMember({"contact", "sum"}));
  };
  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* mk = app.add_subcommand("minksum", "boundary cloud of two bodies");
  mk->add_option("bodies", files, "body1.json body2.json")->required()->expected(2);
  add_common(mk);
  add_mode(mk);
  add_format(mk);

  CLI::App* val = app.add_subcommand("validate", "kissing-point and support-function checks");
  val->add_option("bodies", files, "body1.json body2.json")->expected(0, 2);
  val->add_option("--random-dim", random_dim, "validate a seeded random pair of this dimension")
      ->check(CLI::IsMember({2, 3}));
  val->add_option("--support-grid", support_grid, "grid for the support check");
  add_common(val);

  CLI::App* bench = app.add_subcommand("bench", "grid-size timing sweep");
  bench->add_option("bodies", files, "body1.json body2.json")->expected(0, 2);
  bench->add_option("--dim", dim, "dimension of the random pair")->check(CLI::IsMember({2, 3}));
  bench->add_option("--sizes", sizes, "comma-separated grid sizes");
  bench->add_option("--reps", reps, "timed repetitions (median reported)")->check(CLI::PositiveNumber);
  bench->add_flag("--check", check, "exit 1 when the scaling checks fail");
  add_common(bench);
  add_mode(bench);

  CLI::App* cs = app.add_subcommand("cspace", "C-obstacle slices of a scene");
  cs->add_option("scene", scene_file, "scene.json")->required();
  cs->add_option("--orientations", n_orient, "number of robot orientations")->check(CLI::PositiveNumber);
  add_common(cs);
  add_format(cs);

  CLI::App* col = app.add_subcommand("collide", "contact status and distance");
  col->add_option("bodies", files, "body1.json body2.json")->required()->expected(2);
  col->add_option("--method", c.method, "ray, normal or common")
      ->check(CLI::IsMember({"ray", "normal", "common"}));
  add_solver_flags(col, c.solver);
  add_common(col);

  CLI::App* plot = app.add_subcommand("plot2d", "SVG figure of a 2D pair");
  plot->add_option("bodies", files, "body1.json body2.json")->required()->expected(2);
  plot->add_option("--cloud", cloud_files, "boundary cloud file(s) to draw");
  plot->add_option("--placements", placements, "copies of body 2 along the boundary")
      ->check(CLI::NonNegativeNumber);
  add_common(plot);
  add_mode(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (mk->parsed()) return cmd_minksum(c, files, out);
    if (val->parsed()) return cmd_validate(c, files, random_dim, support_grid, out, err);
    if (bench->parsed()) return cmd_bench(c, files, dim, sizes, reps, check, out, err);
    if (cs->parsed()) return cmd_cspace(c, scene_file, n_orient, out);
    if (col->parsed()) return cmd_collide(c, files, out);
    if (plot->parsed()) return cmd_plot2d(c, files, cloud_files, placements);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mink
