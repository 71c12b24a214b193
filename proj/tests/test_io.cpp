#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>

#include "doctest.h"
#include "minksum/io.hpp"
#include "minksum/svg.hpp"
#include "support.hpp"

using namespace mink;
using nlohmann::json;
using testing::vec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "minksum_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_closed_paths(const std::string& svg) {
  const std::regex path("<path d=\"M[^\"]* Z\"");
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(svg.begin(), svg.end(), path),
                                                std::sregex_iterator()));
}

BoundaryCloud random_cloud(int dim, int n, std::uint64_t seed, SumMode mode = SumMode::contact) {
  Rng rng(seed);
  RandomBodyOptions opts;
  opts.center_range = 5;
  const MinkSumQuery q{random_body(dim, rng, opts), random_body(dim, rng, opts), mode};
  return boundary_cloud(q, make_grid(testing::grid_of(dim, n)));
}

}  // namespace

TEST_CASE("cloud CSV layout") {
  const MinkSumQuery q{testing::unit_circle(vec({0, 0})), testing::unit_circle(vec({0, 0})), SumMode::contact};
  const BoundaryCloud one = boundary_cloud(q, make_grid(GridSpec::planar(1)));
  const std::string csv = cloud_to_csv(one);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.rfind("theta,x,y,mode\n", 0) == 0);
  CHECK(csv.find(",contact\n") != std::string::npos);

  const std::string csv3 = cloud_to_csv(random_cloud(3, 4, 1, SumMode::sum));
  CHECK(csv3.rfind("eta,omega,x,y,z,mode\n", 0) == 0);
  CHECK(csv3.find(",sum\n") != std::string::npos);
}

TEST_CASE("cloud round trip is bit-exact") {
  for (int dim : {2, 3}) {
    for (CloudFormat fmt : {CloudFormat::csv, CloudFormat::json}) {
      const BoundaryCloud c = random_cloud(dim, dim == 2 ? 300 : 12, 5 + dim, SumMode::sum);
      const std::string ext = fmt == CloudFormat::csv ? ".csv" : ".json";
      const fs::path p = scratch("rt" + std::to_string(dim) + ext);
      write_point_cloud(c, p, fmt);
      const CloudData back = read_point_cloud(p);
      CHECK(back.dim == dim);
      CHECK(back.mode == SumMode::sum);
      REQUIRE(back.points.size() == c.size());
      bool exact = true;
      for (std::size_t k = 0; k < c.size(); ++k) {
        exact = exact && (back.points[k].array() == c.points[k].array()).all() && back.params[k] == c.params[k];
      }
      CHECK(exact);
    }
  }
}

TEST_CASE("large 3D cloud writes quickly") {
  const BoundaryCloud c = random_cloud(3, 101, 9);
  REQUIRE(c.size() >= 10000);
  const auto start = std::chrono::steady_clock::now();
  write_point_cloud(c, scratch("big.csv"), CloudFormat::csv);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 1.0);
}

TEST_CASE("write errors") {
  const BoundaryCloud c = random_cloud(2, 5, 3);
  CHECK_THROWS_AS(write_point_cloud(c, "/nonexistent-dir/x/cloud.csv", CloudFormat::csv), std::runtime_error);
  CHECK_THROWS_AS(cloud_format_from_string("xml"), FormatError);
}

TEST_CASE("read errors") {
  const fs::path p = scratch("bad.csv");
  write_text(p, "x,y\n1,2\n");
  CHECK_THROWS_AS(read_point_cloud(p), FormatError);
  write_text(p, "theta,x,y,mode\n0,1\n");
  CHECK_THROWS_AS(read_point_cloud(p), FormatError);
  write_text(p, "theta,x,y,mode\n0,1,abc,contact\n");
  CHECK_THROWS_AS(read_point_cloud(p), FormatError);
}

TEST_CASE("body JSON") {
  const BodyInstance b = body_from_json(json::parse(R"({"dim":2,"semi_axes":[2,1],"exponents":0.5})"));
  CHECK(b.shape().eps1() == 0.5);
  CHECK(b.map() == Mat::Identity(2, 2));
  CHECK(b.center() == Vec::Zero(2));

  const json full = json::parse(
      R"({"dim":3,"semi_axes":[1,2,3],"exponents":[0.4,1.2],"M":[[1,0.5,0],[0,1,0],[0,0,2]],"center":[1,-1,0.5]})");
  const BodyInstance b3 = body_from_json(full);
  CHECK(b3.map()(0, 1) == 0.5);
  CHECK(b3.center()(2) == 0.5);
  const BodyInstance again = body_from_json(body_to_json(b3));
  CHECK(again.map() == b3.map());
  CHECK(again.shape().semi_axes() == b3.shape().semi_axes());
  CHECK(again.shape().eps2() == 1.2);

  const auto message = [](const char* text) {
    try {
      (void)body_from_json(json::parse(text));
    } catch (const FormatError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"semi_axes":[1,1],"exponents":[1]})").find("'dim'") != std::string::npos);
  CHECK(message(R"({"dim":2,"exponents":[1]})").find("'semi_axes'") != std::string::npos);
  CHECK(message(R"({"dim":2,"semi_axes":[1,"a"],"exponents":[1]})").find("semi_axes[1]") != std::string::npos);
  CHECK(message(R"({"dim":3,"semi_axes":[1,1,1],"exponents":[1]})").find("'exponents'") != std::string::npos);
  CHECK(message(R"({"dim":2,"semi_axes":[1,1],"exponents":[1],"M":[[1,0]]})").find("'M'") != std::string::npos);
  CHECK(message(R"({"dim":2,"semi_axes":[1,1],"exponents":[1],"center":[0]})").find("'center'") !=
        std::string::npos);
  CHECK(message(R"({"dim":2,"semi_axes":[1,1],"exponents":[2.5]})").find("invalid body") != std::string::npos);
}

TEST_CASE("scene JSON") {
  const json j = json::parse(R"({"robot":{"dim":2,"semi_axes":[0.5,0.3],"exponents":[0.2]},
      "obstacles":[{"dim":2,"semi_axes":[1,1],"exponents":[1],"center":[3,0]},
                   {"dim":2,"semi_axes":[2,1],"exponents":[0.7]}]})");
  const Scene s = scene_from_json(j);
  CHECK(s.dim() == 2);
  CHECK(s.obstacles.size() == 2);
  CHECK(s.robot.eps1() == 0.2);
  CHECK_THROWS_AS(scene_from_json(json::parse(R"({"robot":{"dim":2,"semi_axes":[1,1],"exponents":1}})")),
                  FormatError);
  CHECK_THROWS_AS(scene_from_json(json::parse(
                      R"({"robot":{"dim":2,"semi_axes":[1,1],"exponents":1},"obstacles":[]})")),
                  FormatError);
}

TEST_CASE("report and result JSON") {
  KissingReport r;
  r.mean_gradient = 1e-7;
  r.n_points = 10;
  const json jr = report_to_json(r);
  for (const char* key : {"mean_implicit", "max_implicit", "mean_gradient", "max_gradient", "n_points"}) {
    CHECK(jr.contains(key));
  }
  const ProximityResult p =
      proximity_query(testing::unit_circle(vec({0, 0})), testing::unit_circle(vec({3, 0})), Method::normal);
  const json jp = result_to_json(p);
  for (const char* key : {"status", "distance", "witness1", "witness2", "iterations", "method"}) {
    CHECK(jp.contains(key));
  }
  CHECK(jp["status"] == "separated");
  CHECK(jp["distance"].get<double>() == doctest::Approx(1.0));
  const json jray = result_to_json(
      proximity_query(testing::unit_circle(vec({0, 0})), testing::unit_circle(vec({3, 0})), Method::ray));
  CHECK(jray["distance"].is_null());
}

TEST_CASE("svg figures") {
  const MinkSumQuery circles{testing::unit_circle(vec({0, 0})), testing::unit_circle(vec({0, 0})),
                             SumMode::contact};
  const BoundaryCloud c = boundary_cloud(circles, make_grid(GridSpec::planar(100)));
  const std::string two = svg2d(c);
  CHECK(count_closed_paths(two) == 3);
  CHECK(two.rfind("<?xml", 0) == 0);
  CHECK(two.find("</svg>") != std::string::npos);

  Rng rng(113);
  const MinkSumQuery fig{BodyInstance(Superquadric::planar(1.5, 0.8, 0.4), rotation2d(0.3), Vec::Zero(2)),
                         BodyInstance(Superquadric::planar(0.6, 0.4, 1.4), rotation2d(-0.5), Vec::Zero(2)),
                         SumMode::contact};
  SvgStyle style;
  style.placements = 10;
  const BoundaryCloud fc = boundary_cloud(fig, make_grid(GridSpec::planar(200)));
  CHECK(count_closed_paths(svg2d(fc, style)) == 12);

  const BoundaryCloud empty{circles, {}, {}};
  CHECK(count_closed_paths(svg2d(empty)) == 2);
  CHECK(count_closed_paths(svg2d(empty, style)) == 2);

  const fs::path p = scratch("fig.svg");
  render_svg2d(fc, p, style);
  CHECK(count_closed_paths(slurp(p)) == 12);

  const MinkSumQuery spheres{testing::unit_sphere(vec({0, 0, 0})), testing::unit_sphere(vec({0, 0, 0})),
                             SumMode::contact};
  const BoundaryCloud c3 = boundary_cloud(spheres, make_grid(GridSpec::spatial(4, 4)));
  CHECK_THROWS_AS(svg2d(c3), DomainError);
}
