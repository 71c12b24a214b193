#pragma once

// File formats.
//
// Body:   {"dim":3,"semi_axes":[a,b,c],"exponents":[e1,e2],"M":[[..],..],"center":[..]}
//         2D uses "exponents":[e] (or a bare number).  M defaults to identity,
//         center to zero.
// Scene:  {"robot":<body>,"obstacles":[<body>,...]}  (robot M/center ignored)
// Cloud:  CSV with header  theta,x,y,mode  (2D)  or  eta,omega,x,y,z,mode  (3D);
//         values printed with 17 significant digits.  JSON mirror:
//         {"dim":d,"mode":"contact","params":[[..],..],"points":[[..],..]}

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "minksum/baselines.hpp"
#include "minksum/collision.hpp"
#include "minksum/cspace.hpp"
#include "minksum/minkowski.hpp"

namespace mink {

enum class CloudFormat { csv, json };
CloudFormat cloud_format_from_string(const std::string& name);

/// Throws FormatError naming the offending field.
BodyInstance body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const BodyInstance& body);
BodyInstance read_body(const std::filesystem::path& path);

Scene scene_from_json(const nlohmann::json& j);
Scene read_scene(const std::filesystem::path& path);

/// Throws std::runtime_error when the file cannot be written.
void write_point_cloud(const BoundaryCloud& cloud, const std::filesystem::path& path,
                       CloudFormat format);
std::string cloud_to_csv(const BoundaryCloud& cloud);
nlohmann::json cloud_to_json(const BoundaryCloud& cloud);

/// Points and parameters read back from a cloud file (CSV or JSON by extension).
struct CloudData {
  int dim = 2;
  SumMode mode = SumMode::contact;
  std::vector<SphericalParam> params;
  std::vector<Vec> points;
};
CloudData read_point_cloud(const std::filesystem::path& path);

nlohmann::json report_to_json(const KissingReport& report);
nlohmann::json result_to_json(const ProximityResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mink
