#include "minksum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mink {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number_field(const json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError("field '" + field + "' must be a number");
  return j.get<double>();
}

Vec vector_field(const json& j, const std::string& field, int expected) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected) {
    throw FormatError("field '" + field + "' must be an array of " + std::to_string(expected) +
                      " numbers");
  }
  Vec v(expected);
  for (int i = 0; i < expected; ++i) {
    v(i) = number_field(j[static_cast<std::size_t>(i)], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat matrix_field(const json& j, const std::string& field, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw FormatError("field '" + field + "' must be a " + std::to_string(d) + "x" +
                      std::to_string(d) + " array of rows");
  }
  Mat M(d, d);
  for (int r = 0; r < d; ++r) {
    const Vec row = vector_field(j[static_cast<std::size_t>(r)], field + "[" + std::to_string(r) + "]", d);
    M.row(r) = row.transpose();
  }
  return M;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw FormatError("cloud: bad number '" + s + "' in " + where);
  return v;
}

}  // namespace

CloudFormat cloud_format_from_string(const std::string& name) {
  if (name == "csv") return CloudFormat::csv;
  if (name == "json") return CloudFormat::json;
  throw FormatError("unknown format '" + name + "' (expected csv or json)");
}

BodyInstance body_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("body description must be a JSON object");
  if (!j.contains("dim")) throw FormatError("missing field 'dim'");
  if (!j["dim"].is_number_integer()) throw FormatError("field 'dim' must be 2 or 3");
  const int d = j["dim"].get<int>();
  if (d != 2 && d != 3) throw FormatError("field 'dim' must be 2 or 3");
  if (!j.contains("semi_axes")) throw FormatError("missing field 'semi_axes'");
  const Vec axes = vector_field(j["semi_axes"], "semi_axes", d);
  if (!j.contains("exponents")) throw FormatError("missing field 'exponents'");
  const json& e = j["exponents"];
  Vec eps;
  if (d == 2 && e.is_number()) {
    eps = Vec::Constant(1, e.get<double>());
  } else {
    eps = vector_field(e, "exponents", d == 2 ? 1 : 2);
  }

  try {
    Superquadric shape = d == 2 ? Superquadric::planar(axes(0), axes(1), eps(0))
                                : Superquadric::spatial(axes(0), axes(1), axes(2), eps(0), eps(1));
    Mat M = j.contains("M") ? matrix_field(j["M"], "M", d) : Mat(Mat::Identity(d, d));
    Vec c = j.contains("center") ? vector_field(j["center"], "center", d) : Vec(Vec::Zero(d));
    return BodyInstance(std::move(shape), std::move(M), std::move(c));
  } catch (const DomainError& err) {
    throw FormatError(std::string("invalid body: ") + err.what());
  }
}

json body_to_json(const BodyInstance& body) {
  const Superquadric& s = body.shape();
  json j;
  j["dim"] = s.dim();
  j["semi_axes"] = vec_json(s.semi_axes());
  j["exponents"] = s.dim() == 2 ? json::array({s.eps1()}) : json::array({s.eps1(), s.eps2()});
  json M = json::array();
  for (int r = 0; r < s.dim(); ++r) M.push_back(vec_json(body.map().row(r).transpose()));
  j["M"] = M;
  j["center"] = vec_json(body.center());
  return j;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

BodyInstance read_body(const std::filesystem::path& path) {
  try {
    return body_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("scene must be a JSON object");
  if (!j.contains("robot")) throw FormatError("missing field 'robot'");
  if (!j.contains("obstacles") || !j["obstacles"].is_array()) {
    throw FormatError("field 'obstacles' must be an array of bodies");
  }
  Scene scene{body_from_json(j["robot"]).shape(), {}};
  for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
    try {
      scene.obstacles.push_back(body_from_json(j["obstacles"][i]));
    } catch (const FormatError& e) {
      throw FormatError("obstacles[" + std::to_string(i) + "]: " + e.what());
    }
  }
  try {
    scene.validate();
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  return scene;
}

Scene read_scene(const std::filesystem::path& path) {
  try {
    return scene_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string cloud_to_csv(const BoundaryCloud& cloud) {
  const int d = cloud.dim();
  std::string out = d == 2 ? "theta,x,y,mode\n" : "eta,omega,x,y,z,mode\n";
  const std::string mode = to_string(cloud.mode());
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const SphericalParam& phi = cloud.params[k];
    if (d == 2) {
      out += fmt17(phi.theta());
    } else {
      out += fmt17(phi.eta) + "," + fmt17(phi.omega);
    }
    for (int i = 0; i < d; ++i) out += "," + fmt17(cloud.points[k](i));
    out += "," + mode + "\n";
  }
  return out;
}

json cloud_to_json(const BoundaryCloud& cloud) {
  json j;
  j["dim"] = cloud.dim();
  j["mode"] = to_string(cloud.mode());
  json params = json::array();
  json points = json::array();
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const SphericalParam& phi = cloud.params[k];
    params.push_back(cloud.dim() == 2 ? json::array({phi.theta()}) : json::array({phi.eta, phi.omega}));
    points.push_back(vec_json(cloud.points[k]));
  }
  j["params"] = std::move(params);
  j["points"] = std::move(points);
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

void write_point_cloud(const BoundaryCloud& cloud, const std::filesystem::path& path,
                       CloudFormat format) {
  for (const Vec& p : cloud.points) {
    if (!p.allFinite()) throw DomainError("write_point_cloud: non-finite point");
  }
  write_text(path, format == CloudFormat::csv ? cloud_to_csv(cloud) : cloud_to_json(cloud).dump(1) + "\n");
}

CloudData read_point_cloud(const std::filesystem::path& path) {
  CloudData data;
  if (path.extension() == ".json") {
    const json j = read_json(path);
    try {
      data.dim = j.at("dim").get<int>();
      data.mode = sum_mode_from_string(j.at("mode").get<std::string>());
      const json& params = j.at("params");
      const json& points = j.at("points");
      for (std::size_t k = 0; k < points.size(); ++k) {
        const json& p = params.at(k);
        data.params.push_back(data.dim == 2 ? SphericalParam::planar(p.at(0).get<double>())
                                            : SphericalParam::spatial(p.at(0).get<double>(),
                                                                      p.at(1).get<double>()));
        data.points.push_back(vector_field(points[k], "points", data.dim));
      }
    } catch (const json::exception& e) {
      throw FormatError("cloud '" + path.string() + "': " + e.what());
    } catch (const DomainError& e) {
      throw FormatError("cloud '" + path.string() + "': " + e.what());
    }
    return data;
  }

  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError("cloud '" + path.string() + "' is empty");
  if (line == "theta,x,y,mode") {
    data.dim = 2;
  } else if (line == "eta,omega,x,y,z,mode") {
    data.dim = 3;
  } else {
    throw FormatError("cloud '" + path.string() + "': unrecognized header '" + line + "'");
  }
  const std::size_t n_params = data.dim == 2 ? 1 : 2;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != n_params + static_cast<std::size_t>(data.dim) + 1) {
      throw FormatError("cloud '" + path.string() + "': wrong column count on line " + std::to_string(row));
    }
    const std::string where = "line " + std::to_string(row);
    data.params.push_back(data.dim == 2 ? SphericalParam::planar(parse_double(cols[0], where))
                                        : SphericalParam::spatial(parse_double(cols[0], where),
                                                                  parse_double(cols[1], where)));
    Vec p(data.dim);
    for (int i = 0; i < data.dim; ++i) p(i) = parse_double(cols[n_params + i], where);
    data.points.push_back(p);
    data.mode = sum_mode_from_string(cols.back());
  }
  return data;
}

json report_to_json(const KissingReport& r) {
  return json{{"mean_implicit", r.mean_implicit},
              {"max_implicit", r.max_implicit},
              {"mean_gradient", r.mean_gradient},
              {"max_gradient", r.max_gradient},
              {"n_points", r.n_points}};
}

json result_to_json(const ProximityResult& r) {
  json j;
  j["status"] = to_string(r.status);
  j["distance"] = r.distance ? json(*r.distance) : json(nullptr);
  j["witness1"] = r.witness1.size() ? vec_json(r.witness1) : json::array();
  j["witness2"] = r.witness2.size() ? vec_json(r.witness2) : json::array();
  j["iterations"] = r.solver.iterations;
  j["method"] = to_string(r.method);
  j["ray_ratio"] = r.ray_ratio;
  return j;
}

}  // namespace mink
