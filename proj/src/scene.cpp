#include "tvlab/scene.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tvlab/errors.hpp"
#include "tvlab/geometry.hpp"
#include "tvlab/sampling.hpp"

namespace tvlab {

using json = nlohmann::json;

void Scene::validate() const {
  A.validate();
  B.validate();
  if (A.dim() != ambient_dim || B.dim() != ambient_dim ||
      static_cast<int>(xbar.size()) != ambient_dim)
    fail(Err::DimensionMismatch, "scene '" + name + "': A/B/xbar dimensions disagree");
  if (!all_finite(xbar)) fail(Err::BadArgument, "scene xbar has non-finite entries");
  if (!contains(A, xbar) || !contains(B, xbar))
    fail(Err::BadArgument, "scene '" + name + "': xbar is not a common point of A and B");
  if (intersection) {
    intersection->validate();
    if (intersection->dim() != ambient_dim)
      fail(Err::DimensionMismatch, "scene intersection oracle dimension");
    auto pts = sample_set_points(*intersection, xbar, 0.5, 16, 0xc0ffeeULL);
    for (const auto& p : pts.points) {
      if (distance(A, p) > 5e-9 || distance(B, p) > 5e-9)
        fail(Err::BadArgument,
             "scene '" + name + "': intersection oracle leaks outside A or B at " + to_string(p));
    }
  }
}

std::string to_json_string(const Scene& scene, int indent) {
  json j{{"name", scene.name},
         {"dim", scene.ambient_dim},
         {"A", json::parse(to_json_string(scene.A))},
         {"B", json::parse(to_json_string(scene.B))},
         {"xbar", scene.xbar}};
  if (scene.intersection) j["intersection"] = json::parse(to_json_string(*scene.intersection));
  return j.dump(indent);
}

Scene scene_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::ParseError, e.what());
  }
  Scene s;
  try {
    s.name = j.at("name").get<std::string>();
    s.ambient_dim = j.at("dim").get<int>();
    s.A = setspec_from_json_string(j.at("A").dump());
    s.B = setspec_from_json_string(j.at("B").dump());
    s.xbar = j.at("xbar").get<std::vector<double>>();
    if (j.contains("intersection") && !j.at("intersection").is_null())
      s.intersection = setspec_from_json_string(j.at("intersection").dump());
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("scene: ") + e.what());
  }
  s.validate();
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::ParseError, "cannot open scene file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json_string(ss.str());
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Err::BadArgument, "cannot write scene file " + path);
  out << to_json_string(scene, 2) << "\n";
}

}  // namespace tvlab
