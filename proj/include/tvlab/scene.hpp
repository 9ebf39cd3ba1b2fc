#pragma once

#include <optional>
#include <string>

#include "tvlab/setspec.hpp"
#include "tvlab/vec.hpp"

namespace tvlab {

// A pair of closed sets with a common reference point and an optional exact oracle for
// the intersection A ∩ B.
struct Scene {
  std::string name;
  int ambient_dim = 0;
  SetSpec A;
  SetSpec B;
  Vec xbar;
  std::optional<SetSpec> intersection;

  // xbar in both sets within tolerance; oracle (when present) spot-checked by sampling
  void validate() const;
};

std::string to_json_string(const Scene& scene, int indent = -1);
Scene scene_from_json_string(const std::string& text);
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace tvlab
