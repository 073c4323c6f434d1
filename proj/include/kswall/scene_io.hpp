#pragma once

#include <string>
#include <vector>

#include "kswall/scene.hpp"

namespace kswall {

// Scene documents are JSON:
//   {
//     "chart": [xmin, ymin, xmax, ymax],
//     "flux_rank": 0,
//     "flux_z": [[re, im], ...],
//     "basepoint": [x, y],
//     "singularities": [
//       {"position": [x, y], "thimble": [a, b, f1...],
//        "slope": [re, im], "cut_angle": radians}, ...
//     ]
//   }
// slope defaults to [1, 0] and cut_angle to -pi/2.
struct SceneLoad {
  bool ok = false;
  Scene scene;
  std::vector<Diagnostic> diagnostics;  // parse and validation findings
};

SceneLoad parse_scene(const std::string& json_text);
SceneLoad load_scene(const std::string& path);

std::string scene_to_json(const Scene& scene);

}  // namespace kswall
