#pragma once

#include <string>
#include <vector>

#include "kswall/affine.hpp"
#include "kswall/tropical.hpp"

namespace kswall {

// Static SVG 1.1 rendering of scene geometry. Every singularity, wall
// polyline, ray and disc edge gets a stable id so outputs are diffable.
class SvgCanvas {
 public:
  SvgCanvas(const ChartRect& chart, int pixels = 640);

  void add_scene(const Scene& scene);
  void add_wall(const WallLocus& wall, int index);
  void add_ray(const InitialRay& ray, int index);
  void add_disc(const TropicalDisc& disc, int index);
  void add_point(Complex p, const std::string& id, const std::string& color);

  std::string finish() const;

 private:
  std::string map_point(Complex u) const;
  ChartRect chart_;
  double scale_;
  double width_, height_;
  std::vector<std::string> elements_;
};

}  // namespace kswall
