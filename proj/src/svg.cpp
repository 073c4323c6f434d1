#include "kswall/svg.hpp"

#include <sstream>

namespace kswall {

SvgCanvas::SvgCanvas(const ChartRect& chart, int pixels) : chart_(chart) {
  scale_ = pixels / chart.width();
  width_ = pixels;
  height_ = chart.height() * scale_;
}

std::string SvgCanvas::map_point(Complex u) const {
  std::ostringstream os;
  os << (u.real() - chart_.xmin) * scale_ << ','
     << (chart_.ymax - u.imag()) * scale_;  // y grows downward in SVG
  return os.str();
}

void SvgCanvas::add_scene(const Scene& scene) {
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const auto& s = scene.singularity(i);
    std::ostringstream os;
    // branch cut
    Complex cut_dir = std::polar(1.0, s.cut_angle);
    Complex far = s.position + cut_dir * (chart_.diameter());
    os << "<line id=\"cut-" << i << "\" x1=\"";
    std::string p1 = map_point(s.position), p2 = map_point(far);
    os << p1.substr(0, p1.find(',')) << "\" y1=\"" << p1.substr(p1.find(',') + 1)
       << "\" x2=\"" << p2.substr(0, p2.find(',')) << "\" y2=\""
       << p2.substr(p2.find(',') + 1)
       << "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>";
    elements_.push_back(os.str());
    std::ostringstream oc;
    std::string c = map_point(s.position);
    oc << "<circle id=\"sing-" << i << "\" cx=\"" << c.substr(0, c.find(','))
       << "\" cy=\"" << c.substr(c.find(',') + 1)
       << "\" r=\"4\" fill=\"#1f4e9c\"><title>" << s.thimble.to_string()
       << "</title></circle>";
    elements_.push_back(oc.str());
  }
  add_point(scene.basepoint(), "basepoint", "#444444");
}

void SvgCanvas::add_wall(const WallLocus& wall, int index) {
  int piece = 0;
  for (const auto& poly : wall.pieces) {
    std::ostringstream os;
    os << "<polyline id=\"wall-" << index << "-" << piece++ << "\" points=\"";
    for (Complex p : poly) os << map_point(p) << ' ';
    os << "\" fill=\"none\" stroke=\"#c03030\" stroke-width=\"1.5\"/>";
    elements_.push_back(os.str());
  }
  if (wall.degenerate) {
    std::ostringstream os;
    os << "<text id=\"wall-" << index << "-degenerate\" x=\"8\" y=\"16\" "
       << "fill=\"#c03030\">degenerate wall (proportional charges)</text>";
    elements_.push_back(os.str());
  }
}

void SvgCanvas::add_ray(const InitialRay& ray, int index) {
  std::ostringstream os;
  Complex end = ray.origin + ray.direction * ray.length;
  std::string p1 = map_point(ray.origin), p2 = map_point(end);
  os << "<line id=\"ray-" << index << "\" x1=\"" << p1.substr(0, p1.find(','))
     << "\" y1=\"" << p1.substr(p1.find(',') + 1) << "\" x2=\""
     << p2.substr(0, p2.find(',')) << "\" y2=\"" << p2.substr(p2.find(',') + 1)
     << "\" stroke=\"#2c8a2c\" stroke-width=\"1\"/>";
  elements_.push_back(os.str());
}

void SvgCanvas::add_disc(const TropicalDisc& disc, int index) {
  for (std::size_t e = 0; e < disc.edges.size(); ++e) {
    const auto& edge = disc.edges[e];
    std::ostringstream os;
    std::string p1 = map_point(disc.vertices[edge.from]);
    std::string p2 = map_point(disc.vertices[edge.to]);
    os << "<line id=\"disc-" << index << "-edge-" << e << "\" x1=\""
       << p1.substr(0, p1.find(',')) << "\" y1=\"" << p1.substr(p1.find(',') + 1)
       << "\" x2=\"" << p2.substr(0, p2.find(',')) << "\" y2=\""
       << p2.substr(p2.find(',') + 1) << "\" stroke=\"#7a3fa8\" stroke-width=\""
       << (1 + edge.weight) << "\"><title>" << edge.charge.to_string()
       << "</title></line>";
    elements_.push_back(os.str());
  }
  add_point(disc.vertices[disc.root], "disc-" + std::to_string(index) + "-root",
            "#7a3fa8");
}

void SvgCanvas::add_point(Complex p, const std::string& id, const std::string& color) {
  std::ostringstream os;
  std::string c = map_point(p);
  os << "<circle id=\"" << id << "\" cx=\"" << c.substr(0, c.find(',')) << "\" cy=\""
     << c.substr(c.find(',') + 1) << "\" r=\"3\" fill=\"" << color << "\"/>";
  elements_.push_back(os.str());
}

std::string SvgCanvas::finish() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
     << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' ' << height_
     << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width_ << "\" height=\"" << height_
     << "\" fill=\"#ffffff\"/>\n";
  for (const auto& e : elements_) os << e << '\n';
  os << "</svg>\n";
  return os.str();
}

}  // namespace kswall
