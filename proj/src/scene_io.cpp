#include "kswall/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kswall {

namespace {

using nlohmann::json;

Complex read_complex(const json& j, const std::string& field,
                     std::vector<Diagnostic>* diags) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    diags->push_back({Diagnostic::Severity::kError, field,
                      "expected [re, im] with two numbers"});
    return {0, 0};
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SceneLoad parse_scene(const std::string& json_text) {
  SceneLoad out;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    out.diagnostics.push_back({Diagnostic::Severity::kError,
                               "byte " + std::to_string(e.byte), e.what()});
    return out;
  }
  auto err = [&](std::string field, std::string msg) {
    out.diagnostics.push_back({Diagnostic::Severity::kError, std::move(field),
                               std::move(msg)});
  };

  ChartRect chart;
  if (!doc.contains("chart") || !doc["chart"].is_array() || doc["chart"].size() != 4) {
    err("chart", "expected [xmin, ymin, xmax, ymax]");
  } else {
    chart.xmin = doc["chart"][0].get<double>();
    chart.ymin = doc["chart"][1].get<double>();
    chart.xmax = doc["chart"][2].get<double>();
    chart.ymax = doc["chart"][3].get<double>();
  }

  int flux_rank = doc.value("flux_rank", 0);
  std::vector<Complex> flux_z;
  if (doc.contains("flux_z")) {
    if (!doc["flux_z"].is_array()) {
      err("flux_z", "expected an array of [re, im] pairs");
    } else {
      for (std::size_t i = 0; i < doc["flux_z"].size(); ++i)
        flux_z.push_back(read_complex(doc["flux_z"][i],
                                      "flux_z[" + std::to_string(i) + "]",
                                      &out.diagnostics));
    }
  }

  std::vector<Singularity> sings;
  if (!doc.contains("singularities") || !doc["singularities"].is_array()) {
    err("singularities", "expected an array");
  } else {
    for (std::size_t i = 0; i < doc["singularities"].size(); ++i) {
      const json& js = doc["singularities"][i];
      std::string base = "singularities[" + std::to_string(i) + "]";
      Singularity s;
      if (!js.contains("position")) {
        err(base + ".position", "missing");
      } else {
        s.position = read_complex(js["position"], base + ".position", &out.diagnostics);
      }
      if (!js.contains("thimble") || !js["thimble"].is_array() ||
          js["thimble"].size() < 2) {
        err(base + ".thimble", "expected [a, b, flux...]");
      } else {
        std::vector<long long> flux;
        for (std::size_t k = 2; k < js["thimble"].size(); ++k)
          flux.push_back(js["thimble"][k].get<long long>());
        s.thimble = Charge(js["thimble"][0].get<long long>(),
                           js["thimble"][1].get<long long>(), std::move(flux));
      }
      if (js.contains("slope"))
        s.slope = read_complex(js["slope"], base + ".slope", &out.diagnostics);
      s.cut_angle = js.value("cut_angle", -M_PI / 2);
      sings.push_back(std::move(s));
    }
  }

  Complex basepoint{0, 0};
  if (!doc.contains("basepoint")) {
    err("basepoint", "missing");
  } else {
    basepoint = read_complex(doc["basepoint"], "basepoint", &out.diagnostics);
  }

  out.scene = Scene(chart, std::move(sings), flux_rank, std::move(flux_z), basepoint);
  for (const auto& d : out.scene.validate()) out.diagnostics.push_back(d);
  out.ok = true;
  for (const auto& d : out.diagnostics)
    if (d.severity == Diagnostic::Severity::kError) out.ok = false;
  return out;
}

SceneLoad load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    SceneLoad out;
    out.diagnostics.push_back(
        {Diagnostic::Severity::kError, "file", "cannot open " + path});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

std::string scene_to_json(const Scene& scene) {
  json doc;
  doc["chart"] = {scene.chart().xmin, scene.chart().ymin, scene.chart().xmax,
                  scene.chart().ymax};
  doc["flux_rank"] = scene.flux_rank();
  json fz = json::array();
  for (Complex z : scene.flux_constants()) fz.push_back({z.real(), z.imag()});
  doc["flux_z"] = fz;
  doc["basepoint"] = {scene.basepoint().real(), scene.basepoint().imag()};
  json ss = json::array();
  for (const auto& s : scene.singularities()) {
    json js;
    js["position"] = {s.position.real(), s.position.imag()};
    json th = {s.thimble.a(), s.thimble.b()};
    for (long long f : s.thimble.flux()) th.push_back(f);
    js["thimble"] = th;
    js["slope"] = {s.slope.real(), s.slope.imag()};
    js["cut_angle"] = s.cut_angle;
    ss.push_back(js);
  }
  doc["singularities"] = ss;
  return doc.dump(2);
}

}  // namespace kswall
