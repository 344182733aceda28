#include "resim/body.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "resim/errors.hpp"

namespace resim {

namespace {
double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}
}  // namespace

void BodyModel::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ValidationError("body: mass must be positive");
  }
  if (!(inertia > 0.0) || !std::isfinite(inertia)) {
    throw ValidationError("body: inertia must be positive");
  }
  if (vertices.size() < 3) {
    throw ValidationError("body: polygon needs at least 3 vertices");
  }
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = vertices[i];
    const Eigen::Vector2d& b = vertices[(i + 1) % n];
    const Eigen::Vector2d& c = vertices[(i + 2) % n];
    if (cross2(b - a, c - b) <= 0.0) {
      throw ValidationError("body: vertices must form a convex CCW polygon");
    }
    // COM (origin) strictly inside: it must lie left of every CCW edge.
    if (cross2(b - a, -a) <= 0.0) {
      throw ValidationError("body: COM must lie inside the polygon");
    }
  }
  const double rg = std::sqrt(inertia / mass);
  if (std::abs(radius_of_gyration - rg) > 1e-12 * rg) {
    throw ValidationError("body: radius_of_gyration inconsistent with sqrt(I/m)");
  }
  if (!std::isfinite(gravity) || gravity < 0.0) {
    throw ValidationError("body: gravity must be finite and non-negative");
  }
}

BodyModel make_body(double mass, double inertia, std::vector<Eigen::Vector2d> vertices,
                    double gravity) {
  BodyModel body;
  body.mass = mass;
  body.inertia = inertia;
  body.vertices = std::move(vertices);
  body.gravity = gravity;
  body.radius_of_gyration = std::sqrt(inertia / mass);
  body.validate();
  return body;
}

BodyModel make_square_body(double mass, double side, double gravity) {
  const double h = 0.5 * side;
  const double inertia = mass * side * side / 6.0;
  return make_body(mass, inertia,
                   {{h, -h}, {h, h}, {-h, h}, {-h, -h}}, gravity);
}

BodyModel default_dice_body() { return make_square_body(0.049, 0.05); }

std::string body_to_json(const BodyModel& body) {
  nlohmann::json j;
  j["mass"] = body.mass;
  j["inertia"] = body.inertia;
  auto verts = nlohmann::json::array();
  for (const auto& v : body.vertices) {
    verts.push_back({v.x(), v.y()});
  }
  j["vertices"] = std::move(verts);
  j["gravity"] = body.gravity;
  return j.dump();
}

BodyModel body_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("body: bad JSON: ") + e.what());
  }
  std::vector<Eigen::Vector2d> verts;
  try {
    for (const auto& v : j.at("vertices")) {
      verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    }
    return make_body(j.at("mass").get<double>(), j.at("inertia").get<double>(),
                     std::move(verts), j.value("gravity", 9.81));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("body: missing or malformed field: ") + e.what());
  }
}

}  // namespace resim
