#include "tvlab/setspec.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "tvlab/errors.hpp"

namespace tvlab {

using json = nlohmann::json;

namespace {

struct DimVisitor {
  int operator()(const HalfSpace& h) const { return static_cast<int>(h.normal.size()); }
  int operator()(const AffineSubspace& a) const { return static_cast<int>(a.basepoint.size()); }
  int operator()(const Ball& b) const { return static_cast<int>(b.center.size()); }
  int operator()(const Sphere& s) const { return static_cast<int>(s.center.size()); }
  int operator()(const Polyhedron& p) const {
    return p.faces.empty() ? 0 : static_cast<int>(p.faces.front().normal.size());
  }
  int operator()(const Region&) const { return 2; }
  int operator()(const UnionSet& u) const { return u.parts.empty() ? 0 : u.parts.front().dim(); }
  int operator()(const IntersectionSet& s) const {
    return s.parts.empty() ? 0 : s.parts.front().dim();
  }
};

void validate_rec(const SetSpec& s, int depth, int max_depth) {
  if (depth > max_depth) fail(Err::BadArgument, "set nesting deeper than configured bound");
  const int n = s.dim();
  if (n < 1) fail(Err::BadArgument, "set requires ambient dimension >= 1");
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          if (!all_finite(node.normal) || !std::isfinite(node.offset))
            fail(Err::BadArgument, "half-space with non-finite data");
          if (std::abs(norm(node.normal) - 1.0) > 1e-9)
            fail(Err::BadArgument, "half-space normal must be unit");
        } else if constexpr (std::is_same_v<T, AffineSubspace>) {
          if (!all_finite(node.basepoint)) fail(Err::BadArgument, "affine basepoint not finite");
          for (std::size_t i = 0; i < node.tangent.size(); ++i) {
            check_dim(node.tangent[i], node.basepoint);
            for (std::size_t j = 0; j <= i; ++j) {
              double g = dot(node.tangent[i], node.tangent[j]);
              double want = (i == j) ? 1.0 : 0.0;
              if (std::abs(g - want) > 1e-9)
                fail(Err::BadArgument, "affine tangent basis must be orthonormal");
            }
          }
          if (node.tangent.size() > node.basepoint.size())
            fail(Err::BadArgument, "affine tangent basis larger than ambient dimension");
        } else if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, Sphere>) {
          if (!all_finite(node.center) || !(node.radius > 0))
            fail(Err::BadArgument, "ball/sphere requires finite center and radius > 0");
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          if (node.faces.empty()) fail(Err::BadArgument, "polyhedron requires >= 1 face");
          for (const auto& f : node.faces) {
            if (static_cast<int>(f.normal.size()) != n)
              fail(Err::DimensionMismatch, "polyhedron face dimension");
            if (std::abs(norm(f.normal) - 1.0) > 1e-9)
              fail(Err::BadArgument, "polyhedron face normal must be unit");
          }
        } else if constexpr (std::is_same_v<T, Region>) {
          if (!(node.coeff > 0)) fail(Err::BadArgument, "region coefficient must be > 0");
          if (node.vertex.size() != 2) fail(Err::BadArgument, "region primitives live in R^2");
        } else if constexpr (std::is_same_v<T, UnionSet> || std::is_same_v<T, IntersectionSet>) {
          if (node.parts.empty()) fail(Err::BadArgument, "union/intersection requires parts");
          for (const auto& p : node.parts) {
            if (p.dim() != n) fail(Err::DimensionMismatch, "union/intersection part dims differ");
            validate_rec(p, depth + 1, max_depth);
          }
        }
      },
      s.node);
}

json vec_to_json(const Vec& v) { return json(v); }

Vec vec_from_json(const json& j) {
  if (!j.is_array()) fail(Err::ParseError, "expected array of numbers");
  Vec v;
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

json spec_to_json(const SetSpec& s);

json halfspace_to_json(const HalfSpace& h) {
  return json{{"type", "halfspace"}, {"normal", vec_to_json(h.normal)}, {"offset", h.offset}};
}

HalfSpace halfspace_from_json(const json& j) {
  return HalfSpace{vec_from_json(j.at("normal")), j.at("offset").get<double>()};
}

struct JsonVisitor {
  json operator()(const HalfSpace& h) const { return halfspace_to_json(h); }
  json operator()(const AffineSubspace& a) const {
    json tangent = json::array();
    for (const auto& t : a.tangent) tangent.push_back(vec_to_json(t));
    return json{{"type", "affine"}, {"basepoint", vec_to_json(a.basepoint)}, {"tangent", tangent}};
  }
  json operator()(const Ball& b) const {
    return json{{"type", "ball"}, {"center", vec_to_json(b.center)}, {"radius", b.radius}};
  }
  json operator()(const Sphere& s) const {
    return json{{"type", "sphere"}, {"center", vec_to_json(s.center)}, {"radius", s.radius}};
  }
  json operator()(const Polyhedron& p) const {
    json faces = json::array();
    for (const auto& f : p.faces) faces.push_back(halfspace_to_json(f));
    return json{{"type", "polyhedron"}, {"faces", faces}};
  }
  json operator()(const Region& r) const {
    const char* name = r.kind == Region::Kind::Parabola ? "parabola"
                       : r.kind == Region::Kind::ParabolaEpigraph ? "parabola-epigraph"
                                                                  : "parabola-hypograph";
    return json{{"type", "region"}, {"name", name}, {"coeff", r.coeff},
                {"vertex", vec_to_json(r.vertex)}};
  }
  json operator()(const UnionSet& u) const {
    json parts = json::array();
    for (const auto& p : u.parts) parts.push_back(spec_to_json(p));
    return json{{"type", "union"}, {"parts", parts}};
  }
  json operator()(const IntersectionSet& s) const {
    json parts = json::array();
    for (const auto& p : s.parts) parts.push_back(spec_to_json(p));
    return json{{"type", "intersection"}, {"parts", parts}};
  }
};

json spec_to_json(const SetSpec& s) { return std::visit(JsonVisitor{}, s.node); }

SetSpec spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail(Err::ParseError, "set spec needs a type field");
  const std::string type = j.at("type").get<std::string>();
  if (type == "halfspace") return SetSpec{halfspace_from_json(j)};
  if (type == "affine") {
    AffineSubspace a;
    a.basepoint = vec_from_json(j.at("basepoint"));
    for (const auto& t : j.at("tangent")) a.tangent.push_back(vec_from_json(t));
    return SetSpec{a};
  }
  if (type == "ball")
    return SetSpec{Ball{vec_from_json(j.at("center")), j.at("radius").get<double>()}};
  if (type == "sphere")
    return SetSpec{Sphere{vec_from_json(j.at("center")), j.at("radius").get<double>()}};
  if (type == "polyhedron") {
    Polyhedron p;
    for (const auto& f : j.at("faces")) p.faces.push_back(halfspace_from_json(f));
    return SetSpec{p};
  }
  if (type == "region") {
    Region r;
    const std::string name = j.at("name").get<std::string>();
    if (name == "parabola")
      r.kind = Region::Kind::Parabola;
    else if (name == "parabola-epigraph")
      r.kind = Region::Kind::ParabolaEpigraph;
    else if (name == "parabola-hypograph")
      r.kind = Region::Kind::ParabolaHypograph;
    else
      fail(Err::ParseError, "unknown region primitive: " + name);
    r.coeff = j.value("coeff", 1.0);
    r.vertex = j.contains("vertex") ? vec_from_json(j.at("vertex")) : Vec{0.0, 0.0};
    return SetSpec{r};
  }
  if (type == "union" || type == "intersection") {
    std::vector<SetSpec> parts;
    for (const auto& p : j.at("parts")) parts.push_back(spec_from_json(p));
    if (type == "union") return SetSpec{UnionSet{std::move(parts)}};
    return SetSpec{IntersectionSet{std::move(parts)}};
  }
  fail(Err::ParseError, "unknown set type: " + type);
}

}  // namespace

int SetSpec::dim() const { return std::visit(DimVisitor{}, node); }

void SetSpec::validate(int max_depth) const { validate_rec(*this, 0, max_depth); }

SetSpec make_halfspace(Vec normal, double offset) {
  return SetSpec{HalfSpace{std::move(normal), offset}};
}

SetSpec make_affine(Vec basepoint, std::vector<Vec> tangent) {
  return SetSpec{AffineSubspace{std::move(basepoint), std::move(tangent)}};
}

SetSpec make_point(Vec p) { return make_affine(std::move(p), {}); }

SetSpec make_line(Vec through, Vec direction) {
  return make_affine(std::move(through), {normalized(direction)});
}

SetSpec make_ball(Vec center, double radius) { return SetSpec{Ball{std::move(center), radius}}; }

SetSpec make_sphere(Vec center, double radius) {
  return SetSpec{Sphere{std::move(center), radius}};
}

SetSpec make_polyhedron(std::vector<HalfSpace> faces) {
  return SetSpec{Polyhedron{std::move(faces)}};
}

SetSpec make_region(Region::Kind kind, double coeff, Vec vertex) {
  return SetSpec{Region{kind, coeff, std::move(vertex)}};
}

SetSpec make_union(std::vector<SetSpec> parts) { return SetSpec{UnionSet{std::move(parts)}}; }

SetSpec make_intersection(std::vector<SetSpec> parts) {
  return SetSpec{IntersectionSet{std::move(parts)}};
}

std::string to_json_string(const SetSpec& s, int indent) {
  return spec_to_json(s).dump(indent);
}

SetSpec setspec_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::ParseError, e.what());
  }
  SetSpec s = spec_from_json(j);
  s.validate();
  return s;
}

}  // namespace tvlab
