#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tvlab/vec.hpp"

namespace tvlab {

struct SetSpec;

// {x : <normal, x> <= offset}, |normal| = 1
struct HalfSpace {
  Vec normal;
  double offset = 0.0;
};

// basepoint + span(tangent), tangent orthonormal; empty tangent = a single point
struct AffineSubspace {
  Vec basepoint;
  std::vector<Vec> tangent;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

struct Sphere {
  Vec center;
  double radius = 1.0;
};

struct Polyhedron {
  std::vector<HalfSpace> faces;
};

// Named smooth-inequality primitives in R^2, vertex-shifted:
//   Parabola          {x2 = coeff*x1^2}
//   ParabolaEpigraph  {x2 >= coeff*x1^2}
//   ParabolaHypograph {x2 <= coeff*x1^2}
struct Region {
  enum class Kind { Parabola, ParabolaEpigraph, ParabolaHypograph };
  Kind kind = Kind::Parabola;
  double coeff = 1.0;
  Vec vertex;  // defaults to origin of R^2
};

struct UnionSet {
  std::vector<SetSpec> parts;
};

struct IntersectionSet {
  std::vector<SetSpec> parts;
};

struct SetSpec {
  std::variant<HalfSpace, AffineSubspace, Ball, Sphere, Polyhedron, Region, UnionSet,
               IntersectionSet>
      node;

  int dim() const;
  // structural checks: unit normals, orthonormal bases, nesting depth, nonempty parts
  void validate(int max_depth = 8) const;
};

// convenience constructors
SetSpec make_halfspace(Vec normal, double offset);
SetSpec make_affine(Vec basepoint, std::vector<Vec> tangent);
SetSpec make_point(Vec p);
SetSpec make_line(Vec through, Vec direction);
SetSpec make_ball(Vec center, double radius);
SetSpec make_sphere(Vec center, double radius);
SetSpec make_polyhedron(std::vector<HalfSpace> faces);
SetSpec make_region(Region::Kind kind, double coeff, Vec vertex);
SetSpec make_union(std::vector<SetSpec> parts);
SetSpec make_intersection(std::vector<SetSpec> parts);

// JSON round trip; schema documented in docs/formats.md
std::string to_json_string(const SetSpec& s, int indent = -1);
SetSpec setspec_from_json_string(const std::string& text);

}  // namespace tvlab
