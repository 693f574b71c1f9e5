#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "worstload/errors.hpp"

namespace worstload {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a);
double dist(Vec2 a, Vec2 b);

enum class ElementTag : std::uint8_t { matrix, inclusion };
enum class BoundaryTag : std::uint8_t { outer, inner_clamped };

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    BoundaryTag tag = BoundaryTag::outer;
};

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

/// Conforming 2D mesh of the cross-section. Triangles are stored before
/// quadrilaterals; element index e < tris.size() is a triangle.
/// Immutable after construction by convention; nothing mutates a mesh once
/// it has been validated.
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;   // counterclockwise
    std::vector<std::array<int, 4>> quads;  // counterclockwise

    std::vector<ElementTag> element_region;    // per element, tris then quads
    std::vector<std::uint8_t> element_in_omega;  // per element, 1 iff inside omega

    std::vector<BoundaryEdge> boundary_edges;

    // Node where the outer arc-length coordinate starts (s = -a).
    // -1 selects the default: lowest, then leftmost, outer node.
    int outer_anchor = -1;

    // Interface circles recorded by the generators; used by validate() to
    // detect elements straddling the omega boundary. Not serialized.
    std::optional<Circle> omega_interface;

    int element_count() const { return static_cast<int>(tris.size() + quads.size()); }
    int vertex_count(int e) const { return e < static_cast<int>(tris.size()) ? 3 : 4; }
    int vertex(int e, int k) const {
        return e < static_cast<int>(tris.size()) ? tris[e][k]
                                                 : quads[e - tris.size()][k];
    }
    Vec2 centroid(int e) const;
    double area(int e) const;  // signed
    double diameter() const;   // bounding-box diagonal
};

/// Arc-length parametrization of the single outer loop, counterclockwise
/// from the anchor. loop[i] is a node index, arc[i] its coordinate in
/// [-a, a) with arc[0] = -a.
struct BoundaryParametrization {
    double half_length = 0.0;  // a
    std::vector<int> loop;
    std::vector<double> arc;
    std::vector<double> edge_length;  // edge loop[i] -> loop[(i+1)%n]

    int size() const { return static_cast<int>(loop.size()); }
};

/// Empty list iff all mesh invariants hold; otherwise one message per violation.
std::vector<std::string> validate(const Mesh& mesh);

/// Throws errc::validation with the first diagnostic if validate() is nonempty.
void require_valid(const Mesh& mesh);

/// Walks the outer loop counterclockwise from the anchor and assigns
/// arc-length coordinates. Throws errc::topology if the outer edges do not
/// form exactly one closed loop.
BoundaryParametrization boundary_parametrization(const Mesh& mesh);

/// Closed node loops formed by the edges of one tag class. Throws
/// errc::topology if a node has boundary degree other than 2.
std::vector<std::vector<int>> boundary_loops(const Mesh& mesh, BoundaryTag tag);

// ---------------------------------------------------------------------------
// Generators. Circles are approximated by inscribed polygons with edge
// length <= target_h; omega and inclusion interfaces are mesh-conforming by
// construction, so region energies are exact sums over tagged elements.
// ---------------------------------------------------------------------------

/// Homogeneous disk of radius outer_radius with the concentric circle of
/// radius omega_radius built into the element boundaries. All elements
/// MATRIX; elements inside the omega circle tagged in omega; no holes.
Mesh generate_disk_mesh(double outer_radius, double omega_radius, double target_h);

/// Annulus inner_radius < |x| < outer_radius with a clamped inner boundary;
/// omega is the sub-annulus inner_radius < |x| < omega_radius.
Mesh generate_annulus_mesh(double outer_radius, double inner_radius,
                           double omega_radius, double target_h);

struct InclusionSpec {
    Vec2 center;
    double radius = 0.0;
    ElementTag tag = ElementTag::inclusion;
};

/// Square of the given side centered at the origin with a central clamped
/// circular hole, omega the annulus hole_radius < |x| < omega_radius, and
/// circular inclusions meshed conformingly.
Mesh generate_square_hole_mesh(double side, double hole_radius, double omega_radius,
                               const std::vector<InclusionSpec>& inclusions,
                               double target_h);

// General rectilinear panel: a union of axis-aligned rectangles (edges must
// align with the grid at target_h) with clamped circular holes, optional
// omega annuli around them, and circular inclusions. This is what the
// shipped geometry presets are produced with.
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct HoleSpec {
    Vec2 center;
    double hole_radius = 0.0;
    double ring_radius = 0.0;  // outer radius of the conforming annulus
    bool tag_omega = false;    // tag the annulus elements as omega
};

struct PanelSpec {
    std::vector<Rect> rects;
    std::vector<HoleSpec> holes;
    std::vector<InclusionSpec> inclusions;
};

Mesh generate_panel_mesh(const PanelSpec& spec, double target_h);

// ---------------------------------------------------------------------------
// Mesh file format (plain text, line oriented, '#' comments):
//   meshv1
//   nodes <count>        followed by "x y" lines
//   tris <count>         followed by 0-based CCW connectivity
//   quads <count>
//   regions              one tag per element: M | I, suffix +w if in omega
//   boundary <count>     "n1 n2 TAG" with TAG in {OUTER, INNER}
//   anchor <node-index>  optional
// ---------------------------------------------------------------------------

Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

// Re-tagging helpers. retag_omega_circle requires the circle to be
// mesh-conforming (no element may straddle it) and throws errc::geometry
// otherwise.
void retag_omega_circle(Mesh& mesh, Vec2 center, double radius);
void tag_omega_all(Mesh& mesh);

}  // namespace worstload
