#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "worstload/mesh.hpp"

namespace worstload {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Ring {
    double radius = 0.0;
    std::vector<int> nodes;  // counterclockwise, node j at angle 2*pi*j/n
};

int ring_count(double radius, double h) {
    return std::max(6, static_cast<int>(std::llround(2.0 * kPi * radius / h)));
}

Ring make_ring(Mesh& mesh, Vec2 center, double radius, int count) {
    Ring r;
    r.radius = radius;
    r.nodes.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double th = 2.0 * kPi * j / count;
        r.nodes.push_back(static_cast<int>(mesh.nodes.size()));
        mesh.nodes.push_back({center.x + radius * std::cos(th),
                              center.y + radius * std::sin(th)});
    }
    return r;
}

// Triangulates the band between two concentric rings by merging the two
// angular sequences; works for any node counts. Appends na + nb triangles.
void stitch_band(Mesh& mesh, const Ring& inner, const Ring& outer, bool in_omega,
                 ElementTag tag) {
    const int na = static_cast<int>(inner.nodes.size());
    const int nb = static_cast<int>(outer.nodes.size());
    int i = 0, j = 0;
    while (i < na || j < nb) {
        const double next_a = static_cast<double>(i + 1) / na;
        const double next_b = static_cast<double>(j + 1) / nb;
        if (j >= nb || (i < na && next_a <= next_b)) {
            mesh.tris.push_back({inner.nodes[i % na], outer.nodes[j % nb],
                                 inner.nodes[(i + 1) % na]});
            ++i;
        } else {
            mesh.tris.push_back({inner.nodes[i % na], outer.nodes[j % nb],
                                 outer.nodes[(j + 1) % nb]});
            ++j;
        }
        mesh.element_region.push_back(tag);
        mesh.element_in_omega.push_back(in_omega ? 1 : 0);
    }
}

void add_boundary_ring(Mesh& mesh, const Ring& ring, BoundaryTag tag) {
    const int n = static_cast<int>(ring.nodes.size());
    for (int j = 0; j < n; ++j)
        mesh.boundary_edges.push_back({ring.nodes[j], ring.nodes[(j + 1) % n], tag});
}

// Radii from r0 (exclusive) to r1 (inclusive) in steps of about h.
std::vector<double> radius_ladder(double r0, double r1, double h) {
    const int k = std::max(1, static_cast<int>(std::llround((r1 - r0) / h)));
    std::vector<double> out;
    out.reserve(k);
    for (int j = 1; j <= k; ++j) out.push_back(r0 + (r1 - r0) * j / k);
    return out;
}

}  // namespace

Mesh generate_disk_mesh(double outer_radius, double omega_radius, double target_h) {
    if (!(outer_radius > 0.0) || !(omega_radius > 0.0) || omega_radius >= outer_radius)
        fail(errc::parameter, "need 0 < omega_radius < outer_radius");
    if (!(target_h > 0.0) || target_h >= omega_radius)
        fail(errc::parameter, "need 0 < target_h < omega_radius");
    if (ring_count(outer_radius, target_h) < 16)
        fail(errc::resolution, "target_h yields fewer than 16 outer boundary segments");

    Mesh mesh;
    const int center = 0;
    mesh.nodes.push_back({0.0, 0.0});

    std::vector<double> radii = radius_ladder(0.0, omega_radius, target_h);
    const size_t omega_rings = radii.size();
    for (double r : radius_ladder(omega_radius, outer_radius, target_h))
        radii.push_back(r);

    std::vector<Ring> rings;
    rings.reserve(radii.size());
    for (double r : radii)
        rings.push_back(make_ring(mesh, {0.0, 0.0}, r, ring_count(r, target_h)));

    // Center fan.
    {
        const auto& first = rings.front().nodes;
        const int n = static_cast<int>(first.size());
        for (int j = 0; j < n; ++j) {
            mesh.tris.push_back({center, first[j], first[(j + 1) % n]});
            mesh.element_region.push_back(ElementTag::matrix);
            mesh.element_in_omega.push_back(1);
        }
    }
    for (size_t b = 0; b + 1 < rings.size(); ++b)
        stitch_band(mesh, rings[b], rings[b + 1], b + 1 < omega_rings,
                    ElementTag::matrix);

    add_boundary_ring(mesh, rings.back(), BoundaryTag::outer);
    mesh.outer_anchor = rings.back().nodes.front();
    mesh.omega_interface = Circle{{0.0, 0.0}, omega_radius};
    return mesh;
}

Mesh generate_annulus_mesh(double outer_radius, double inner_radius,
                           double omega_radius, double target_h) {
    if (!(inner_radius > 0.0) || inner_radius >= omega_radius ||
        omega_radius >= outer_radius)
        fail(errc::parameter, "need 0 < inner_radius < omega_radius < outer_radius");
    if (!(target_h > 0.0)) fail(errc::parameter, "target_h must be positive");
    if (ring_count(outer_radius, target_h) < 16)
        fail(errc::resolution, "target_h yields fewer than 16 outer boundary segments");

    Mesh mesh;
    std::vector<double> radii{inner_radius};
    for (double r : radius_ladder(inner_radius, omega_radius, target_h)) radii.push_back(r);
    const size_t omega_rings = radii.size();
    for (double r : radius_ladder(omega_radius, outer_radius, target_h)) radii.push_back(r);

    std::vector<Ring> rings;
    for (double r : radii)
        rings.push_back(make_ring(mesh, {0.0, 0.0}, r, ring_count(r, target_h)));
    for (size_t b = 0; b + 1 < rings.size(); ++b)
        stitch_band(mesh, rings[b], rings[b + 1], b + 1 < omega_rings,
                    ElementTag::matrix);

    add_boundary_ring(mesh, rings.front(), BoundaryTag::inner_clamped);
    add_boundary_ring(mesh, rings.back(), BoundaryTag::outer);
    mesh.outer_anchor = rings.back().nodes.front();
    mesh.omega_interface = Circle{{0.0, 0.0}, omega_radius};
    return mesh;
}

// ---------------------------------------------------------------------------
// Rectilinear panel mesher. A uniform grid covers the rectangle union; each
// feature (hole annulus or inclusion disk) removes the grid cells near its
// circle and fills the cavity with a polar patch whose outermost ring is the
// staircase boundary of the removed cells, so the patch stitches to the grid
// without hanging nodes. Feature circles are rings of the patch, hence
// mesh-conforming.
// ---------------------------------------------------------------------------

namespace {

struct Grid {
    double h = 0.0;
    double x0 = 0.0, y0 = 0.0;  // node (0,0)
    int ncx = 0, ncy = 0;       // cell counts

    Vec2 node_pos(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
    Vec2 cell_center(int i, int j) const {
        return {x0 + (i + 0.5) * h, y0 + (j + 0.5) * h};
    }
};

struct CellSet {
    int ncx = 0, ncy = 0;
    std::vector<char> flag;
    char at(int i, int j) const {
        if (i < 0 || j < 0 || i >= ncx || j >= ncy) return 0;
        return flag[static_cast<size_t>(j) * ncx + i];
    }
    void set(int i, int j, char v) { flag[static_cast<size_t>(j) * ncx + i] = v; }
};

int snap_index(double coord, double origin, double h, const char* what) {
    const double t = (coord - origin) / h;
    const long long k = std::llround(t);
    if (std::abs(t - k) > 1e-6)
        fail(errc::geometry, std::string(what) +
                                 " does not align with the grid at target_h");
    return static_cast<int>(k);
}

// Walks the counterclockwise boundary loop of a removed-cell set using
// directed edges that keep the removed region on the left.
std::vector<std::pair<int, int>> staircase_loop(const CellSet& removed) {
    // Directed edges between grid node coordinates (i,j).
    std::map<std::pair<int, int>, std::pair<int, int>> next;
    auto add = [&](std::pair<int, int> from, std::pair<int, int> to) {
        if (!next.emplace(from, to).second)
            fail(errc::geometry, "feature cavity pinches at a grid node; reduce target_h");
    };
    for (int j = 0; j < removed.ncy; ++j) {
        for (int i = 0; i < removed.ncx; ++i) {
            if (!removed.at(i, j)) continue;
            // (region-left orientation: CCW around the removed set)
            if (!removed.at(i, j - 1)) add({i, j}, {i + 1, j});          // bottom, +x
            if (!removed.at(i + 1, j)) add({i + 1, j}, {i + 1, j + 1});  // right, +y
            if (!removed.at(i, j + 1)) add({i + 1, j + 1}, {i, j + 1});  // top, -x
            if (!removed.at(i - 1, j)) add({i, j + 1}, {i, j});          // left, -y
        }
    }
    if (next.empty()) fail(errc::resolution, "feature removed no grid cells");
    std::vector<std::pair<int, int>> loop;
    const auto start = next.begin()->first;
    auto cur = start;
    do {
        loop.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end())
            fail(errc::geometry, "feature cavity boundary is not a single loop");
        cur = it->second;
        if (loop.size() > next.size())
            fail(errc::geometry, "feature cavity boundary is not a single loop");
    } while (cur != start);
    if (loop.size() != next.size())
        fail(errc::geometry, "feature cavity boundary is not a single loop");
    return loop;
}

struct Feature {
    Vec2 center;
    double inner_radius;  // 0 for inclusion disks
    double circle_radius; // hole: hole_radius; inclusion: inclusion radius
    double ring_radius;   // hole: omega ring; inclusion: = circle_radius
    bool clamped_inner;
    bool tag_omega;
    ElementTag inside_tag;
    CellSet removed;
};

// Polar fill of one cavity: circle rings at the feature radii, then a blend
// from the outermost circle to the staircase loop nodes.
void fill_cavity(Mesh& mesh, const Grid& grid, Feature& f,
                 const std::vector<int>& loop_nodes,
                 const std::vector<Vec2>& loop_pos) {
    const int n = static_cast<int>(loop_nodes.size());

    // Angle of each staircase node around the feature center; must be
    // cyclically increasing for the radial blend to stay untangled.
    std::vector<double> theta(n);
    double min_stair_r = std::numeric_limits<double>::max();
    for (int j = 0; j < n; ++j) {
        const Vec2 d = loop_pos[j] - f.center;
        theta[j] = std::atan2(d.y, d.x);
        min_stair_r = std::min(min_stair_r, norm(d));
    }
    int wraps = 0;
    for (int j = 0; j < n; ++j) {
        const double a = theta[j], b = theta[(j + 1) % n];
        if (b <= a) ++wraps;
    }
    if (wraps != 1)
        fail(errc::resolution, "target_h too coarse near feature at (" +
                                   std::to_string(f.center.x) + "," +
                                   std::to_string(f.center.y) + ")");
    if (min_stair_r <= f.ring_radius)
        fail(errc::resolution, "feature ring radius reaches the grid staircase; "
                               "reduce target_h");

    auto ring_at = [&](double radius) {
        std::vector<int> ids(n);
        for (int j = 0; j < n; ++j) {
            ids[j] = static_cast<int>(mesh.nodes.size());
            mesh.nodes.push_back({f.center.x + radius * std::cos(theta[j]),
                                  f.center.y + radius * std::sin(theta[j])});
        }
        return ids;
    };
    auto strip = [&](const std::vector<int>& in, const std::vector<int>& out,
                     bool omega, ElementTag tag) {
        for (int j = 0; j < n; ++j) {
            const int jn = (j + 1) % n;
            mesh.tris.push_back({in[j], out[j], in[jn]});
            mesh.tris.push_back({in[jn], out[j], out[jn]});
            for (int t = 0; t < 2; ++t) {
                mesh.element_region.push_back(tag);
                mesh.element_in_omega.push_back(omega ? 1 : 0);
            }
        }
    };

    std::vector<int> prev;
    if (f.inner_radius > 0.0) {
        prev = ring_at(f.inner_radius);
        if (f.clamped_inner)
            for (int j = 0; j < n; ++j)
                mesh.boundary_edges.push_back(
                    {prev[j], prev[(j + 1) % n], BoundaryTag::inner_clamped});
    } else {
        // Disk fill: center node plus a fan to the first ring.
        const int c = static_cast<int>(mesh.nodes.size());
        mesh.nodes.push_back(f.center);
        const int k = std::max(1, static_cast<int>(std::llround(f.circle_radius / grid.h)));
        prev = ring_at(f.circle_radius / k);
        for (int j = 0; j < n; ++j) {
            mesh.tris.push_back({c, prev[j], prev[(j + 1) % n]});
            mesh.element_region.push_back(f.inside_tag);
            mesh.element_in_omega.push_back(f.tag_omega ? 1 : 0);
        }
        for (int step = 2; step <= k; ++step) {
            auto ring = ring_at(f.circle_radius * step / k);
            strip(prev, ring, f.tag_omega, f.inside_tag);
            prev = ring;
        }
    }

    if (f.inner_radius > 0.0) {
        // Annulus rings out to the feature circle (the omega interface).
        for (double r : radius_ladder(f.inner_radius, f.ring_radius, grid.h)) {
            auto ring = ring_at(r);
            strip(prev, ring, f.tag_omega, ElementTag::matrix);
            prev = ring;
        }
    }

    // Blend from the circle at ring_radius to the staircase.
    double mean_gap = 0.0;
    for (int j = 0; j < n; ++j) mean_gap += norm(loop_pos[j] - f.center) - f.ring_radius;
    mean_gap /= n;
    const int q = std::max(1, static_cast<int>(std::llround(mean_gap / grid.h)));
    for (int step = 1; step < q; ++step) {
        const double t = static_cast<double>(step) / q;
        std::vector<int> ring(n);
        for (int j = 0; j < n; ++j) {
            const double rj = norm(loop_pos[j] - f.center);
            const double r = f.ring_radius + t * (rj - f.ring_radius);
            ring[j] = static_cast<int>(mesh.nodes.size());
            mesh.nodes.push_back({f.center.x + r * std::cos(theta[j]),
                                  f.center.y + r * std::sin(theta[j])});
        }
        strip(prev, ring, false, ElementTag::matrix);
        prev = ring;
    }
    strip(prev, loop_nodes, false, ElementTag::matrix);
}

}  // namespace

Mesh generate_panel_mesh(const PanelSpec& spec, double target_h) {
    if (spec.rects.empty()) fail(errc::parameter, "panel needs at least one rectangle");
    if (!(target_h > 0.0)) fail(errc::parameter, "target_h must be positive");

    double xmin = spec.rects[0].x0, xmax = spec.rects[0].x1;
    double ymin = spec.rects[0].y0, ymax = spec.rects[0].y1;
    for (const Rect& r : spec.rects) {
        if (!(r.x1 > r.x0) || !(r.y1 > r.y0))
            fail(errc::parameter, "degenerate panel rectangle");
        xmin = std::min(xmin, r.x0); xmax = std::max(xmax, r.x1);
        ymin = std::min(ymin, r.y0); ymax = std::max(ymax, r.y1);
    }

    Grid grid;
    grid.ncx = std::max(1, static_cast<int>(std::llround((xmax - xmin) / target_h)));
    grid.h = (xmax - xmin) / grid.ncx;
    grid.ncy = std::max(1, static_cast<int>(std::llround((ymax - ymin) / grid.h)));
    if (std::abs(grid.ncy * grid.h - (ymax - ymin)) > 1e-9 * grid.h)
        fail(errc::geometry, "panel bounding box is not commensurate with target_h");
    grid.x0 = xmin;
    grid.y0 = ymin;

    // Alive cells: center inside the rectangle union (edges grid-aligned).
    CellSet alive{grid.ncx, grid.ncy,
                  std::vector<char>(static_cast<size_t>(grid.ncx) * grid.ncy, 0)};
    for (const Rect& r : spec.rects) {
        const int i0 = snap_index(r.x0, grid.x0, grid.h, "panel rectangle edge");
        const int i1 = snap_index(r.x1, grid.x0, grid.h, "panel rectangle edge");
        const int j0 = snap_index(r.y0, grid.y0, grid.h, "panel rectangle edge");
        const int j1 = snap_index(r.y1, grid.y0, grid.h, "panel rectangle edge");
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) alive.set(i, j, 1);
    }

    // Collect features; centers snap to the nearest grid node.
    auto snap_center = [&](Vec2 c) {
        return grid.node_pos(
            static_cast<int>(std::llround((c.x - grid.x0) / grid.h)),
            static_cast<int>(std::llround((c.y - grid.y0) / grid.h)));
    };
    std::vector<Feature> features;
    for (const HoleSpec& hs : spec.holes) {
        if (!(hs.hole_radius > 0.0) || hs.hole_radius >= hs.ring_radius)
            fail(errc::parameter, "need 0 < hole_radius < ring_radius");
        Feature f;
        f.center = snap_center(hs.center);
        f.inner_radius = hs.hole_radius;
        f.circle_radius = hs.hole_radius;
        f.ring_radius = hs.ring_radius;
        f.clamped_inner = true;
        f.tag_omega = hs.tag_omega;
        f.inside_tag = ElementTag::matrix;
        features.push_back(f);
    }
    for (const InclusionSpec& is : spec.inclusions) {
        if (!(is.radius > 0.0)) fail(errc::parameter, "inclusion radius must be positive");
        Feature f;
        f.center = snap_center(is.center);
        f.inner_radius = 0.0;
        f.circle_radius = is.radius;
        f.ring_radius = is.radius;
        f.clamped_inner = false;
        f.tag_omega = false;
        f.inside_tag = is.tag;
        features.push_back(f);
    }

    // Remove cells near each feature circle; margin 1.3 h keeps the staircase
    // strictly outside the ring radius.
    CellSet removed_any{grid.ncx, grid.ncy,
                        std::vector<char>(static_cast<size_t>(grid.ncx) * grid.ncy, 0)};
    for (Feature& f : features) {
        f.removed = CellSet{grid.ncx, grid.ncy,
                            std::vector<char>(static_cast<size_t>(grid.ncx) * grid.ncy, 0)};
        const double rc = f.ring_radius + 1.3 * grid.h;
        const int i0 = std::max(0, static_cast<int>(std::floor(
                                       (f.center.x - rc - grid.x0) / grid.h)) - 1);
        const int i1 = std::min(grid.ncx - 1, static_cast<int>(std::ceil(
                                                  (f.center.x + rc - grid.x0) / grid.h)));
        const int j0 = std::max(0, static_cast<int>(std::floor(
                                       (f.center.y - rc - grid.y0) / grid.h)) - 1);
        const int j1 = std::min(grid.ncy - 1, static_cast<int>(std::ceil(
                                                  (f.center.y + rc - grid.y0) / grid.h)));
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                if (dist(grid.cell_center(i, j), f.center) > rc) continue;
                if (!alive.at(i, j))
                    fail(errc::geometry, "feature at (" + std::to_string(f.center.x) +
                                             "," + std::to_string(f.center.y) +
                                             ") crosses the panel boundary");
                if (removed_any.at(i, j))
                    fail(errc::geometry, "features overlap near (" +
                                             std::to_string(f.center.x) + "," +
                                             std::to_string(f.center.y) + ")");
                f.removed.set(i, j, 1);
                removed_any.set(i, j, 1);
            }
        }
        // Require one alive grid cell between the cavity and the panel edge.
        for (int j = 0; j < grid.ncy; ++j)
            for (int i = 0; i < grid.ncx; ++i)
                if (f.removed.at(i, j))
                    for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
                        if (!alive.at(i + di, j + dj))
                            fail(errc::geometry,
                                 "feature at (" + std::to_string(f.center.x) + "," +
                                     std::to_string(f.center.y) +
                                     ") is too close to the panel boundary for target_h");
    }

    Mesh mesh;
    std::map<std::pair<int, int>, int> node_id;
    auto grid_node = [&](int i, int j) {
        auto [it, inserted] = node_id.try_emplace({i, j}, static_cast<int>(mesh.nodes.size()));
        if (inserted) mesh.nodes.push_back(grid.node_pos(i, j));
        return it->second;
    };

    // Grid cells (alternating diagonals), plus OUTER edges along dead sides.
    for (int j = 0; j < grid.ncy; ++j) {
        for (int i = 0; i < grid.ncx; ++i) {
            if (!alive.at(i, j) || removed_any.at(i, j)) continue;
            const int n00 = grid_node(i, j), n10 = grid_node(i + 1, j);
            const int n11 = grid_node(i + 1, j + 1), n01 = grid_node(i, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.tris.push_back({n00, n10, n11});
                mesh.tris.push_back({n00, n11, n01});
            } else {
                mesh.tris.push_back({n00, n10, n01});
                mesh.tris.push_back({n10, n11, n01});
            }
            for (int t = 0; t < 2; ++t) {
                mesh.element_region.push_back(ElementTag::matrix);
                mesh.element_in_omega.push_back(0);
            }
            if (!alive.at(i, j - 1))
                mesh.boundary_edges.push_back({n00, n10, BoundaryTag::outer});
            if (!alive.at(i + 1, j))
                mesh.boundary_edges.push_back({n10, n11, BoundaryTag::outer});
            if (!alive.at(i, j + 1))
                mesh.boundary_edges.push_back({n11, n01, BoundaryTag::outer});
            if (!alive.at(i - 1, j))
                mesh.boundary_edges.push_back({n01, n00, BoundaryTag::outer});
        }
    }

    // Polar patches.
    for (Feature& f : features) {
        auto loop = staircase_loop(f.removed);
        std::vector<int> loop_nodes(loop.size());
        std::vector<Vec2> loop_pos(loop.size());
        for (size_t k = 0; k < loop.size(); ++k) {
            loop_nodes[k] = grid_node(loop[k].first, loop[k].second);
            loop_pos[k] = grid.node_pos(loop[k].first, loop[k].second);
        }
        fill_cavity(mesh, grid, f, loop_nodes, loop_pos);
    }

    for (const HoleSpec& hs : spec.holes)
        if (hs.tag_omega) {
            mesh.omega_interface = Circle{hs.center, hs.ring_radius};
            break;
        }
    return mesh;
}

Mesh generate_square_hole_mesh(double side, double hole_radius, double omega_radius,
                               const std::vector<InclusionSpec>& inclusions,
                               double target_h) {
    if (!(hole_radius > 0.0) || !(hole_radius < omega_radius) ||
        !(omega_radius < side / 2.0))
        fail(errc::parameter, "need 0 < hole_radius < omega_radius < side/2");
    if (!(target_h > 0.0)) fail(errc::parameter, "target_h must be positive");

    const double half = side / 2.0;
    for (size_t i = 0; i < inclusions.size(); ++i) {
        const InclusionSpec& a = inclusions[i];
        if (!(a.radius > 0.0)) fail(errc::parameter, "inclusion radius must be positive");
        if (norm(a.center) < omega_radius + a.radius)
            fail(errc::geometry, "inclusion " + std::to_string(i) +
                                     " intersects the omega circle");
        if (std::max(std::abs(a.center.x), std::abs(a.center.y)) + a.radius >= half)
            fail(errc::geometry, "inclusion " + std::to_string(i) +
                                     " reaches the outer boundary");
        for (size_t j = i + 1; j < inclusions.size(); ++j) {
            const InclusionSpec& b = inclusions[j];
            if (dist(a.center, b.center) < a.radius + b.radius)
                fail(errc::geometry, "inclusions " + std::to_string(i) + " and " +
                                         std::to_string(j) + " overlap");
        }
    }

    PanelSpec spec;
    spec.rects.push_back({-half, -half, half, half});
    spec.holes.push_back({{0.0, 0.0}, hole_radius, omega_radius, true});
    spec.inclusions = inclusions;
    return generate_panel_mesh(spec, target_h);
}

}  // namespace worstload
