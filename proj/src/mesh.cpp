#include "worstload/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace worstload {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

double tri_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

Vec2 Mesh::centroid(int e) const {
    Vec2 c;
    const int nv = vertex_count(e);
    for (int k = 0; k < nv; ++k) {
        c.x += nodes[vertex(e, k)].x;
        c.y += nodes[vertex(e, k)].y;
    }
    return {c.x / nv, c.y / nv};
}

double Mesh::area(int e) const {
    if (vertex_count(e) == 3) {
        return tri_area(nodes[vertex(e, 0)], nodes[vertex(e, 1)], nodes[vertex(e, 2)]);
    }
    const Vec2 a = nodes[vertex(e, 0)], b = nodes[vertex(e, 1)];
    const Vec2 c = nodes[vertex(e, 2)], d = nodes[vertex(e, 3)];
    return tri_area(a, b, c) + tri_area(a, c, d);
}

double Mesh::diameter() const {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = xmax;
    for (const Vec2& p : nodes) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    if (nodes.empty()) return 0.0;
    return std::hypot(xmax - xmin, ymax - ymin);
}

namespace {

using EdgeKey = std::pair<int, int>;
EdgeKey key_of(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Edge -> number of elements using it.
std::map<EdgeKey, int> edge_use_counts(const Mesh& mesh) {
    std::map<EdgeKey, int> use;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const int nv = mesh.vertex_count(e);
        for (int k = 0; k < nv; ++k) {
            ++use[key_of(mesh.vertex(e, k), mesh.vertex(e, (k + 1) % nv))];
        }
    }
    return use;
}

int default_anchor(const Mesh& mesh) {
    int best = -1;
    for (const BoundaryEdge& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::outer) continue;
        for (int n : {be.a, be.b}) {
            if (best < 0) { best = n; continue; }
            const Vec2 p = mesh.nodes[n], q = mesh.nodes[best];
            if (p.y < q.y || (p.y == q.y && p.x < q.x)) best = n;
        }
    }
    return best;
}

// Splits the edges of one tag class into closed loops (each node must have
// degree exactly 2). Returns node loops; empty result + message on failure.
std::vector<std::vector<int>> trace_loops(const Mesh& mesh, BoundaryTag tag,
                                          std::string* error) {
    std::map<int, std::vector<int>> adj;
    for (const BoundaryEdge& be : mesh.boundary_edges) {
        if (be.tag != tag) continue;
        adj[be.a].push_back(be.b);
        adj[be.b].push_back(be.a);
    }
    for (const auto& [n, nbrs] : adj) {
        if (nbrs.size() != 2) {
            if (error) {
                *error = "boundary node " + std::to_string(n) + " has degree " +
                         std::to_string(nbrs.size()) + " (loops require degree 2)";
            }
            return {};
        }
    }
    std::vector<std::vector<int>> loops;
    std::map<int, bool> seen;
    for (const auto& [start, nbrs] : adj) {
        if (seen[start]) continue;
        std::vector<int> loop{start};
        seen[start] = true;
        int prev = start, cur = nbrs.front();
        while (cur != start) {
            loop.push_back(cur);
            seen[cur] = true;
            const auto& nn = adj[cur];
            const int next = (nn[0] == prev) ? nn[1] : nn[0];
            prev = cur;
            cur = next;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

double loop_signed_area(const Mesh& mesh, const std::vector<int>& loop) {
    double s = 0.0;
    for (size_t i = 0; i < loop.size(); ++i) {
        const Vec2 p = mesh.nodes[loop[i]];
        const Vec2 q = mesh.nodes[loop[(i + 1) % loop.size()]];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

}  // namespace

std::vector<std::string> validate(const Mesh& mesh) {
    std::vector<std::string> diags;
    const int ne = mesh.element_count();
    const int nn = static_cast<int>(mesh.nodes.size());

    if (static_cast<int>(mesh.element_region.size()) != ne)
        diags.push_back("element_region size does not match element count");
    if (static_cast<int>(mesh.element_in_omega.size()) != ne)
        diags.push_back("element_in_omega size does not match element count");

    // Connectivity in range.
    for (int e = 0; e < ne; ++e) {
        for (int k = 0; k < mesh.vertex_count(e); ++k) {
            const int v = mesh.vertex(e, k);
            if (v < 0 || v >= nn) {
                diags.push_back("element " + std::to_string(e) +
                                " references missing node " + std::to_string(v));
                return diags;  // everything below would be unsafe
            }
        }
    }

    // Positive signed area under CCW ordering; for quads also every corner
    // triangle (rules out nonconvex/inverted quads for which the bilinear
    // map degenerates).
    for (int e = 0; e < ne; ++e) {
        if (mesh.vertex_count(e) == 3) {
            if (mesh.area(e) <= 0.0)
                diags.push_back("element " + std::to_string(e) + " has nonpositive area");
        } else {
            bool ok = true;
            for (int k = 0; k < 4; ++k) {
                const Vec2 a = mesh.nodes[mesh.vertex(e, k)];
                const Vec2 b = mesh.nodes[mesh.vertex(e, (k + 1) % 4)];
                const Vec2 c = mesh.nodes[mesh.vertex(e, (k + 2) % 4)];
                if (tri_area(a, b, c) <= 0.0) ok = false;
            }
            if (!ok)
                diags.push_back("quad element " + std::to_string(e) +
                                " is nonconvex or not counterclockwise");
        }
    }

    // Every node used by some element.
    std::vector<char> used(nn, 0);
    for (int e = 0; e < ne; ++e)
        for (int k = 0; k < mesh.vertex_count(e); ++k) used[mesh.vertex(e, k)] = 1;
    for (int n = 0; n < nn; ++n)
        if (!used[n]) diags.push_back("node " + std::to_string(n) + " lies in no element");

    // Duplicate coordinates within 1e-12 * diameter.
    {
        const double tol = 1e-12 * mesh.diameter();
        std::vector<int> order(nn);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            if (mesh.nodes[i].x != mesh.nodes[j].x) return mesh.nodes[i].x < mesh.nodes[j].x;
            return mesh.nodes[i].y < mesh.nodes[j].y;
        });
        for (int i = 0; i + 1 < nn; ++i) {
            const int a = order[i];
            for (int j = i + 1; j < nn; ++j) {
                const int b = order[j];
                if (mesh.nodes[b].x - mesh.nodes[a].x > tol) break;
                if (dist(mesh.nodes[a], mesh.nodes[b]) <= tol) {
                    diags.push_back("duplicate node coordinates: nodes " +
                                    std::to_string(std::min(a, b)) + " and " +
                                    std::to_string(std::max(a, b)));
                }
            }
        }
    }

    // Boundary tags must coincide with the topological boundary of the complex.
    {
        auto use = edge_use_counts(mesh);
        std::map<EdgeKey, int> tagged;
        for (const BoundaryEdge& be : mesh.boundary_edges) ++tagged[key_of(be.a, be.b)];
        for (const auto& [k, cnt] : tagged) {
            auto it = use.find(k);
            if (it == use.end())
                diags.push_back("boundary edge (" + std::to_string(k.first) + "," +
                                std::to_string(k.second) + ") is not an element edge");
            else if (it->second != 1)
                diags.push_back("boundary edge (" + std::to_string(k.first) + "," +
                                std::to_string(k.second) + ") is interior to the mesh");
            if (cnt > 1)
                diags.push_back("boundary edge (" + std::to_string(k.first) + "," +
                                std::to_string(k.second) + ") tagged more than once");
        }
        for (const auto& [k, cnt] : use) {
            if (cnt == 1 && tagged.find(k) == tagged.end())
                diags.push_back("untagged boundary edge (" + std::to_string(k.first) + "," +
                                std::to_string(k.second) + ")");
            if (cnt > 2)
                diags.push_back("edge (" + std::to_string(k.first) + "," +
                                std::to_string(k.second) + ") used by more than two elements");
        }
    }

    // Loop structure: exactly one OUTER loop; INNER loops closed and disjoint
    // from it.
    {
        std::string err;
        auto outer = trace_loops(mesh, BoundaryTag::outer, &err);
        if (!err.empty()) diags.push_back("OUTER: " + err);
        else if (outer.size() != 1)
            diags.push_back("expected exactly one OUTER loop, found " +
                            std::to_string(outer.size()));
        err.clear();
        auto inner = trace_loops(mesh, BoundaryTag::inner_clamped, &err);
        if (!err.empty()) diags.push_back("INNER: " + err);
        if (!outer.empty()) {
            std::vector<char> on_outer(nn, 0);
            for (int n : outer.front()) on_outer[n] = 1;
            for (const auto& loop : inner)
                for (int n : loop)
                    if (on_outer[n]) {
                        diags.push_back("INNER loop shares node " + std::to_string(n) +
                                        " with the OUTER loop");
                        break;
                    }
        }
    }

    // Omega conformity against the recorded interface circle.
    if (mesh.omega_interface) {
        const Circle c = *mesh.omega_interface;
        const double tol = 1e-9 * c.radius;
        for (int e = 0; e < ne; ++e) {
            bool inside = false, outside = false;
            for (int k = 0; k < mesh.vertex_count(e); ++k) {
                const double d = dist(mesh.nodes[mesh.vertex(e, k)], c.center);
                if (d < c.radius - tol) inside = true;
                if (d > c.radius + tol) outside = true;
            }
            if (inside && outside)
                diags.push_back("element " + std::to_string(e) +
                                " straddles the omega interface");
        }
    }

    return diags;
}

void require_valid(const Mesh& mesh) {
    auto diags = validate(mesh);
    if (!diags.empty()) fail(errc::validation, "mesh validation failed: " + diags.front());
}

std::vector<std::vector<int>> boundary_loops(const Mesh& mesh, BoundaryTag tag) {
    std::string err;
    auto loops = trace_loops(mesh, tag, &err);
    if (!err.empty()) fail(errc::topology, err);
    return loops;
}

BoundaryParametrization boundary_parametrization(const Mesh& mesh) {
    std::string err;
    auto loops = trace_loops(mesh, BoundaryTag::outer, &err);
    if (!err.empty()) fail(errc::topology, "outer boundary: " + err);
    if (loops.size() != 1)
        fail(errc::topology, "expected exactly one OUTER loop, found " +
                                 std::to_string(loops.size()));
    std::vector<int> loop = loops.front();

    if (loop_signed_area(mesh, loop) < 0.0) std::reverse(loop.begin(), loop.end());

    int anchor = mesh.outer_anchor >= 0 ? mesh.outer_anchor : default_anchor(mesh);
    auto it = std::find(loop.begin(), loop.end(), anchor);
    if (it == loop.end())
        fail(errc::topology, "anchor node " + std::to_string(anchor) +
                                 " is not on the OUTER loop");
    std::rotate(loop.begin(), it, loop.end());

    BoundaryParametrization param;
    param.loop = std::move(loop);
    const int n = param.size();
    param.edge_length.resize(n);
    double perim = 0.0;
    for (int i = 0; i < n; ++i) {
        param.edge_length[i] =
            dist(mesh.nodes[param.loop[i]], mesh.nodes[param.loop[(i + 1) % n]]);
        perim += param.edge_length[i];
    }
    param.half_length = 0.5 * perim;
    param.arc.resize(n);
    double s = -param.half_length;
    for (int i = 0; i < n; ++i) {
        param.arc[i] = s;
        s += param.edge_length[i];
    }
    return param;
}

void retag_omega_circle(Mesh& mesh, Vec2 center, double radius) {
    if (radius <= 0.0) fail(errc::parameter, "omega radius must be positive");
    const double tol = 1e-9 * radius;
    for (int e = 0; e < mesh.element_count(); ++e) {
        bool inside = false, outside = false;
        for (int k = 0; k < mesh.vertex_count(e); ++k) {
            const double d = dist(mesh.nodes[mesh.vertex(e, k)], center);
            if (d < radius - tol) inside = true;
            if (d > radius + tol) outside = true;
        }
        if (inside && outside)
            fail(errc::geometry, "omega circle is not mesh-conforming: element " +
                                     std::to_string(e) + " straddles it");
        mesh.element_in_omega[e] = dist(mesh.centroid(e), center) < radius ? 1 : 0;
    }
    mesh.omega_interface = Circle{center, radius};
}

void tag_omega_all(Mesh& mesh) {
    std::fill(mesh.element_in_omega.begin(), mesh.element_in_omega.end(), 1);
    mesh.omega_interface.reset();
}

}  // namespace worstload
