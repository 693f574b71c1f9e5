#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "worstload/mesh.hpp"

namespace worstload {

namespace {

// Whitespace token stream with line tracking; '#' starts a comment.
class Tokenizer {
  public:
    explicit Tokenizer(std::istream& in) : in_(in) {}

    bool next(std::string& tok) {
        for (;;) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) return false;
                ++lineno_;
                pos_ = 0;
                continue;
            }
            while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            if (pos_ >= line_.size() || line_[pos_] == '#') {
                pos_ = line_.size();
                continue;
            }
            size_t start = pos_;
            while (pos_ < line_.size() &&
                   !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
                   line_[pos_] != '#')
                ++pos_;
            tok = line_.substr(start, pos_ - start);
            return true;
        }
    }

    std::string expect(const char* what) {
        std::string tok;
        if (!next(tok))
            fail(errc::parse, std::string("line ") + std::to_string(lineno_) +
                                  ": unexpected end of file, expected " + what);
        return tok;
    }

    long expect_int(const char* what) {
        const std::string tok = expect(what);
        size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (...) {
            used = 0;
        }
        if (used != tok.size())
            fail(errc::parse, "line " + std::to_string(lineno_) + ": expected " + what +
                                  ", got '" + tok + "'");
        return v;
    }

    double expect_double(const char* what) {
        const std::string tok = expect(what);
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (...) {
            used = 0;
        }
        if (used != tok.size())
            fail(errc::parse, "line " + std::to_string(lineno_) + ": expected " + what +
                                  ", got '" + tok + "'");
        return v;
    }

    int line() const { return lineno_; }

  private:
    std::istream& in_;
    std::string line_;
    size_t pos_ = 0;
    int lineno_ = 0;
};

}  // namespace

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open mesh file: " + path);
    Tokenizer tok(in);

    if (tok.expect("header") != "meshv1")
        fail(errc::parse, "line " + std::to_string(tok.line()) +
                              ": expected 'meshv1' header");

    Mesh mesh;
    if (tok.expect("'nodes'") != "nodes")
        fail(errc::parse, "line " + std::to_string(tok.line()) + ": expected 'nodes'");
    const long nn = tok.expect_int("node count");
    if (nn < 3) fail(errc::parse, "mesh needs at least 3 nodes");
    mesh.nodes.resize(nn);
    for (long i = 0; i < nn; ++i) {
        mesh.nodes[i].x = tok.expect_double("node x");
        mesh.nodes[i].y = tok.expect_double("node y");
    }

    std::string section = tok.expect("'tris', 'quads' or 'regions'");
    bool saw_tris = false, saw_quads = false;
    while (section == "tris" || section == "quads") {
        const bool is_tri = section == "tris";
        if ((is_tri && saw_tris) || (!is_tri && saw_quads))
            fail(errc::parse, "line " + std::to_string(tok.line()) + ": duplicate '" +
                                  section + "' section");
        (is_tri ? saw_tris : saw_quads) = true;
        const long ne = tok.expect_int("element count");
        for (long e = 0; e < ne; ++e) {
            const int nv = is_tri ? 3 : 4;
            std::array<int, 4> conn{};
            for (int k = 0; k < nv; ++k) {
                const long v = tok.expect_int("node index");
                if (v < 0 || v >= nn)
                    fail(errc::parse,
                         "line " + std::to_string(tok.line()) + ": element " +
                             std::to_string(e) + " references missing node " +
                             std::to_string(v));
                conn[k] = static_cast<int>(v);
            }
            if (is_tri) mesh.tris.push_back({conn[0], conn[1], conn[2]});
            else mesh.quads.push_back(conn);
        }
        section = tok.expect("'tris', 'quads' or 'regions'");
    }

    if (section != "regions")
        fail(errc::parse, "line " + std::to_string(tok.line()) + ": expected 'regions'");
    const int ne = mesh.element_count();
    mesh.element_region.resize(ne);
    mesh.element_in_omega.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const std::string t = tok.expect("region tag");
        std::string base = t;
        bool in_omega = false;
        if (base.size() > 2 && base.substr(base.size() - 2) == "+w") {
            in_omega = true;
            base = base.substr(0, base.size() - 2);
        }
        if (base == "M") mesh.element_region[e] = ElementTag::matrix;
        else if (base == "I") mesh.element_region[e] = ElementTag::inclusion;
        else
            fail(errc::parse, "line " + std::to_string(tok.line()) +
                                  ": unknown region tag '" + t + "'");
        mesh.element_in_omega[e] = in_omega ? 1 : 0;
    }

    if (tok.expect("'boundary'") != "boundary")
        fail(errc::parse, "line " + std::to_string(tok.line()) + ": expected 'boundary'");
    const long nb = tok.expect_int("boundary edge count");
    for (long i = 0; i < nb; ++i) {
        BoundaryEdge be;
        const long a = tok.expect_int("edge node");
        const long b = tok.expect_int("edge node");
        if (a < 0 || a >= nn || b < 0 || b >= nn)
            fail(errc::parse, "line " + std::to_string(tok.line()) +
                                  ": boundary edge references missing node");
        be.a = static_cast<int>(a);
        be.b = static_cast<int>(b);
        const std::string t = tok.expect("edge tag");
        if (t == "OUTER") be.tag = BoundaryTag::outer;
        else if (t == "INNER") be.tag = BoundaryTag::inner_clamped;
        else
            fail(errc::parse, "line " + std::to_string(tok.line()) +
                                  ": unknown boundary tag '" + t + "'");
        mesh.boundary_edges.push_back(be);
    }

    std::string trailing;
    while (tok.next(trailing)) {
        if (trailing == "anchor") {
            const long a = tok.expect_int("anchor node index");
            if (a < 0 || a >= nn)
                fail(errc::parse, "line " + std::to_string(tok.line()) +
                                      ": anchor references missing node");
            mesh.outer_anchor = static_cast<int>(a);
        } else {
            fail(errc::parse, "line " + std::to_string(tok.line()) +
                                  ": unexpected token '" + trailing + "'");
        }
    }

    auto diags = validate(mesh);
    if (!diags.empty())
        fail(errc::validation, "mesh file " + path + ": " + diags.front());
    return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write mesh file: " + path);
    char buf[64];
    out << "meshv1\n";
    out << "nodes " << mesh.nodes.size() << "\n";
    for (const Vec2& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        out << buf;
    }
    out << "tris " << mesh.tris.size() << "\n";
    for (const auto& t : mesh.tris) out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "quads " << mesh.quads.size() << "\n";
    for (const auto& q : mesh.quads)
        out << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
    out << "regions\n";
    for (int e = 0; e < mesh.element_count(); ++e) {
        out << (mesh.element_region[e] == ElementTag::matrix ? "M" : "I");
        if (mesh.element_in_omega[e]) out << "+w";
        out << "\n";
    }
    out << "boundary " << mesh.boundary_edges.size() << "\n";
    for (const BoundaryEdge& be : mesh.boundary_edges)
        out << be.a << " " << be.b << " "
            << (be.tag == BoundaryTag::outer ? "OUTER" : "INNER") << "\n";
    if (mesh.outer_anchor >= 0) out << "anchor " << mesh.outer_anchor << "\n";
    if (!out) fail(errc::io, "write failure on " + path);
}

}  // namespace worstload
