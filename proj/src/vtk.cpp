#include "worstload/vtk.hpp"

#include <cstdio>
#include <fstream>

namespace worstload {

namespace {

void write_grid(std::ofstream& out, const Mesh& mesh, const std::string& title) {
    char buf[96];
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.nodes.size() << " double\n";
    for (const Vec2& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.12g %.12g 0\n", p.x, p.y);
        out << buf;
    }
    const size_t ncells = mesh.tris.size() + mesh.quads.size();
    const size_t list_len = 4 * mesh.tris.size() + 5 * mesh.quads.size();
    out << "CELLS " << ncells << " " << list_len << "\n";
    for (const auto& t : mesh.tris)
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (const auto& q : mesh.quads)
        out << "4 " << q[0] << " " << q[1] << " " << q[2] << " " << q[3] << "\n";
    out << "CELL_TYPES " << ncells << "\n";
    for (size_t i = 0; i < mesh.tris.size(); ++i) out << "5\n";
    for (size_t i = 0; i < mesh.quads.size(); ++i) out << "9\n";
}

}  // namespace

void write_vtk_point_scalar(const Mesh& mesh, const NodalField& values,
                            const std::string& field_name, const std::string& path) {
    if (values.size() != static_cast<Eigen::Index>(mesh.nodes.size()))
        fail(errc::parameter, "field size does not match node count");
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write " + path);
    write_grid(out, mesh, field_name);
    out << "POINT_DATA " << mesh.nodes.size() << "\n";
    out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    char buf[48];
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g\n", values[i]);
        out << buf;
    }
    if (!out) fail(errc::io, "write failure on " + path);
}

void write_vtk_cell_scalar(const Mesh& mesh, const std::vector<double>& values,
                           const std::string& field_name, const std::string& path) {
    if (values.size() != static_cast<size_t>(mesh.element_count()))
        fail(errc::parameter, "field size does not match element count");
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write " + path);
    write_grid(out, mesh, field_name);
    out << "CELL_DATA " << mesh.element_count() << "\n";
    out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
    char buf[48];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.12g\n", v);
        out << buf;
    }
    if (!out) fail(errc::io, "write failure on " + path);
}

}  // namespace worstload
