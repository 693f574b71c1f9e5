#pragma once

#include <string>
#include <vector>

#include "worstload/fem.hpp"
#include "worstload/mesh.hpp"

namespace worstload {

/// Legacy ASCII unstructured-grid file with one nodal scalar field.
void write_vtk_point_scalar(const Mesh& mesh, const NodalField& values,
                            const std::string& field_name, const std::string& path);

/// Legacy ASCII unstructured-grid file with one per-element scalar field.
void write_vtk_cell_scalar(const Mesh& mesh, const std::vector<double>& values,
                           const std::string& field_name, const std::string& path);

}  // namespace worstload
