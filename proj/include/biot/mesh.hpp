// Conforming triangle meshes of the unit square with oriented facet data.
#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace biot {

// Direction of the diagonal splitting each grid square into two triangles.
enum class Diagonal { bottom_left_to_top_right, top_left_to_bottom_right };

// Interior facets store both adjacent cells; boundary facets have cell1 == -1.
// The endpoints (v0, v1) are ordered so that cell0 traverses the facet from v0
// to v1 in its counterclockwise boundary walk; the unit normal is the clockwise
// rotation of that direction, i.e. it points out of cell0 (into cell1).
struct Facet {
  int v0 = -1;
  int v1 = -1;
  int cell0 = -1;
  int cell1 = -1;
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double length = 0.0;

  bool boundary() const { return cell1 < 0; }
};

struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;        // counterclockwise vertex ids
  std::vector<Facet> facets;
  std::vector<std::array<int, 3>> cell_facets;  // local facet f spans vertices (f, (f+1)%3)

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }

  // Largest cell diameter.
  double mesh_size() const;
  double cell_diameter(int cell) const;
};

// Affine map x = origin + jac * xhat from the reference triangle
// {(0,0),(1,0),(0,1)} onto a mesh cell, with the contravariant (Piola)
// transforms used by the H(div) elements.
struct CellGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jac;
  Eigen::Matrix2d inv_jac;
  double det = 0.0;  // positive for counterclockwise cells

  Eigen::Vector2d map(const Eigen::Vector2d& xhat) const { return origin + jac * xhat; }
  Eigen::Vector2d unmap(const Eigen::Vector2d& x) const { return inv_jac * (x - origin); }

  // v = J vhat / det J preserves normal fluxes across facets.
  Eigen::Vector2d piola_value(const Eigen::Vector2d& vhat) const { return jac * vhat / det; }
  double piola_div(double divhat) const { return divhat / det; }
  Eigen::Matrix2d piola_jacobian(const Eigen::Matrix2d& jhat) const {
    return jac * jhat * inv_jac / det;
  }
  // Gradient transform for scalar basis functions.
  Eigen::Vector2d covariant_grad(const Eigen::Vector2d& ghat) const {
    return inv_jac.transpose() * ghat;
  }
};

// Throws std::invalid_argument if the cell is degenerate or inverted.
CellGeometry cell_geometry(const Mesh& mesh, int cell);

// Structured mesh of [0,1]^2 with m x m squares, each split along the chosen
// diagonal; 2 m^2 cells in total.
Mesh unit_square_mesh(int m, Diagonal diagonal = Diagonal::bottom_left_to_top_right);

// One sweep of red refinement: every cell is split into four congruent
// children through the edge midpoints.
Mesh refine_uniform(const Mesh& mesh);

}  // namespace biot
