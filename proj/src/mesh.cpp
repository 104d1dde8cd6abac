#include "biot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace biot {

namespace {

// Fills facets and cell_facets from the cell list.  Local facet f of a cell
// (a,b,c) runs between vertices (f, (f+1)%3); the first cell registering an
// edge becomes cell0 and fixes the stored direction and normal.
void build_facets(Mesh& mesh) {
  mesh.facets.clear();
  mesh.cell_facets.assign(mesh.cells.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> index;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int f = 0; f < 3; ++f) {
      int a = cell[f];
      int b = cell[(f + 1) % 3];
      auto key = std::minmax(a, b);
      auto it = index.find(key);
      if (it == index.end()) {
        Facet facet;
        facet.v0 = a;
        facet.v1 = b;
        facet.cell0 = c;
        Eigen::Vector2d d = mesh.vertices[b] - mesh.vertices[a];
        facet.length = d.norm();
        if (facet.length <= 0.0)
          throw std::invalid_argument("build_facets: zero-length edge");
        facet.normal = Eigen::Vector2d(d.y(), -d.x()) / facet.length;
        index.emplace(key, mesh.n_facets());
        mesh.cell_facets[c][f] = mesh.n_facets();
        mesh.facets.push_back(facet);
      } else {
        Facet& facet = mesh.facets[it->second];
        if (facet.cell1 >= 0)
          throw std::invalid_argument("build_facets: edge shared by more than two cells");
        if (facet.v0 != b || facet.v1 != a)
          throw std::invalid_argument("build_facets: neighbouring cells traverse a shared edge "
                                      "in the same direction (inconsistent orientation)");
        facet.cell1 = c;
        mesh.cell_facets[c][f] = it->second;
      }
    }
  }
}

}  // namespace

double Mesh::cell_diameter(int cell) const {
  const auto& c = cells[cell];
  double h = 0.0;
  for (int f = 0; f < 3; ++f)
    h = std::max(h, (vertices[c[f]] - vertices[c[(f + 1) % 3]]).norm());
  return h;
}

double Mesh::mesh_size() const {
  double h = 0.0;
  for (int c = 0; c < n_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  const auto& c = mesh.cells[cell];
  CellGeometry g;
  g.origin = mesh.vertices[c[0]];
  g.jac.col(0) = mesh.vertices[c[1]] - g.origin;
  g.jac.col(1) = mesh.vertices[c[2]] - g.origin;
  g.det = g.jac(0, 0) * g.jac(1, 1) - g.jac(0, 1) * g.jac(1, 0);
  double h = mesh.cell_diameter(cell);
  if (std::abs(g.det) <= 1e-14 * h * h)
    throw std::invalid_argument("cell_geometry: degenerate cell");
  if (g.det < 0.0)
    throw std::invalid_argument("cell_geometry: cell is not counterclockwise");
  g.inv_jac << g.jac(1, 1), -g.jac(0, 1), -g.jac(1, 0), g.jac(0, 0);
  g.inv_jac /= g.det;
  return g;
}

Mesh unit_square_mesh(int m, Diagonal diagonal) {
  if (m < 1) throw std::invalid_argument("unit_square_mesh: need m >= 1");
  Mesh mesh;
  mesh.vertices.reserve((m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      mesh.vertices.emplace_back(double(i) / m, double(j) / m);
  auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  mesh.cells.reserve(2 * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (diagonal == Diagonal::bottom_left_to_top_right) {
        mesh.cells.push_back({a, b, c});
        mesh.cells.push_back({a, c, d});
      } else {
        mesh.cells.push_back({a, b, d});
        mesh.cells.push_back({b, c, d});
      }
    }
  }
  build_facets(mesh);
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(mesh.n_vertices() + mesh.n_facets());
  // One new vertex per facet, appended in facet order.
  for (const Facet& f : mesh.facets)
    fine.vertices.push_back(0.5 * (mesh.vertices[f.v0] + mesh.vertices[f.v1]));
  fine.cells.reserve(4 * mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cv = mesh.cells[c];
    int m01 = mesh.n_vertices() + mesh.cell_facets[c][0];
    int m12 = mesh.n_vertices() + mesh.cell_facets[c][1];
    int m20 = mesh.n_vertices() + mesh.cell_facets[c][2];
    fine.cells.push_back({cv[0], m01, m20});
    fine.cells.push_back({m01, cv[1], m12});
    fine.cells.push_back({m20, m12, cv[2]});
    fine.cells.push_back({m01, m12, m20});
  }
  build_facets(fine);
  return fine;
}

}  // namespace biot
