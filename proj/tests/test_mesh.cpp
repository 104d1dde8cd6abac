#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "biot/mesh.hpp"

using biot::Diagonal;
using biot::Mesh;

namespace {

// Shared sanity checks every mesh in the suite must satisfy.
void check_invariants(const Mesh& mesh) {
  // cells are counterclockwise and non-degenerate
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto geo = biot::cell_geometry(mesh, c);
    CHECK(geo.det > 0.0);
    CHECK((geo.jac * geo.inv_jac - Eigen::Matrix2d::Identity()).norm() < 1e-13);
  }
  // facet bookkeeping: endpoints follow cell0's boundary walk, the normal is
  // the outward unit normal of cell0, and cell1 (if any) walks them reversed
  int boundary_count = 0;
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const auto& facet = mesh.facets[f];
    Eigen::Vector2d a = mesh.vertices[facet.v0];
    Eigen::Vector2d b = mesh.vertices[facet.v1];
    Eigen::Vector2d d = b - a;
    CHECK(facet.length == doctest::Approx(d.norm()).epsilon(1e-14));
    CHECK(facet.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(facet.normal.dot(d)) < 1e-13);

    auto local_of = [&](int cell) {
      for (int k = 0; k < 3; ++k)
        if (mesh.cell_facets[cell][k] == f) return k;
      return -1;
    };
    int l0 = local_of(facet.cell0);
    REQUIRE(l0 >= 0);
    CHECK(mesh.cells[facet.cell0][l0] == facet.v0);
    CHECK(mesh.cells[facet.cell0][(l0 + 1) % 3] == facet.v1);

    // outward for cell0: points away from the opposite vertex
    Eigen::Vector2d opposite = mesh.vertices[mesh.cells[facet.cell0][(l0 + 2) % 3]];
    CHECK(facet.normal.dot(a - opposite) > 0.0);

    if (facet.boundary()) {
      ++boundary_count;
    } else {
      int l1 = local_of(facet.cell1);
      REQUIRE(l1 >= 0);
      CHECK(mesh.cells[facet.cell1][l1] == facet.v1);
      CHECK(mesh.cells[facet.cell1][(l1 + 1) % 3] == facet.v0);
    }
  }
  // Euler: V - E + F = 1 for a disk-like domain
  CHECK(mesh.n_vertices() - mesh.n_facets() + mesh.n_cells() == 1);
  // every boundary facet of the unit square lies on one of the four sides
  for (const auto& facet : mesh.facets) {
    if (!facet.boundary()) continue;
    Eigen::Vector2d mid = 0.5 * (mesh.vertices[facet.v0] + mesh.vertices[facet.v1]);
    bool on_side = std::abs(mid.x()) < 1e-14 || std::abs(mid.x() - 1.0) < 1e-14 ||
                   std::abs(mid.y()) < 1e-14 || std::abs(mid.y() - 1.0) < 1e-14;
    CHECK(on_side);
  }
  CHECK(boundary_count > 0);
}

// Canonical multiset of cell centroids, for comparing meshes up to renumbering.
std::vector<std::pair<double, double>> centroid_key(const Mesh& mesh) {
  std::vector<std::pair<double, double>> key;
  key.reserve(mesh.cells.size());
  for (const auto& cell : mesh.cells) {
    Eigen::Vector2d c =
        (mesh.vertices[cell[0]] + mesh.vertices[cell[1]] + mesh.vertices[cell[2]]) / 3.0;
    key.emplace_back(std::round(c.x() * 1e12) / 1e12, std::round(c.y() * 1e12) / 1e12);
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

TEST_CASE("structured mesh entity counts") {
  auto mesh = biot::unit_square_mesh(5);
  CHECK(mesh.n_vertices() == 36);
  CHECK(mesh.n_cells() == 50);
  CHECK(mesh.n_facets() == 85);  // 30 horizontal + 30 vertical + 25 diagonal
  int boundary = 0;
  for (const auto& f : mesh.facets) boundary += f.boundary() ? 1 : 0;
  CHECK(boundary == 20);
  CHECK(mesh.mesh_size() == doctest::Approx(std::sqrt(2.0) / 5.0).epsilon(1e-14));
  check_invariants(mesh);
}

TEST_CASE("both diagonal directions yield valid meshes") {
  for (Diagonal diag : {Diagonal::bottom_left_to_top_right, Diagonal::top_left_to_bottom_right}) {
    for (int m : {1, 2, 3, 7}) {
      auto mesh = biot::unit_square_mesh(m, diag);
      CHECK(mesh.n_cells() == 2 * m * m);
      CHECK(mesh.n_vertices() == (m + 1) * (m + 1));
      CHECK(mesh.n_facets() == 2 * m * (m + 1) + m * m);
      check_invariants(mesh);
      double area = 0.0;
      for (int c = 0; c < mesh.n_cells(); ++c) area += 0.5 * biot::cell_geometry(mesh, c).det;
      CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("red refinement quadruples cells and matches the finer structured mesh") {
  for (int m : {2, 3}) {
    auto coarse = biot::unit_square_mesh(m);
    auto fine = biot::refine_uniform(coarse);
    CHECK(fine.n_cells() == 4 * coarse.n_cells());
    CHECK(fine.n_vertices() == coarse.n_vertices() + coarse.n_facets());
    check_invariants(fine);
    // the refined structured mesh is the structured mesh with doubled resolution
    auto direct = biot::unit_square_mesh(2 * m);
    CHECK(centroid_key(fine) == centroid_key(direct));
    CHECK(fine.mesh_size() == doctest::Approx(0.5 * coarse.mesh_size()).epsilon(1e-14));
  }
}

TEST_CASE("twice refined mesh stays conforming") {
  auto mesh = biot::refine_uniform(biot::refine_uniform(biot::unit_square_mesh(3)));
  CHECK(mesh.n_cells() == 2 * 12 * 12);
  check_invariants(mesh);
}

TEST_CASE("cell geometry maps reference vertices onto the cell") {
  auto mesh = biot::unit_square_mesh(4, Diagonal::top_left_to_bottom_right);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    auto geo = biot::cell_geometry(mesh, c);
    Eigen::Vector2d ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2d mapped = geo.map(ref[k]);
      Eigen::Vector2d expected = mesh.vertices[mesh.cells[c][k]];
      CHECK((mapped - expected).norm() < 1e-14);
      CHECK((geo.unmap(expected) - ref[k]).norm() < 1e-13);
    }
    CHECK(geo.det == doctest::Approx(2.0 * 0.5 / 16.0).epsilon(1e-13));
  }
}

TEST_CASE("degenerate and inverted cells are rejected") {
  Mesh mesh = biot::unit_square_mesh(1);
  Mesh collapsed = mesh;
  collapsed.vertices[1] = collapsed.vertices[0];  // zero-area first cell
  CHECK_THROWS_AS(biot::cell_geometry(collapsed, 0), std::invalid_argument);
  Mesh inverted = mesh;
  std::swap(inverted.cells[0][1], inverted.cells[0][2]);  // clockwise cell
  CHECK_THROWS_AS(biot::cell_geometry(inverted, 0), std::invalid_argument);
  CHECK_THROWS_AS(biot::unit_square_mesh(0), std::invalid_argument);
}
