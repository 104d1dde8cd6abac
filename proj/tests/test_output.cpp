#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "biot/output.hpp"

namespace {

biot::ErrorReport sample_report() {
  biot::ErrorReport report;
  report.rows.push_back({0, 0.1, 0.2828, 7.682e-3, 2.781e-3, 3.803e-3, 1.762e-2});
  report.rows.push_back({1, 0.05, 0.1414, 2.099e-3, 7.373e-4, 1.027e-3, 5.539e-3});
  return report;
}

}  // namespace

TEST_CASE("csv output round trips through parsing") {
  std::ostringstream out;
  biot::write_convergence_csv(out, sample_report());
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "level,tau,h,err_grad_u,eoc_u,err_v,eoc_v,err_w,eoc_w,err_p,eoc_p");

  std::string line0, line1;
  REQUIRE(std::getline(in, line0));
  REQUIRE(std::getline(in, line1));
  CHECK(!std::getline(in, header));  // exactly two data rows

  // first row carries no orders
  CHECK(line0.find("--") != std::string::npos);
  CHECK(line0.substr(0, 2) == "0,");

  // second row: parse the fields back and verify values and orders
  std::istringstream row(line1);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(row, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 11);
  CHECK(std::stoi(fields[0]) == 1);
  CHECK(std::stod(fields[1]) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(std::stod(fields[3]) == doctest::Approx(2.099e-3).epsilon(1e-6));
  CHECK(std::stod(fields[4]) == doctest::Approx(1.872).epsilon(1e-2));   // log2(7.682/2.099)
  CHECK(std::stod(fields[6]) == doctest::Approx(1.915).epsilon(1e-2));
  CHECK(std::stod(fields[10]) == doctest::Approx(1.670).epsilon(1e-2));
}

TEST_CASE("text table is aligned and complete") {
  std::string table = biot::format_convergence_table(sample_report());
  std::istringstream in(table);
  std::string header, row0, row1;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row0));
  REQUIRE(std::getline(in, row1));
  CHECK(header.find("level") != std::string::npos);
  CHECK(header.find("grad u") != std::string::npos);
  CHECK(header.find("eoc") != std::string::npos);
  CHECK(row0.find("7.682e-03") != std::string::npos);
  CHECK(row1.find("5.539e-03") != std::string::npos);
  CHECK(row0.length() == row1.length());  // alignment
}

TEST_CASE("vtk export writes a well formed lattice") {
  auto mesh = biot::unit_square_mesh(2);
  biot::FESpace v(mesh, biot::ElementFamily::vector_hdiv, 2);
  biot::FESpace p(mesh, biot::ElementFamily::scalar_dg, 1);
  Eigen::VectorXd solid = v.interpolate_vector(
      [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), -x.x()); });
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(v.n_dofs());
  Eigen::VectorXd seepage = Eigen::VectorXd::Zero(v.n_dofs());
  Eigen::VectorXd pressure = p.interpolate_scalar(
      [](const Eigen::Vector2d& x) { return 1.0 + x.x(); });

  const char* path = "test_export.vtk";
  const int r = 2;
  biot::write_vtk(path, v, p, solid, velocity, seepage, pressure, r);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.find("# vtk DataFile") == 0);

  int expected_points = mesh.n_cells() * (r + 1) * (r + 2) / 2;
  int expected_cells = mesh.n_cells() * r * r;
  int points = -1, cells = -1, found_fields = 0;
  double pressure_sum = 0.0;
  int pressure_count = 0;
  bool in_pressure = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "POINTS") {
      ls >> points;
      in_pressure = false;
    } else if (word == "CELLS") {
      ls >> cells;
      in_pressure = false;
    } else if (word == "VECTORS") {
      ++found_fields;
      in_pressure = false;
    } else if (word == "SCALARS") {
      ++found_fields;
    } else if (word == "LOOKUP_TABLE") {
      in_pressure = true;
    } else if (in_pressure && !word.empty()) {
      pressure_sum += std::stod(word);
      ++pressure_count;
      double val;
      while (ls >> val) {
        pressure_sum += val;
        ++pressure_count;
      }
    }
  }
  CHECK(points == expected_points);
  CHECK(cells == expected_cells);
  CHECK(found_fields == 4);  // three vector fields and the pressure
  REQUIRE(pressure_count == expected_points);
  // lattice average of 1 + x over symmetric per-cell lattices of the square
  CHECK(pressure_sum / pressure_count == doctest::Approx(1.5).epsilon(1e-10));
  std::remove(path);
}

TEST_CASE("vtk export rejects bad subdivisions") {
  auto mesh = biot::unit_square_mesh(1);
  biot::FESpace v(mesh, biot::ElementFamily::vector_hdiv, 1);
  biot::FESpace p(mesh, biot::ElementFamily::scalar_dg, 1);
  Eigen::VectorXd zv = Eigen::VectorXd::Zero(v.n_dofs());
  Eigen::VectorXd zp = Eigen::VectorXd::Zero(p.n_dofs());
  CHECK_THROWS(biot::write_vtk("never.vtk", v, p, zv, zv, zv, zp, 0));
}
