// Copyright (c) 2026 hexsem contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hexsem/mesh_io.hpp"
#include "hexsem/problem.hpp"
#include "hexsem/vtk.hpp"
#include "support/oracles.hpp"

using namespace hexsem;

namespace {
std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::tuple<gid, int, int>> face_set(const HexMesh& m)
{
  std::set<std::tuple<gid, int, int>> s;
  for (const auto& bf : m.boundary_faces)
    s.insert({bf.element, bf.face, static_cast<int>(bf.tag)});
  return s;
}
} // namespace

TEST_CASE("native binary round trip is exact")
{
  const HexMesh mesh = generate_cube_mesh(3, MeshFamily::distorted_elements);
  const std::string path = "roundtrip.hxm";
  write_native(mesh, path);
  const HexMesh back = read_native(path);
  REQUIRE(back.num_vertices() == mesh.num_vertices());
  REQUIRE(back.num_elements() == mesh.num_elements());
  for (gid v = 0; v < mesh.num_vertices(); ++v)
    for (int d = 0; d < 3; ++d) CHECK(back.vertices[v][d] == mesh.vertices[v][d]);
  CHECK(back.elements == mesh.elements);
  CHECK(face_set(back) == face_set(mesh));
  std::remove(path.c_str());
}

TEST_CASE("msh round trip preserves topology and tags")
{
  HexMesh mesh = generate_cube_mesh(2, MeshFamily::distorted_domain);
  // mixed tags: relabel the -x faces as Neumann
  for (auto& bf : mesh.boundary_faces)
    if (bf.face == 0) bf.tag = BoundaryTag::neumann;
  const std::string path = "roundtrip.msh";
  write_msh(mesh, path);
  const HexMesh back = read_msh(path);
  REQUIRE(back.num_vertices() == mesh.num_vertices());
  REQUIRE(back.num_elements() == mesh.num_elements());
  for (gid v = 0; v < mesh.num_vertices(); ++v)
    for (int d = 0; d < 3; ++d)
      CHECK(back.vertices[v][d] == doctest::Approx(mesh.vertices[v][d]).epsilon(1e-15));
  CHECK(face_set(back) == face_set(mesh));

  // a solve on the re-read mesh behaves identically
  const IndexMaps a = build_index_maps(mesh, make_gll_basis(2));
  const IndexMaps b = build_index_maps(back, make_gll_basis(2));
  CHECK(a.num_global == b.num_global);
  CHECK(a.dirichlet_mask == b.dirichlet_mask);
  std::remove(path.c_str());
}

TEST_CASE("msh reader handles sparse node ids and skips foreign element types")
{
  // two stacked unit hexes, node ids starting at 10 with a gap, a stray
  // point element, and one tagged Dirichlet quad on the bottom face
  const char* text =
      "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
      "$Nodes\n12\n"
      "10 0 0 0\n11 1 0 0\n12 1 1 0\n13 0 1 0\n"
      "14 0 0 1\n15 1 0 1\n16 1 1 1\n17 0 1 1\n"
      "30 0 0 2\n31 1 0 2\n32 1 1 2\n33 0 1 2\n"
      "$EndNodes\n"
      "$Elements\n4\n"
      "1 15 2 0 0 10\n"
      "2 5 2 0 0 10 11 12 13 14 15 16 17\n"
      "3 5 2 0 0 14 15 16 17 30 31 32 33\n"
      "4 3 2 1 1 10 11 12 13\n"
      "$EndElements\n";
  std::ofstream("sparse.msh") << text;
  const HexMesh mesh = read_msh("sparse.msh");
  CHECK(mesh.num_vertices() == 12);
  CHECK(mesh.num_elements() == 2);
  REQUIRE(mesh.boundary_faces.size() == 1);
  CHECK(mesh.boundary_faces[0].tag == BoundaryTag::dirichlet);
  // the two hexes share a conforming face
  const IndexMaps maps = build_index_maps(mesh, make_gll_basis(2));
  CHECK(maps.num_global == 5 * 3 * 3);
  std::remove("sparse.msh");
}

TEST_CASE("msh reader rejects garbage")
{
  const std::string path = "bad.msh";
  std::ofstream(path) << "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";
  CHECK_THROWS(read_msh(path));
  std::remove(path.c_str());
  CHECK_THROWS(read_msh("does_not_exist.msh"));
  CHECK_THROWS(read_native("does_not_exist.hxm"));
}

TEST_CASE("vtk export counts and determinism")
{
  SUBCASE("single element, order 1: 8 points, 1 cell")
  {
    const HexMesh mesh = generate_cube_mesh(1, MeshFamily::uniform);
    const GllBasis basis = make_gll_basis(1);
    const IndexMaps maps = build_index_maps(mesh, basis);
    const Vector u = test::random_vector(maps.num_global, 2);
    export_vtk(mesh, basis, maps, u, "one.vtk");
    const std::string text = slurp("one.vtk");
    CHECK(text.find("POINTS 8 double") != std::string::npos);
    CHECK(text.find("CELLS 1 9") != std::string::npos);
    CHECK(text.find("POINT_DATA 8") != std::string::npos);
    std::remove("one.vtk");
  }
  SUBCASE("single element, order 2: 27 points, 8 sub-cells")
  {
    const HexMesh mesh = generate_cube_mesh(1, MeshFamily::uniform);
    const GllBasis basis = make_gll_basis(2);
    const IndexMaps maps = build_index_maps(mesh, basis);
    const Vector u = test::random_vector(maps.num_global, 3);
    export_vtk(mesh, basis, maps, u, "two.vtk");
    const std::string text = slurp("two.vtk");
    CHECK(text.find("POINTS 27 double") != std::string::npos);
    CHECK(text.find("CELLS 8 72") != std::string::npos);
    std::remove("two.vtk");
  }
  SUBCASE("conforming export: point count equals N")
  {
    const HexMesh mesh = generate_cube_mesh(2, MeshFamily::distorted_elements);
    const GllBasis basis = make_gll_basis(3);
    const IndexMaps maps = build_index_maps(mesh, basis);
    const Vector u = test::random_vector(maps.num_global, 4);
    export_vtk(mesh, basis, maps, u, "c1.vtk");
    export_vtk(mesh, basis, maps, u, "c2.vtk");
    const std::string t1 = slurp("c1.vtk");
    CHECK(t1.find("POINTS " + std::to_string(maps.num_global) + " double") !=
          std::string::npos);
    CHECK(t1 == slurp("c2.vtk")); // byte-identical output
    std::remove("c1.vtk");
    std::remove("c2.vtk");
  }
}

TEST_CASE("solving from a mesh file matches the generator")
{
  const HexMesh mesh = generate_cube_mesh(2, MeshFamily::distorted_elements);
  write_mesh_file(mesh, "gen.msh");
  ProblemConfig from_gen;
  from_gen.k = 2;
  from_gen.family = MeshFamily::distorted_elements;
  from_gen.order = 2;
  ProblemConfig from_file = from_gen;
  from_file.mesh_file = "gen.msh";
  const PoissonResult a = solve_poisson(from_gen);
  const PoissonResult b = solve_poisson(from_file);
  CHECK(a.report.iterations == b.report.iterations);
  CHECK(a.report.num_global == b.report.num_global);
  std::remove("gen.msh");
}

TEST_CASE("history csv and json report files")
{
  ProblemConfig cfg;
  cfg.k = 2;
  cfg.order = 2;
  cfg.report_path = "rep.json";
  cfg.history_path = "hist.csv";
  const PoissonResult res = solve_poisson(cfg);
  const std::string hist = slurp("hist.csv");
  CHECK(hist.rfind("iteration,residual_norm,zr\n", 0) == 0);
  CHECK(std::count(hist.begin(), hist.end(), '\n') ==
        static_cast<long>(res.report.residual_history.size()) + 1);
  const std::string rep = slurp("rep.json");
  CHECK(rep.find("\"iterations\"") != std::string::npos);
  CHECK(rep.find("\"flops_model\"") != std::string::npos);
  std::remove("rep.json");
  std::remove("hist.csv");
}
