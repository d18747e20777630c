#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "stripspec/mesh.hpp"

using namespace stripspec;

TEST_CASE("unit square counts and tags") {
  const Mesh m = build_strip_mesh(Profile::constant(0.0), 1.0, 1, 2, 2);
  CHECK(m.num_nodes() == 9);
  CHECK(m.num_tris() == 8);
  CHECK_FALSE(m.has_cap());
  int dirichlet = 0, interior = 0;
  for (auto t : m.tag) {
    if (t == NodeTag::Dirichlet) ++dirichlet;
    if (t == NodeTag::Interior) ++interior;
  }
  // right end tagged RightEnd only at the interior of that column (1 node);
  // with a Dirichlet right end the free count drops to the single center node
  CHECK(interior == 1);
  CHECK(dirichlet == 7);
}

TEST_CASE("hat cap: positive areas, dedup, interface column") {
  const Mesh m = build_strip_mesh(Profile::hat(1.0), 4.0, 4, 32, 16);
  const MeshQuality q = mesh_quality(m);
  CHECK(q.min_area > 0.0);
  // rows with phi = 0 collapse: 8 duplicate cap slots
  CHECK(m.num_nodes() == (4 + 32 + 1) * 17 - 8);
  std::set<int> iface;
  for (int j = 0; j <= m.J; ++j) {
    const int n = m.interface_node(j);
    CHECK(m.x[n] == 0.0);
    iface.insert(n);
  }
  CHECK(iface.size() == 17);
}

TEST_CASE("constant profile: leftmost line exactly at -c") {
  const Mesh m = build_strip_mesh(Profile::constant(0.3), 4.0, 4, 16, 8);
  double x_min = 0;
  for (double x : m.x) x_min = std::min(x_min, x);
  CHECK(x_min == -0.3);
  for (int j = 0; j <= m.J; ++j) CHECK(m.x[m.cap_node(0, j)] == -0.3);
}

TEST_CASE("mesh quality on the unit square") {
  const Mesh m = build_strip_mesh(Profile::constant(0.0), 1.0, 1, 2, 2);
  const MeshQuality q = mesh_quality(m);
  CHECK(q.h_max == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  const Mesh m2 = build_strip_mesh(Profile::constant(0.0), 1.0, 1, 4, 4);
  CHECK(mesh_quality(m2).h_max == doctest::Approx(q.h_max / 2.0).epsilon(1e-12));
}

TEST_CASE("refinement nesting is bitwise") {
  const Profile p = Profile::hat(0.7);
  const Mesh coarse = build_strip_mesh(p, 3.0, 3, 12, 6, 0.4);
  const Mesh fine = build_strip_mesh(p, 3.0, 6, 24, 12, 0.4);
  for (int i = 0; i <= coarse.I_strip; ++i)
    for (int j = 0; j <= coarse.J; ++j) {
      const int c = coarse.strip_node(i, j), f = fine.strip_node(2 * i, 2 * j);
      CHECK(coarse.x[c] == fine.x[f]);
      CHECK(coarse.y[c] == fine.y[f]);
    }
  for (int i = 0; i <= coarse.I_cap; ++i)
    for (int j = 0; j <= coarse.J; ++j) {
      const int c = coarse.cap_node(i, j), f = fine.cap_node(2 * i, 2 * j);
      CHECK(coarse.x[c] == fine.x[f]);
      CHECK(coarse.y[c] == fine.y[f]);
    }
}

TEST_CASE("orientation uniformly positive, graded and not") {
  for (double kappa : {0.0, 0.5}) {
    const Mesh m = build_strip_mesh(Profile::pwl({{0.0, 0.2}, {0.4, 0.0}, {1.0, 0.5}}),
                                    2.0, 5, 10, 10, kappa);
    for (int t = 0; t < m.num_tris(); ++t) CHECK(m.tri_area(t) > 0.0);
  }
}

TEST_CASE("interior zero plateau of phi is Dirichlet on the interface") {
  const Mesh m =
      build_strip_mesh(Profile::pwl({{0.0, 0.3}, {0.4, 0.0}, {0.6, 0.0}, {1.0, 0.3}}),
                       2.0, 4, 8, 10);
  for (int j = 0; j <= m.J; ++j) {
    const double y = m.ys[j];
    const int n = m.interface_node(j);
    if (y >= 0.4 && y <= 0.6)
      CHECK(m.tag[n] == NodeTag::Dirichlet);
    else if (y > 0.0 && y < 1.0)
      CHECK(m.tag[n] == NodeTag::Interface);
  }
}

TEST_CASE("msh-lite dump shape") {
  const Mesh m = build_strip_mesh(Profile::constant(0.0), 1.0, 1, 2, 2);
  std::ostringstream os;
  write_msh_lite(m, os);
  std::istringstream in(os.str());
  int nn, nt;
  in >> nn >> nt;
  CHECK(nn == 9);
  CHECK(nt == 8);
  int id;
  double x, y;
  int tag;
  in >> id >> x >> y >> tag;
  CHECK(id == 0);
}

TEST_CASE("build preconditions") {
  CHECK_THROWS_AS(build_strip_mesh(Profile::hat(1.0), -1.0, 2, 4, 4), MeshError);
  CHECK_THROWS_AS(build_strip_mesh(Profile::hat(1.0), 1.0, 0, 4, 4), MeshError);
  CHECK_THROWS_AS(build_strip_mesh(Profile::hat(1.0), 1.0, 2, 1, 4), MeshError);
  CHECK_THROWS_AS(build_strip_mesh(Profile::hat(1.0), 1.0, 2, 4, 1), MeshError);
}
