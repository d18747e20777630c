#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "stripspec/profile.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

enum class NodeTag : unsigned char { Interior = 0, Dirichlet = 1, RightEnd = 2, Interface = 3 };

struct MeshQuality {
  Real min_area;
  Real max_aspect;  // longest edge / corresponding altitude
  Real h_max;       // longest edge in the mesh
};

// Conforming two-block triangulation of {0 < y < 1, -phi(y) < x < length}:
// a transfinite cap over the curved left end glued to a uniform rectangle
// along the exact mesh line x = 0. Each quad is split by the diagonal from
// its lower-left corner. Immutable after build.
struct Mesh {
  std::vector<Real> x, y;                   // node coordinates
  std::vector<std::array<int, 3>> tris;     // counterclockwise node triples
  std::vector<NodeTag> tag;

  int I_cap = 0;    // horizontal intervals in the cap block (0 when phi == 0)
  int I_strip = 0;  // horizontal intervals in the rectangle block
  int J = 0;        // vertical intervals
  Real length = 0;  // rectangle extent in x
  Real grade_kappa = 0;

  // Structured index tables, (J+1)-major per column. Rows of the cap whose
  // profile value vanishes collapse onto the interface column, so cap_ids may
  // repeat node indices there.
  std::vector<int> cap_ids;    // (I_cap+1) x (J+1); empty when no cap
  std::vector<int> strip_ids;  // (I_strip+1) x (J+1)
  std::vector<Real> ys;        // the J+1 vertical grid lines

  bool has_cap() const { return I_cap > 0; }
  int num_nodes() const { return static_cast<int>(x.size()); }
  int num_tris() const { return static_cast<int>(tris.size()); }
  int strip_node(int i, int j) const { return strip_ids[i * (J + 1) + j]; }
  int cap_node(int i, int j) const { return cap_ids[i * (J + 1) + j]; }
  int interface_node(int j) const { return strip_node(0, j); }
  int right_node(int j) const { return strip_node(I_strip, j); }
  Real strip_x(int i) const { return (Real(i) / Real(I_strip)) * length; }

  Real tri_area(int t) const;
};

// Vertical grid map for the optional boundary grading toward y = 0 and y = 1:
// monotone, fixes 0, 1/2 and 1, compresses spacing near the walls.
Real grade_map(Real t, Real kappa);

// Build the mesh. The cap block is omitted entirely when max phi == 0.
// grade_kappa = 0 gives the uniform vertical grid. Throws MeshError when a
// triangle with non-positive area would be produced.
Mesh build_strip_mesh(const Profile& p, Real length, int I_cap, int I_strip, int J,
                      Real grade_kappa = 0.0);

MeshQuality mesh_quality(const Mesh& m);

// Plain-text dump: "<nodes> <tris>" header, node lines "id x y tag", then
// triangle lines "id n1 n2 n3".
void write_msh_lite(const Mesh& m, std::ostream& os);

}  // namespace stripspec
