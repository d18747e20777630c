#include "stripspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace stripspec {

Real Mesh::tri_area(int t) const {
  const auto& tr = tris[t];
  const Real ax = x[tr[0]], ay = y[tr[0]];
  return 0.5 * ((x[tr[1]] - ax) * (y[tr[2]] - ay) - (x[tr[2]] - ax) * (y[tr[1]] - ay));
}

Real grade_map(Real t, Real kappa) {
  if (kappa == 0.0 || t == 0.0 || t == 1.0) return t;  // exact endpoints
  return t - kappa * std::sin(2.0 * kPi * t) / (2.0 * kPi);
}

namespace {

void tag_node(std::vector<NodeTag>& tag, int id, NodeTag t) {
  // Dirichlet wins over every other tag.
  if (tag[id] == NodeTag::Dirichlet) return;
  if (t == NodeTag::Dirichlet || tag[id] == NodeTag::Interior) tag[id] = t;
}

}  // namespace

Mesh build_strip_mesh(const Profile& p, Real length, int I_cap, int I_strip, int J,
                      Real grade_kappa) {
  if (!(length > 0)) throw MeshError("build_strip_mesh: length must be positive");
  if (I_cap < 1 || I_strip < 2 || J < 2)
    throw MeshError("build_strip_mesh: need I_cap >= 1, I_strip >= 2, J >= 2");
  if (!(grade_kappa >= 0.0 && grade_kappa < 1.0))
    throw MeshError("build_strip_mesh: grading kappa must lie in [0,1)");

  Mesh m;
  m.I_strip = I_strip;
  m.J = J;
  m.length = length;
  m.grade_kappa = grade_kappa;

  const bool cap = profile_max(p) > 0.0;
  m.I_cap = cap ? I_cap : 0;

  m.ys.resize(J + 1);
  std::vector<Real> phi(J + 1);
  for (int j = 0; j <= J; ++j) {
    m.ys[j] = grade_map(Real(j) / Real(J), grade_kappa);
    phi[j] = eval_profile(p, m.ys[j]);
  }

  // Rectangle block; column i = 0 is the interface line x = 0.
  m.strip_ids.assign((I_strip + 1) * (J + 1), -1);
  for (int i = 0; i <= I_strip; ++i) {
    const Real xi = (Real(i) / Real(I_strip)) * length;
    for (int j = 0; j <= J; ++j) {
      m.strip_ids[i * (J + 1) + j] = static_cast<int>(m.x.size());
      m.x.push_back(xi);
      m.y.push_back(m.ys[j]);
    }
  }

  // Transfinite cap: x = -phi(y_j) * (1 - i/I_cap). Rows with phi(y_j) = 0
  // collapse onto the interface node of that row.
  if (cap) {
    m.cap_ids.assign((I_cap + 1) * (J + 1), -1);
    for (int j = 0; j <= J; ++j) m.cap_ids[I_cap * (J + 1) + j] = m.strip_node(0, j);
    for (int i = 0; i < I_cap; ++i) {
      const Real blend = 1.0 - Real(i) / Real(I_cap);
      for (int j = 0; j <= J; ++j) {
        if (phi[j] > 0.0) {
          m.cap_ids[i * (J + 1) + j] = static_cast<int>(m.x.size());
          m.x.push_back(-phi[j] * blend);
          m.y.push_back(m.ys[j]);
        } else {
          m.cap_ids[i * (J + 1) + j] = m.strip_node(0, j);
        }
      }
    }
  }

  // Triangles: each quad split by the diagonal from its lower-left corner.
  // Cells with a collapsed edge (repeated node) drop the degenerate half.
  auto emit_quad = [&m](int a, int b, int c, int d) {
    // a=(i,j) b=(i+1,j) c=(i+1,j+1) d=(i,j+1)
    if (a != b && b != c && a != c) m.tris.push_back({a, b, c});
    if (a != c && c != d && a != d) m.tris.push_back({a, c, d});
  };
  if (cap)
    for (int i = 0; i < I_cap; ++i)
      for (int j = 0; j < J; ++j)
        emit_quad(m.cap_node(i, j), m.cap_node(i + 1, j), m.cap_node(i + 1, j + 1),
                  m.cap_node(i, j + 1));
  for (int i = 0; i < I_strip; ++i)
    for (int j = 0; j < J; ++j)
      emit_quad(m.strip_node(i, j), m.strip_node(i + 1, j), m.strip_node(i + 1, j + 1),
                m.strip_node(i, j + 1));

  for (int t = 0; t < m.num_tris(); ++t) {
    if (!(m.tri_area(t) > 0.0)) {
      char buf[160];
      const auto& tr = m.tris[t];
      std::snprintf(buf, sizeof buf,
                    "build_strip_mesh: triangle %d (%d,%d,%d) has non-positive area %.3e",
                    t, tr[0], tr[1], tr[2], m.tri_area(t));
      throw MeshError(buf);
    }
  }

  // Tags. Walls y=0 and y=1 and the left arc are Dirichlet everywhere; the
  // interface column is an interior mesh line except where the arc touches it
  // (phi = 0); the right end is tagged for the caller to decide.
  m.tag.assign(m.num_nodes(), NodeTag::Interior);
  for (int n = 0; n < m.num_nodes(); ++n)
    if (m.y[n] == 0.0 || m.y[n] == 1.0) m.tag[n] = NodeTag::Dirichlet;
  for (int j = 0; j <= J; ++j) {
    const int iface = m.strip_node(0, j);
    if (cap) {
      if (phi[j] > 0.0) {
        tag_node(m.tag, m.cap_node(0, j), NodeTag::Dirichlet);
        tag_node(m.tag, iface, NodeTag::Interface);
      } else {
        tag_node(m.tag, iface, NodeTag::Dirichlet);  // arc touches x = 0 here
      }
    } else {
      tag_node(m.tag, iface, NodeTag::Dirichlet);  // left end of the rectangle
    }
    tag_node(m.tag, m.right_node(j), NodeTag::RightEnd);
  }
  return m;
}

MeshQuality mesh_quality(const Mesh& m) {
  MeshQuality q{std::numeric_limits<Real>::infinity(), 0.0, 0.0};
  for (int t = 0; t < m.num_tris(); ++t) {
    const auto& tr = m.tris[t];
    const Real area = m.tri_area(t);
    Real longest = 0;
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      const Real dx = m.x[b] - m.x[a], dy = m.y[b] - m.y[a];
      longest = std::max(longest, std::hypot(dx, dy));
    }
    q.min_area = std::min(q.min_area, area);
    q.h_max = std::max(q.h_max, longest);
    q.max_aspect = std::max(q.max_aspect, longest * longest / (2.0 * area));
  }
  return q;
}

void write_msh_lite(const Mesh& m, std::ostream& os) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %d\n", m.num_nodes(), m.num_tris());
  os << buf;
  for (int n = 0; n < m.num_nodes(); ++n) {
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %d\n", n, m.x[n], m.y[n],
                  static_cast<int>(m.tag[n]));
    os << buf;
  }
  for (int t = 0; t < m.num_tris(); ++t) {
    const auto& tr = m.tris[t];
    std::snprintf(buf, sizeof buf, "%d %d %d %d\n", t, tr[0], tr[1], tr[2]);
    os << buf;
  }
}

}  // namespace stripspec
