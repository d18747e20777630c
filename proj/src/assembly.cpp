#include "stripspec/assembly.hpp"

#include <cmath>
#include <vector>

#include "stripspec/quadrature.hpp"

namespace stripspec {

namespace {

using Triplet = Eigen::Triplet<Real>;

// Gradients of the P1 barycentric basis on a triangle; also returns the area.
struct ElementGeometry {
  Real area;
  Real bx[3], by[3];  // grad psi_i = (bx_i, by_i)
};

ElementGeometry element_geometry(const Mesh& m, int t) {
  const auto& tr = m.tris[t];
  const Real x0 = m.x[tr[0]], y0 = m.y[tr[0]];
  const Real x1 = m.x[tr[1]], y1 = m.y[tr[1]];
  const Real x2 = m.x[tr[2]], y2 = m.y[tr[2]];
  const Real det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  if (!(det > 0)) throw NumericError("assembly: degenerate triangle");
  ElementGeometry g;
  g.area = 0.5 * det;
  g.bx[0] = (y1 - y2) / det;
  g.by[0] = (x2 - x1) / det;
  g.bx[1] = (y2 - y0) / det;
  g.by[1] = (x0 - x2) / det;
  g.bx[2] = (y0 - y1) / det;
  g.by[2] = (x1 - x0) / det;
  return g;
}

// Nodes of the right-end mesh line, bottom to top. at_x must be that line.
std::vector<int> right_line_nodes(const Mesh& m, Real at_x) {
  if (std::abs(at_x - m.length) > 1e-12 * std::max<Real>(1.0, m.length))
    throw NumericError("boundary line quadrature: at_x is not the right-end mesh line");
  std::vector<int> line(m.J + 1);
  for (int j = 0; j <= m.J; ++j) line[j] = m.right_node(j);
  return line;
}

}  // namespace

SymSparse assemble_stiffness(const Mesh& m) {
  std::vector<Triplet> trip;
  trip.reserve(9 * m.num_tris());
  for (int t = 0; t < m.num_tris(); ++t) {
    const auto g = element_geometry(m, t);
    const auto& tr = m.tris[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(tr[a], tr[b],
                          g.area * (g.bx[a] * g.bx[b] + g.by[a] * g.by[b]));
  }
  SymSparse A(m.num_nodes(), m.num_nodes());
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

SymSparse assemble_mass(const Mesh& m) {
  std::vector<Triplet> trip;
  trip.reserve(9 * m.num_tris());
  for (int t = 0; t < m.num_tris(); ++t) {
    const auto g = element_geometry(m, t);
    const auto& tr = m.tris[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(tr[a], tr[b], g.area / 12.0 * (a == b ? 2.0 : 1.0));
  }
  SymSparse M(m.num_nodes(), m.num_nodes());
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();
  return M;
}

SymSparse ReducedSystem::restrict_matrix(const SymSparse& S) const {
  std::vector<Triplet> trip;
  trip.reserve(S.nonZeros());
  for (int col = 0; col < S.outerSize(); ++col) {
    const int rc = node_to_free[col];
    if (rc < 0) continue;
    for (SymSparse::InnerIterator it(S, col); it; ++it) {
      const int rr = node_to_free[it.row()];
      if (rr >= 0) trip.emplace_back(rr, rc, it.value());
    }
  }
  SymSparse R(num_free(), num_free());
  R.setFromTriplets(trip.begin(), trip.end());
  R.makeCompressed();
  return R;
}

Vector ReducedSystem::restrict_vector(const Vector& v) const {
  Vector r(num_free());
  for (int i = 0; i < num_free(); ++i) r[i] = v[free_to_node[i]];
  return r;
}

Vector ReducedSystem::prolong(const Vector& v) const {
  Vector full = Vector::Zero(node_to_free.size());
  for (int i = 0; i < num_free(); ++i) full[free_to_node[i]] = v[i];
  return full;
}

ReducedSystem apply_dirichlet(const SymSparse& A, const SymSparse& M, const Mesh& m,
                              bool right_end_is_dirichlet) {
  ReducedSystem rs;
  rs.node_to_free.assign(m.num_nodes(), -1);
  for (int n = 0; n < m.num_nodes(); ++n) {
    const NodeTag t = m.tag[n];
    const bool constrained =
        t == NodeTag::Dirichlet || (right_end_is_dirichlet && t == NodeTag::RightEnd);
    if (!constrained) {
      rs.node_to_free[n] = static_cast<int>(rs.free_to_node.size());
      rs.free_to_node.push_back(n);
    }
  }
  if (rs.free_to_node.empty()) throw NumericError("apply_dirichlet: no free nodes");
  rs.A = rs.restrict_matrix(A);
  rs.M = rs.restrict_matrix(M);
  return rs;
}

SymSparse assemble_dtn_block(const Mesh& m, int K, Real at_x) {
  if (K < 2 || K > m.J - 1)
    throw NumericError("assemble_dtn_block: K must satisfy 2 <= K <= J-1");
  const auto line = right_line_nodes(m, at_x);
  const int n_line = static_cast<int>(line.size());

  std::vector<Triplet> trip;
  std::vector<Real> q(n_line);
  for (int k = 2; k <= K; ++k) {
    const Real w = Real(k) * kPi;
    std::fill(q.begin(), q.end(), 0.0);
    for (int j = 0; j < n_line - 1; ++j) {
      const Real y0 = m.ys[j], y1 = m.ys[j + 1];
      q[j] += std::sqrt(2.0) * int_hat_down_sin(y0, y1, w);
      q[j + 1] += std::sqrt(2.0) * int_hat_up_sin(y0, y1, w);
    }
    const Real rate = std::sqrt(Real(k) * Real(k) - 1.0) * kPi;
    for (int a = 0; a < n_line; ++a)
      for (int b = 0; b < n_line; ++b)
        trip.emplace_back(line[a], line[b], rate * q[a] * q[b]);
  }
  SymSparse B(m.num_nodes(), m.num_nodes());
  B.setFromTriplets(trip.begin(), trip.end());
  B.makeCompressed();
  return B;
}

Vector assemble_mode1_flux(const Mesh& m, Real at_x) {
  const auto line = right_line_nodes(m, at_x);
  Vector g = Vector::Zero(m.num_nodes());
  for (size_t j = 0; j + 1 < line.size(); ++j) {
    const Real y0 = m.ys[j], y1 = m.ys[j + 1];
    g[line[j]] += int_hat_down_sin(y0, y1, kPi);
    g[line[j + 1]] += int_hat_up_sin(y0, y1, kPi);
  }
  return g;
}

}  // namespace stripspec
