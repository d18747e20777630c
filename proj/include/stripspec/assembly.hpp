#pragma once

#include <vector>

#include "stripspec/mesh.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

// P1 Galerkin stiffness: A_ij = int grad psi_i . grad psi_j, exact per triangle.
SymSparse assemble_stiffness(const Mesh& m);

// Consistent P1 mass: element matrix area/12 * [[2,1,1],[1,2,1],[1,1,2]].
SymSparse assemble_mass(const Mesh& m);

// Dirichlet elimination. Rows/columns of constrained nodes are removed, not
// penalized; the index map ties free unknowns back to mesh nodes.
struct ReducedSystem {
  SymSparse A;                    // stiffness over free nodes
  SymSparse M;                    // mass over free nodes
  std::vector<int> free_to_node;  // free index -> mesh node
  std::vector<int> node_to_free;  // mesh node -> free index or -1

  int num_free() const { return static_cast<int>(free_to_node.size()); }

  // Restrict a full-mesh matrix or vector to the free nodes.
  SymSparse restrict_matrix(const SymSparse& S) const;
  Vector restrict_vector(const Vector& v) const;
  // Scatter a free-node vector back to mesh nodes, zero on constrained nodes.
  Vector prolong(const Vector& v) const;
};

ReducedSystem apply_dirichlet(const SymSparse& A, const SymSparse& M, const Mesh& m,
                              bool right_end_is_dirichlet);

// Modal boundary block at the truncation line x = at_x:
//   B = sum_{k=2..K} sqrt(k^2-1) pi q_k q_k^T,
//   (q_k)_i = int psi_i(y) sqrt(2) sin(k pi y) dy over the line,
// imposing the decay relation du_k/dx = -sqrt(k^2-1) pi u_k on modes k >= 2.
// Assembled on full mesh numbering; positive semidefinite with rank <= K-1.
SymSparse assemble_dtn_block(const Mesh& m, int K, Real at_x);

// Load vector of the unit mode-1 flux at the truncation line:
// g_i = int psi_i(y) sin(pi y) dy, exact edge-wise; zero off the line.
Vector assemble_mode1_flux(const Mesh& m, Real at_x);

// Relative discretization error of the transverse P1 eigenvalue at J vertical
// intervals, pi^4 / (12 J^2). Used as the tolerance proxy tying a-extraction
// cross-checks to mesh resolution.
inline Real rect_eig_error_proxy(int J) {
  return kPiSq * kPiSq / (12.0 * Real(J) * Real(J));
}

}  // namespace stripspec
