#pragma once

#include <memory>
#include <vector>

#include "stripspec/types.hpp"

namespace stripspec {

// Direct factorization of a symmetric sparse matrix. LDL^T with fill-reducing
// ordering is attempted first; symmetric-indefinite systems that defeat the
// unpivoted LDL^T (zero or unstable pivots) fall back to sparse LU with
// partial pivoting. A probe solve validates the factors before use.
class Factorization {
 public:
  explicit Factorization(const SymSparse& S);

  Vector solve(const Vector& b) const;
  Index dim() const { return n_; }
  bool used_ldlt() const { return ldlt_ != nullptr; }
  // Signs of the LDL^T diagonal; {positive, negative} counts. Only meaningful
  // when used_ldlt().
  std::pair<int, int> pivot_signs() const;

 private:
  Index n_ = 0;
  std::shared_ptr<void> ldlt_;  // SimplicialLDLT
  std::shared_ptr<void> lu_;    // SparseLU
};

Factorization factorize(const SymSparse& S);
Vector solve(const Factorization& F, const Vector& b);

struct EigenPair {
  Real mu;        // generalized eigenvalue of A v = mu M v
  Vector v;       // M-normalized field over the free nodes
  Real residual;  // ||A v - mu M v||_2 / ||v||_M
};

// Lowest eigenpairs of A v = mu M v via shift-invert Lanczos with full
// reorthogonalization in the M-inner product. Deterministic: the start vector
// is a fixed ramp (1 + i/n), which overlaps every low mode even on symmetric
// domains where the all-ones vector is M-orthogonal to the even ones.
// Requires shift strictly below the smallest eigenvalue so that A - shift*M
// is positive definite. Returned pairs are M-orthonormal, sorted ascending.
// Throws NumericError on factorization failure or non-convergence.
std::vector<EigenPair> smallest_eigenpairs(const SymSparse& A, const SymSparse& M,
                                           int count, Real shift, Real tol,
                                           int max_iter);

// max |S - S^T| over entries; 0 for structurally symmetric assembly output.
Real symmetry_gap(const SymSparse& S);

}  // namespace stripspec
