#include "stripspec/sparse_solve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace stripspec {

namespace {

using Ldlt = Eigen::SimplicialLDLT<SymSparse>;
using Splu = Eigen::SparseLU<SymSparse, Eigen::COLAMDOrdering<int>>;

bool probe_ok(const Factorization& F, const SymSparse& S) {
  // Validate the factors on S x = S * 1: unpivoted LDL^T can go unstable on
  // indefinite input without reporting failure.
  const Vector ones = Vector::Ones(S.rows());
  const Vector b = S * ones;
  const Vector x = F.solve(b);
  if (!x.allFinite()) return false;
  const Real scale = b.norm();
  if (scale == 0) return true;
  return (S * x - b).norm() <= 1e-8 * scale;
}

}  // namespace

Real symmetry_gap(const SymSparse& S) {
  SymSparse D = SymSparse(S.transpose()) - S;
  Real g = 0;
  for (int c = 0; c < D.outerSize(); ++c)
    for (SymSparse::InnerIterator it(D, c); it; ++it)
      g = std::max(g, std::abs(it.value()));
  return g;
}

Factorization::Factorization(const SymSparse& S) : n_(S.rows()) {
  if (S.rows() != S.cols()) throw NumericError("factorize: matrix not square");
  auto ldlt = std::make_shared<Ldlt>();
  ldlt->compute(S);
  if (ldlt->info() == Eigen::Success) {
    ldlt_ = ldlt;
    if (probe_ok(*this, S)) return;
    ldlt_.reset();
  }
  auto lu = std::make_shared<Splu>();
  lu->isSymmetric(true);
  lu->compute(S);
  if (lu->info() != Eigen::Success)
    throw NumericError("factorize: matrix is singular to working precision");
  lu_ = lu;
  if (!probe_ok(*this, S))
    throw NumericError("factorize: factorization unstable (probe residual too large)");
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != n_) throw NumericError("solve: dimension mismatch");
  if (!b.allFinite()) throw NumericError("solve: right-hand side has NaN/Inf");
  if (ldlt_) return static_cast<const Ldlt*>(ldlt_.get())->solve(b);
  return static_cast<const Splu*>(lu_.get())->solve(b);
}

std::pair<int, int> Factorization::pivot_signs() const {
  if (!ldlt_) return {-1, -1};
  const auto& d = static_cast<const Ldlt*>(ldlt_.get())->vectorD();
  int pos = 0, neg = 0;
  for (Index i = 0; i < d.size(); ++i) (d[i] > 0 ? pos : neg)++;
  return {pos, neg};
}

Factorization factorize(const SymSparse& S) { return Factorization(S); }

Vector solve(const Factorization& F, const Vector& b) { return F.solve(b); }

std::vector<EigenPair> smallest_eigenpairs(const SymSparse& A, const SymSparse& M,
                                           int count, Real shift, Real tol,
                                           int max_iter) {
  const Index n = A.rows();
  if (count < 1) throw NumericError("smallest_eigenpairs: count must be >= 1");
  const int want = static_cast<int>(std::min<Index>(count, n));

  const SymSparse K = A - shift * M;
  Factorization F(K);  // fails if the shift hits an eigenvalue

  const int jmax =
      static_cast<int>(std::min<Index>(n, std::max(max_iter, count + 1)));

  // Lanczos on Op = K^{-1} M in the M-inner product.
  std::vector<Vector> q;   // M-orthonormal basis
  std::vector<Vector> mq;  // M * q, cached
  std::vector<Real> alpha, beta;

  // Fixed ramp start vector: deterministic and not M-orthogonal to the even
  // modes (the all-ones vector is, on x-symmetric domains).
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + Real(i) / Real(n);
  Vector Mv = M * v;
  Real nrm = std::sqrt(v.dot(Mv));
  q.push_back(v / nrm);
  mq.push_back(Mv / nrm);

  Real best_residual = std::numeric_limits<Real>::infinity();
  std::vector<EigenPair> out;

  for (int j = 0; j < jmax; ++j) {
    Vector w = F.solve(mq[j]);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      for (size_t i = 0; i < q.size(); ++i) {
        const Real c = w.dot(mq[i]);
        if (pass == 0 && static_cast<int>(i) == j) alpha.push_back(c);
        w -= c * q[i];
      }
    Vector Mw = M * w;
    const Real b_next = std::sqrt(std::max<Real>(0, w.dot(Mw)));

    // Ritz extraction from the tridiagonal section.
    const int dim = j + 1;
    const bool can_check = dim >= want;
    const bool breakdown = !(b_next > 1e-13);
    if (can_check || breakdown || dim == jmax) {
      Matrix T = Matrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) T(i, i) = alpha[i];
      for (int i = 0; i + 1 < dim; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
      Eigen::SelfAdjointEigenSolver<Matrix> es(T);
      // Largest theta <-> smallest mu = shift + 1/theta.
      std::vector<int> order(dim);
      for (int i = 0; i < dim; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()[a] > es.eigenvalues()[b];
      });

      std::vector<EigenPair> ritz;
      Real worst = 0;
      for (int r = 0; r < want && r < dim; ++r) {
        const Real theta = es.eigenvalues()[order[r]];
        if (!(theta > 0)) {
          worst = std::numeric_limits<Real>::infinity();
          break;
        }
        EigenPair pair;
        pair.mu = shift + 1.0 / theta;
        pair.v = Vector::Zero(n);
        for (int i = 0; i < dim; ++i) pair.v += es.eigenvectors()(i, order[r]) * q[i];
        const Real vn = std::sqrt(pair.v.dot(M * pair.v));
        pair.v /= vn;
        pair.residual = (A * pair.v - pair.mu * (M * pair.v)).norm();
        worst = std::max(worst, pair.residual);
        ritz.push_back(std::move(pair));
      }
      if (static_cast<int>(ritz.size()) == want && worst <= tol) {
        out = std::move(ritz);
        break;
      }
      best_residual = std::min(best_residual, worst);
      if (breakdown || dim == jmax) {
        if (static_cast<int>(ritz.size()) == want && breakdown) {
          // Exact invariant subspace: residuals are as good as they get.
          out = std::move(ritz);
          break;
        }
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "smallest_eigenpairs: no convergence in %d iterations "
                      "(best residual %.3e, tol %.3e)",
                      dim, best_residual, tol);
        throw NumericError(buf);
      }
    }
    beta.push_back(b_next);
    q.push_back(w / b_next);
    mq.push_back(Mw / b_next);
  }

  // One explicit M-Gram-Schmidt pass over the returned pairs.
  for (size_t i = 0; i < out.size(); ++i) {
    Vector& vi = out[i].v;
    for (size_t k = 0; k < i; ++k) vi -= (vi.dot(M * out[k].v)) * out[k].v;
    vi /= std::sqrt(vi.dot(M * vi));
  }
  std::sort(out.begin(), out.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.mu < b.mu; });
  return out;
}

}  // namespace stripspec
