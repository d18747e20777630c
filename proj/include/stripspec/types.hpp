#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <numbers>
#include <stdexcept>
#include <string>

namespace stripspec {

using Real = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Symmetric sparse matrix in compressed storage. Stiffness, mass and boundary
// blocks are all built through this alias; symmetry is a structural invariant
// of the assemblers and can be checked with is_symmetric().
using SymSparse = Eigen::SparseMatrix<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kPiSq = kPi * kPi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Assembly failures, factorization breakdowns, non-convergence.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stripspec
