#pragma once

#include <stdexcept>
#include <vector>

#include "hepta/matrix.hpp"
#include "hepta/scaled.hpp"

namespace hepta::oracle {

/// Brute-force dense reference routines. Everything here works from plain
/// dense arrays and textbook algorithms so results are independent of the
/// structured closed-form paths they are used to check.

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense symmetric matrix. Ingestion checks symmetry to 1e-12 (relative to
/// the largest entry) and stores the symmetrized average.
struct DenseSym {
    explicit DenseSym(const Matrix& m);
    int n = 0;
    Matrix entries;
};

struct EigenResult {
    std::vector<double> values; // ascending
    Matrix vectors;             // column k pairs with values[k]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass falls
/// below 1e-12 of the matrix norm; hard cap of 100 sweeps.
EigenResult jacobi_eigen(const DenseSym& m);

/// Determinant via partial-pivot LU, returned mantissa/exponent scaled.
/// A vanishing pivot short-circuits to an exact zero.
ScaledFloat lu_det(const Matrix& m);

/// Solve m x = rhs via partial-pivot LU. Pivot magnitude below 1e-300
/// raises SingularMatrixError.
std::vector<double> lu_solve(const Matrix& m, const std::vector<double>& rhs);

/// Unit eigenvector for the eigenvalue nearest shift, by shifted inverse
/// iteration with a deterministic start vector. Adds a tiny diagonal
/// jitter when the shifted system is numerically singular. Converges when
/// ||m x - shift x|| <= 1e-7 ||m||_F; at most 50 iterations.
std::vector<double> inverse_iteration(const DenseSym& m, double shift);

} // namespace hepta::oracle
