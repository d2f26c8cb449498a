#pragma once

#include <vector>

#include "hepta/matrix.hpp"
#include "hepta/spec.hpp"

namespace hepta {

/// Symmetric banded matrix held dense: assembled by the builders below, so
/// symmetry and the half-bandwidth-3 profile hold by construction.
struct BandMatrix {
    int n = 0;
    Matrix entries;
};

/// Full matrix of the family: Toeplitz heptadiagonal interior, xi/eta corners.
BandMatrix build_H(const HeptaSpec& spec);

/// The exactly-diagonalizable comparison member: same interior, corners
/// replaced by a-c and b-d. Ignores spec.xi and spec.eta.
BandMatrix build_H_hat(const HeptaSpec& spec);

/// Coefficients omega_1..omega_n of an expansion A = sum_k omega_{k+1} C^k
/// in powers of the unit-band companion C (ones on the first sub- and
/// superdiagonal). Determined by the first row of A alone.
struct OmegaPoly {
    std::vector<double> coefficients; // coefficients[k] multiplies C^k
};

/// Solve the triangular moment system mapping a first row to expansion
/// coefficients. first_row must have length n, n >= 5.
OmegaPoly omega_coefficients(const std::vector<double>& first_row, int n);

/// Evaluate sum_k coefficients[k] * C^k as a dense n x n matrix.
Matrix omega_reconstruct(const OmegaPoly& poly, int n);

} // namespace hepta
