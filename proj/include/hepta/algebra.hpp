#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hepta/matrix.hpp"
#include "hepta/spec.hpp"
#include "hepta/transform.hpp"

namespace hepta {

/// det(H) as the product of the two block determinants. When both factors
/// and their product are representable doubles, scale_exponent is 0 and
/// value = odd_factor * even_factor to within a unit of rounding. Otherwise
/// the factors are mantissas in +-[0.5, 1), scale_exponent carries the
/// combined binary exponent, and value saturates to 0 or +-inf.
struct DetResult {
    double value = 0.0;
    double odd_factor = 0.0;
    double even_factor = 0.0;
    long scale_exponent = 0;
};

DetResult determinant(const HeptaSpec& spec);

/// Some interior eigenvalue lambda_k vanishes, so the diagonal factor of
/// that block is singular. k is the 1-based natural index.
struct SingularLambdaError : std::domain_error {
    int k;
    explicit SingularLambdaError(int k_arg)
        : std::domain_error("inverse: interior eigenvalue lambda_" +
                            std::to_string(k_arg) + " vanishes"),
          k(k_arg) {}
};

/// The corner coupling factor rho (odd block) or varrho (even block)
/// vanishes even though every lambda_k is nonzero.
struct SingularStructureError : std::domain_error {
    Parity block;
    explicit SingularStructureError(Parity block_arg)
        : std::domain_error(block_arg == Parity::Odd
                                ? "inverse: odd-block coupling factor rho vanishes"
                                : "inverse: even-block coupling factor varrho vanishes"),
          block(block_arg) {}
};

/// Inverse in factored form: H^-1 = S P blkdiag(Q, R) P^T S. Q and R are
/// dense block inverses; applying the inverse never densifies H^-1 itself.
struct StructuredInverse {
    int n = 0;
    SineTransform s;
    ParityPermutation p;
    Matrix q; // odd-block inverse
    Matrix r; // even-block inverse
    double rho = 0.0;    // odd-block coupling determinant factor
    double varrho = 0.0; // even-block coupling determinant factor
};

StructuredInverse inverse(const HeptaSpec& spec);

std::vector<double> apply_inverse(const StructuredInverse& inv,
                                  const std::vector<double>& rhs);

/// Inverse of diag(poles) + theta u1 u1^T + vartheta (u1 u2^T + u2 u1^T)
/// by the rank-two correction of the diagonal inverse, plus the coupling
/// factor rho it divides by. Zero poles and a vanishing factor raise the
/// typed errors above; `which` names the block for diagnostics, with pole
/// index i reported as natural index 2i+1 (odd block) or 2i+2 (even).
struct BlockInverse {
    Matrix block;
    double rho = 0.0;
};

BlockInverse rank2_block_inverse(const std::vector<double>& poles,
                                 const std::vector<double>& u1,
                                 const std::vector<double>& u2,
                                 const CornerGap& gap, Parity which);

} // namespace hepta
