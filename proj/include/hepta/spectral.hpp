#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "hepta/matrix.hpp"
#include "hepta/spec.hpp"
#include "hepta/transform.hpp"

namespace hepta {

/// Rational characteristic function of one diagonal-plus-rank-two block:
///   f(t) = 1 + sum_k lw_k / (p_k - t)
///            - sum_{k<l} pw_{k,l} / ((p_k - t)(p_l - t))
/// with lw_k = theta u1_k^2 + 2 vartheta u1_k u2_k and
/// pw_{k,l} = vartheta^2 (u1_k u2_l - u2_k u1_l)^2. Zeros of f are exactly
/// the block eigenvalues away from the poles.
struct SecularFunction {
    std::vector<double> poles;          // block order, unsorted
    std::vector<double> linear_weights; // lw_k, sign-indefinite
    Matrix pair_weights;                // pw, symmetric, zero diagonal, >= 0
    int block_size = 0;
    std::vector<double> u1, u2; // unit coupling pair, kept for the fallback
    CornerGap gap;

    /// Evaluate f with pole differences clamped away from zero at 1e-300.
    double evaluate(double t) const;
};

/// Extreme eigenvalues (alpha_minus <= 0 <= alpha_plus up to rounding) of
/// the rank-two corner perturbation: (theta -+ sqrt(theta^2 + 4 vartheta^2))/2.
std::pair<double, double> rank2_spectrum(const CornerGap& gap);

SecularFunction build_secular(const BlockPair& pair, Parity which);

/// Closed-form bracket for one block eigenvalue: the k-th smallest
/// eigenvalue lies in [sorted pole_k + alpha_minus, sorted pole_k + alpha_plus].
struct Enclosure {
    double lower = 0.0;
    double upper = 0.0;
    double pole_anchor = 0.0;
};

/// Enclosures for a block, ascending by anchor.
std::vector<Enclosure> enclosures(const BlockPair& pair, Parity which);

struct SecularRoot {
    double value = 0.0;
    bool deflated = false;
    double residual = 0.0; // |f(value)|, or the deflation witness weight
};

struct SecularSolve {
    std::vector<SecularRoot> roots; // ascending, exactly block_size entries
    bool fallback_used = false;
};

/// All block eigenvalues. Poles whose combined weight falls below
/// 1e-14 (1 + |theta| + |vartheta|) deflate to exact roots; the rest come
/// from a safeguarded sign-change scan between surviving poles, bisected to
/// width 1e-13 (1 + |t|). If the scan cannot account for every root after
/// doubling its sampling up to 4096 points per interval, the whole block is
/// redone with the dense eigensolver and fallback_used is set.
SecularSolve solve_secular(const SecularFunction& fn,
                           const std::vector<Enclosure>& enc,
                           const CornerGap& gap);

/// Merged spectrum of both blocks with per-eigenvalue provenance.
struct EigenSolution {
    std::vector<double> eigenvalues; // ascending
    std::vector<Parity> parity;      // originating block
    std::vector<Enclosure> enclosures;
    std::vector<bool> deflated;
    std::vector<double> residuals;
    bool fallback_used = false;
};

EigenSolution eigenvalues(const HeptaSpec& spec);

/// The closed-form eigenvector formula assumes a strictly rank-two corner
/// coupling and an eigenvalue clear of every block pole.
struct FormulaInapplicableError : std::domain_error {
    enum class Hypothesis {
        PoleCollision,  // eig within 1e-10 (1 + |pole|) of a block pole
        VarthetaZero,   // coupling degenerates to rank one
        DenominatorSum, // resolvent denominator vanishes
    };
    Hypothesis hypothesis;
    FormulaInapplicableError(Hypothesis h, const std::string& what_arg)
        : std::domain_error(what_arg), hypothesis(h) {}
};

/// Block-coordinate eigenvector embedded in permuted length-n coordinates:
/// the odd block occupies the leading slots, the even block the trailing
/// ones, and the off-block half is exactly zero. Unnormalized.
std::vector<double> eigenvector_embedded(const BlockPair& pair, double eig,
                                         Parity which);

/// Full-coordinate eigenvector S P [embedded block solution]. Unnormalized.
std::vector<double> eigenvector(const HeptaSpec& spec, double eig, Parity which);

} // namespace hepta
