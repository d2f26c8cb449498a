#pragma once

#include <vector>

#include "hepta/matrix.hpp"
#include "hepta/spec.hpp"

namespace hepta {

/// sin(k*pi/(n+1)) with the integer argument reduced modulo 2(n+1) and
/// folded into [0, pi/2] before evaluation. Multiples of n+1 come out as
/// exact zeros, and every caller that needs the same sample gets the same
/// bits, which keeps the sine-table, transform, and weight computations
/// mutually consistent.
double reduced_sine(long long k, int n);

/// cos(k*pi/(n+1)) with the same integer reduction; odd multiples of the
/// quarter period come out as exact zeros.
double reduced_cosine(long long k, int n);

/// Symmetric involutory sine transform: entries sqrt(2/(n+1)) *
/// sin(k*l*pi/(n+1)) for 1-based k, l.
class SineTransform {
public:
    explicit SineTransform(int n);
    int n() const { return n_; }
    const Matrix& entries() const { return entries_; }

private:
    int n_;
    Matrix entries_;
};

std::vector<double> apply_S(const SineTransform& s, const std::vector<double>& v);

/// Permutation that gathers odd-indexed coordinates (1-based) ahead of
/// even-indexed ones. forward()[l] is the 0-based row carrying the one in
/// column l, i.e. gathering picks source index forward()[l] for slot l.
class ParityPermutation {
public:
    explicit ParityPermutation(int n);
    int n() const { return n_; }
    const std::vector<int>& forward() const { return forward_; }

    /// P^T z: permuted[l] = z[forward[l]].
    std::vector<double> gather(const std::vector<double>& z) const;

    /// P u: inverse of gather.
    std::vector<double> scatter(const std::vector<double>& u) const;

private:
    int n_;
    std::vector<int> forward_;
};

/// values[k-1] = sin(k*pi/(n+1)) for k = 1..2n.
struct SineSamples {
    std::vector<double> values;
};

SineSamples sine_samples(int n);

enum class Parity { Odd, Even };

/// Interior spectrum: lambda_k = a + 2b cos(k pi/(n+1)) + 2c cos(2k pi/(n+1))
/// + 2d cos(3k pi/(n+1)), k = 1..n, in natural (unsorted) order.
std::vector<double> lambda_spectrum(const HeptaSpec& spec);

/// Data of the 2x2-block split H = S P blkdiag(Phi, Psi) P^T S: the two
/// pole lists (odd- and even-indexed lambdas) and the unit coupling vector
/// pair for each block. Phi = diag(odd_poles) + theta x x^T + vartheta
/// (x y^T + y x^T), and Psi likewise with v, w.
struct BlockPair {
    int n = 0;
    std::vector<double> odd_poles;
    std::vector<double> even_poles;
    std::vector<double> x, y; // odd-block couplers, unit norm, x^T y = 0
    std::vector<double> v, w; // even-block couplers, unit norm, v^T w = 0
    CornerGap gap;
    Parity n_parity = Parity::Odd; // parity of the dimension n
};

BlockPair block_diagonalize(const HeptaSpec& spec);

/// Rebuild the full matrix S P blkdiag(Phi, Psi) P^T S from a block pair.
Matrix assemble_from_blocks(const BlockPair& pair, const SineTransform& s,
                            const ParityPermutation& p);

/// Dense odd/even diagonal-plus-rank-two block of a pair.
Matrix materialize_block(const BlockPair& pair, Parity which);

} // namespace hepta
