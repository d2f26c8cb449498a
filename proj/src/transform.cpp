#include "hepta/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hepta {

double reduced_sine(long long k, int n) {
    const long long period = 2LL * (n + 1);
    long long m = k % period;
    if (m < 0) m += period;
    double sign = 1.0;
    if (m > n + 1) { // sin(2 pi - t) = -sin(t)
        m = period - m;
        sign = -1.0;
    }
    if (2 * m > n + 1) m = (n + 1) - m; // sin(pi - t) = sin(t)
    if (m == 0) return 0.0;
    return sign * std::sin(std::numbers::pi * static_cast<double>(m) / (n + 1));
}

double reduced_cosine(long long k, int n) {
    const long long period = 2LL * (n + 1);
    long long m = k % period;
    if (m < 0) m += period;
    if (m > n + 1) m = period - m; // cos(2 pi - t) = cos(t)
    double sign = 1.0;
    if (2 * m > n + 1) { // cos(pi - t) = -cos(t)
        m = (n + 1) - m;
        sign = -1.0;
    }
    if (2 * m == n + 1) return 0.0; // exact quarter period
    return sign * std::cos(std::numbers::pi * static_cast<double>(m) / (n + 1));
}

SineTransform::SineTransform(int n) : n_(n), entries_(n > 0 ? n : 0, n > 0 ? n : 0) {
    if (n < 1)
        throw InvalidSpecError("SineTransform: n must be positive");
    const double scale = std::sqrt(2.0 / (n + 1));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v =
                scale * reduced_sine(static_cast<long long>(i + 1) * (j + 1), n);
            entries_(i, j) = v;
            entries_(j, i) = v;
        }
}

std::vector<double> apply_S(const SineTransform& s, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != s.n())
        throw DimensionMismatchError("apply_S: vector length != n");
    return s.entries() * v;
}

ParityPermutation::ParityPermutation(int n) : n_(n), forward_(n > 0 ? n : 0) {
    if (n < 1)
        throw InvalidSpecError("ParityPermutation: n must be positive");
    // 1-based rule: slot l draws source 2l-1 while that stays within range,
    // then wraps onto the even-indexed coordinates.
    const int odd_count = (n + 1) / 2;
    for (int l = 1; l <= n; ++l) {
        const int src = (l <= odd_count) ? 2 * l - 1 : 2 * (l - odd_count);
        forward_[l - 1] = src - 1;
    }
}

std::vector<double> ParityPermutation::gather(const std::vector<double>& z) const {
    if (static_cast<int>(z.size()) != n_)
        throw DimensionMismatchError("ParityPermutation::gather: length != n");
    std::vector<double> out(n_);
    for (int l = 0; l < n_; ++l) out[l] = z[forward_[l]];
    return out;
}

std::vector<double> ParityPermutation::scatter(const std::vector<double>& u) const {
    if (static_cast<int>(u.size()) != n_)
        throw DimensionMismatchError("ParityPermutation::scatter: length != n");
    std::vector<double> out(n_);
    for (int l = 0; l < n_; ++l) out[forward_[l]] = u[l];
    return out;
}

SineSamples sine_samples(int n) {
    if (n < 1)
        throw InvalidSpecError("sine_samples: n must be positive");
    SineSamples s;
    s.values.resize(2 * static_cast<std::size_t>(n));
    for (int k = 1; k <= 2 * n; ++k) s.values[k - 1] = reduced_sine(k, n);
    return s;
}

std::vector<double> lambda_spectrum(const HeptaSpec& spec) {
    spec.validate();
    const int n = spec.n;
    std::vector<double> lambda(n);
    for (int k = 1; k <= n; ++k)
        lambda[k - 1] = spec.a + 2.0 * spec.b * reduced_cosine(k, n) +
                        2.0 * spec.c * reduced_cosine(2LL * k, n) +
                        2.0 * spec.d * reduced_cosine(3LL * k, n);
    return lambda;
}

BlockPair block_diagonalize(const HeptaSpec& spec) {
    BlockPair pair;
    pair.gap = corner_gap(spec);
    pair.n = spec.n;
    pair.n_parity = (spec.n % 2 == 0) ? Parity::Even : Parity::Odd;

    const int n = spec.n;
    const std::vector<double> lambda = lambda_spectrum(spec);
    const int odd_count = (n + 1) / 2;
    const int even_count = n / 2;

    pair.odd_poles.resize(odd_count);
    pair.even_poles.resize(even_count);
    for (int j = 0; j < odd_count; ++j) pair.odd_poles[j] = lambda[2 * j];
    for (int j = 0; j < even_count; ++j) pair.even_poles[j] = lambda[2 * j + 1];

    const double scale = 2.0 / std::sqrt(n + 1.0);
    pair.x.resize(odd_count);
    pair.y.resize(odd_count);
    for (int j = 1; j <= odd_count; ++j) {
        pair.x[j - 1] = scale * reduced_sine(2LL * j - 1, n);
        pair.y[j - 1] = scale * reduced_sine(4LL * j - 2, n);
    }
    pair.v.resize(even_count);
    pair.w.resize(even_count);
    for (int j = 1; j <= even_count; ++j) {
        pair.v[j - 1] = scale * reduced_sine(2LL * j, n);
        pair.w[j - 1] = scale * reduced_sine(4LL * j, n);
    }
    return pair;
}

Matrix materialize_block(const BlockPair& pair, Parity which) {
    const bool odd = which == Parity::Odd;
    const std::vector<double>& poles = odd ? pair.odd_poles : pair.even_poles;
    const std::vector<double>& u1 = odd ? pair.x : pair.v;
    const std::vector<double>& u2 = odd ? pair.y : pair.w;
    const int m = static_cast<int>(poles.size());
    Matrix block(m, m);
    const double theta = pair.gap.theta;
    const double vartheta = pair.gap.vartheta;
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double v = theta * u1[i] * u1[j] +
                       vartheta * (u1[i] * u2[j] + u2[i] * u1[j]);
            if (i == j) v += poles[i];
            block(i, j) = v;
            block(j, i) = v;
        }
    }
    return block;
}

Matrix assemble_from_blocks(const BlockPair& pair, const SineTransform& s,
                            const ParityPermutation& p) {
    const int n = pair.n;
    if (s.n() != n || p.n() != n)
        throw DimensionMismatchError("assemble_from_blocks: operator sizes differ");

    const Matrix phi = materialize_block(pair, Parity::Odd);
    const Matrix psi = materialize_block(pair, Parity::Even);
    const int odd_count = phi.rows();

    // P blkdiag(Phi, Psi) P^T scatters block entry (i, j) to full-matrix
    // position (forward[i], forward[j]).
    Matrix permuted(n, n);
    const std::vector<int>& f = p.forward();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool i_odd = i < odd_count;
            const bool j_odd = j < odd_count;
            if (i_odd != j_odd) continue;
            const double v = i_odd ? phi(i, j) : psi(i - odd_count, j - odd_count);
            permuted(f[i], f[j]) = v;
        }

    return s.entries() * permuted * s.entries();
}

} // namespace hepta
