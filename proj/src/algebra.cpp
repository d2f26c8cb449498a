#include "hepta/algebra.hpp"

#include <cmath>

#include "hepta/scaled.hpp"
#include "hepta/spectral.hpp"

namespace hepta {

namespace {

constexpr double kSingularFloor = 1e-300;

/// Block determinant from poles and coupling weights:
///   prod_k p_k + sum_k lw_k prod_{j != k} p_j
///            - sum_{k<l} pw_{k,l} prod_{j != k,l} p_j.
/// Excluded products come from prefix/suffix partial products, so zero
/// poles need no special casing.
ScaledFloat block_determinant(const SecularFunction& fn) {
    const int m = fn.block_size;
    if (m == 0) return ScaledFloat::one();

    std::vector<ScaledFloat> prefix(m + 1), suffix(m + 1);
    prefix[0] = ScaledFloat::one();
    suffix[m] = ScaledFloat::one();
    for (int k = 0; k < m; ++k) prefix[k + 1] = prefix[k] * fn.poles[k];
    for (int k = m - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * fn.poles[k];

    ScaledFloat total = prefix[m];
    for (int k = 0; k < m; ++k)
        total = total + prefix[k] * suffix[k + 1] * fn.linear_weights[k];
    for (int k = 0; k < m; ++k) {
        ScaledFloat mid = ScaledFloat::one(); // product of poles strictly between k and l
        for (int l = k + 1; l < m; ++l) {
            if (l > k + 1) mid = mid * fn.poles[l - 1];
            const double w = fn.pair_weights(k, l);
            if (w != 0.0)
                total = total - prefix[k] * mid * suffix[l + 1] * w;
        }
    }
    return total;
}

bool representable(const ScaledFloat& s, double d) {
    if (s.is_zero()) return true;
    return std::isfinite(d) && d != 0.0;
}

} // namespace

DetResult determinant(const HeptaSpec& spec) {
    const BlockPair pair = block_diagonalize(spec);
    const ScaledFloat odd = block_determinant(build_secular(pair, Parity::Odd));
    const ScaledFloat even = block_determinant(build_secular(pair, Parity::Even));
    const ScaledFloat prod = odd * even;

    const double odd_d = odd.to_double();
    const double even_d = even.to_double();
    const double prod_d = prod.to_double();

    DetResult det;
    if (representable(odd, odd_d) && representable(even, even_d) &&
        representable(prod, prod_d)) {
        det.odd_factor = odd_d;
        det.even_factor = even_d;
        det.scale_exponent = 0;
        det.value = odd_d * even_d;
    } else {
        det.odd_factor = odd.mantissa();
        det.even_factor = even.mantissa();
        det.scale_exponent = odd.exponent() + even.exponent();
        det.value = prod_d;
    }
    return det;
}

BlockInverse rank2_block_inverse(const std::vector<double>& poles,
                                 const std::vector<double>& u1,
                                 const std::vector<double>& u2,
                                 const CornerGap& gap, Parity which) {
    const int m = static_cast<int>(poles.size());
    if (static_cast<int>(u1.size()) != m || static_cast<int>(u2.size()) != m)
        throw DimensionMismatchError("rank2_block_inverse: coupler length != pole count");

    std::vector<double> inv(m);
    for (int i = 0; i < m; ++i) {
        if (std::fabs(poles[i]) <= kSingularFloor) {
            const int natural = which == Parity::Odd ? 2 * i + 1 : 2 * i + 2;
            throw SingularLambdaError(natural);
        }
        inv[i] = 1.0 / poles[i];
    }

    // a1 = D^-1 u1, a2 = D^-1 u2 and their moments against the couplers.
    std::vector<double> a1(m), a2(m);
    double s11 = 0.0, s12 = 0.0, s22 = 0.0;
    for (int i = 0; i < m; ++i) {
        a1[i] = u1[i] * inv[i];
        a2[i] = u2[i] * inv[i];
        s11 += u1[i] * a1[i];
        s12 += u1[i] * a2[i];
        s22 += u2[i] * a2[i];
    }

    const double theta = gap.theta;
    const double vartheta = gap.vartheta;
    const double vv = vartheta * vartheta;
    const double rho =
        1.0 + theta * s11 + 2.0 * vartheta * s12 + vv * (s12 * s12 - s11 * s22);
    if (std::fabs(rho) <= kSingularFloor) throw SingularStructureError(which);

    const double c_mixed = (vartheta + vv * s12) / rho;
    const double c_11 = (vv * s22 - theta) / rho;
    const double c_22 = vv * s11 / rho;

    BlockInverse result;
    result.rho = rho;
    result.block = Matrix(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double v = -c_mixed * (a2[i] * a1[j] + a1[i] * a2[j]) +
                       c_11 * a1[i] * a1[j] + c_22 * a2[i] * a2[j];
            if (i == j) v += inv[i];
            result.block(i, j) = v;
            result.block(j, i) = v;
        }
    return result;
}

StructuredInverse inverse(const HeptaSpec& spec) {
    const BlockPair pair = block_diagonalize(spec);

    // Scan in natural order so a singular diagonal names the smallest k.
    const int n = pair.n;
    for (int k = 1; k <= n; ++k) {
        const double lambda = (k % 2 == 1) ? pair.odd_poles[(k - 1) / 2]
                                           : pair.even_poles[k / 2 - 1];
        if (std::fabs(lambda) <= kSingularFloor) throw SingularLambdaError(k);
    }

    BlockInverse q =
        rank2_block_inverse(pair.odd_poles, pair.x, pair.y, pair.gap, Parity::Odd);
    BlockInverse r =
        rank2_block_inverse(pair.even_poles, pair.v, pair.w, pair.gap, Parity::Even);

    return StructuredInverse{n,
                             SineTransform(n),
                             ParityPermutation(n),
                             std::move(q.block),
                             std::move(r.block),
                             q.rho,
                             r.rho};
}

std::vector<double> apply_inverse(const StructuredInverse& inv,
                                  const std::vector<double>& rhs) {
    if (static_cast<int>(rhs.size()) != inv.n)
        throw DimensionMismatchError("apply_inverse: rhs length != n");

    const std::vector<double> transformed = apply_S(inv.s, rhs);
    const std::vector<double> gathered = inv.p.gather(transformed);

    const int odd_count = inv.q.rows();
    std::vector<double> odd_part(gathered.begin(), gathered.begin() + odd_count);
    std::vector<double> even_part(gathered.begin() + odd_count, gathered.end());

    const std::vector<double> odd_out = inv.q * odd_part;
    const std::vector<double> even_out = inv.r * even_part;

    std::vector<double> merged(inv.n);
    for (int i = 0; i < odd_count; ++i) merged[i] = odd_out[i];
    for (int i = odd_count; i < inv.n; ++i) merged[i] = even_out[i - odd_count];

    return apply_S(inv.s, inv.p.scatter(merged));
}

} // namespace hepta
