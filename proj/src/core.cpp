#include "hepta/core.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace hepta {

void HeptaSpec::validate() const {
    if (n < 5)
        throw InvalidSpecError("spec: n must be at least 5, got " + std::to_string(n));
    const double scalars[] = {a, b, c, d, xi, eta};
    for (double s : scalars)
        if (!std::isfinite(s))
            throw InvalidSpecError("spec: all scalars must be finite");
}

CornerGap corner_gap(const HeptaSpec& spec) {
    spec.validate();
    return CornerGap{(spec.c + spec.xi) - spec.a, (spec.d + spec.eta) - spec.b};
}

namespace {

BandMatrix build_family(const HeptaSpec& spec, double corner0, double corner1) {
    spec.validate();
    const int n = spec.n;
    BandMatrix h{n, Matrix(n, n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k = std::abs(i - j);
            double v = 0.0;
            if (k == 0) v = spec.a;
            else if (k == 1) v = spec.b;
            else if (k == 2) v = spec.c;
            else if (k == 3) v = spec.d;
            h.entries(i, j) = v;
        }
    }
    h.entries(0, 0) = corner0;
    h.entries(n - 1, n - 1) = corner0;
    h.entries(0, 1) = h.entries(1, 0) = corner1;
    h.entries(n - 2, n - 1) = h.entries(n - 1, n - 2) = corner1;
    return h;
}

} // namespace

BandMatrix build_H(const HeptaSpec& spec) {
    return build_family(spec, spec.xi, spec.eta);
}

BandMatrix build_H_hat(const HeptaSpec& spec) {
    return build_family(spec, spec.a - spec.c, spec.b - spec.d);
}

OmegaPoly omega_coefficients(const std::vector<double>& first_row, int n) {
    if (n < 5)
        throw InvalidSpecError("omega_coefficients: n must be at least 5");
    if (static_cast<int>(first_row.size()) != n)
        throw DimensionMismatchError("omega_coefficients: first_row length != n");

    // Moment table of the unit-band companion: column l holds the first row
    // of C^(l-1). Triangular with unit diagonal, built by the two-term
    // recurrence u[k][l] = u[k-1][l-1] + u[k+1][l-1] seeded by u[0][0] = 1
    // one row above the working range.
    Matrix u(n + 2, n + 1); // 1-based [k][l]; row 0 is the seed row
    u(0, 0) = 1.0;
    for (int l = 1; l <= n; ++l) {
        for (int k = 1; k <= l; ++k) {
            const double up_left = (k - 1 == 0)
                                       ? (l - 1 == 0 ? 1.0 : 0.0)
                                       : u(k - 1, l - 1);
            u(k, l) = up_left + u(k + 1, l - 1);
        }
    }

    OmegaPoly poly;
    poly.coefficients.assign(n, 0.0);
    // Unit diagonal, so plain back substitution: coefficient k matches C^k
    // and sits at first_row position k once higher moments are removed.
    for (int k = n; k >= 1; --k) {
        double s = first_row[k - 1];
        for (int l = k + 1; l <= n; ++l) s -= u(k, l) * poly.coefficients[l - 1];
        poly.coefficients[k - 1] = s;
    }
    return poly;
}

Matrix omega_reconstruct(const OmegaPoly& poly, int n) {
    if (n < 5)
        throw InvalidSpecError("omega_reconstruct: n must be at least 5");
    if (static_cast<int>(poly.coefficients.size()) != n)
        throw DimensionMismatchError("omega_reconstruct: coefficient count != n");

    Matrix result(n, n);
    Matrix power = Matrix::identity(n);
    for (int k = 0; k < n; ++k) {
        if (k > 0) {
            // power <- C * power: row i of the product is row i-1 plus row
            // i+1 of the previous power.
            Matrix next(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    if (i > 0) s += power(i - 1, j);
                    if (i + 1 < n) s += power(i + 1, j);
                    next(i, j) = s;
                }
            power = next;
        }
        const double w = poly.coefficients[k];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) result(i, j) += w * power(i, j);
    }
    return result;
}

} // namespace hepta
