#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "hepta/core.hpp"
#include "hepta/rng.hpp"

using namespace hepta;

namespace {

HeptaSpec spec_of(int n, double a, double b, double c, double d, double xi,
                  double eta) {
    return HeptaSpec{n, a, b, c, d, xi, eta};
}

} // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(build_H(spec_of(4, 1, 0, 0, 0, 1, 0)), InvalidSpecError);
    CHECK_THROWS_AS(build_H(spec_of(0, 1, 0, 0, 0, 1, 0)), InvalidSpecError);
    CHECK_THROWS_AS(
        build_H(spec_of(6, std::nan(""), 0, 0, 0, 0, 0)), InvalidSpecError);
    CHECK_THROWS_AS(
        build_H(spec_of(6, 0, 0, HUGE_VAL, 0, 0, 0)), InvalidSpecError);
    CHECK_NOTHROW(build_H(spec_of(5, 0, 0, 0, 0, 0, 0)));
}

TEST_CASE("corner gap is the stated affine combination") {
    const CornerGap g = corner_gap(spec_of(7, 1.5, -2.0, 0.25, 3.0, 4.0, -1.0));
    CHECK(g.theta == (0.25 + 4.0) - 1.5);
    CHECK(g.vartheta == (3.0 + -1.0) - -2.0);
}

TEST_CASE("full matrix: identity and diagonal corner cases") {
    const BandMatrix id = build_H(spec_of(5, 1, 0, 0, 0, 1, 0));
    CHECK(max_abs_diff(id.entries, Matrix::identity(5)) == 0.0);

    const BandMatrix diag = build_H(spec_of(5, 2, 0, 0, 0, 7, 0));
    const double expect[] = {7, 2, 2, 2, 7};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(diag.entries(i, j) == (i == j ? expect[i] : 0.0));
}

TEST_CASE("full matrix: band layout and corners at n=6") {
    const BandMatrix h = build_H(spec_of(6, 1, 2, 3, 4, 5, 6));
    const double row0[] = {5, 6, 3, 4, 0, 0};
    const double row1[] = {6, 1, 2, 3, 4, 0};
    for (int j = 0; j < 6; ++j) {
        CHECK(h.entries(0, j) == row0[j]);
        CHECK(h.entries(1, j) == row1[j]);
    }
    // Mirrored at the far corner.
    for (int j = 0; j < 6; ++j) {
        CHECK(h.entries(5, 5 - j) == row0[j]);
        CHECK(h.entries(4, 5 - j) == row1[j]);
    }
}

TEST_CASE("full matrix is symmetric with half bandwidth three") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniform_int(5, 24);
        const BandMatrix h = build_H(spec_of(n, rng.uniform(-5, 5), rng.uniform(-5, 5),
                                             rng.uniform(-5, 5), rng.uniform(-5, 5),
                                             rng.uniform(-5, 5), rng.uniform(-5, 5)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CHECK(h.entries(i, j) == h.entries(j, i));
                if (std::abs(i - j) > 3) CHECK(h.entries(i, j) == 0.0);
            }
    }
}

TEST_CASE("comparison member replaces corners and ignores xi/eta") {
    const HeptaSpec s = spec_of(5, 1, 2, 3, 4, 99.0, -99.0);
    const BandMatrix hat = build_H_hat(s);
    CHECK(hat.entries(0, 0) == 1.0 - 3.0);
    CHECK(hat.entries(0, 1) == 2.0 - 4.0);
    CHECK(hat.entries(4, 4) == -2.0);
    CHECK(hat.entries(3, 4) == -2.0);
    // Interior untouched.
    CHECK(hat.entries(2, 2) == 1.0);
    CHECK(hat.entries(1, 2) == 2.0);
    CHECK(hat.entries(0, 2) == 3.0);
    CHECK(hat.entries(0, 3) == 4.0);

    // With xi = a-c and eta = b-d the two builders agree entrywise.
    const HeptaSpec matched = spec_of(7, 1, 2, 3, 4, 1.0 - 3.0, 2.0 - 4.0);
    CHECK(max_abs_diff(build_H(matched).entries, build_H_hat(matched).entries) == 0.0);

    const BandMatrix zero = build_H_hat(spec_of(6, 0, 0, 0, 0, 3, 3));
    CHECK(max_abs(zero.entries) == 0.0);
}

TEST_CASE("difference of the two members is confined to six corner entries") {
    const HeptaSpec s = spec_of(8, 1.25, -0.5, 2.0, 0.75, 3.0, -1.5);
    const CornerGap g = corner_gap(s);
    const BandMatrix h = build_H(s);
    const BandMatrix hat = build_H_hat(s);
    const int n = s.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double diff = h.entries(i, j) - hat.entries(i, j);
            const bool theta_slot = (i == j) && (i == 0 || i == n - 1);
            const bool vartheta_slot =
                (std::abs(i - j) == 1) && (i + j == 1 || i + j == 2 * n - 3);
            if (theta_slot)
                CHECK(diff == doctest::Approx(g.theta).epsilon(1e-15));
            else if (vartheta_slot)
                CHECK(diff == doctest::Approx(g.vartheta).epsilon(1e-15));
            else
                CHECK(diff == 0.0);
        }
}

TEST_CASE("expansion coefficients of basis first rows") {
    // First row e1 belongs to the identity: coefficients (1, 0, 0, ...).
    std::vector<double> e1(6, 0.0);
    e1[0] = 1.0;
    const OmegaPoly p1 = omega_coefficients(e1, 6);
    CHECK(p1.coefficients[0] == 1.0);
    for (int k = 1; k < 6; ++k) CHECK(p1.coefficients[k] == 0.0);

    // First row e2 belongs to the companion itself.
    std::vector<double> e2(6, 0.0);
    e2[1] = 1.0;
    const OmegaPoly p2 = omega_coefficients(e2, 6);
    CHECK(p2.coefficients[1] == 1.0);
    for (int k : {0, 2, 3, 4, 5}) CHECK(p2.coefficients[k] == 0.0);
}

TEST_CASE("expansion coefficients of the comparison member's first row") {
    // First row (a-c, b-d, c, d, 0, ...) resolves to
    // (a-2c, b-3d, c, d, 0, ...): the quadratic and cubic companion powers
    // feed back into the lower moments.
    Rng rng(23);
    for (int n : {5, 6, 9, 14}) {
        const double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
        const double c = rng.uniform(-5, 5), d = rng.uniform(-5, 5);
        std::vector<double> row(n, 0.0);
        row[0] = a - c;
        row[1] = b - d;
        row[2] = c;
        row[3] = d;
        const OmegaPoly p = omega_coefficients(row, n);
        CHECK(p.coefficients[0] == doctest::Approx(a - 2 * c).epsilon(1e-14));
        CHECK(p.coefficients[1] == doctest::Approx(b - 3 * d).epsilon(1e-14));
        CHECK(p.coefficients[2] == doctest::Approx(c).epsilon(1e-14));
        CHECK(p.coefficients[3] == doctest::Approx(d).epsilon(1e-14));
        for (int k = 4; k < n; ++k)
            CHECK(p.coefficients[k] == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("reconstruction of basis coefficient vectors") {
    OmegaPoly identity_poly;
    identity_poly.coefficients.assign(6, 0.0);
    identity_poly.coefficients[0] = 1.0;
    CHECK(max_abs_diff(omega_reconstruct(identity_poly, 6), Matrix::identity(6)) == 0.0);

    OmegaPoly companion_poly;
    companion_poly.coefficients.assign(6, 0.0);
    companion_poly.coefficients[1] = 1.0;
    const Matrix c = omega_reconstruct(companion_poly, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(c(i, j) == (std::abs(i - j) == 1 ? 1.0 : 0.0));
}

TEST_CASE("comparison member lives in the companion algebra") {
    Rng rng(31);
    for (int n : {5, 6, 8, 12}) {
        const HeptaSpec s = spec_of(n, rng.uniform(-5, 5), rng.uniform(-5, 5),
                                    rng.uniform(-5, 5), rng.uniform(-5, 5), 0, 0);
        OmegaPoly p;
        p.coefficients.assign(n, 0.0);
        p.coefficients[0] = s.a - 2 * s.c;
        p.coefficients[1] = s.b - 3 * s.d;
        p.coefficients[2] = s.c;
        p.coefficients[3] = s.d;
        const Matrix rebuilt = omega_reconstruct(p, n);
        const BandMatrix hat = build_H_hat(s);
        CHECK(max_abs_diff(rebuilt, hat.entries) <= 1e-13);
    }
}

TEST_CASE("coefficients and reconstruction are mutually inverse on first rows") {
    Rng rng(37);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = rng.uniform_int(5, 16);
        // Banded first rows: the shape every member of the family has.
        std::vector<double> row(n, 0.0);
        for (int k = 0; k < 4; ++k) row[k] = rng.uniform(-4, 4);
        const OmegaPoly p = omega_coefficients(row, n);
        const Matrix rebuilt = omega_reconstruct(p, n);
        for (int j = 0; j < n; ++j)
            CHECK(rebuilt(0, j) == doctest::Approx(row[j]).epsilon(1e-12));
    }
}

TEST_CASE("omega interface rejects bad lengths") {
    CHECK_THROWS_AS(omega_coefficients(std::vector<double>(4, 0.0), 5),
                    DimensionMismatchError);
    CHECK_THROWS_AS(omega_coefficients(std::vector<double>(5, 0.0), 4),
                    InvalidSpecError);
    OmegaPoly p;
    p.coefficients.assign(3, 0.0);
    CHECK_THROWS_AS(omega_reconstruct(p, 5), DimensionMismatchError);
}
