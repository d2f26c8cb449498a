#include "hepta/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hepta/rng.hpp"

namespace hepta::oracle {

namespace {

constexpr double kPivotFloor = 1e-300;

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

DenseSym::DenseSym(const Matrix& m) : n(m.rows()), entries(m.rows(), m.cols()) {
    if (!m.square())
        throw std::invalid_argument("DenseSym: matrix must be square");
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
    if (asym > 1e-12 * (1.0 + max_abs(m)))
        throw std::invalid_argument("DenseSym: matrix is not symmetric");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) entries(i, j) = 0.5 * (m(i, j) + m(j, i));
}

EigenResult jacobi_eigen(const DenseSym& m) {
    const int n = m.n;
    Matrix a = m.entries;
    Matrix v = Matrix::identity(n);
    const double norm = frobenius_norm(a);
    const double target = 1e-12 * norm;

    bool converged = off_diagonal_norm(a) <= target;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= kPivotFloor) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p);
                    const double aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        converged = off_diagonal_norm(a) <= target;
    }
    if (!converged)
        throw ConvergenceError("jacobi_eigen: no convergence within 100 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int i, int j) { return a(i, i) < a(j, j); });

    EigenResult r;
    r.values.resize(n);
    r.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        r.values[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

namespace {

/// Partial-pivot LU in place: a becomes the packed factors, perm the row
/// permutation. Returns the permutation sign, or 0 if a pivot fell below
/// the floor (column index of the failure stored in *fail_col).
int lu_factor(Matrix& a, std::vector<int>& perm, int* fail_col) {
    const int n = a.rows();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::fabs(a(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best <= kPivotFloor) {
            if (fail_col) *fail_col = k;
            return 0;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double lik = a(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    return sign;
}

} // namespace

ScaledFloat lu_det(const Matrix& m) {
    if (!m.square())
        throw std::invalid_argument("lu_det: matrix must be square");
    Matrix a = m;
    std::vector<int> perm;
    const int sign = lu_factor(a, perm, nullptr);
    if (sign == 0) return ScaledFloat(0.0);
    ScaledFloat det(static_cast<double>(sign));
    for (int k = 0; k < a.rows(); ++k) det = det * a(k, k);
    return det;
}

std::vector<double> lu_solve(const Matrix& m, const std::vector<double>& rhs) {
    if (!m.square())
        throw std::invalid_argument("lu_solve: matrix must be square");
    const int n = m.rows();
    if (static_cast<int>(rhs.size()) != n)
        throw DimensionMismatchError("lu_solve: rhs length != n");
    Matrix a = m;
    std::vector<int> perm;
    int fail_col = -1;
    if (lu_factor(a, perm, &fail_col) == 0)
        throw SingularMatrixError("lu_solve: pivot below floor at column " +
                                  std::to_string(fail_col));

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[perm[i]];
    for (int i = 1; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= a(i, j) * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<double> inverse_iteration(const DenseSym& m, double shift) {
    const int n = m.n;
    const double norm = frobenius_norm(m.entries);
    const double tol = 1e-7 * norm;

    Matrix shifted = m.entries;
    for (int i = 0; i < n; ++i) shifted(i, i) -= shift;

    // Deterministic start: same matrix and shift always iterate identically.
    Rng rng(0x5eedull);
    std::vector<double> b(n);
    for (double& bi : b) bi = rng.uniform(-1.0, 1.0);
    const double bnorm = norm2(b);
    for (double& bi : b) bi /= bnorm;

    double jitter = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<double> x;
        for (int attempt = 0; attempt < 12; ++attempt) {
            Matrix sys = shifted;
            if (jitter > 0.0)
                for (int i = 0; i < n; ++i) sys(i, i) += jitter;
            try {
                x = lu_solve(sys, b);
                break;
            } catch (const SingularMatrixError&) {
                jitter = (jitter == 0.0) ? 1e-10 * (norm > 0.0 ? norm : 1.0)
                                         : jitter * 10.0;
            }
        }
        if (x.empty())
            throw ConvergenceError("inverse_iteration: shifted solve stayed singular");

        const double xnorm = norm2(x);
        if (!(xnorm > 0.0) || !std::isfinite(xnorm))
            throw ConvergenceError("inverse_iteration: iterate collapsed");
        for (double& xi : x) xi /= xnorm;

        const std::vector<double> mx = m.entries * x;
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = mx[i] - shift * x[i];
            resid += r * r;
        }
        if (std::sqrt(resid) <= tol) return x;
        b = x;
    }
    throw ConvergenceError("inverse_iteration: no convergence within 50 iterations");
}

} // namespace hepta::oracle
