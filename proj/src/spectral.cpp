#include "hepta/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "hepta/oracle.hpp"

namespace hepta {

namespace {

constexpr double kGapClamp = 1e-300;

double clamped_inverse_gap(double pole, double t) {
    double d = pole - t;
    if (std::fabs(d) < kGapClamp) d = (d < 0.0) ? -kGapClamp : kGapClamp;
    return 1.0 / d;
}

double abs_or_inf(double x) {
    const double a = std::fabs(x);
    return std::isnan(a) ? HUGE_VAL : a;
}

} // namespace

double SecularFunction::evaluate(double t) const {
    const int m = block_size;
    std::vector<double> inv(m);
    for (int k = 0; k < m; ++k) inv[k] = clamped_inverse_gap(poles[k], t);
    double s = 1.0;
    for (int k = 0; k < m; ++k) s += linear_weights[k] * inv[k];
    for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l)
            s -= pair_weights(k, l) * inv[k] * inv[l];
    return s;
}

std::pair<double, double> rank2_spectrum(const CornerGap& gap) {
    const double disc =
        std::sqrt(gap.theta * gap.theta + 4.0 * gap.vartheta * gap.vartheta);
    return {0.5 * (gap.theta - disc), 0.5 * (gap.theta + disc)};
}

SecularFunction build_secular(const BlockPair& pair, Parity which) {
    const bool odd = which == Parity::Odd;
    SecularFunction fn;
    fn.poles = odd ? pair.odd_poles : pair.even_poles;
    fn.u1 = odd ? pair.x : pair.v;
    fn.u2 = odd ? pair.y : pair.w;
    fn.gap = pair.gap;
    fn.block_size = static_cast<int>(fn.poles.size());

    const double theta = pair.gap.theta;
    const double vartheta = pair.gap.vartheta;
    const int m = fn.block_size;
    fn.linear_weights.resize(m);
    for (int k = 0; k < m; ++k)
        fn.linear_weights[k] =
            theta * fn.u1[k] * fn.u1[k] + 2.0 * vartheta * fn.u1[k] * fn.u2[k];
    fn.pair_weights = Matrix(m, m);
    const double vv = vartheta * vartheta;
    for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
            const double cross = fn.u1[k] * fn.u2[l] - fn.u2[k] * fn.u1[l];
            const double w = vv * cross * cross;
            fn.pair_weights(k, l) = w;
            fn.pair_weights(l, k) = w;
        }
    return fn;
}

std::vector<Enclosure> enclosures(const BlockPair& pair, Parity which) {
    const std::vector<double>& raw =
        which == Parity::Odd ? pair.odd_poles : pair.even_poles;
    std::vector<double> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    const auto [alpha_minus, alpha_plus] = rank2_spectrum(pair.gap);
    std::vector<Enclosure> enc(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k)
        enc[k] = Enclosure{sorted[k] + alpha_minus, sorted[k] + alpha_plus, sorted[k]};
    return enc;
}

namespace {

double bisect_root(const SecularFunction& fn, double a, double b, double fa) {
    for (int iter = 0; iter < 200; ++iter) {
        if (b - a <= 1e-13 * (1.0 + 0.5 * (std::fabs(a) + std::fabs(b)))) break;
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break; // interval exhausted in this precision
        const double fm = fn.evaluate(mid);
        if (fm == 0.0) return mid;
        if (std::isnan(fm)) break;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

void scan_interval(const SecularFunction& fn, double lo, double hi, int panels,
                   std::vector<double>& out) {
    // Keep samples clear of the bounding poles; anything hiding closer than
    // the margin is the fallback's problem.
    const double a = lo + 1e-12 * (1.0 + std::fabs(lo));
    const double b = hi - 1e-12 * (1.0 + std::fabs(hi));
    if (!(a < b)) return;
    double prev_t = a;
    double prev_f = fn.evaluate(a);
    if (prev_f == 0.0) out.push_back(a);
    for (int i = 1; i <= panels; ++i) {
        const double t = a + (b - a) * (static_cast<double>(i) / panels);
        const double f = fn.evaluate(t);
        if (f == 0.0) {
            out.push_back(t);
        } else if (!std::isnan(f) && !std::isnan(prev_f) && prev_f != 0.0 &&
                   (f < 0.0) != (prev_f < 0.0)) {
            out.push_back(bisect_root(fn, prev_t, t, prev_f));
        }
        prev_t = t;
        prev_f = f;
    }
}

} // namespace

SecularSolve solve_secular(const SecularFunction& fn,
                           const std::vector<Enclosure>& enc,
                           const CornerGap& gap) {
    SecularSolve out;
    const int m = fn.block_size;
    if (m == 0) return out;

    const double tol_deflate =
        1e-14 * (1.0 + std::fabs(gap.theta) + std::fabs(gap.vartheta));
    std::vector<double> witness(m, 0.0);
    std::vector<char> dead(m, 0);
    std::vector<int> live_idx;
    for (int k = 0; k < m; ++k) {
        double wsum = std::fabs(fn.linear_weights[k]);
        for (int l = 0; l < m; ++l) wsum += fn.pair_weights(k, l);
        witness[k] = wsum;
        if (wsum <= tol_deflate) {
            dead[k] = 1;
            out.roots.push_back({fn.poles[k], true, witness[k]});
        } else {
            live_idx.push_back(k);
        }
    }

    const int live_count = static_cast<int>(live_idx.size());
    if (live_count > 0) {
        // Reduced function over surviving poles only; the dropped terms are
        // below threshold and would otherwise plant clamped poles inside the
        // scan intervals.
        SecularFunction live;
        live.block_size = live_count;
        live.poles.resize(live_count);
        live.linear_weights.resize(live_count);
        live.pair_weights = Matrix(live_count, live_count);
        for (int i = 0; i < live_count; ++i) {
            live.poles[i] = fn.poles[live_idx[i]];
            live.linear_weights[i] = fn.linear_weights[live_idx[i]];
            for (int j = 0; j < live_count; ++j)
                live.pair_weights(i, j) =
                    fn.pair_weights(live_idx[i], live_idx[j]);
        }

        double lo = enc.front().lower;
        double hi = enc.front().upper;
        for (const Enclosure& e : enc) {
            lo = std::min(lo, e.lower);
            hi = std::max(hi, e.upper);
        }
        const double pad = 1e-7 * (1.0 + std::fabs(lo) + std::fabs(hi));
        lo -= pad;
        hi += pad;

        std::vector<double> boundaries;
        boundaries.push_back(lo);
        {
            std::vector<double> pts = live.poles;
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            for (double p : pts)
                if (p > lo && p < hi) boundaries.push_back(p);
        }
        boundaries.push_back(hi);

        std::vector<double> found;
        bool accounted = false;
        for (int panels = 64; panels <= 4096; panels *= 2) {
            found.clear();
            for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
                scan_interval(live, boundaries[i], boundaries[i + 1], panels, found);
            if (static_cast<int>(found.size()) == live_count) {
                accounted = true;
                break;
            }
            if (static_cast<int>(found.size()) > live_count) break;
        }

        if (accounted) {
            for (double r : found)
                out.roots.push_back({r, false, abs_or_inf(live.evaluate(r))});
        } else {
            // Roots hiding at poles or paired inside one panel: hand the
            // whole block to the dense eigensolver.
            out.fallback_used = true;
            out.roots.clear();
            Matrix block(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = i; j < m; ++j) {
                    double v = gap.theta * fn.u1[i] * fn.u1[j] +
                               gap.vartheta * (fn.u1[i] * fn.u2[j] +
                                               fn.u2[i] * fn.u1[j]);
                    if (i == j) v += fn.poles[i];
                    block(i, j) = v;
                    block(j, i) = v;
                }
            const oracle::EigenResult er = oracle::jacobi_eigen(oracle::DenseSym(block));
            for (double val : er.values)
                out.roots.push_back({val, false, abs_or_inf(fn.evaluate(val))});
        }
    }

    std::stable_sort(out.roots.begin(), out.roots.end(),
                     [](const SecularRoot& a, const SecularRoot& b) {
                         return a.value < b.value;
                     });
    return out;
}

EigenSolution eigenvalues(const HeptaSpec& spec) {
    const BlockPair pair = block_diagonalize(spec);
    EigenSolution sol;

    struct Tagged {
        SecularRoot root;
        Enclosure enc;
        Parity parity;
    };
    std::vector<Tagged> all;
    all.reserve(spec.n);
    for (Parity which : {Parity::Odd, Parity::Even}) {
        const SecularFunction fn = build_secular(pair, which);
        const std::vector<Enclosure> enc = enclosures(pair, which);
        const SecularSolve solve = solve_secular(fn, enc, pair.gap);
        sol.fallback_used = sol.fallback_used || solve.fallback_used;
        for (std::size_t k = 0; k < solve.roots.size(); ++k)
            all.push_back({solve.roots[k], enc[k], which});
    }
    std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
        return a.root.value < b.root.value;
    });

    const int n = static_cast<int>(all.size());
    sol.eigenvalues.resize(n);
    sol.parity.resize(n);
    sol.enclosures.resize(n);
    sol.deflated.resize(n);
    sol.residuals.resize(n);
    for (int k = 0; k < n; ++k) {
        sol.eigenvalues[k] = all[k].root.value;
        sol.parity[k] = all[k].parity;
        sol.enclosures[k] = all[k].enc;
        sol.deflated[k] = all[k].root.deflated;
        sol.residuals[k] = all[k].root.residual;
    }
    return sol;
}

std::vector<double> eigenvector_embedded(const BlockPair& pair, double eig,
                                         Parity which) {
    const bool odd = which == Parity::Odd;
    const std::vector<double>& poles = odd ? pair.odd_poles : pair.even_poles;
    const std::vector<double>& u1 = odd ? pair.x : pair.v;
    const std::vector<double>& u2 = odd ? pair.y : pair.w;
    const double theta = pair.gap.theta;
    const double vartheta = pair.gap.vartheta;

    if (vartheta == 0.0)
        throw FormulaInapplicableError(
            FormulaInapplicableError::Hypothesis::VarthetaZero,
            "eigenvector formula: corner coupling is rank one (vartheta = 0)");

    const int m = static_cast<int>(poles.size());
    std::vector<double> inv(m);
    for (int k = 0; k < m; ++k) {
        const double d = eig - poles[k];
        if (std::fabs(d) <= 1e-10 * (1.0 + std::fabs(poles[k])))
            throw FormulaInapplicableError(
                FormulaInapplicableError::Hypothesis::PoleCollision,
                "eigenvector formula: eigenvalue collides with a block pole");
        inv[k] = 1.0 / d;
    }

    // Resolvent moments against the coupling pair. The rank-one reduction of
    // the shifted block gives the solution as a combination of the two
    // diagonally scaled couplers.
    double q11 = 0.0, q12 = 0.0, q22 = 0.0;
    for (int k = 0; k < m; ++k) {
        q11 += u1[k] * u1[k] * inv[k];
        q12 += u1[k] * u2[k] * inv[k];
        q22 += u2[k] * u2[k] * inv[k];
    }
    const double denom = 1.0 - theta * q11 - vartheta * q12;
    const double denom_scale =
        1.0 + std::fabs(theta * q11) + std::fabs(vartheta * q12);
    if (std::fabs(denom) <= 1e-12 * denom_scale)
        throw FormulaInapplicableError(
            FormulaInapplicableError::Hypothesis::DenominatorSum,
            "eigenvector formula: resolvent denominator vanishes");
    const double coeff = (theta * q12 + vartheta * q22) / denom;

    const int n = pair.n;
    const int odd_count = (n + 1) / 2;
    std::vector<double> embedded(n, 0.0);
    const int offset = odd ? 0 : odd_count;
    for (int k = 0; k < m; ++k)
        embedded[offset + k] = (u2[k] + coeff * u1[k]) * inv[k];
    return embedded;
}

std::vector<double> eigenvector(const HeptaSpec& spec, double eig, Parity which) {
    const BlockPair pair = block_diagonalize(spec);
    const std::vector<double> embedded = eigenvector_embedded(pair, eig, which);
    const ParityPermutation p(spec.n);
    const SineTransform s(spec.n);
    return apply_S(s, p.scatter(embedded));
}

} // namespace hepta
