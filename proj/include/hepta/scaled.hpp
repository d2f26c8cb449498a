#pragma once

#include <cmath>

namespace hepta {

/// Floating value kept as mantissa * 2^exponent with mantissa in +-[0.5, 1)
/// (or exactly zero). Long products of eigenvalues overflow double well
/// before n reaches a few hundred; carrying the exponent separately keeps
/// every intermediate finite. to_double() saturates to 0 or +-inf.
class ScaledFloat {
public:
    ScaledFloat() = default;

    explicit ScaledFloat(double v) {
        int e = 0;
        m_ = std::frexp(v, &e);
        e_ = e;
    }

    static ScaledFloat one() { return ScaledFloat(1.0); }

    double mantissa() const { return m_; }
    long exponent() const { return e_; }
    bool is_zero() const { return m_ == 0.0; }

    double to_double() const {
        if (m_ == 0.0) return 0.0;
        if (e_ > 1100) return m_ > 0.0 ? HUGE_VAL : -HUGE_VAL;
        if (e_ < -1200) return m_ > 0.0 ? 0.0 : -0.0;
        return std::ldexp(m_, static_cast<int>(e_));
    }

    ScaledFloat operator*(const ScaledFloat& o) const {
        return make(m_ * o.m_, e_ + o.e_);
    }

    ScaledFloat operator*(double v) const { return *this * ScaledFloat(v); }

    ScaledFloat operator+(const ScaledFloat& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        // Align the smaller-exponent operand; beyond ~1100 bits it vanishes.
        if (e_ >= o.e_) {
            const long d = e_ - o.e_;
            if (d > 1100) return *this;
            return make(m_ + std::ldexp(o.m_, static_cast<int>(-d)), e_);
        }
        return o + *this;
    }

    ScaledFloat operator-() const {
        ScaledFloat r = *this;
        r.m_ = -r.m_;
        return r;
    }

    ScaledFloat operator-(const ScaledFloat& o) const { return *this + (-o); }

private:
    static ScaledFloat make(double m, long e) {
        ScaledFloat r;
        if (m == 0.0) return r;
        int shift = 0;
        r.m_ = std::frexp(m, &shift);
        r.e_ = e + shift;
        return r;
    }

    double m_ = 0.0;
    long e_ = 0;
};

} // namespace hepta
