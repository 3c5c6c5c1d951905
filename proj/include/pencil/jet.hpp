#pragma once

#include "pencil/errors.hpp"

#include <cmath>

namespace pencil {

/// Value and first three derivatives of a scalar function at a point.
///
/// Components are derivatives, not Taylor coefficients: for f = x³ at x = 2
/// the jet is (8, 12, 12, 6). Arithmetic follows the Leibniz rule and
/// Faà di Bruno's formula truncated at order three, so results are exact up to
/// floating point rounding.
struct Jet3
{
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;

    static constexpr Jet3 constant(double value) { return {value, 0.0, 0.0, 0.0}; }
    static constexpr Jet3 variable(double point) { return {point, 1.0, 0.0, 0.0}; }

    constexpr bool is_constant() const { return v1 == 0.0 && v2 == 0.0 && v3 == 0.0; }

    friend constexpr bool operator==(const Jet3&, const Jet3&) = default;
};

/// Chain rule: h = φ ∘ f given φ and its first three derivatives at f.v0.
constexpr Jet3 compose(const Jet3& f, double d0, double d1, double d2, double d3)
{
    return {
        d0,
        d1 * f.v1,
        d2 * f.v1 * f.v1 + d1 * f.v2,
        d3 * f.v1 * f.v1 * f.v1 + 3.0 * d2 * f.v1 * f.v2 + d1 * f.v3,
    };
}

constexpr Jet3 operator+(const Jet3& a, const Jet3& b)
{
    return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3};
}

constexpr Jet3 operator-(const Jet3& a, const Jet3& b)
{
    return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3};
}

constexpr Jet3 operator-(const Jet3& a)
{
    return {-a.v0, -a.v1, -a.v2, -a.v3};
}

constexpr Jet3 operator*(const Jet3& a, const Jet3& b)
{
    return {
        a.v0 * b.v0,
        a.v1 * b.v0 + a.v0 * b.v1,
        a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2,
        a.v3 * b.v0 + 3.0 * a.v2 * b.v1 + 3.0 * a.v1 * b.v2 + a.v0 * b.v3,
    };
}

constexpr Jet3 operator*(double s, const Jet3& a)
{
    return {s * a.v0, s * a.v1, s * a.v2, s * a.v3};
}

inline Jet3 reciprocal(const Jet3& a)
{
    if (a.v0 == 0.0) throw DomainError("division by zero");
    const double r = 1.0 / a.v0;
    return compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b)
{
    if (b.is_constant()) {
        if (b.v0 == 0.0) throw DomainError("division by zero");
        return (1.0 / b.v0) * a;
    }
    return a * reciprocal(b);
}

namespace jet {

inline Jet3 sin(const Jet3& a)
{
    const double s = std::sin(a.v0), c = std::cos(a.v0);
    return compose(a, s, c, -s, -c);
}

inline Jet3 cos(const Jet3& a)
{
    const double s = std::sin(a.v0), c = std::cos(a.v0);
    return compose(a, c, -s, -c, s);
}

inline Jet3 tan(const Jet3& a)
{
    const double t = std::tan(a.v0);
    if (!std::isfinite(t)) throw DomainError("tan at a pole");
    const double sec2 = 1.0 + t * t;
    return compose(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t));
}

inline Jet3 asin(const Jet3& a)
{
    const double x = a.v0;
    if (x < -1.0 || x > 1.0) throw DomainError("asin outside [-1, 1]");
    if (a.is_constant()) return Jet3::constant(std::asin(x));
    const double q = 1.0 - x * x;
    if (q <= 0.0) throw DomainError("asin derivative at +-1");
    const double r = 1.0 / std::sqrt(q);
    return compose(a, std::asin(x), r, x * r * r * r, (1.0 + 2.0 * x * x) * r * r * r * r * r);
}

inline Jet3 acos(const Jet3& a)
{
    const double x = a.v0;
    if (x < -1.0 || x > 1.0) throw DomainError("acos outside [-1, 1]");
    if (a.is_constant()) return Jet3::constant(std::acos(x));
    const double q = 1.0 - x * x;
    if (q <= 0.0) throw DomainError("acos derivative at +-1");
    const double r = 1.0 / std::sqrt(q);
    return compose(a, std::acos(x), -r, -x * r * r * r, -(1.0 + 2.0 * x * x) * r * r * r * r * r);
}

inline Jet3 atan(const Jet3& a)
{
    const double x = a.v0;
    const double q = 1.0 / (1.0 + x * x);
    return compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

inline Jet3 sinh(const Jet3& a)
{
    const double s = std::sinh(a.v0), c = std::cosh(a.v0);
    return compose(a, s, c, s, c);
}

inline Jet3 cosh(const Jet3& a)
{
    const double s = std::sinh(a.v0), c = std::cosh(a.v0);
    return compose(a, c, s, c, s);
}

inline Jet3 tanh(const Jet3& a)
{
    const double t = std::tanh(a.v0);
    const double sech2 = 1.0 - t * t;
    return compose(a, t, sech2, -2.0 * t * sech2, (6.0 * t * t - 2.0) * sech2);
}

inline Jet3 exp(const Jet3& a)
{
    const double e = std::exp(a.v0);
    return compose(a, e, e, e, e);
}

inline Jet3 log(const Jet3& a)
{
    const double x = a.v0;
    if (x <= 0.0) throw DomainError("ln of a non-positive value");
    const double r = 1.0 / x;
    return compose(a, std::log(x), r, -r * r, 2.0 * r * r * r);
}

inline Jet3 sqrt(const Jet3& a)
{
    const double x = a.v0;
    if (x < 0.0) throw DomainError("sqrt of a negative value");
    if (a.is_constant()) return Jet3::constant(std::sqrt(x));
    if (x == 0.0) throw DomainError("sqrt derivative at 0");
    const double s = std::sqrt(x);
    const double r = 1.0 / x;
    return compose(a, s, 0.5 / s, -0.25 * r / s, 0.375 * r * r / s);
}

inline Jet3 abs(const Jet3& a)
{
    if (a.is_constant()) return Jet3::constant(std::abs(a.v0));
    if (a.v0 == 0.0) throw DomainError("abs derivative at 0");
    return a.v0 > 0.0 ? a : -a;
}

/// a^b. A constant exponent uses the power rule (negative bases allowed for
/// integer exponents); a varying exponent goes through exp(b·ln a).
inline Jet3 pow(const Jet3& a, const Jet3& b)
{
    if (!b.is_constant()) {
        if (a.v0 <= 0.0) throw DomainError("pow with varying exponent needs a positive base");
        return exp(b * log(a));
    }
    const double p = b.v0;
    const double x = a.v0;
    const bool integral = std::trunc(p) == p;
    if (x < 0.0 && !integral) throw DomainError("pow of a negative base with fractional exponent");
    if (a.is_constant()) {
        if (x == 0.0 && p < 0.0) throw DomainError("division by zero");
        return Jet3::constant(std::pow(x, p));
    }
    double d[4];
    double falling = 1.0;
    for (int k = 0; k < 4; ++k) {
        if (falling == 0.0) {
            d[k] = 0.0;
        } else {
            if (x == 0.0 && p - k < 0.0) throw DomainError("pow derivative undefined at 0");
            d[k] = falling * std::pow(x, p - k);
        }
        falling *= (p - k);
    }
    return compose(a, d[0], d[1], d[2], d[3]);
}

} // namespace jet
} // namespace pencil
