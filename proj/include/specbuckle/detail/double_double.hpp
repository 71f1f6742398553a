#pragma once

#include <cmath>

namespace specbuckle::detail {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Only the handful of
// operations the series evaluators need.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    [[nodiscard]] double value() const { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, double b) {
    DoubleDouble p = two_prod(a.hi, b);
    p.lo = std::fma(a.lo, b, p.lo);
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, double b) {
    const double q1 = a.hi / b;
    DoubleDouble r = a - two_prod(q1, b);
    const double q2 = r.hi / b;
    r = r - two_prod(q2, b);
    const double q3 = r.hi / b;
    return DoubleDouble{quick_two_sum(q1, q2)} + DoubleDouble{q3};
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * q1;
    const double q2 = r.hi / b.hi;
    r = r - b * q2;
    const double q3 = r.hi / b.hi;
    return DoubleDouble{quick_two_sum(q1, q2)} + DoubleDouble{q3};
}

inline DoubleDouble sqrt(DoubleDouble a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    const double s = std::sqrt(a.hi);
    // One Newton step in double-double: s + (a - s^2) / (2s).
    const DoubleDouble r = a - two_prod(s, s);
    return quick_two_sum(s, r.hi / (2.0 * s));
}

inline constexpr DoubleDouble kPi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DoubleDouble kSqrtPi{1.772453850905516104e+00, -7.666586499825799983e-17};

}  // namespace specbuckle::detail
