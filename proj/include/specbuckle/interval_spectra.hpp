#pragma once

// Spectra of the three clamped/Dirichlet problems on (0, L).
//
//   Dirichlet Laplacian:   lambda_j = (pi j / L)^2
//   buckling:              sigma_j  = (pi (j+1) - t_j)^2 / L^2, t_j = 0 for odd j,
//                          t_j in (0, pi) solving sin(t/2) (pi (j+1) - t) = 2 cos(t/2) for even j
//   Dirichlet bilaplacian: Lambda_j = x_j^4 / L^4, cos x_j cosh x_j = 1,
//                          x_j = pi (j + 1/2) - (-1)^j s_j, 0 < s_j < pi/2
//
// cos x cosh x = 1 is solved as sin s = sech(x), which stays finite for any j.

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "specbuckle/bound_report.hpp"
#include "specbuckle/errors.hpp"
#include "specbuckle/problem_kind.hpp"
#include "specbuckle/spectrum.hpp"

namespace specbuckle {

struct IntervalEigenvalue {
    int j = 0;
    ProblemKind kind = ProblemKind::Buckling;
    double value = 0.0;
    std::optional<double> aux;  // t_j (buckling) or s_j (bilaplacian)
};

namespace detail {

inline void check_index(int j, double L, const char* who) {
    if (j < 1) throw domain_error(std::string(who) + ": j must be >= 1");
    if (!(L > 0.0)) throw domain_error(std::string(who) + ": L must be > 0");
}

// sech(u) for u >= 0 without forming cosh(u).
inline double sech(double u) {
    const double e = std::exp(-u);
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace detail

inline double lambda_1d(int j, double L) {
    detail::check_index(j, L, "lambda_1d");
    const double k = std::numbers::pi * j / L;
    return k * k;
}

/// Root in (0, pi) of g(t) = sin(t/2) (pi (j+1) - t) - 2 cos(t/2), j even.
/// g(0) = -2, g(pi) = pi j > 0 and g'(t) = cos(t/2) (pi (j+1) - t) / 2 > 0.
inline double buckling_t(int j) {
    if (j < 2 || j % 2 != 0) throw domain_error("buckling_t: j must be even and >= 2");
    const double a = std::numbers::pi * (j + 1);
    auto g = [a](double t) { return std::sin(0.5 * t) * (a - t) - 2.0 * std::cos(0.5 * t); };
    auto dg = [a](double t) { return 0.5 * std::cos(0.5 * t) * (a - t); };
    double lo = 0.0;
    double hi = std::numbers::pi;
    double t = std::min(4.0 / a, 0.5 * hi);  // t_j ~ 4 / (pi (j+1))
    for (int it = 0; it < 200; ++it) {
        const double f = g(t);
        if (f == 0.0) return t;
        if (f < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        double next = t - f / dg(t);
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        const double dt = next - t;
        t = next;
        if (std::fabs(dt) <= 1e-14 * std::max(1.0, t) || hi - lo <= 1e-15) return t;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "buckling_t: no convergence for j=" << j << " bracket=[" << lo << ", " << hi << "]";
    throw convergence_error(msg.str());
}

inline IntervalEigenvalue sigma_1d(int j, double L) {
    detail::check_index(j, L, "sigma_1d");
    const double t = (j % 2 == 1) ? 0.0 : buckling_t(j);
    const double gamma = std::numbers::pi * (j + 1) - t;
    return {j, ProblemKind::Buckling, gamma * gamma / (L * L), t};
}

/// s_j in [0, pi/2) with sin s = sech(pi (j + 1/2) - (-1)^j s). For large j the
/// root is below the smallest double and 0 is returned.
inline double bilaplacian_s(int j) {
    if (j < 1) throw domain_error("bilaplacian_s: j must be >= 1");
    const double a = std::numbers::pi * (j + 0.5);
    const double sg = (j % 2 == 0) ? 1.0 : -1.0;
    auto h = [&](double s) { return std::sin(s) - detail::sech(a - sg * s); };
    auto dh = [&](double s) {
        const double u = a - sg * s;
        return std::cos(s) - sg * detail::sech(u) * std::tanh(u);
    };
    double s = std::asin(std::min(1.0, detail::sech(a)));
    if (s == 0.0) return 0.0;
    double lo = 0.0;
    double hi = 0.5 * std::numbers::pi;
    for (int it = 0; it < 200; ++it) {
        const double f = h(s);
        if (f == 0.0) return s;
        if (f < 0.0) {
            lo = s;
        } else {
            hi = s;
        }
        double next = s - f / dh(s);
        if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
        const double ds = next - s;
        s = next;
        if (std::fabs(ds) <= 1e-15 * s) return s;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "bilaplacian_s: no convergence for j=" << j << " bracket=[" << lo << ", " << hi << "]";
    throw convergence_error(msg.str());
}

/// j-th positive root of cos x cosh x = 1.
inline double bilaplacian_x(int j) {
    const double sg = (j % 2 == 0) ? 1.0 : -1.0;
    return std::numbers::pi * (j + 0.5) - sg * bilaplacian_s(j);
}

inline IntervalEigenvalue biharmonic_1d(int j, double L) {
    detail::check_index(j, L, "biharmonic_1d");
    const double s = bilaplacian_s(j);
    const double sg = (j % 2 == 0) ? 1.0 : -1.0;
    const double x = std::numbers::pi * (j + 0.5) - sg * s;
    const double xl = x / L;
    return {j, ProblemKind::DirichletBilaplacian, (xl * xl) * (xl * xl), s};
}

inline IntervalEigenvalue interval_eigenvalue(ProblemKind kind, int j, double L) {
    switch (kind) {
        case ProblemKind::Buckling: return sigma_1d(j, L);
        case ProblemKind::DirichletLaplacian: return {j, kind, lambda_1d(j, L), std::nullopt};
        case ProblemKind::DirichletBilaplacian: return biharmonic_1d(j, L);
    }
    throw domain_error("interval_eigenvalue: unknown kind");
}

/// Natural log of s_j, valid also where s_j itself underflows:
/// s_j = asin(sech x_j) and sech x = 2 e^{-x} / (1 + e^{-2x}).
inline double log_bilaplacian_s(int j) {
    const double x = bilaplacian_x(j);
    const double sx = detail::sech(x);
    if (sx > 1e-280) return std::log(std::asin(sx));
    return std::numbers::ln2 - x - std::log1p(std::exp(-2.0 * x));
}

/// s_j < t_j / 2 for even j, together with sigma_j <= 4 sqrt(Lambda_j) (L = 1).
inline BoundReport sj_lt_half_tj(int j) {
    if (j < 2 || j % 2 != 0) throw domain_error("sj_lt_half_tj: j must be even and >= 2");
    const double t = buckling_t(j);
    const double s = bilaplacian_s(j);
    const double log_s = log_bilaplacian_s(j);
    const double log_half_t = std::log(0.5 * t);
    const double sigma = sigma_1d(j, 1.0).value;
    const double four_sqrt_lambda = 4.0 * std::sqrt(biharmonic_1d(j, 1.0).value);
    BoundReport r;
    r.name = "s_j < t_j/2";
    r.lhs = s;
    r.rhs = 0.5 * t;
    r.margin = log_half_t - log_s;
    r.pass = log_s < log_half_t && sigma <= four_sqrt_lambda;
    r.param("j", j).param("log_s", log_s).param("log_half_t", log_half_t).param("sigma_j", sigma).param(
        "four_sqrt_Lambda_j", four_sqrt_lambda);
    return r;
}

/// The first `count` eigenvalues of `kind` on (0, L). z_max is set to the
/// next eigenvalue so that counting queries are valid up to it.
inline Spectrum interval_spectrum_first(ProblemKind kind, double L, int count) {
    if (count < 0) throw domain_error("interval_spectrum_first: negative count");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) values.push_back(interval_eigenvalue(kind, j, L).value);
    const double z_max = interval_eigenvalue(kind, count + 1, L).value;
    std::vector<std::uint64_t> mult(values.size(), 1);
    return Spectrum({"interval", kind, 1, z_max}, std::move(values), std::move(mult));
}

/// All eigenvalues of `kind` on (0, L) below z_max.
inline Spectrum interval_spectrum(ProblemKind kind, double L, double z_max) {
    if (!(z_max > 0.0)) throw domain_error("interval_spectrum: z_max must be > 0");
    std::vector<double> values;
    for (int j = 1;; ++j) {
        const double v = interval_eigenvalue(kind, j, L).value;
        if (v >= z_max) break;
        values.push_back(v);
    }
    std::vector<std::uint64_t> mult(values.size(), 1);
    return Spectrum({"interval", kind, 1, z_max}, std::move(values), std::move(mult));
}

/// CSV dump of the first j_max eigenvalues: j,kind,L,value,aux.
inline void write_interval_csv(std::ostream& out, ProblemKind kind, double L, int j_max, bool header = true) {
    if (header) out << "j,kind,L,value,aux\n";
    char buf[192];
    for (int j = 1; j <= j_max; ++j) {
        const IntervalEigenvalue e = interval_eigenvalue(kind, j, L);
        if (e.aux) {
            std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g\n", j, std::string(to_string(kind)).c_str(), L,
                          e.value, *e.aux);
        } else {
            std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,\n", j, std::string(to_string(kind)).c_str(), L,
                          e.value);
        }
        out << buf;
    }
}

}  // namespace specbuckle
