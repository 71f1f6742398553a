#pragma once

// Buckling and Dirichlet-Laplacian eigenvalues on the unit ball of R^d.
//
// Separation of variables gives radial eigenvalues
//   buckling:  sigma_{d,l,n}  = x_{l + d/2, n}^2
//   Dirichlet: lambda_{d,l,n} = x_{l + d/2 - 1, n}^2
// each with multiplicity M_{l,d}, the dimension of the degree-l spherical
// harmonics. Both kinds read the same zero tables, so
// sigma_{d,l,n} == lambda_{d,l+1,n} bit for bit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbuckle/errors.hpp"
#include "specbuckle/parallel.hpp"
#include "specbuckle/problem_kind.hpp"
#include "specbuckle/specfun.hpp"
#include "specbuckle/spectrum.hpp"

namespace specbuckle {

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("multiplicity: integer overflow");
    return r;
}

// C(n, k) exactly; 0 for n < k or n < 0.
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < k) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i; divide out the gcd first
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
        r = checked_mul(r / g, num / (static_cast<std::uint64_t>(i) / g));
    }
    return r;
}

}  // namespace detail

/// Dimension of the degree-l spherical harmonics on S^{d-1}:
/// C(l+d-1, d-1) - C(l+d-3, d-1). Also defined for d = 1, where it is 1 for
/// l in {0, 1} and 0 otherwise.
inline std::uint64_t multiplicity(int l, int d) {
    if (l < 0 || d < 1) throw domain_error("multiplicity: need l >= 0, d >= 1");
    return detail::binomial(l + d - 1, d - 1) - detail::binomial(l + d - 3, d - 1);
}

/// Bessel order of the (d, l) radial problem.
inline HalfIntegerOrder ball_order(int d, int l, ProblemKind kind) {
    if (d < 1 || l < 0) throw domain_error("ball_order: need d >= 1, l >= 0");
    switch (kind) {
        case ProblemKind::Buckling: return HalfIntegerOrder(2 * l + d);
        case ProblemKind::DirichletLaplacian:
            if (2 * l + d - 2 < 0) throw domain_error("ball_order: negative Bessel order");
            return HalfIntegerOrder(2 * l + d - 2);
        case ProblemKind::DirichletBilaplacian: break;
    }
    throw domain_error("ball_order: bilaplacian eigenvalues on balls are not supported");
}

inline double buckling_eigenvalue(int d, int l, int n) {
    if (d < 2) throw domain_error("buckling_eigenvalue: d must be >= 2");
    const double x = bessel_zero(ball_order(d, l, ProblemKind::Buckling), n).value;
    return x * x;
}

inline double dirichlet_eigenvalue(int d, int l, int n) {
    if (d < 2) throw domain_error("dirichlet_eigenvalue: d must be >= 2");
    const double x = bessel_zero(ball_order(d, l, ProblemKind::DirichletLaplacian), n).value;
    return x * x;
}

struct RadialMode {
    int d = 0;
    int l = 0;
    int n = 0;
    ProblemKind kind = ProblemKind::Buckling;
    double value = 0.0;
    std::uint64_t multiplicity = 0;
};

struct BallSpectrum {
    int d = 0;
    ProblemKind kind = ProblemKind::Buckling;
    double z_max = 0.0;
    std::vector<RadialMode> modes;  // ascending by value, ties by (l, n)

    /// Sum of multiplicities.
    [[nodiscard]] std::uint64_t count() const {
        std::uint64_t c = 0;
        for (const auto& m : modes) c += m.multiplicity;
        return c;
    }
};

struct EnumerateOptions {
    // Upper bound on the number of (l, n) pairs, checked against a projection
    // before any zero is computed.
    std::uint64_t max_modes = 50'000'000;
    std::size_t threads = default_threads();
};

/// Largest l scanned: every zero of J_nu exceeds nu >= l, so l >= sqrt(z)
/// contributes nothing below z.
inline int ball_l_max(double z_max) { return static_cast<int>(std::ceil(std::sqrt(z_max))); }

/// #{n : value_{d,l,n} < z}.
inline std::uint64_t counting_per_l(int d, ProblemKind kind, int l, double z) {
    return zero_cache().count_squares_below(ball_order(d, l, kind), z);
}

/// N(z) = sum_l M_{l,d} #{n : value_{d,l,n} < z}.
inline std::uint64_t counting(int d, ProblemKind kind, double z) {
    if (d < 2) throw domain_error("counting: d must be >= 2");
    if (!(z > 0.0)) return 0;
    std::uint64_t total = 0;
    for (int l = 0;; ++l) {
        // x_{nu,1} grows with nu, so the first empty l ends the scan
        const std::uint64_t c = counting_per_l(d, kind, l, z);
        if (c == 0) break;
        total += multiplicity(l, d) * c;
    }
    return total;
}

/// All modes with value < z_max, merged by value.
inline BallSpectrum enumerate(int d, ProblemKind kind, double z_max, const EnumerateOptions& opt = {}) {
    if (d < 2) throw domain_error("enumerate: d must be >= 2");
    if (!(z_max > 0.0)) throw domain_error("enumerate: z_max must be > 0");
    if (kind == ProblemKind::DirichletBilaplacian) {
        throw domain_error("enumerate: bilaplacian eigenvalues on balls are not supported");
    }
    const int l_max = ball_l_max(z_max);
    // about (sqrt(z) - l)/pi zeros per l
    const double projected = (std::sqrt(z_max) + 1.0) * (std::sqrt(z_max) + 1.0) / (2.0 * std::numbers::pi);
    if (projected > static_cast<double>(opt.max_modes)) {
        throw resource_error("enumerate: projected " + std::to_string(static_cast<std::uint64_t>(projected)) +
                             " modes exceeds cap " + std::to_string(opt.max_modes));
    }

    std::vector<std::vector<double>> per_l(static_cast<std::size_t>(l_max) + 1);
    parallel_for(
        per_l.size(),
        [&](std::size_t l) { per_l[l] = zero_cache().values_squares_below(ball_order(d, static_cast<int>(l), kind), z_max); },
        opt.threads);

    BallSpectrum out{d, kind, z_max, {}};
    std::size_t total = 0;
    for (const auto& v : per_l) total += v.size();
    out.modes.reserve(total);

    struct Head {
        double value;
        int l;
        int idx;
        bool operator>(const Head& o) const { return value != o.value ? value > o.value : l > o.l; }
    };
    std::priority_queue<Head, std::vector<Head>, std::greater<>> heap;
    for (int l = 0; l <= l_max; ++l) {
        if (!per_l[l].empty()) heap.push({per_l[l][0] * per_l[l][0], l, 0});
    }
    while (!heap.empty()) {
        const Head h = heap.top();
        heap.pop();
        out.modes.push_back({d, h.l, h.idx + 1, kind, h.value, multiplicity(h.l, d)});
        const auto& v = per_l[h.l];
        if (static_cast<std::size_t>(h.idx + 1) < v.size()) heap.push({v[h.idx + 1] * v[h.idx + 1], h.l, h.idx + 1});
    }
    return out;
}

/// Flattened view for the Riesz-mean and bound routines.
inline Spectrum to_spectrum(const BallSpectrum& s) {
    std::vector<double> values;
    std::vector<std::uint64_t> mult;
    values.reserve(s.modes.size());
    mult.reserve(s.modes.size());
    for (const RadialMode& m : s.modes) {
        values.push_back(m.value);
        mult.push_back(m.multiplicity);
    }
    return Spectrum({"ball", s.kind, s.d, s.z_max}, std::move(values), std::move(mult));
}

/// N^B_d(z) - N^D_d(z) + sum_l M_{l,d-1} N^D_{d,l}(z). The identity behind it
/// is exact, so this is 0 whenever the zero tables are consistent. For d = 2
/// it reduces to N^B_2 - N^D_2 + N^D_{2,0} + N^D_{2,1}.
inline std::int64_t counting_identity_gap(int d, double z) {
    if (d < 2) throw domain_error("counting_identity_gap: d must be >= 2");
    const auto nb = static_cast<std::int64_t>(counting(d, ProblemKind::Buckling, z));
    const auto nd = static_cast<std::int64_t>(counting(d, ProblemKind::DirichletLaplacian, z));
    std::int64_t s = 0;
    for (int l = 0; l <= ball_l_max(z) + 1; ++l) {
        const std::uint64_t m = multiplicity(l, d - 1);
        if (m == 0) continue;
        s += static_cast<std::int64_t>(m * counting_per_l(d, ProblemKind::DirichletLaplacian, l, z));
    }
    return nb - nd + s;
}

struct CrossDimensionDefect {
    std::int64_t total = 0;         // sum_l M_{l,d-1} (N^D_{d,l} - N^D_{d-1,l})
    std::int64_t min_per_l = 0;     // smallest per-l difference seen
    std::int64_t max_per_l = 0;     // largest per-l difference seen
    int l_scanned = 0;
};

/// Defect between the Dirichlet counts of the d- and (d-1)-ball, weighted by
/// the (d-1)-dimensional multiplicities. Interlacing of x_{nu,n} and
/// x_{nu+1/2,n} forces every per-l difference into {-1, 0}.
inline CrossDimensionDefect cross_dimension_defect(int d, double z) {
    if (d < 3) throw domain_error("cross_dimension_defect: d must be >= 3");
    CrossDimensionDefect out;
    if (!(z > 0.0)) return out;
    const int l_max = ball_l_max(z);
    out.l_scanned = l_max + 1;
    for (int l = 0; l <= l_max; ++l) {
        const auto a = static_cast<std::int64_t>(counting_per_l(d, ProblemKind::DirichletLaplacian, l, z));
        const auto b = static_cast<std::int64_t>(counting_per_l(d - 1, ProblemKind::DirichletLaplacian, l, z));
        const std::int64_t diff = a - b;
        if (l == 0) {
            out.min_per_l = out.max_per_l = diff;
        } else {
            out.min_per_l = std::min(out.min_per_l, diff);
            out.max_per_l = std::max(out.max_per_l, diff);
        }
        out.total += static_cast<std::int64_t>(multiplicity(l, d - 1)) * diff;
    }
    return out;
}

struct RadialResidual {
    double value_at_1 = 0.0;       // |R(1)|
    double derivative_at_1 = 0.0;  // |R'(1)|
    double scale = 0.0;            // max |R| on the sampling grid
    int interior_sign_changes = 0;
};

/// Radial profile R(r) = j_l(k) r^l - j_l(k r), k = sqrt(sigma_{d,l,n}),
/// with j_l(s) = s^{1-d/2} J_{l+d/2-1}(s). R(1) vanishes by construction and
/// R'(1) = k^{2-d/2} J_{l+d/2}(k) vanishes at a buckling eigenvalue.
inline RadialResidual radial_residual(int d, int l, int n) {
    if (d < 2 || l < 0 || n < 1) throw domain_error("radial_residual: need d >= 2, l >= 0, n >= 1");
    const double k = bessel_zero(ball_order(d, l, ProblemKind::Buckling), n).value;
    const HalfIntegerOrder mu(2 * l + d - 2);
    const double e = 1.0 - 0.5 * d;
    auto j_l = [&](double s) { return std::pow(s, e) * bessel_j(mu, s); };
    const double jk = j_l(k);
    auto profile = [&](double r) { return jk * std::pow(r, l) - j_l(k * r); };

    RadialResidual out;
    out.value_at_1 = std::fabs(profile(1.0));
    // j_l'(s) = s^{1-d/2} ((l/s) J_mu(s) - J_{mu+1}(s))
    const BesselPair p = bessel_j_pair(mu, k);
    const double jl_prime = std::pow(k, e) * ((l / k) * p.j - p.j_next);
    out.derivative_at_1 = std::fabs(l * jk - k * jl_prime);

    const int grid = std::max(400, 64 * n);
    std::vector<double> samples(static_cast<std::size_t>(grid) + 1);
    for (int i = 1; i <= grid; ++i) {
        samples[i] = profile(static_cast<double>(i) / grid);
        out.scale = std::max(out.scale, std::fabs(samples[i]));
    }
    // j_l(0) is finite only for l = 0
    if (l == 0) out.scale = std::max(out.scale, std::fabs(profile(0.0)));

    const double floor = 1e-10 * out.scale;
    int last_sign = 0;
    for (int i = 1; i < grid; ++i) {
        if (std::fabs(samples[i]) <= floor) continue;
        const int s = samples[i] > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++out.interior_sign_changes;
        last_sign = s;
    }
    return out;
}

/// CSV dump: d,kind,l,n,value,multiplicity.
inline void write_ball_spectrum_csv(std::ostream& out, const BallSpectrum& s) {
    out << "d,kind,l,n,value,multiplicity\n";
    char buf[160];
    for (const RadialMode& m : s.modes) {
        std::snprintf(buf, sizeof buf, "%d,%s,%d,%d,%.17g,%llu\n", m.d, std::string(to_string(m.kind)).c_str(), m.l,
                      m.n, m.value, static_cast<unsigned long long>(m.multiplicity));
        out << buf;
    }
}

}  // namespace specbuckle
