#pragma once

// Gamma at half-integers, Bessel functions of the first kind of half-integer
// order, and their positive zeros.
//
// J_nu(x) is evaluated by one of three routes:
//   * power series in double-double arithmetic (small x, or x^2 small
//     compared to nu),
//   * the Hankel asymptotic expansion (large x with nu^2 <= 8x); for
//     half-integer nu the expansion terminates and is exact,
//   * Miller's downward recurrence normalised against J_{nu0}, J_{nu0+1}
//     with nu0 in {0, 1/2}.
// Accuracy is about 1e-14 relative to the local amplitude of J_nu.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "specbuckle/detail/double_double.hpp"
#include "specbuckle/errors.hpp"

namespace specbuckle {

/// Bessel order nu = twice_nu / 2, kept as an integer so that order shifts by
/// 1/2 or 1 are exact.
class HalfIntegerOrder {
public:
    constexpr HalfIntegerOrder() = default;
    constexpr explicit HalfIntegerOrder(int twice_nu) : twice_nu_(twice_nu) {
        if (twice_nu < 0) throw domain_error("HalfIntegerOrder: negative order");
    }

    static constexpr HalfIntegerOrder integer(int nu) { return HalfIntegerOrder(2 * nu); }

    [[nodiscard]] constexpr int twice() const { return twice_nu_; }
    [[nodiscard]] constexpr double value() const { return 0.5 * twice_nu_; }
    [[nodiscard]] constexpr bool is_integer() const { return twice_nu_ % 2 == 0; }

    [[nodiscard]] constexpr HalfIntegerOrder plus_half() const { return HalfIntegerOrder(twice_nu_ + 1); }
    [[nodiscard]] constexpr HalfIntegerOrder plus_one() const { return HalfIntegerOrder(twice_nu_ + 2); }
    [[nodiscard]] constexpr HalfIntegerOrder minus_half() const { return HalfIntegerOrder(twice_nu_ - 1); }
    [[nodiscard]] constexpr HalfIntegerOrder minus_one() const { return HalfIntegerOrder(twice_nu_ - 2); }

    friend constexpr auto operator<=>(HalfIntegerOrder, HalfIntegerOrder) = default;

private:
    int twice_nu_ = 0;
};

/// n-th positive zero of J_nu, with |J_nu(value)| as computed at the zero.
struct BesselZero {
    HalfIntegerOrder order;
    int n = 0;
    double value = 0.0;
    double residual = 0.0;
};

/// Gamma(twice_a / 2) by exact recursion from Gamma(1) = 1 and
/// Gamma(1/2) = sqrt(pi), accumulated in double-double.
/// Throws std::range_error once the result leaves the double range
/// (twice_a >= 344).
inline double gamma_half(int twice_a) {
    if (twice_a < 1) throw domain_error("gamma_half: twice_a must be >= 1");
    using detail::DoubleDouble;
    DoubleDouble g = (twice_a % 2 == 0) ? DoubleDouble{1.0} : detail::kSqrtPi;
    for (int t = (twice_a % 2 == 0) ? 2 : 1; t < twice_a; t += 2) {
        g = g * (0.5 * t);
        if (!std::isfinite(g.hi)) break;
    }
    const double out = g.value();
    if (!std::isfinite(out)) {
        throw std::range_error("gamma_half: Gamma(" + std::to_string(twice_a) + "/2) overflows double");
    }
    return out;
}

/// Lebesgue measure of the unit ball in R^d; B_0 = 1.
inline double unit_ball_volume(int d) {
    if (d < 0) throw domain_error("unit_ball_volume: negative dimension");
    if (d == 0) return 1.0;
    return std::pow(std::numbers::pi, 0.5 * d) / gamma_half(d + 2);
}

/// J_nu(x) together with J_{nu+1}(x).
struct BesselPair {
    double j = 0.0;
    double j_next = 0.0;
};

namespace detail {

inline constexpr double kSeriesMaxX = 25.0;
inline constexpr double kHankelMinX = 25.0;

/// (x/2)^nu / Gamma(nu + 1) in double-double.
inline DoubleDouble series_prefactor(int twice_nu, double x) {
    const int k_max = twice_nu / 2;
    const double nu0 = 0.5 * (twice_nu % 2);
    DoubleDouble p{1.0};
    if (twice_nu % 2 == 1) {
        // (x/2)^{1/2} / Gamma(3/2) = sqrt(2x/pi)
        p = sqrt(DoubleDouble{2.0 * x} / kPi);
    }
    const double half_x = 0.5 * x;
    for (int m = 1; m <= k_max; ++m) {
        p = (p * half_x) / (nu0 + m);
        if (p.hi == 0.0) return DoubleDouble{0.0};
    }
    return p;
}

/// Ascending series sum_k (-x^2/4)^k / (k! (nu+1)_k), in double-double.
inline double series_j(int twice_nu, double x) {
    const double nu = 0.5 * twice_nu;
    const DoubleDouble pre = series_prefactor(twice_nu, x);
    if (pre.hi == 0.0) return 0.0;
    const DoubleDouble minus_q = -(two_prod(x, x) * 0.25);
    DoubleDouble term{1.0};
    DoubleDouble sum{1.0};
    double max_term = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 2000; ++k) {
        term = (term * minus_q) / (k * (nu + k));
        sum = sum + term;
        const double a = std::fabs(term.hi);
        max_term = std::max(max_term, a);
        if (k * (nu + k) > q && a <= 1e-33 * max_term) break;
    }
    return (pre * sum).value();
}

/// cos and sin of x - m*pi/4 for integer m, without rounding m*pi/4.
inline std::pair<double, double> shifted_cos_sin(double x, int m) {
    constexpr double r = 0.70710678118654752440;
    static constexpr std::array<double, 8> kCos{1.0, r, 0.0, -r, -1.0, -r, 0.0, r};
    static constexpr std::array<double, 8> kSin{0.0, r, 1.0, r, 0.0, -r, -1.0, -r};
    const int k = ((m % 8) + 8) % 8;
    const double c = std::cos(x);
    const double s = std::sin(x);
    return {c * kCos[k] + s * kSin[k], s * kCos[k] - c * kSin[k]};
}

/// Hankel expansion; nullopt when it does not reach double precision without
/// excessive cancellation.
inline std::optional<double> hankel_j(int twice_nu, double x) {
    const double mu = static_cast<double>(twice_nu) * twice_nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double max_term = 1.0;
    bool converged = false;
    for (int k = 1; k < 4000; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double factor = (mu - odd * odd) / (8.0 * k * x);
        term *= factor;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            p += sign * term;
        } else {
            q += sign * term;
        }
        const double a = std::fabs(term);
        max_term = std::max(max_term, a);
        if (a < 1e-17) {
            converged = true;
            break;
        }
        if (odd * odd > mu && std::fabs(factor) >= 1.0) break;
    }
    if (!converged || max_term > 1e2) return std::nullopt;
    const auto [cos_chi, sin_chi] = shifted_cos_sin(x, twice_nu + 1);
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

inline bool use_series(int twice_nu, double x) {
    return x <= kSeriesMaxX || x * x <= 8.0 * (twice_nu + 2);
}

/// J_{nu0}, J_{nu0+1} for nu0 in {0, 1/2}.
inline BesselPair base_pair(int twice_nu0, double x) {
    if (x <= kSeriesMaxX) return {series_j(twice_nu0, x), series_j(twice_nu0 + 2, x)};
    const auto a = hankel_j(twice_nu0, x);
    const auto b = hankel_j(twice_nu0 + 2, x);
    if (!a || !b) throw convergence_error("base_pair: Hankel expansion failed for low order");
    return {*a, *b};
}

/// Miller downward recurrence from well above max(nu, x).
inline BesselPair miller_pair(int twice_nu, double x) {
    const int parity = twice_nu % 2;
    const int k_target = twice_nu / 2;
    const double nu0 = 0.5 * parity;
    const double nu = 0.5 * twice_nu;
    const double n_star = std::max(nu + 1.0, x);
    const double n_start = n_star + 16.0 * std::cbrt(0.5 * n_star) + 20.0;
    const int k_start = std::max(k_target + 2, static_cast<int>(std::ceil(n_start - nu0)));

    constexpr double kBig = 1e250;
    constexpr double kShrink = 1e-250;
    double f_up = 0.0;  // f_{m+1}
    double f = 1.0;     // f_m
    double save_nu = 0.0;
    double save_nu1 = 0.0;
    const double two_over_x = 2.0 / x;
    for (int m = k_start; m > 0; --m) {
        const double f_down = two_over_x * (nu0 + m) * f - f_up;
        f_up = f;
        f = f_down;
        if (m - 1 == k_target + 1) save_nu1 = f;
        if (m - 1 == k_target) save_nu = f;
        if (std::fabs(f) > kBig) {
            f *= kShrink;
            f_up *= kShrink;
            save_nu *= kShrink;
            save_nu1 *= kShrink;
        }
    }
    const BesselPair base = base_pair(parity, x);
    const double a = std::max(std::fabs(f), std::fabs(f_up));
    const double g0 = f / a;
    const double g1 = f_up / a;
    const double scale = (base.j * g0 + base.j_next * g1) / (g0 * g0 + g1 * g1);
    return {scale * (save_nu / a), scale * (save_nu1 / a)};
}

}  // namespace detail

/// J_nu(x) and J_{nu+1}(x) from a single evaluation path.
inline BesselPair bessel_j_pair(HalfIntegerOrder nu, double x) {
    if (!(x >= 0.0)) throw domain_error("bessel_j: x must be >= 0");
    const int t = nu.twice();
    if (x == 0.0) return {t == 0 ? 1.0 : 0.0, 0.0};
    if (detail::use_series(t, x)) return {detail::series_j(t, x), detail::series_j(t + 2, x)};
    if (x >= detail::kHankelMinX && 0.125 * t * t <= 8.0 * x) {
        const auto a = detail::hankel_j(t, x);
        if (a) {
            const auto b = detail::hankel_j(t + 2, x);
            if (b) return {*a, *b};
        }
    }
    return detail::miller_pair(t, x);
}

/// Bessel function of the first kind J_nu(x), x >= 0.
inline double bessel_j(HalfIntegerOrder nu, double x) {
    if (!(x >= 0.0)) throw domain_error("bessel_j: x must be >= 0");
    const int t = nu.twice();
    if (x == 0.0) return t == 0 ? 1.0 : 0.0;
    if (detail::use_series(t, x)) return detail::series_j(t, x);
    if (x >= detail::kHankelMinX && 0.125 * t * t <= 8.0 * x) {
        if (const auto a = detail::hankel_j(t, x)) return *a;
    }
    return detail::miller_pair(t, x).j;
}

/// J_nu'(x) = -J_{nu+1}(x) + (nu/x) J_nu(x).
inline double bessel_j_prime(HalfIntegerOrder nu, double x) {
    if (!(x > 0.0)) throw domain_error("bessel_j_prime: x must be > 0");
    const BesselPair p = bessel_j_pair(nu, x);
    return -p.j_next + (nu.value() / x) * p.j;
}

/// Two-term McMahon estimate beta - (4 nu^2 - 1) / (8 beta),
/// beta = pi (4n + 2nu - 1) / 4.
inline double mcmahon_guess(HalfIntegerOrder nu, int n) {
    if (n < 1) throw domain_error("mcmahon_guess: n must be >= 1");
    const double beta = std::numbers::pi * (4.0 * n + nu.twice() - 1.0) / 4.0;
    const double mu = static_cast<double>(nu.twice()) * nu.twice();
    return beta - (mu - 1.0) / (8.0 * beta);
}

/// x^{1 - d/2} J_{d/2 - 1 + l}(x): the radial factor of the Laplacian's
/// separated solutions in R^d.
inline double ultraspherical_j(int d, int l, double z) {
    if (d < 2 || l < 0) throw domain_error("ultraspherical_j: need d >= 2, l >= 0");
    if (!(z > 0.0)) throw domain_error("ultraspherical_j: z must be > 0");
    const HalfIntegerOrder mu(d - 2 + 2 * l);
    const double j = bessel_j(mu, z);
    if (d == 2) return j;
    return std::pow(z, 1.0 - 0.5 * d) * j;
}

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Safeguarded Newton on J_nu inside a sign-change bracket [a, b].
inline BesselZero refine_zero(HalfIntegerOrder nu, int n, double a, double b, double fa, double fb) {
    const double nu_v = nu.value();
    double x = mcmahon_guess(nu, n);
    if (!(x > a && x < b)) {
        x = (fb != fa) ? a - fa * (b - a) / (fb - fa) : 0.5 * (a + b);
        if (!(x > a && x < b)) x = 0.5 * (a + b);
    }
    const int sa = sign_of(fa);
    for (int it = 0; it < 200; ++it) {
        const BesselPair p = bessel_j_pair(nu, x);
        const double f = p.j;
        if (f == 0.0) break;
        if (sign_of(f) == sa) {
            a = x;
        } else {
            b = x;
        }
        const double df = -p.j_next + (nu_v / x) * f;
        double next = (df != 0.0) ? x - f / df : 0.5 * (a + b);
        // a converged iterate may land exactly on the bracket end just moved
        if (!(next >= a && next <= b)) next = 0.5 * (a + b);
        const double dx = next - x;
        x = next;
        if (std::fabs(dx) <= 1e-13 * x) break;
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * b) break;
        if (it == 199) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "bessel_zero: Newton did not converge for nu=" << nu_v << " n=" << n << " bracket=[" << a
                << ", " << b << "]";
            throw convergence_error(msg.str());
        }
    }
    return {nu, n, x, std::fabs(bessel_j(nu, x))};
}

}  // namespace detail

/// Memoised ascending tables of zeros, one per order. Concurrent readers,
/// serialised extension per order.
class ZeroCache {
public:
    /// n-th positive zero (1-based).
    BesselZero zero(HalfIntegerOrder nu, int n) {
        if (n < 1) throw domain_error("bessel_zero: n must be >= 1");
        Table& t = table(nu);
        {
            std::shared_lock lock(t.mutex);
            if (static_cast<int>(t.zeros.size()) >= n) return t.zeros[n - 1];
        }
        std::unique_lock lock(t.mutex);
        while (static_cast<int>(t.zeros.size()) < n) extend(t, nu);
        return t.zeros[n - 1];
    }

    /// Number of zeros x with x*x < z (strict, on the computed values).
    std::size_t count_squares_below(HalfIntegerOrder nu, double z) {
        if (!(z > 0.0)) return 0;
        // every zero exceeds nu
        if (nu.value() * nu.value() >= z) return 0;
        Table& t = ensure_squares(nu, z);
        std::shared_lock lock(t.mutex);
        return count_sq(t.zeros, z);
    }

    /// Zero values with x*x < z.
    std::vector<double> values_squares_below(HalfIntegerOrder nu, double z) {
        std::vector<double> out;
        if (!(z > 0.0) || nu.value() * nu.value() >= z) return out;
        Table& t = ensure_squares(nu, z);
        std::shared_lock lock(t.mutex);
        const std::size_t n = count_sq(t.zeros, z);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(t.zeros[i].value);
        return out;
    }

    /// Copy of the first n zeros.
    std::vector<BesselZero> first(HalfIntegerOrder nu, int n) {
        if (n <= 0) return {};
        zero(nu, n);
        Table& t = table(nu);
        std::shared_lock lock(t.mutex);
        return {t.zeros.begin(), t.zeros.begin() + n};
    }

    void clear() {
        std::unique_lock lock(map_mutex_);
        tables_.clear();
    }

private:
    struct Table {
        std::shared_mutex mutex;
        std::vector<BesselZero> zeros;
    };

    static std::size_t count_sq(const std::vector<BesselZero>& zs, double z) {
        const auto it =
            std::partition_point(zs.begin(), zs.end(), [z](const BesselZero& b) { return b.value * b.value < z; });
        return static_cast<std::size_t>(it - zs.begin());
    }

    Table& table(HalfIntegerOrder nu) {
        {
            std::shared_lock lock(map_mutex_);
            const auto it = tables_.find(nu.twice());
            if (it != tables_.end()) return *it->second;
        }
        std::unique_lock lock(map_mutex_);
        auto& slot = tables_[nu.twice()];
        if (!slot) slot = std::make_unique<Table>();
        return *slot;
    }

    Table& ensure_squares(HalfIntegerOrder nu, double z) {
        Table& t = table(nu);
        {
            std::shared_lock lock(t.mutex);
            if (!t.zeros.empty() && t.zeros.back().value * t.zeros.back().value >= z) return t;
        }
        std::unique_lock lock(t.mutex);
        while (t.zeros.empty() || t.zeros.back().value * t.zeros.back().value < z) extend(t, nu);
        return t;
    }

    // Appends the next zero. Consecutive zeros of J_nu (nu >= 0) are more than
    // 3.1 apart, so probing in steps of 3 never skips one; J_nu > 0 on
    // (0, x_1) and x_1 > nu.
    static void extend(Table& t, HalfIntegerOrder nu) {
        constexpr double kStep = 3.0;
        constexpr int kMaxProbes = 1 << 20;
        const int n = static_cast<int>(t.zeros.size()) + 1;
        double a = (n == 1) ? nu.value() : t.zeros.back().value;
        const int expected = (n % 2 == 1) ? 1 : -1;
        double fa = (n == 1) ? bessel_j(nu, a) : expected * std::numeric_limits<double>::min();
        if (n == 1 && fa <= 0.0) fa = std::numeric_limits<double>::min();
        for (int probe = 1; probe <= kMaxProbes; ++probe) {
            const double b = a + kStep;
            const double fb = bessel_j(nu, b);
            if (detail::sign_of(fb) != expected) {
                t.zeros.push_back(detail::refine_zero(nu, n, a, b, fa, fb));
                return;
            }
            a = b;
            fa = fb;
        }
        std::ostringstream msg;
        msg.precision(17);
        msg << "bessel_zero: no sign change found for nu=" << nu.value() << " n=" << n << " up to x=" << a;
        throw convergence_error(msg.str());
    }

    std::shared_mutex map_mutex_;
    std::unordered_map<int, std::unique_ptr<Table>> tables_;
};

/// Process-wide zero cache shared by the spectrum routines.
inline ZeroCache& zero_cache() {
    static ZeroCache cache;
    return cache;
}

/// n-th positive zero of J_nu (memoised).
inline BesselZero bessel_zero(HalfIntegerOrder nu, int n) { return zero_cache().zero(nu, n); }

/// CSV dump of the first n_max zeros of J_nu: twice_nu,n,value,residual.
inline void write_zero_table_csv(std::ostream& out, HalfIntegerOrder nu, int n_max, bool header = true) {
    if (header) out << "twice_nu,n,value,residual\n";
    char buf[128];
    for (const BesselZero& z : zero_cache().first(nu, n_max)) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", nu.twice(), z.n, z.value, z.residual);
        out << buf;
    }
}

}  // namespace specbuckle
