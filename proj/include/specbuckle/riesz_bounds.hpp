#pragma once

// Counting functions, Riesz means and the inequality/asymptotic checks run on
// top of them. Every check returns a BoundReport; nothing here throws on a
// failed inequality.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "specbuckle/bound_report.hpp"
#include "specbuckle/errors.hpp"
#include "specbuckle/specfun.hpp"
#include "specbuckle/spectrum.hpp"

namespace specbuckle {

namespace detail {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + c; }
};

inline void require_within(const Spectrum& s, double z, const char* who) {
    if (z > s.z_max()) {
        throw query_error(std::string(who) + ": z=" + std::to_string(z) + " beyond enumeration ceiling " +
                          std::to_string(s.z_max()));
    }
}

}  // namespace detail

/// Geometry entering the Weyl-type formulas.
struct WeylModel {
    int d = 1;
    double volume = 1.0;   // |Omega|
    double surface = 0.0;  // |boundary of Omega|

    static WeylModel unit_ball(int d) {
        const double b = unit_ball_volume(d);
        return {d, b, d * b};
    }
    static WeylModel interval(double L) { return {1, L, 2.0}; }

    /// (2 pi)^{-d} B_d |Omega|
    [[nodiscard]] double leading() const { return std::pow(2.0 * std::numbers::pi, -d) * unit_ball_volume(d) * volume; }

    /// (2 pi)^{1-d} B_{d-1} |dOmega| (1/4 + Gamma(d/2) / (2 sqrt(pi) Gamma(d/2 + 1/2)))
    [[nodiscard]] double second() const {
        const double g = gamma_half(d) / (2.0 * std::sqrt(std::numbers::pi) * gamma_half(d + 1));
        return std::pow(2.0 * std::numbers::pi, 1 - d) * unit_ball_volume(d - 1) * surface * (0.25 + g);
    }

    /// C_d = 4 pi^2 / B_d^{2/d}
    [[nodiscard]] double sum_constant() const {
        return 4.0 * std::numbers::pi * std::numbers::pi / std::pow(unit_ball_volume(d), 2.0 / d);
    }
};

/// N(z) = #{j : sigma_j < z}.
inline std::uint64_t counting_function(const Spectrum& s, double z) {
    detail::require_within(s, z, "counting_function");
    return s.count_below(z);
}

/// R_p(z) = sum_j (z - sigma_j)_+^p.
inline double riesz_mean(const Spectrum& s, double p, double z) {
    if (!(p > 0.0)) throw domain_error("riesz_mean: p must be > 0");
    detail::require_within(s, z, "riesz_mean");
    const std::size_t n = s.distinct_below(z);
    const auto& v = s.values();
    const auto& m = s.multiplicities();
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = z - v[i];
        const double term = (p == 1.0) ? gap : (p == 2.0) ? gap * gap : std::pow(gap, p);
        acc.add(static_cast<double>(m[i]) * term);
    }
    return acc.value();
}

/// R_1(z) = z N(z) - sum_{sigma_j < z} sigma_j from prefix sums.
inline double riesz_mean_1_fast(const Spectrum& s, double z) {
    detail::require_within(s, z, "riesz_mean");
    const long double n = static_cast<long double>(s.count_below(z));
    return static_cast<double>(static_cast<long double>(z) * n - s.weighted_below(z));
}

/// sum_j (z - sigma_j)_+ sigma_j.
inline double weighted_riesz_1(const Spectrum& s, double z) {
    detail::require_within(s, z, "weighted_riesz_1");
    const std::size_t n = s.distinct_below(z);
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(static_cast<double>(s.multiplicities()[i]) * (z - s.values()[i]) * s.values()[i]);
    return acc.value();
}

/// L[R_1](w) = (w - [w]) sigma_{[w]+1} + sum_{j <= [w]} sigma_j.
inline double legendre_transform_R1(const Spectrum& s, double w) {
    if (!(w >= 0.0)) throw domain_error("legendre_transform_R1: w must be >= 0");
    if (w > static_cast<double>(s.count())) {
        throw query_error("legendre_transform_R1: w exceeds the number of enumerated eigenvalues");
    }
    const auto k = static_cast<std::uint64_t>(std::floor(w));
    detail::CompensatedSum acc;
    s.for_first(k, [&](double v, std::uint64_t m) { acc.add(static_cast<double>(m) * v); });
    const double frac = w - static_cast<double>(k);
    if (frac > 0.0) acc.add(frac * s.at(k + 1));
    return acc.value();
}

/// R_1(z) <= 2/(d+2) (2 pi)^{-d} B_d |Omega| z^{1 + d/2}.
inline BoundReport bly_upper_check(const Spectrum& s, const WeylModel& model, double z) {
    BoundReport r;
    r.name = "R1 upper bound";
    r.lhs = riesz_mean(s, 1.0, z);
    r.rhs = 2.0 / (model.d + 2) * model.leading() * std::pow(z, 1.0 + 0.5 * model.d);
    r.margin = r.rhs - r.lhs;
    r.pass = r.lhs <= r.rhs;
    r.param("d", model.d).param("z", z);
    return r;
}

/// (d+2)/d (1/k) sum_{j<=k} sigma_j >= C_d (k / |Omega|)^{2/d}.
inline BoundReport sum_lower_check(const Spectrum& s, const WeylModel& model, std::uint64_t k) {
    if (k < 1) throw domain_error("sum_lower_check: k must be >= 1");
    const double kd = static_cast<double>(k);
    BoundReport r;
    r.name = "eigenvalue sum lower bound";
    r.lhs = (model.d + 2.0) / model.d * legendre_transform_R1(s, kd) / kd;
    r.rhs = model.sum_constant() * std::pow(kd / model.volume, 2.0 / model.d);
    r.margin = r.lhs - r.rhs;
    r.pass = r.lhs >= r.rhs;
    r.param("d", model.d).param("k", kd);
    return r;
}

/// L[R_1](w) >= d/(d+2) C_d w (w / |Omega|)^{2/d}: the Legendre dual of the
/// R_1 upper bound.
inline BoundReport legendre_dual_check(const Spectrum& s, const WeylModel& model, double w) {
    BoundReport r;
    r.name = "Legendre dual of R1 upper bound";
    r.lhs = legendre_transform_R1(s, w);
    r.rhs = model.d / (model.d + 2.0) * model.sum_constant() * w * std::pow(w / model.volume, 2.0 / model.d);
    r.margin = r.lhs - r.rhs;
    r.pass = r.lhs >= r.rhs;
    r.param("d", model.d).param("w", w);
    return r;
}

struct TwoTermModel {
    double n_model = 0.0;
    double r1_model = 0.0;
};

/// N ~ A z^{d/2} - B z^{(d-1)/2},
/// R_1 ~ 2/(d+2) A z^{d/2+1} - 2/(d+1) B z^{(d+1)/2}.
inline TwoTermModel weyl_two_term_model(const WeylModel& model, double z) {
    const double d = model.d;
    const double a = model.leading();
    const double b = model.second();
    return {a * std::pow(z, 0.5 * d) - b * std::pow(z, 0.5 * (d - 1)),
            2.0 / (d + 2) * a * std::pow(z, 0.5 * d + 1) - 2.0 / (d + 1) * b * std::pow(z, 0.5 * (d + 1))};
}

enum class FitTarget { Counting, RieszMean1 };

struct AsymptoticFit {
    double c0_hat = 0.0;  // fixed leading coefficient of the fitted quantity
    double c1_hat = 0.0;  // fitted coefficient of z^{(d-1)/2} (N) or z^{(d+1)/2} (R_1)
    double z_lo = 0.0;
    double z_hi = 0.0;
    double residual_rms = 0.0;  // spread of the per-window means about c1_hat
    std::vector<double> window_means;
};

/// Second-order coefficient from geometric windows over [z_lo, z_hi]. In each
/// window the scaled remainder (F(z) - c0 z^a) / z^b is averaged over
/// geometrically spaced points; c1_hat is the mean over windows. Sample points
/// are shifted by pi * 1e-3 so they do not land on eigenvalues.
inline AsymptoticFit asymptotic_fit(const Spectrum& s, const WeylModel& model, double z_lo, double z_hi, int n_windows,
                                    FitTarget target = FitTarget::Counting, int samples_per_window = 256) {
    if (n_windows < 4) throw domain_error("asymptotic_fit: need at least 4 windows");
    if (!(z_lo > 0.0) || !(z_hi > z_lo)) throw domain_error("asymptotic_fit: degenerate window");
    if (samples_per_window < 1) throw domain_error("asymptotic_fit: need at least one sample per window");
    detail::require_within(s, z_hi, "asymptotic_fit");
    const double d = model.d;
    const bool counting = target == FitTarget::Counting;
    const double c0 = counting ? model.leading() : 2.0 / (d + 2) * model.leading();
    const double a = counting ? 0.5 * d : 0.5 * d + 1.0;
    const double b = counting ? 0.5 * (d - 1) : 0.5 * (d + 1);

    AsymptoticFit fit;
    fit.c0_hat = c0;
    fit.z_lo = z_lo;
    fit.z_hi = z_hi;
    const double log_lo = std::log(z_lo);
    const double step = (std::log(z_hi) - log_lo) / n_windows;
    for (int w = 0; w < n_windows; ++w) {
        detail::CompensatedSum acc;
        for (int i = 0; i < samples_per_window; ++i) {
            const double u = log_lo + step * (w + (i + 0.5) / samples_per_window);
            const double z = std::min(std::exp(u) + std::numbers::pi * 1e-3, z_hi);
            const double f = counting ? static_cast<double>(s.count_below(z)) : riesz_mean_1_fast(s, z);
            acc.add((f - c0 * std::pow(z, a)) / std::pow(z, b));
        }
        fit.window_means.push_back(acc.value() / samples_per_window);
    }
    detail::CompensatedSum mean;
    for (double m : fit.window_means) mean.add(m);
    fit.c1_hat = mean.value() / n_windows;
    double ss = 0.0;
    for (double m : fit.window_means) ss += (m - fit.c1_hat) * (m - fit.c1_hat);
    fit.residual_rms = std::sqrt(ss / n_windows);
    return fit;
}

enum class Relation {
    ChainLower,        // lambda_j <= sqrt(Lambda_j)
    ChainUpper,        // sqrt(Lambda_j) <= sigma_j
    ChainStrict,       // lambda_j < sqrt(Lambda_j) < sigma_j
    Payne0,            // Lambda_1 >= lambda_1 sigma_1
    GeneralizedPayne,  // Lambda_j >= max(lambda_1 sigma_j, lambda_j sigma_1)
    Payne2,            // lambda_2 <= sigma_1
    ProductStrict,     // Lambda_j > lambda_j sigma_j
    DirichletBelowBuckling,  // lambda_j <= sigma_j
};

inline std::string to_string(Relation r) {
    switch (r) {
        case Relation::ChainLower: return "lambda_j <= sqrt(Lambda_j)";
        case Relation::ChainUpper: return "sqrt(Lambda_j) <= sigma_j";
        case Relation::ChainStrict: return "lambda_j < sqrt(Lambda_j) < sigma_j";
        case Relation::Payne0: return "Lambda_1 >= lambda_1 sigma_1";
        case Relation::GeneralizedPayne: return "Lambda_j >= max(lambda_1 sigma_j, lambda_j sigma_1)";
        case Relation::Payne2: return "lambda_2 <= sigma_1";
        case Relation::ProductStrict: return "Lambda_j > lambda_j sigma_j";
        case Relation::DirichletBelowBuckling: return "lambda_j <= sigma_j";
    }
    return "unknown";
}

/// Pointwise relations between the three spectra at index j
/// (multiplicity-expanded). Lambda may be null for the relations that do not
/// need it.
inline BoundReport chain_and_payne_checks(const Spectrum& sigma, const Spectrum& lambda, const Spectrum* Lambda,
                                          Relation relation, std::uint64_t j) {
    if (j < 1) throw domain_error("chain_and_payne_checks: j must be >= 1");
    auto need_big = [&]() -> const Spectrum& {
        if (!Lambda) throw query_error("chain_and_payne_checks: relation needs the bilaplacian spectrum");
        return *Lambda;
    };
    BoundReport r;
    r.name = to_string(relation);
    r.param("j", static_cast<double>(j));
    switch (relation) {
        case Relation::ChainLower: {
            r.lhs = lambda.at(j);
            r.rhs = std::sqrt(need_big().at(j));
            r.margin = r.rhs - r.lhs;
            r.pass = r.lhs <= r.rhs;
            break;
        }
        case Relation::ChainUpper: {
            r.lhs = std::sqrt(need_big().at(j));
            r.rhs = sigma.at(j);
            r.margin = r.rhs - r.lhs;
            r.pass = r.lhs <= r.rhs;
            break;
        }
        case Relation::ChainStrict: {
            const double mid = std::sqrt(need_big().at(j));
            r.lhs = lambda.at(j);
            r.rhs = sigma.at(j);
            r.param("sqrt_Lambda_j", mid);
            r.margin = std::min(mid - r.lhs, r.rhs - mid);
            r.pass = r.lhs < mid && mid < r.rhs;
            break;
        }
        case Relation::Payne0: {
            r.lhs = lambda.at(1) * sigma.at(1);
            r.rhs = need_big().at(1);
            r.margin = r.rhs - r.lhs;
            r.pass = r.rhs >= r.lhs;
            break;
        }
        case Relation::GeneralizedPayne: {
            r.lhs = std::max(lambda.at(1) * sigma.at(j), lambda.at(j) * sigma.at(1));
            r.rhs = need_big().at(j);
            r.margin = r.rhs - r.lhs;
            r.pass = r.rhs >= r.lhs;
            break;
        }
        case Relation::Payne2: {
            r.lhs = lambda.at(2);
            r.rhs = sigma.at(1);
            r.margin = r.rhs - r.lhs;
            r.pass = r.lhs <= r.rhs;
            break;
        }
        case Relation::ProductStrict: {
            r.lhs = lambda.at(j) * sigma.at(j);
            r.rhs = need_big().at(j);
            r.margin = r.rhs - r.lhs;
            r.pass = r.rhs > r.lhs;
            break;
        }
        case Relation::DirichletBelowBuckling: {
            r.lhs = lambda.at(j);
            r.rhs = sigma.at(j);
            r.margin = r.rhs - r.lhs;
            r.pass = r.lhs <= r.rhs;
            break;
        }
    }
    return r;
}

struct CorollaryReport {
    BoundReport riesz;          // sum (z - sigma_j)_+ sigma_j >= sum_{j<=k} (z lambda_j - Lambda_j)
    BoundReport averaged;       // (1/k) sum (sigma_j^2 - Lambda_j) <= sigma_{k+1} (1/k) sum (sigma_j - lambda_j)
    BoundReport squared_riesz;  // R_2(z) >= sum (lambda_j^2/Lambda_j) (z - Lambda_j/lambda_j)_+^2
    [[nodiscard]] bool pass() const { return riesz.pass && averaged.pass && squared_riesz.pass; }
    [[nodiscard]] std::vector<BoundReport> parts() const { return {riesz, averaged, squared_riesz}; }
};

inline CorollaryReport corollary_checks(const Spectrum& sigma, const Spectrum& lambda, const Spectrum& Lambda, double z,
                                        std::uint64_t k) {
    if (k < 1) throw domain_error("corollary_checks: k must be >= 1");
    if (sigma.count() < k + 1 || lambda.count() < k || Lambda.count() < k) {
        throw query_error("corollary_checks: spectra too short for k=" + std::to_string(k));
    }
    CorollaryReport out;
    const double kd = static_cast<double>(k);

    {
        BoundReport& r = out.riesz;
        r.name = "weighted Riesz mean vs Dirichlet/bilaplacian sum";
        r.lhs = weighted_riesz_1(sigma, z);
        detail::CompensatedSum acc;
        for (std::uint64_t j = 1; j <= k; ++j) acc.add(z * lambda.at(j) - Lambda.at(j));
        r.rhs = acc.value();
        r.margin = r.lhs - r.rhs;
        r.pass = r.lhs >= r.rhs;
        r.param("z", z).param("k", kd);
    }
    {
        BoundReport& r = out.averaged;
        r.name = "averaged sigma^2 - Lambda bound";
        detail::CompensatedSum a;
        detail::CompensatedSum b;
        for (std::uint64_t j = 1; j <= k; ++j) {
            const double s = sigma.at(j);
            a.add(s * s - Lambda.at(j));
            b.add(s - lambda.at(j));
        }
        r.lhs = a.value() / kd;
        r.rhs = sigma.at(k + 1) * b.value() / kd;
        r.margin = r.rhs - r.lhs;
        r.pass = r.lhs <= r.rhs;
        r.param("k", kd);
    }
    {
        BoundReport& r = out.squared_riesz;
        r.name = "squared Riesz mean lower bound";
        r.lhs = riesz_mean(sigma, 2.0, z);
        const std::uint64_t n = std::min(lambda.count(), Lambda.count());
        detail::CompensatedSum acc;
        bool closed = false;
        for (std::uint64_t j = 1; j <= n; ++j) {
            const double lam = lambda.at(j);
            const double big = Lambda.at(j);
            const double ratio = big / lam;
            if (ratio >= z) {
                // ratio >= sigma_j grows with j in every tested spectrum; still
                // scan to the end so a non-monotone tail is not missed
                closed = true;
                continue;
            }
            closed = false;
            acc.add(lam * lam / big * (z - ratio) * (z - ratio));
        }
        if (!closed) throw query_error("corollary_checks: spectra end before Lambda_j/lambda_j reaches z");
        r.rhs = acc.value();
        r.margin = r.lhs - r.rhs;
        r.pass = r.lhs >= r.rhs;
        r.param("z", z);
    }
    return out;
}

struct PhiNorms {
    double sup = 1.0;        // ||phi||_inf
    double l2sq = 1.0;       // ||phi||_2^2
    double grad_l2sq = 1.0;  // ||grad phi||_2^2
};

/// ||phi||_inf^2 sum (z - sigma_j)_+ sigma_j >=
///   2 d B_d ||phi||^2 / ((d+2)(d+4)) (2pi)^{-d} z^{2+d/2}
///   - B_d (2pi)^{-d} ||grad phi||^2 z^{1+d/2} - B_d (2pi)^{-d} z^{d/2}
inline BoundReport phi_bound_check(const Spectrum& sigma, const WeylModel& model, double z, const PhiNorms& phi) {
    if (!(phi.sup > 0.0) || !(phi.l2sq > 0.0) || !(phi.grad_l2sq > 0.0)) {
        throw domain_error("phi_bound_check: norms must be positive");
    }
    const double d = model.d;
    const double c = unit_ball_volume(model.d) * std::pow(2.0 * std::numbers::pi, -d);
    BoundReport r;
    r.name = "cut-off plane wave lower bound";
    r.lhs = phi.sup * phi.sup * weighted_riesz_1(sigma, z);
    r.rhs = 2.0 * d * phi.l2sq / ((d + 2) * (d + 4)) * c * std::pow(z, 2.0 + 0.5 * d) -
            c * phi.grad_l2sq * std::pow(z, 1.0 + 0.5 * d) - c * std::pow(z, 0.5 * d);
    r.margin = r.lhs - r.rhs;
    r.pass = r.lhs >= r.rhs;
    r.param("d", d).param("z", z).param("sup", phi.sup).param("l2sq", phi.l2sq).param("grad_l2sq", phi.grad_l2sq);
    return r;
}

struct TauberianRow {
    double z = 0.0;
    double primitive_ratio = 0.0;   // R_q(z) over its Weyl asymptote
    double derivative_ratio = 0.0;  // q R_{q-1}(z) over the derivative of that asymptote
};

/// Side-by-side check that R_q and its derivative q R_{q-1} (R_0 = N) both
/// follow their Weyl asymptotes c_q z^{d/2+q} and (d/2+q) c_q z^{d/2+q-1},
/// c_q = (2pi)^{-d} B_d |Omega| q! Gamma(d/2+1) / Gamma(d/2+q+1).
inline std::vector<TauberianRow> tauberian_diagnostic(const Spectrum& s, const WeylModel& model, int q,
                                                      const std::vector<double>& z_grid) {
    if (q < 1) throw domain_error("tauberian_diagnostic: q must be >= 1");
    const double p = 0.5 * model.d + q - 1;  // exponent of the derivative
    const double cq =
        model.leading() * gamma_half(2 * q + 2) * gamma_half(model.d + 2) / gamma_half(model.d + 2 * q + 2);
    std::vector<TauberianRow> out;
    out.reserve(z_grid.size());
    for (double z : z_grid) {
        detail::require_within(s, z, "tauberian_diagnostic");
        const double big = riesz_mean(s, q, z);
        const double small = (q == 1) ? static_cast<double>(s.count_below(z)) : q * riesz_mean(s, q - 1, z);
        out.push_back({z, big / (cq * std::pow(z, p + 1)), small / ((p + 1) * cq * std::pow(z, p))});
    }
    return out;
}

/// z^{-2-d/2} sum (z^2 - Lambda_j)_+ against 4/(d+4) (2pi)^{-d} B_d |Omega| for
/// d = 1, i.e. 4 L / (5 pi). Passes when within rel_tol.
inline BoundReport bilaplacian_riesz_1d_check(const Spectrum& Lambda, double z, double length = 1.0,
                                              double rel_tol = 0.01) {
    if (!(z > 0.0)) throw domain_error("bilaplacian_riesz_1d_check: z must be > 0");
    detail::require_within(Lambda, z * z, "bilaplacian_riesz_1d_check");
    BoundReport r;
    r.name = "bilaplacian Riesz mean limit";
    r.lhs = riesz_mean(Lambda, 1.0, z * z) / std::pow(z, 2.5);
    r.rhs = 4.0 * length / (5.0 * std::numbers::pi);
    r.margin = rel_tol - std::fabs(r.lhs / r.rhs - 1.0);
    r.pass = r.margin >= 0.0;
    r.param("z", z).param("ratio", r.lhs / r.rhs).param("rel_tol", rel_tol);
    return r;
}

/// N(z) z^{-d/2} against the Weyl constant, within rel_tol.
inline BoundReport weyl_counting_check(const Spectrum& s, const WeylModel& model, double z, double rel_tol) {
    BoundReport r;
    r.name = "Weyl limit of N";
    r.lhs = static_cast<double>(counting_function(s, z)) * std::pow(z, -0.5 * model.d);
    r.rhs = model.leading();
    r.margin = rel_tol - std::fabs(r.lhs / r.rhs - 1.0);
    r.pass = r.margin >= 0.0;
    r.param("d", model.d).param("z", z).param("ratio", r.lhs / r.rhs).param("rel_tol", rel_tol);
    return r;
}

/// R_2(z) z^{-2-d/2} against 8/((d+2)(d+4)) times the Weyl constant.
inline BoundReport weyl_r2_check(const Spectrum& s, const WeylModel& model, double z, double rel_tol) {
    BoundReport r;
    r.name = "Weyl limit of R2";
    r.lhs = riesz_mean(s, 2.0, z) * std::pow(z, -2.0 - 0.5 * model.d);
    r.rhs = 8.0 / ((model.d + 2.0) * (model.d + 4.0)) * model.leading();
    r.margin = rel_tol - std::fabs(r.lhs / r.rhs - 1.0);
    r.pass = r.margin >= 0.0;
    r.param("d", model.d).param("z", z).param("ratio", r.lhs / r.rhs).param("rel_tol", rel_tol);
    return r;
}

namespace detail {

// Composite Simpson for a smooth integrand on [a, b].
template <class F>
double simpson(F&& f, double a, double b, int panels) {
    if (b <= a) return 0.0;
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    CompensatedSum acc;
    acc.add(f(a));
    acc.add(f(b));
    for (int i = 1; i < panels; ++i) acc.add((i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h));
    return acc.value() * h / 3.0;
}

}  // namespace detail

/// p int_0^z (z - t)^{p-1} N(t) dt by Simpson on each interval where N is
/// constant, after t = z - u^2 (which removes the endpoint singularity for
/// p < 1 and smooths it for p > 1).
inline double riesz_mean_quadrature(const Spectrum& s, double p, double z, int panels_per_piece = 8) {
    if (!(p > 0.0)) throw domain_error("riesz_mean_quadrature: p must be > 0");
    detail::require_within(s, z, "riesz_mean_quadrature");
    const std::size_t n = s.distinct_below(z);
    const auto& v = s.values();
    detail::CompensatedSum acc;
    std::uint64_t count = 0;
    auto integrand = [p](double u) { return 2.0 * p * std::pow(u, 2.0 * p - 1.0); };
    for (std::size_t i = 0; i < n; ++i) {
        count += s.multiplicities()[i];
        const double a = v[i];
        const double b = (i + 1 < n) ? v[i + 1] : z;
        // t in [a, b]  <->  u in [sqrt(z - b), sqrt(z - a)]
        acc.add(static_cast<double>(count) *
                detail::simpson(integrand, std::sqrt(z - b), std::sqrt(z - a), panels_per_piece));
    }
    return acc.value();
}

/// 2 int_0^z R_1(t) dt with Simpson on each interval between eigenvalues.
inline double r2_from_r1_quadrature(const Spectrum& s, double z, int panels_per_piece = 8) {
    detail::require_within(s, z, "r2_from_r1_quadrature");
    const std::size_t n = s.distinct_below(z);
    const auto& v = s.values();
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = v[i];
        const double b = (i + 1 < n) ? v[i + 1] : z;
        acc.add(2.0 * detail::simpson([&](double t) { return riesz_mean_1_fast(s, t); }, a, b, panels_per_piece));
    }
    return acc.value();
}

}  // namespace specbuckle
