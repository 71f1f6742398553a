#pragma once

// Finite-dimensional check of the averaged variational principle: for the
// generalised eigenpairs (omega_j, psi_j) of (form, metric) and any weighted
// family of trial vectors f_zeta,
//
//   sum_j (z - omega_j)_+ sum_zeta w_zeta <psi_j, f_zeta>^2
//       >= sum_{zeta in m0} w_zeta (z <f_zeta, f_zeta> - Q(f_zeta, f_zeta)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "specbuckle/bound_report.hpp"
#include "specbuckle/errors.hpp"
#include "specbuckle/parallel.hpp"

namespace specbuckle {

struct FiniteModel {
    Eigen::MatrixXd form;    // Q
    Eigen::MatrixXd metric;  // inner product
    std::vector<Eigen::VectorXd> trials;
    std::vector<double> weights;
    std::vector<std::size_t> m0;  // indices into trials

    [[nodiscard]] Eigen::Index dim() const { return form.rows(); }
};

struct EigenPairs {
    Eigen::VectorXd omegas;  // ascending
    Eigen::MatrixXd psis;    // columns, metric-orthonormal
};

namespace detail {

inline void validate(const FiniteModel& m) {
    const Eigen::Index n = m.form.rows();
    if (n < 1 || m.form.cols() != n || m.metric.rows() != n || m.metric.cols() != n) {
        throw domain_error("FiniteModel: form and metric must be square of equal size");
    }
    const double tol = 1e-12 * std::max(1.0, m.form.cwiseAbs().maxCoeff());
    if ((m.form - m.form.transpose()).cwiseAbs().maxCoeff() > tol) throw domain_error("FiniteModel: form not symmetric");
    if ((m.metric - m.metric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.metric.cwiseAbs().maxCoeff())) {
        throw domain_error("FiniteModel: metric not symmetric");
    }
    if (m.trials.size() != m.weights.size()) throw domain_error("FiniteModel: trials/weights size mismatch");
    for (const auto& f : m.trials) {
        if (f.size() != n) throw domain_error("FiniteModel: trial vector of wrong length");
    }
    for (double w : m.weights) {
        if (!(w >= 0.0)) throw domain_error("FiniteModel: negative weight");
    }
    for (std::size_t i : m.m0) {
        if (i >= m.trials.size()) throw domain_error("FiniteModel: m0 index out of range");
    }
}

}  // namespace detail

/// Generalised eigenpairs of (form, metric).
inline EigenPairs solve_pairs(const FiniteModel& m) {
    detail::validate(m);
    Eigen::LLT<Eigen::MatrixXd> llt(m.metric);
    if (llt.info() != Eigen::Success) throw domain_error("solve_pairs: metric is not positive definite");
    const Eigen::VectorXd metric_eigs = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.metric, Eigen::EigenvaluesOnly).eigenvalues();
    if (!(metric_eigs.minCoeff() > 1e-12 * metric_eigs.maxCoeff())) {
        throw domain_error("solve_pairs: metric is numerically singular");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(m.form, m.metric);
    if (es.info() != Eigen::Success) throw convergence_error("solve_pairs: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// Both sides of the averaged variational inequality at z. Passes when
/// lhs >= rhs - 1e-9 * scale, scale = max(1, sum_zeta w (|z| <f,f> + |Q(f,f)|)).
/// margin is (lhs - rhs) / scale.
inline BoundReport avp_verify(const FiniteModel& m, const EigenPairs& pairs, double z) {
    detail::validate(m);
    const Eigen::Index n = m.dim();
    double lhs = 0.0;
    double scale = 0.0;
    std::vector<Eigen::VectorXd> mf(m.trials.size());
    for (std::size_t t = 0; t < m.trials.size(); ++t) {
        mf[t] = m.metric * m.trials[t];
        scale += m.weights[t] * (std::fabs(z) * m.trials[t].dot(mf[t]) + std::fabs(m.trials[t].dot(m.form * m.trials[t])));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const double gap = z - pairs.omegas(j);
        if (gap <= 0.0) continue;
        double proj = 0.0;
        for (std::size_t t = 0; t < m.trials.size(); ++t) {
            const double c = pairs.psis.col(j).dot(mf[t]);
            proj += m.weights[t] * c * c;
        }
        lhs += gap * proj;
    }
    double rhs = 0.0;
    for (std::size_t t : m.m0) {
        const Eigen::VectorXd& f = m.trials[t];
        rhs += m.weights[t] * (z * f.dot(mf[t]) - f.dot(m.form * f));
    }
    scale = std::max(1.0, scale);
    BoundReport r;
    r.name = "averaged variational principle";
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = (lhs - rhs) / scale;
    r.pass = lhs >= rhs - 1e-9 * scale;
    r.param("dim", static_cast<double>(n)).param("z", z).param("scale", scale);
    return r;
}

inline BoundReport avp_verify(const FiniteModel& m, double z) { return avp_verify(m, solve_pairs(m), z); }

/// Trial indices with non-negative deficit z <f,f> - Q(f,f); the subset that
/// maximises the right-hand side.
inline std::vector<std::size_t> optimal_m0(const FiniteModel& m, double z) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < m.trials.size(); ++t) {
        const Eigen::VectorXd& f = m.trials[t];
        if (z * f.dot(m.metric * f) - f.dot(m.form * f) >= 0.0) out.push_back(t);
    }
    return out;
}

/// Uniform [0, 1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// form = A^T A + shift I (shift in [0, 1)), metric = B^T B + I, entries of A,
/// B and the trials uniform in [-1, 1); weights uniform in [0, 1); each trial
/// enters m0 with probability 1/2.
inline FiniteModel random_model(std::mt19937_64& rng, int dim, int n_trials) {
    if (dim < 1 || n_trials < 0) throw domain_error("random_model: need dim >= 1, n_trials >= 0");
    auto fill = [&](Eigen::MatrixXd& a) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = 2.0 * unit_uniform(rng) - 1.0;
        }
    };
    Eigen::MatrixXd a(dim, dim);
    Eigen::MatrixXd b(dim, dim);
    fill(a);
    fill(b);
    const double shift = unit_uniform(rng);
    FiniteModel m;
    m.form = a.transpose() * a + shift * Eigen::MatrixXd::Identity(dim, dim);
    m.metric = b.transpose() * b + Eigen::MatrixXd::Identity(dim, dim);
    // symmetrise exactly
    m.form = 0.5 * (m.form + m.form.transpose()).eval();
    m.metric = 0.5 * (m.metric + m.metric.transpose()).eval();
    m.trials.resize(static_cast<std::size_t>(n_trials));
    m.weights.resize(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
        Eigen::VectorXd f(dim);
        for (int i = 0; i < dim; ++i) f(i) = 2.0 * unit_uniform(rng) - 1.0;
        m.trials[t] = std::move(f);
        m.weights[t] = unit_uniform(rng);
        if (unit_uniform(rng) < 0.5) m.m0.push_back(static_cast<std::size_t>(t));
    }
    return m;
}

struct AvpSummary {
    std::uint64_t models = 0;
    std::uint64_t failures = 0;
    double worst_margin = std::numeric_limits<double>::infinity();  // smallest (lhs - rhs) / scale
    std::uint64_t worst_model = 0;
};

/// Runs n_models independent random models. Model i draws from its own
/// generator seeded with (seed, i), so results do not depend on the thread
/// count. z is uniform in [omega_1, 2 omega_n].
inline AvpSummary avp_suite(std::uint64_t seed, int dim, int n_models, int n_trials,
                            std::size_t threads = default_threads()) {
    if (n_models < 0) throw domain_error("avp_suite: negative model count");
    std::vector<double> margins(static_cast<std::size_t>(n_models));
    std::vector<char> passed(static_cast<std::size_t>(n_models));
    parallel_for(
        margins.size(),
        [&](std::size_t i) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
            std::mt19937_64 rng(seq);
            const FiniteModel m = random_model(rng, dim, n_trials);
            const EigenPairs pairs = solve_pairs(m);
            const double lo = pairs.omegas(0);
            const double hi = 2.0 * pairs.omegas(pairs.omegas.size() - 1);
            const double z = lo + (hi - lo) * unit_uniform(rng);
            const BoundReport r = avp_verify(m, pairs, z);
            margins[i] = r.margin;
            passed[i] = r.pass ? 1 : 0;
        },
        threads);
    AvpSummary s;
    s.models = static_cast<std::uint64_t>(n_models);
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (!passed[i]) ++s.failures;
        if (margins[i] < s.worst_margin) {
            s.worst_margin = margins[i];
            s.worst_model = i;
        }
    }
    return s;
}

}  // namespace specbuckle
