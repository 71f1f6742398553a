#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "specbuckle/errors.hpp"
#include "specbuckle/problem_kind.hpp"

namespace specbuckle {

struct SpectrumMeta {
    std::string domain;  // "ball" or "interval"
    ProblemKind kind = ProblemKind::Buckling;
    int d = 1;
    double z_max = 0.0;  // every eigenvalue below z_max is present
};

/// Ascending eigenvalues with multiplicities. Index j (1-based) refers to the
/// multiplicity-expanded sequence; the expansion is never materialised.
class Spectrum {
public:
    Spectrum() = default;

    Spectrum(SpectrumMeta meta, std::vector<double> values, std::vector<std::uint64_t> multiplicities)
        : meta_(std::move(meta)), values_(std::move(values)), mult_(std::move(multiplicities)) {
        if (values_.size() != mult_.size()) throw domain_error("Spectrum: values/multiplicities size mismatch");
        cumulative_.reserve(values_.size());
        weighted_.reserve(values_.size());
        std::uint64_t c = 0;
        long double w = 0.0L;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (mult_[i] == 0) throw domain_error("Spectrum: zero multiplicity");
            if (!(values_[i] > 0.0)) throw domain_error("Spectrum: non-positive eigenvalue");
            if (i > 0 && values_[i] < values_[i - 1]) throw domain_error("Spectrum: values not ascending");
            if (values_[i] >= meta_.z_max) throw domain_error("Spectrum: value at or above z_max");
            c += mult_[i];
            w += static_cast<long double>(mult_[i]) * values_[i];
            cumulative_.push_back(c);
            weighted_.push_back(w);
        }
    }

    [[nodiscard]] const SpectrumMeta& meta() const { return meta_; }
    [[nodiscard]] double z_max() const { return meta_.z_max; }
    [[nodiscard]] std::size_t distinct() const { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const std::vector<std::uint64_t>& multiplicities() const { return mult_; }

    /// Total count, multiplicities included.
    [[nodiscard]] std::uint64_t count() const { return cumulative_.empty() ? 0 : cumulative_.back(); }

    /// j-th eigenvalue (1-based) of the expanded sequence.
    [[nodiscard]] double at(std::uint64_t j) const {
        if (j < 1 || j > count()) {
            throw query_error("Spectrum: index " + std::to_string(j) + " outside 1.." + std::to_string(count()));
        }
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), j);
        return values_[static_cast<std::size_t>(it - cumulative_.begin())];
    }

    /// Number of distinct values strictly below z.
    [[nodiscard]] std::size_t distinct_below(double z) const {
        return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), z) - values_.begin());
    }

    /// Expanded count strictly below z, without the z_max guard.
    [[nodiscard]] std::uint64_t count_below(double z) const {
        const std::size_t i = distinct_below(z);
        return i == 0 ? 0 : cumulative_[i - 1];
    }

    /// Sum of multiplicity * value over values strictly below z.
    [[nodiscard]] long double weighted_below(double z) const {
        const std::size_t i = distinct_below(z);
        return i == 0 ? 0.0L : weighted_[i - 1];
    }

    /// Calls fn(value, multiplicity) for the first k expanded entries, grouping
    /// repeated values.
    template <class Fn>
    void for_first(std::uint64_t k, Fn&& fn) const {
        if (k > count()) throw query_error("Spectrum: asked for " + std::to_string(k) + " of " + std::to_string(count()));
        std::uint64_t done = 0;
        for (std::size_t i = 0; i < values_.size() && done < k; ++i) {
            const std::uint64_t take = std::min<std::uint64_t>(mult_[i], k - done);
            fn(values_[i], take);
            done += take;
        }
    }

private:
    SpectrumMeta meta_;
    std::vector<double> values_;
    std::vector<std::uint64_t> mult_;
    std::vector<std::uint64_t> cumulative_;
    std::vector<long double> weighted_;
};

}  // namespace specbuckle
