#pragma once

#include <string>
#include <utility>
#include <vector>

namespace specbuckle {

/// Outcome of one inequality or asymptotic check. `margin` is signed so that
/// a non-negative value means the inequality holds (strict relations also
/// require it to be non-zero).
struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> params;  // insertion order is kept in output
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;

    BoundReport& param(std::string key, double value) {
        params.emplace_back(std::move(key), value);
        return *this;
    }
};

inline bool all_pass(const std::vector<BoundReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass) return false;
    }
    return true;
}

}  // namespace specbuckle
