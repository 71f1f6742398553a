#pragma once

// JSON and text serialisation shared by the command-line tool. Objects keep
// insertion order so that repeated runs produce identical bytes.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "specbuckle/avp_finite.hpp"
#include "specbuckle/bound_report.hpp"
#include "specbuckle/riesz_bounds.hpp"

namespace specbuckle {

using json = nlohmann::ordered_json;

inline constexpr int kJsonSchema = 1;

inline json to_json(const BoundReport& r) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    return json{{"name", r.name}, {"params", params}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"pass", r.pass}};
}

inline json verification_report(const std::string& domain, const std::vector<BoundReport>& reports) {
    json checks = json::array();
    std::size_t failed = 0;
    for (const auto& r : reports) {
        checks.push_back(to_json(r));
        if (!r.pass) ++failed;
    }
    return json{{"schema", kJsonSchema},
                {"domain", domain},
                {"checks", checks},
                {"passed", reports.size() - failed},
                {"failed", failed}};
}

inline json to_json(const AsymptoticFit& f) {
    return json{{"c0_hat", f.c0_hat},
                {"c1_hat", f.c1_hat},
                {"window", {f.z_lo, f.z_hi}},
                {"residual_rms", f.residual_rms},
                {"window_means", f.window_means}};
}

inline json to_json(const AvpSummary& s) {
    return json{{"schema", kJsonSchema},
                {"models", s.models},
                {"failures", s.failures},
                {"worst_margin", s.worst_margin},
                {"worst_model", s.worst_model}};
}

/// %.17g, enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_bound_reports_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
    out << "name,lhs,rhs,margin,pass\n";
    for (const auto& r : reports) {
        out << '"' << r.name << "\"," << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
            << format_double(r.margin) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

/// Two whitespace-separated columns per line.
inline void write_plotdata(std::ostream& out, const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
}

}  // namespace specbuckle
