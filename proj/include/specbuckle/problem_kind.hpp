#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace specbuckle {

enum class ProblemKind { Buckling, DirichletLaplacian, DirichletBilaplacian };

inline std::string_view to_string(ProblemKind k) {
    switch (k) {
        case ProblemKind::Buckling: return "buckling";
        case ProblemKind::DirichletLaplacian: return "laplacian";
        case ProblemKind::DirichletBilaplacian: return "bilaplacian";
    }
    return "unknown";
}

inline std::optional<ProblemKind> parse_problem_kind(std::string_view s) {
    if (s == "buckling") return ProblemKind::Buckling;
    if (s == "laplacian") return ProblemKind::DirichletLaplacian;
    if (s == "bilaplacian") return ProblemKind::DirichletBilaplacian;
    return std::nullopt;
}

}  // namespace specbuckle
