#pragma once

// Command-line front end: argument parsing into RunConfig and the command
// dispatcher. Exit codes: 0 success, 1 a verification check failed, 2 usage
// error, 3 internal failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specbuckle/avp_finite.hpp"
#include "specbuckle/ball_spectra.hpp"
#include "specbuckle/interval_spectra.hpp"
#include "specbuckle/report_io.hpp"
#include "specbuckle/riesz_bounds.hpp"

namespace specbuckle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;  // a solver failed to converge, I/O failure

enum class Command { Spectrum, Counting, Riesz, Verify, Asymptotics, Avp };
enum class Domain { Ball, Interval };
enum class Format { Csv, Json, Plotdata };

struct RunConfig {
    Command command = Command::Spectrum;
    Domain domain = Domain::Interval;
    int d = 2;
    double length_or_radius = 1.0;
    ProblemKind kind = ProblemKind::Buckling;
    std::optional<double> z_max;
    double p = 1.0;
    std::optional<int> j_max;
    std::uint64_t seed = 1;
    int windows = 8;
    int points = 50;
    int models = 1000;
    int trials = 100;
    double min_margin = 0.0;
    Format output = Format::Csv;
    std::string out_path;  // empty: stdout
};

struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code = kExitOk;  // meaningful when config is empty
    std::string message;
};

inline ParseResult parse_args(int argc, const char* const* argv) {
    CLI::App app{"Spectra of the buckling problem and companion Dirichlet problems on balls and intervals"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string domain = "interval";
    std::string kind = "buckling";
    std::string format;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--domain", domain, "ball or interval")->check(CLI::IsMember({"ball", "interval"}));
        sub->add_option("--dim", cfg.d, "dimension of the ball (avp: matrix size)")->check(CLI::Range(1, 100000));
        sub->add_option("--kind", kind, "buckling, laplacian or bilaplacian")
            ->check(CLI::IsMember({"buckling", "laplacian", "bilaplacian"}));
        sub->add_option("--length,--radius", cfg.length_or_radius, "interval length or ball radius")
            ->check(CLI::PositiveNumber);
        sub->add_option("--z-max,--zmax", cfg.z_max, "enumeration ceiling")->check(CLI::PositiveNumber);
        sub->add_option("--p", cfg.p, "Riesz mean order")->check(CLI::PositiveNumber);
        sub->add_option("--j-max,--jmax", cfg.j_max, "number of interval eigenvalues")->check(CLI::Range(1, 100000000));
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--windows", cfg.windows, "asymptotic fit windows")->check(CLI::Range(4, 100000));
        sub->add_option("--points", cfg.points, "grid points for counting/riesz")->check(CLI::Range(1, 10000000));
        sub->add_option("--models", cfg.models, "number of random models (avp)")->check(CLI::Range(0, 100000000));
        sub->add_option("--trials", cfg.trials, "trial vectors per model (avp)")->check(CLI::Range(0, 100000000));
        sub->add_option("--min-margin", cfg.min_margin, "verify: also fail checks whose margin is below this");
        sub->add_option("--format", format, "csv, json or plotdata")->check(CLI::IsMember({"csv", "json", "plotdata"}));
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    };
    struct Entry {
        const char* name;
        const char* help;
        Command command;
    };
    const Entry entries[] = {
        {"spectrum", "dump eigenvalue tables", Command::Spectrum},
        {"counting", "counting function N(z) on a grid", Command::Counting},
        {"riesz", "Riesz mean R_p(z) on a grid", Command::Riesz},
        {"verify", "run the inequality battery and write a JSON report", Command::Verify},
        {"asymptotics", "two-term fit and remainder table", Command::Asymptotics},
        {"avp", "finite-dimensional averaged variational principle suite", Command::Avp},
    };
    std::vector<CLI::App*> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        std::ostringstream es;
        const int code = app.exit(e, os, es);
        ParseResult r;
        r.exit_code = (code == 0) ? kExitOk : kExitUsage;
        r.message = os.str() + es.str();
        return r;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) cfg.command = entries[i].command;
    }
    cfg.domain = (domain == "ball") ? Domain::Ball : Domain::Interval;
    cfg.kind = *parse_problem_kind(kind);

    ParseResult r;
    auto usage = [&](const std::string& msg) {
        r.exit_code = kExitUsage;
        r.message = "error: " + msg + "\n";
        return r;
    };
    if (cfg.domain == Domain::Ball && cfg.command != Command::Avp) {
        if (cfg.d < 2) return usage("--dim must be >= 2 for the ball");
        if (cfg.kind == ProblemKind::DirichletBilaplacian) return usage("bilaplacian spectra are only available on the interval");
    }
    if (format.empty()) {
        cfg.output = (cfg.command == Command::Verify || cfg.command == Command::Avp) ? Format::Json : Format::Csv;
    } else {
        cfg.output = (format == "json") ? Format::Json : (format == "plotdata") ? Format::Plotdata : Format::Csv;
    }
    if (cfg.command == Command::Spectrum || cfg.command == Command::Counting || cfg.command == Command::Riesz) {
        if (cfg.domain == Domain::Ball && !cfg.z_max) return usage("--z-max is required for ball spectra");
        if (cfg.domain == Domain::Interval && !cfg.z_max && !cfg.j_max && cfg.command == Command::Spectrum) {
            return usage("--z-max or --j-max is required");
        }
        if (cfg.command != Command::Spectrum && !cfg.z_max) return usage("--z-max is required");
    }
    r.config = cfg;
    return r;
}

namespace detail {

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = (n == 1) ? 1.0 : static_cast<double>(i) / (n - 1);
        // shifted off the eigenvalues, kept inside the enumeration ceiling
        g.push_back(std::min(lo * std::pow(hi / lo, t) + std::numbers::pi * 1e-3, hi));
    }
    return g;
}

/// Powers of two up to z_hi, each shifted by pi * 1e-3.
inline std::vector<double> dyadic_grid(double z_lo, double z_hi) {
    std::vector<double> g;
    for (double z = 1.0; z <= z_hi; z *= 2.0) {
        if (z >= z_lo && z + std::numbers::pi * 1e-3 <= z_hi) g.push_back(z + std::numbers::pi * 1e-3);
    }
    return g;
}

inline Spectrum build_spectrum(const RunConfig& c, double z_max) {
    if (c.domain == Domain::Ball) {
        // unit ball eigenvalues scale as R^-2
        const double r2 = c.length_or_radius * c.length_or_radius;
        const BallSpectrum b = enumerate(c.d, c.kind, z_max * r2);
        Spectrum unit = to_spectrum(b);
        std::vector<double> v = unit.values();
        for (double& x : v) x /= r2;
        return Spectrum({"ball", c.kind, c.d, z_max}, std::move(v), unit.multiplicities());
    }
    return interval_spectrum(c.kind, c.length_or_radius, z_max);
}

inline WeylModel build_model(const RunConfig& c) {
    if (c.domain == Domain::Interval) return WeylModel::interval(c.length_or_radius);
    WeylModel m = WeylModel::unit_ball(c.d);
    m.volume *= std::pow(c.length_or_radius, c.d);
    m.surface *= std::pow(c.length_or_radius, c.d - 1);
    return m;
}

inline BoundReport exact_integer_check(std::string name, double z, std::int64_t value, std::int64_t expected) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = static_cast<double>(value);
    r.rhs = static_cast<double>(expected);
    r.margin = -std::fabs(r.lhs - r.rhs);
    r.pass = value == expected;
    r.param("z", z);
    return r;
}

inline std::vector<BoundReport> verify_interval(const RunConfig& c) {
    const double L = c.length_or_radius;
    const int jmax = c.j_max.value_or(500);
    std::vector<BoundReport> out;
    const Spectrum sigma = interval_spectrum_first(ProblemKind::Buckling, L, jmax + 1);
    const Spectrum lambda = interval_spectrum_first(ProblemKind::DirichletLaplacian, L, jmax + 1);
    const Spectrum big = interval_spectrum_first(ProblemKind::DirichletBilaplacian, L, jmax + 1);

    for (int j = 1; j <= jmax; ++j) {
        const auto ju = static_cast<std::uint64_t>(j);
        out.push_back(chain_and_payne_checks(sigma, lambda, &big, Relation::ChainStrict, ju));
        out.push_back(chain_and_payne_checks(sigma, lambda, &big, Relation::ProductStrict, ju));
        out.push_back(chain_and_payne_checks(sigma, lambda, &big, Relation::GeneralizedPayne, ju));
    }
    out.push_back(chain_and_payne_checks(sigma, lambda, &big, Relation::Payne0, 1));
    out.push_back(chain_and_payne_checks(sigma, lambda, &big, Relation::Payne2, 1));

    // lambda_{j+1} against sigma_j: equal for odd j, larger for even j; and the
    // partial sums of sigma stay below those of lambda_{j+1}
    double sum_sigma = 0.0;
    double sum_lambda = 0.0;
    for (int j = 1; j <= jmax; ++j) {
        const double s = sigma.at(j);
        const double l = lambda.at(j + 1);
        BoundReport r;
        r.param("j", j);
        r.lhs = s;
        r.rhs = l;
        if (j % 2 == 1) {
            r.name = "lambda_{j+1} = sigma_j (odd j)";
            r.margin = 1e-10 - std::fabs(l - s) / l;
            r.pass = r.margin >= 0.0;
        } else {
            r.name = "lambda_{j+1} > sigma_j (even j)";
            r.margin = l - s;
            r.pass = l > s;
        }
        out.push_back(r);
        sum_sigma += s;
        sum_lambda += l;
        BoundReport p;
        // k = 1 is the equality sigma_1 = lambda_2; strict from k = 2 on
        p.name = j == 1 ? "sum sigma_j <= sum lambda_{j+1}" : "sum sigma_j < sum lambda_{j+1}";
        p.param("k", j);
        p.lhs = sum_sigma;
        p.rhs = sum_lambda;
        p.margin = sum_lambda - sum_sigma;
        p.pass = j == 1 ? sum_sigma <= sum_lambda : sum_sigma < sum_lambda;
        out.push_back(p);
        if (j % 2 == 0 && L == 1.0) out.push_back(sj_lt_half_tj(j));
    }

    const std::uint64_t ks[] = {1, 5, 25, 100};
    for (double z : {1e2, 1e3, 1e4}) {
        const double zl = z / (L * L);
        if (zl > sigma.z_max()) continue;
        for (std::uint64_t k : ks) {
            if (k + 1 > sigma.count()) continue;
            for (auto& part : corollary_checks(sigma, lambda, big, zl, k).parts()) out.push_back(part);
        }
    }

    const WeylModel model = WeylModel::interval(L);
    const double z_hi = c.z_max.value_or(1e6);
    const Spectrum sigma_z = interval_spectrum(ProblemKind::Buckling, L, z_hi);
    for (double z : dyadic_grid(1.0, z_hi)) out.push_back(bly_upper_check(sigma_z, model, z));
    const Spectrum sigma_k = interval_spectrum_first(ProblemKind::Buckling, L, 10000);
    for (std::uint64_t k = 1; k <= 10000; ++k) out.push_back(sum_lower_check(sigma_k, model, k));

    // phi(x) = 16 (x/L)^2 (1 - x/L)^2
    const PhiNorms phi{1.0, 128.0 * L / 315.0, 512.0 / (105.0 * L)};
    for (double z : {1e3, 1e4}) {
        if (z <= sigma_z.z_max()) out.push_back(phi_bound_check(sigma_z, model, z, phi));
    }
    return out;
}

inline std::vector<BoundReport> verify_ball(const RunConfig& c) {
    std::vector<BoundReport> out;
    const int d = c.d;
    const double z_hi = c.z_max.value_or(1e4);
    RunConfig cb = c;
    cb.kind = ProblemKind::Buckling;
    const Spectrum sigma = build_spectrum(cb, z_hi);
    cb.kind = ProblemKind::DirichletLaplacian;
    const Spectrum lambda = build_spectrum(cb, z_hi);
    const WeylModel model = build_model(c);

    for (double z : dyadic_grid(1.0, z_hi)) out.push_back(bly_upper_check(sigma, model, z));
    const std::uint64_t k_max = std::min<std::uint64_t>(10000, sigma.count());
    for (std::uint64_t k = 1; k <= k_max; ++k) out.push_back(sum_lower_check(sigma, model, k));
    const std::uint64_t j_max = std::min(sigma.count(), lambda.count());
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        out.push_back(chain_and_payne_checks(sigma, lambda, nullptr, Relation::DirichletBelowBuckling, j));
    }
    if (lambda.count() >= 2 && sigma.count() >= 1) {
        BoundReport r = chain_and_payne_checks(sigma, lambda, nullptr, Relation::Payne2, 1);
        // on balls the two coincide exactly
        r.name = "lambda_2 = sigma_1 (ball)";
        r.margin = 1e-12 - std::fabs(r.lhs - r.rhs) / r.rhs;
        r.pass = r.pass && r.margin >= 0.0;
        out.push_back(r);
    }
    if (c.length_or_radius == 1.0) {
        for (double z : geometric_grid(std::min(10.0, z_hi), z_hi, 16)) {
            out.push_back(exact_integer_check("counting identity gap", z, counting_identity_gap(d, z), 0));
            if (d >= 3) {
                const CrossDimensionDefect def = cross_dimension_defect(d, z);
                BoundReport r;
                r.name = "per-l Dirichlet difference in {-1, 0}";
                r.param("z", z).param("min", static_cast<double>(def.min_per_l)).param(
                    "max", static_cast<double>(def.max_per_l));
                r.lhs = static_cast<double>(def.min_per_l);
                r.rhs = static_cast<double>(def.max_per_l);
                r.margin = std::min<double>(static_cast<double>(def.min_per_l) + 1.0, -static_cast<double>(def.max_per_l));
                r.pass = def.min_per_l >= -1 && def.max_per_l <= 0;
                out.push_back(r);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Executes one command. Diagnostics go to err; results to config.out_path or
/// out.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!c.out_path.empty()) {
        file.open(c.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file " << c.out_path << "\n";
            return kExitUsage;
        }
        os = &file;
    }
    const std::string domain = (c.domain == Domain::Ball) ? "ball" : "interval";

    switch (c.command) {
        case Command::Spectrum: {
            if (c.domain == Domain::Ball) {
                const double r2 = c.length_or_radius * c.length_or_radius;
                BallSpectrum b = enumerate(c.d, c.kind, *c.z_max * r2);
                for (RadialMode& m : b.modes) m.value /= r2;
                b.z_max = *c.z_max;
                if (c.output == Format::Csv) {
                    write_ball_spectrum_csv(*os, b);
                } else if (c.output == Format::Json) {
                    json first = json::array();
                    for (std::size_t i = 0; i < b.modes.size() && i < 10; ++i) first.push_back(b.modes[i].value);
                    *os << json{{"schema", kJsonSchema}, {"d", b.d}, {"kind", to_string(b.kind)}, {"z_max", b.z_max},
                                {"count", b.count()}, {"first_10_values", first}}
                               .dump(2)
                        << "\n";
                } else {
                    std::vector<double> x;
                    std::vector<double> y;
                    std::uint64_t idx = 0;
                    for (const RadialMode& m : b.modes) {
                        idx += m.multiplicity;
                        x.push_back(static_cast<double>(idx));
                        y.push_back(m.value);
                    }
                    write_plotdata(*os, x, y);
                }
                return kExitOk;
            }
            const Spectrum s = c.j_max ? interval_spectrum_first(c.kind, c.length_or_radius, *c.j_max)
                                       : interval_spectrum(c.kind, c.length_or_radius, *c.z_max);
            if (c.output == Format::Csv) {
                write_interval_csv(*os, c.kind, c.length_or_radius, static_cast<int>(s.count()));
            } else if (c.output == Format::Json) {
                json first = json::array();
                for (std::size_t i = 0; i < s.distinct() && i < 10; ++i) first.push_back(s.values()[i]);
                *os << json{{"schema", kJsonSchema}, {"domain", "interval"}, {"kind", to_string(c.kind)},
                            {"L", c.length_or_radius}, {"count", s.count()}, {"first_10_values", first}}
                           .dump(2)
                    << "\n";
            } else {
                std::vector<double> x;
                for (std::size_t i = 0; i < s.distinct(); ++i) x.push_back(static_cast<double>(i + 1));
                write_plotdata(*os, x, s.values());
            }
            return kExitOk;
        }
        case Command::Counting:
        case Command::Riesz: {
            const double z_max = *c.z_max;
            const Spectrum s = detail::build_spectrum(c, z_max);
            const bool counting = c.command == Command::Counting;
            std::vector<double> zs = detail::geometric_grid(std::max(1e-3 * z_max, 1e-6), z_max, c.points);
            std::vector<double> vals;
            for (double z : zs) {
                vals.push_back(counting ? static_cast<double>(counting_function(s, z)) : riesz_mean(s, c.p, z));
            }
            const char* col = counting ? "N" : "R_p";
            if (c.output == Format::Csv) {
                *os << "z," << col << "\n";
                for (std::size_t i = 0; i < zs.size(); ++i) *os << format_double(zs[i]) << ',' << format_double(vals[i]) << '\n';
            } else if (c.output == Format::Json) {
                json rows = json::array();
                for (std::size_t i = 0; i < zs.size(); ++i) rows.push_back(json{{"z", zs[i]}, {col, vals[i]}});
                json j{{"schema", kJsonSchema}, {"command", counting ? "counting" : "riesz"}, {"domain", domain},
                       {"kind", to_string(c.kind)}, {"d", c.domain == Domain::Ball ? c.d : 1}};
                if (!counting) j["p"] = c.p;
                j["rows"] = rows;
                *os << j.dump(2) << "\n";
            } else {
                write_plotdata(*os, zs, vals);
            }
            return kExitOk;
        }
        case Command::Verify: {
            std::vector<BoundReport> reports =
                (c.domain == Domain::Ball) ? detail::verify_ball(c) : detail::verify_interval(c);
            for (BoundReport& r : reports) {
                if (r.margin < c.min_margin) r.pass = false;
            }
            if (c.output == Format::Csv) {
                write_bound_reports_csv(*os, reports);
            } else {
                *os << verification_report(domain, reports).dump(2) << "\n";
            }
            std::size_t failed = 0;
            for (const auto& r : reports) failed += r.pass ? 0 : 1;
            err << reports.size() - failed << "/" << reports.size() << " checks passed\n";
            return failed == 0 ? kExitOk : kExitCheckFailed;
        }
        case Command::Asymptotics: {
            RunConfig cb = c;
            cb.kind = ProblemKind::Buckling;
            const double z_max = c.z_max.value_or(1e6);
            const Spectrum s = detail::build_spectrum(cb, z_max);
            const WeylModel model = detail::build_model(cb);
            const int d = model.d;
            const FitTarget target = (d == 1) ? FitTarget::RieszMean1 : FitTarget::Counting;
            const AsymptoticFit fit = asymptotic_fit(s, model, z_max / 100.0, z_max, c.windows, target);
            const double expected = (d == 1) ? -2.0 / (d + 1) * model.second() : -model.second();

            const std::vector<double> zs = detail::geometric_grid(z_max / 100.0, z_max, c.points);
            std::vector<double> rem;
            json rows = json::array();
            std::ostringstream csv;
            csv << "z,N,N_model,R1,R1_model,N_remainder,R1_remainder\n";
            for (double z : zs) {
                const double n = static_cast<double>(counting_function(s, z));
                const double r1 = riesz_mean(s, 1.0, z);
                const TwoTermModel tm = weyl_two_term_model(model, z);
                const double rn = n - tm.n_model;
                const double rr = r1 - tm.r1_model;
                rem.push_back(target == FitTarget::Counting ? (n - model.leading() * std::pow(z, 0.5 * d)) / std::pow(z, 0.5 * (d - 1))
                                                            : (r1 - 2.0 / (d + 2) * model.leading() * std::pow(z, 0.5 * d + 1)) / std::pow(z, 0.5 * (d + 1)));
                rows.push_back(json{{"z", z}, {"N", n}, {"N_model", tm.n_model}, {"R1", r1}, {"R1_model", tm.r1_model},
                                    {"N_remainder", rn}, {"R1_remainder", rr}});
                csv << format_double(z) << ',' << format_double(n) << ',' << format_double(tm.n_model) << ','
                    << format_double(r1) << ',' << format_double(tm.r1_model) << ',' << format_double(rn) << ','
                    << format_double(rr) << '\n';
            }
            if (c.output == Format::Json) {
                *os << json{{"schema", kJsonSchema}, {"domain", domain}, {"d", d},
                            {"target", target == FitTarget::Counting ? "N" : "R1"}, {"fit", to_json(fit)},
                            {"expected_c1", expected}, {"rows", rows}}
                           .dump(2)
                    << "\n";
            } else if (c.output == Format::Csv) {
                *os << csv.str();
            } else {
                write_plotdata(*os, zs, rem);
            }
            err << "c1_hat = " << format_double(fit.c1_hat) << " (two-term model: " << format_double(expected) << ")\n";
            return kExitOk;
        }
        case Command::Avp: {
            const AvpSummary s = avp_suite(c.seed, c.d, c.models, c.trials);
            if (c.output == Format::Csv) {
                *os << "models,failures,worst_margin\n"
                    << s.models << ',' << s.failures << ',' << format_double(s.worst_margin) << '\n';
            } else {
                *os << to_json(s).dump(2) << "\n";
            }
            return s.failures == 0 ? kExitOk : kExitCheckFailed;
        }
    }
    return kExitUsage;
}

/// Parses argv and runs; the whole program body of the command-line tool.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    const ParseResult p = parse_args(argc, argv);
    if (!p.config) {
        (p.exit_code == kExitOk ? out : err) << p.message;
        return p.exit_code;
    }
    try {
        return run(*p.config, out, err);
    } catch (const query_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const resource_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace specbuckle::cli
