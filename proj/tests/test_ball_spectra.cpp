#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "specbuckle/ball_spectra.hpp"

using namespace specbuckle;

namespace {

// Degree-l harmonics in d variables split by restriction to the last d-1
// variables: M_{l,d} = sum_{k <= l} M_{k,d-1}, starting from M_{k,1} = [k <= 1].
std::vector<std::vector<std::uint64_t>> multiplicity_table(int l_max, int d_max) {
    std::vector<std::vector<std::uint64_t>> m(d_max + 1, std::vector<std::uint64_t>(l_max + 1, 0));
    m[1][0] = m[1][1] = 1;
    for (int d = 2; d <= d_max; ++d) {
        std::uint64_t s = 0;
        for (int l = 0; l <= l_max; ++l) m[d][l] = (s += m[d - 1][l]);
    }
    return m;
}

// #{(l, n) : x_{nu(l),n}^2 < z} weighted by M_{l,d}. Zeros below sqrt(z) are
// counted as sign changes of the 50-digit J_nu on a grid of step 0.05 ending
// at sqrt(z); consecutive zeros are more than pi apart.
std::uint64_t counting_oracle(int d, ProblemKind kind, double z) {
    const double root = std::sqrt(z);
    std::uint64_t total = 0;
    for (int l = 0;; ++l) {
        const int t = kind == ProblemKind::Buckling ? 2 * l + d : 2 * l + d - 2;
        std::uint64_t c = 0;
        const double x0 = 0.5 * t + 1e-3;
        if (x0 < root) {
            const int steps = static_cast<int>(std::ceil((root - x0) / 0.05));
            bool prev = oracle::bessel_j(t, x0) < 0;
            for (int i = 1; i <= steps; ++i) {
                const double x = i == steps ? root : x0 + 0.05 * i;
                const bool neg = oracle::bessel_j(t, x) < 0;
                if (neg != prev) ++c;
                prev = neg;
            }
        }
        if (c == 0) return total;
        total += c * multiplicity(l, d);
    }
}

}  // namespace

TEST(Multiplicity, SmallCases) {
    EXPECT_EQ(multiplicity(0, 2), 1u);
    EXPECT_EQ(multiplicity(5, 2), 2u);
    EXPECT_EQ(multiplicity(4, 3), 9u);
    EXPECT_EQ(multiplicity(2, 4), 9u);
    EXPECT_EQ(multiplicity(1, 5), 5u);
    EXPECT_EQ(multiplicity(0, 1), 1u);
    EXPECT_EQ(multiplicity(1, 1), 1u);
    EXPECT_EQ(multiplicity(2, 1), 0u);
}

TEST(Multiplicity, RestrictionRecurrence) {
    const auto table = multiplicity_table(60, 12);
    for (int d = 1; d <= 12; ++d) {
        for (int l = 0; l <= 60; ++l) EXPECT_EQ(multiplicity(l, d), table[d][l]) << l << " " << d;
    }
}

TEST(Multiplicity, ClosedFormWithFactorials) {
    // (2l + d - 2) (l + d - 3)! / (l! (d - 2)!) for d >= 3
    for (int d = 3; d <= 10; ++d) {
        for (int l = 0; l <= 25; ++l) {
            long double f = 2.0L * l + d - 2;
            for (int i = 1; i <= l + d - 3; ++i) f *= i;
            for (int i = 1; i <= l; ++i) f /= i;
            for (int i = 1; i <= d - 2; ++i) f /= i;
            EXPECT_EQ(multiplicity(l, d), static_cast<std::uint64_t>(std::llround(f))) << l << " " << d;
        }
    }
}

TEST(Multiplicity, OverflowAndDomain) {
    EXPECT_THROW(multiplicity(1 << 20, 40), std::overflow_error);
    EXPECT_THROW(multiplicity(-1, 3), domain_error);
    EXPECT_THROW(multiplicity(0, 0), domain_error);
}

TEST(BallEigenvalues, KnownValues) {
    EXPECT_NEAR(buckling_eigenvalue(2, 0, 1), 14.6819706421, 1e-9);
    EXPECT_NEAR(buckling_eigenvalue(3, 0, 1), 20.1907285564, 1e-9);
    EXPECT_NEAR(dirichlet_eigenvalue(2, 0, 1), 5.7831859629, 1e-9);
    EXPECT_NEAR(dirichlet_eigenvalue(3, 0, 1), std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(BallEigenvalues, BucklingEqualsShiftedDirichlet) {
    for (int d = 2; d <= 6; ++d) {
        for (int l = 0; l <= 10; ++l) {
            for (int n = 1; n <= 10; ++n) EXPECT_EQ(buckling_eigenvalue(d, l, n), dirichlet_eigenvalue(d, l + 1, n));
        }
    }
}

TEST(BallEigenvalues, MonotoneInEveryIndex) {
    for (int d = 2; d <= 5; ++d) {
        for (int l = 0; l <= 12; ++l) {
            for (int n = 1; n <= 12; ++n) {
                const double s = buckling_eigenvalue(d, l, n);
                EXPECT_LT(dirichlet_eigenvalue(d, l, n), s);
                EXPECT_LT(s, buckling_eigenvalue(d, l, n + 1));
                EXPECT_LT(s, buckling_eigenvalue(d, l + 1, n));
                EXPECT_LT(s, buckling_eigenvalue(d + 1, l, n));
            }
        }
    }
}

TEST(BallEigenvalues, Domain) {
    EXPECT_THROW(buckling_eigenvalue(1, 0, 1), domain_error);
    EXPECT_THROW(ball_order(3, 0, ProblemKind::DirichletBilaplacian), domain_error);
    EXPECT_THROW(enumerate(3, ProblemKind::DirichletBilaplacian, 100.0), domain_error);
}

TEST(Counting, StrictAtEigenvalue) {
    EXPECT_EQ(counting(2, ProblemKind::Buckling, 14.68), 0u);
    EXPECT_EQ(counting(2, ProblemKind::Buckling, 14.69), 1u);
    const double s = buckling_eigenvalue(3, 0, 1);
    EXPECT_EQ(counting(3, ProblemKind::Buckling, s), 0u);
    EXPECT_EQ(counting(3, ProblemKind::Buckling, std::nextafter(s, INFINITY)), 1u);
    EXPECT_EQ(counting(3, ProblemKind::Buckling, 0.0), 0u);
}

TEST(Counting, MatchesHighPrecisionZeros) {
    for (int d : {2, 3, 4}) {
        for (double z : {50.0, 300.0}) {
            EXPECT_EQ(counting(d, ProblemKind::Buckling, z), counting_oracle(d, ProblemKind::Buckling, z)) << d << " " << z;
            EXPECT_EQ(counting(d, ProblemKind::DirichletLaplacian, z),
                      counting_oracle(d, ProblemKind::DirichletLaplacian, z))
                << d << " " << z;
        }
    }
}

TEST(Counting, AngularCutoffLosesNothing) {
    for (double z : {10.0, 99.0, 1000.0, 12345.0}) {
        const int l_max = ball_l_max(z);
        for (int l = l_max + 1; l <= l_max + 5; ++l) {
            EXPECT_EQ(counting_per_l(2, ProblemKind::DirichletLaplacian, l, z), 0u);
            EXPECT_EQ(counting_per_l(3, ProblemKind::Buckling, l, z), 0u);
        }
    }
}

TEST(Enumerate, SortedAndConsistentWithCounting) {
    const BallSpectrum s = enumerate(3, ProblemKind::Buckling, 2000.0);
    ASSERT_FALSE(s.modes.empty());
    const double x = oracle::bessel_zero(3, 1);
    EXPECT_NEAR(s.modes.front().value, x * x, 1e-14 * x * x);
    EXPECT_EQ(s.modes.front().multiplicity, 1u);
    for (std::size_t i = 1; i < s.modes.size(); ++i) EXPECT_LE(s.modes[i - 1].value, s.modes[i].value);
    EXPECT_LT(s.modes.back().value, 2000.0);
    EXPECT_EQ(s.count(), counting(3, ProblemKind::Buckling, 2000.0));
    EXPECT_EQ(to_spectrum(s).count_below(2000.0), s.count());
    for (const RadialMode& m : s.modes) EXPECT_EQ(m.value, buckling_eigenvalue(3, m.l, m.n));
}

TEST(Enumerate, ThreadCountDoesNotChangeResult) {
    EnumerateOptions one;
    one.threads = 1;
    EnumerateOptions many;
    many.threads = 4;
    const BallSpectrum a = enumerate(4, ProblemKind::DirichletLaplacian, 3000.0, one);
    const BallSpectrum b = enumerate(4, ProblemKind::DirichletLaplacian, 3000.0, many);
    ASSERT_EQ(a.modes.size(), b.modes.size());
    for (std::size_t i = 0; i < a.modes.size(); ++i) {
        EXPECT_EQ(a.modes[i].value, b.modes[i].value);
        EXPECT_EQ(a.modes[i].l, b.modes[i].l);
        EXPECT_EQ(a.modes[i].n, b.modes[i].n);
    }
}

TEST(Enumerate, EmptyBelowFirstEigenvalue) {
    EXPECT_TRUE(enumerate(2, ProblemKind::Buckling, 14.0).modes.empty());
    EXPECT_EQ(to_spectrum(enumerate(2, ProblemKind::Buckling, 14.0)).count(), 0u);
}

TEST(Enumerate, ResourceCap) {
    EnumerateOptions opt;
    opt.max_modes = 10;
    EXPECT_THROW(enumerate(3, ProblemKind::Buckling, 1e4, opt), resource_error);
    EXPECT_THROW(enumerate(3, ProblemKind::Buckling, -1.0), domain_error);
}

TEST(CountingIdentity, GapVanishes) {
    for (int d = 2; d <= 6; ++d) {
        for (double z = 7.0; z < 2e4; z *= 1.7) EXPECT_EQ(counting_identity_gap(d, z), 0) << d << " " << z;
    }
    // exactly at an eigenvalue
    EXPECT_EQ(counting_identity_gap(3, buckling_eigenvalue(3, 2, 3)), 0);
}

TEST(CountingIdentity, CrossDimensionDefectPerDegree) {
    for (int d = 3; d <= 6; ++d) {
        for (double z = 5.0; z < 2e4; z *= 1.9) {
            const CrossDimensionDefect c = cross_dimension_defect(d, z);
            EXPECT_GE(c.min_per_l, -1) << d << " " << z;
            EXPECT_LE(c.max_per_l, 0) << d << " " << z;
            EXPECT_LE(c.total, 0);
        }
    }
    EXPECT_THROW(cross_dimension_defect(2, 10.0), domain_error);
}

TEST(RadialProfile, SatisfiesClampedConditions) {
    for (int d = 2; d <= 5; ++d) {
        for (int l = 0; l <= 4; ++l) {
            for (int n = 1; n <= 6; ++n) {
                const RadialResidual r = radial_residual(d, l, n);
                const double k = std::sqrt(buckling_eigenvalue(d, l, n));
                EXPECT_LE(r.value_at_1, 1e-12 * r.scale) << d << l << n;
                EXPECT_LE(r.derivative_at_1, 1e-11 * k * r.scale) << d << l << n;
                EXPECT_EQ(r.interior_sign_changes, n - 1) << d << l << n;
            }
        }
    }
}

TEST(BallCsv, Layout) {
    std::ostringstream out;
    write_ball_spectrum_csv(out, enumerate(2, ProblemKind::Buckling, 30.0));
    EXPECT_EQ(out.str(),
              "d,kind,l,n,value,multiplicity\n"
              "2,buckling,0,1,14.681970642123895,1\n"
              "2,buckling,1,1,26.374616427163392,2\n");
}
