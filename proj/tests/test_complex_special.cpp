#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dsf/complex_special.hpp"
#include "dsf/errors.hpp"

using dsf::Complex;
using dsf::Hyp2F1Params;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

Hyp2F1Params params(Complex a, Complex b, Complex c, double z) { return {a, b, c, z, std::nullopt}; }

struct GammaCase {
    Complex z;
    Complex expected;
};

}  // namespace

TEST(LogGamma, TrivialValues) {
    EXPECT_NEAR(std::abs(dsf::log_gamma(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(dsf::log_gamma(0.5).real(), 0.5723649429247001, 1e-15);
    EXPECT_NEAR(dsf::log_gamma(0.5).imag(), 0.0, 1e-15);
}

TEST(LogGamma, ReflectionOracleOnCriticalLine) {
    // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    for (double y : {0.1, 1.0, 2.5, 7.0, 15.0, 30.0}) {
        const Complex lg = dsf::log_gamma(Complex(0.5, y));
        const double expected = std::log(kPi) - (kPi * y + std::log1p(std::exp(-2 * kPi * y)) - std::log(2.0));
        EXPECT_NEAR(2.0 * lg.real(), expected, 1e-12 * std::max(1.0, std::abs(expected))) << "y = " << y;
    }
}

TEST(LogGamma, ReflectionOracleOnImaginaryAxis) {
    // |Gamma(iy)|^2 = pi / (y sinh(pi y))
    for (double y : {0.2, 1.0, 3.0, 10.0}) {
        const Complex lg = dsf::log_gamma(Complex(0.0, y));
        const double expected = std::log(kPi / (y * std::sinh(kPi * y)));
        EXPECT_NEAR(2.0 * lg.real(), expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST(LogGamma, MatchesHighPrecisionGammaValues) {
    const GammaCase cases[] = {
        {{3.7, 0}, {4.170651783796604, 0.0}},
        {{0.5, 1}, {0.30069461726065582, -0.42496787943312381}},
        {{-2.5, 0.3}, {-0.61382299743774149, -0.21123261493704178}},
        {{10, 20}, {-0.13371397782847203, 0.12367497527124525}},
        {{0.1, -7}, {1.8472584713886633e-5, 5.6256095355659045e-6}},
        {{-12.25, 3}, {4.4710235946171893e-13, -6.5921006618089871e-13}},
        {{30, 30}, {4.9824683470523882e+24, -1.3332730971664627e+25}},
        {{1e-3, 0}, {999.42377248459545, 0.0}},
    };
    for (const auto& c : cases) {
        EXPECT_LT(rel_err(std::exp(dsf::log_gamma(c.z)), c.expected), 1e-13) << c.z;
    }
}

TEST(LogGamma, RecurrenceHolds) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-20, 20), im(-20, 20);
    for (int i = 0; i < 200; ++i) {
        const Complex z(re(rng), im(rng));
        if (std::abs(z.imag()) < 1e-3) continue;
        const Complex lhs = std::exp(dsf::log_gamma(z + 1.0) - dsf::log_gamma(z));
        EXPECT_LT(rel_err(lhs, z), 1e-12) << z;
    }
}

TEST(LogGamma, ImaginaryPartIsPrincipal) {
    for (Complex z : {Complex(3, 40), Complex(-7.5, -12), Complex(20, -30)}) {
        const double im = dsf::log_gamma(z).imag();
        EXPECT_GT(im, -kPi);
        EXPECT_LE(im, kPi);
    }
}

TEST(LogGamma, PolesThrow) {
    for (double n : {0.0, -1.0, -5.0, -30.0}) EXPECT_THROW(dsf::log_gamma(n), dsf::PoleError);
    EXPECT_THROW(dsf::log_gamma(Complex(-3.0, 1e-15)), dsf::PoleError);
    EXPECT_NO_THROW(dsf::log_gamma(Complex(-3.0, 1e-6)));
}

TEST(Rgamma, VanishesAtPoles) {
    EXPECT_EQ(dsf::rgamma(0.0), Complex(0.0, 0.0));
    EXPECT_EQ(dsf::rgamma(-4.0), Complex(0.0, 0.0));
    EXPECT_NEAR(dsf::rgamma(2.0).real(), 1.0, 1e-15);
}

TEST(Hyp2F1, ZeroArgumentIsOne) {
    const Complex v = dsf::hyp2f1(params({-3.3, 1}, {2, -1}, {0.5, 4}, 0.0));
    EXPECT_EQ(v, Complex(1.0, 0.0));
}

TEST(Hyp2F1, TerminatingSeries) {
    EXPECT_NEAR(std::abs(dsf::hyp2f1(params(-1, 1, 2, 0.5)) - 0.75), 0.0, 1e-15);
}

TEST(Hyp2F1, TerminatingPolynomialsExact) {
    // a = -n: finite sum computed independently.
    for (int n = 0; n <= 6; ++n) {
        for (double z : {0.2, 0.6, 0.95}) {
            const Complex a(-n, 0), b(1.5, 0.7), c(0.5, 2.0);
            Complex term = 1.0, poly = 1.0;
            for (int k = 0; k < n; ++k) {
                term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * z;
                poly += term;
            }
            EXPECT_LT(rel_err(dsf::hyp2f1(params(a, b, c, z)), poly), 1e-14) << n << " " << z;
        }
    }
}

TEST(Hyp2F1, SeriesOracleValues) {
    EXPECT_LT(rel_err(dsf::hyp2f1(params(-1.5, 1.5, {0.5, 1.0}, 0.5)), {0.5143632652926038, 0.70636976719091916}),
              1e-13);
    EXPECT_LT(rel_err(dsf::hyp2f1(params(-1.5, 1.5, {0.5, 1.0}, 0.3)), {0.71972661352626426, 0.47365438736536398}),
              1e-13);
}

TEST(Hyp2F1, NearOneOracle) {
    const auto p = params(-1.5, 1.5, {0.5, 2.0}, 0.99);
    EXPECT_LT(rel_err(dsf::hyp2f1_near_one(p), {0.50232688462955819, 0.86148625811919402}), 1e-11);
    EXPECT_LT(rel_err(dsf::hyp2f1(p), {0.50232688462955819, 0.86148625811919402}), 1e-11);
}

TEST(Hyp2F1, NearOneAgreesWithSeriesAtThreeQuarters) {
    const auto p = params(-1, 1, {0.5, 1.0}, 0.75);
    EXPECT_LT(rel_err(dsf::hyp2f1_near_one(p), dsf::hyp2f1_series(p)), 1e-9);
}

TEST(Hyp2F1, NearOneDegenerateConnectionThrows) {
    EXPECT_THROW(dsf::hyp2f1_near_one(params(2, 2, 2, 0.7)), dsf::DegenerateConnectionError);
}

TEST(Hyp2F1, NearOneRejectsSmallArgument) {
    EXPECT_THROW(dsf::hyp2f1_near_one(params(-1.5, 1.5, {0.5, 1.0}, 0.4)), dsf::PreconditionError);
}

TEST(Hyp2F1, ConnectionConsistencyOnClosedSlicingRanges) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mass(0.25, 4.0);
    const double lambdas[] = {1.5, 2.5, 3.5, 4.5, 5.5};
    double worst = 0.0;
    for (double l0 : lambdas) {
        for (double sl : {1.0, -1.0}) {
            for (double sm : {1.0, -1.0}) {
                const double m = mass(rng);
                for (int i = 1; i <= 50; ++i) {
                    const double z = 0.5 + 0.4 * i / 50.0;
                    const auto p = params(-sl * l0, sl * l0, {0.5, sm * m}, z);
                    worst = std::max(worst, rel_err(dsf::hyp2f1_near_one(p), dsf::hyp2f1_series(p)));
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Hyp2F1, ComplementArgumentGivesSameValue) {
    const double z = 0.93;
    Hyp2F1Params p = params(-2.5, 2.5, {0.5, 1.3}, z);
    const Complex plain = dsf::hyp2f1(p);
    p.one_minus_z = 1.0 - z;
    EXPECT_LT(rel_err(dsf::hyp2f1(p), plain), 1e-13);
}

TEST(Hyp2F1, RoundedUnitArgumentNeedsComplement) {
    // Gauss summation: F(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)) for Re(c-a-b) > 0.
    const Complex a(-1.5, 0.0), b(1.5, 0.0), c(0.5, 1.0);
    const Complex gauss = dsf::gamma(c) * dsf::gamma(c - a - b) / (dsf::gamma(c - a) * dsf::gamma(c - b));
    Hyp2F1Params p = params(a, b, c, 1.0);
    EXPECT_THROW(dsf::hyp2f1(p), dsf::PreconditionError);
    p.one_minus_z = 1e-30;
    EXPECT_LT(rel_err(dsf::hyp2f1(p), gauss), 1e-12);
    p.one_minus_z = 0.0;
    EXPECT_THROW(dsf::hyp2f1(p), dsf::PreconditionError);
}

TEST(Hyp2F1, ConjugationSymmetry) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3), zz(0.0, 0.98);
    for (int i = 0; i < 100; ++i) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng)), c(std::abs(u(rng)) + 0.5, u(rng));
        const double z = zz(rng);
        const Complex v = dsf::hyp2f1(params(a, b, c, z));
        const Complex w = dsf::hyp2f1(params(std::conj(a), std::conj(b), std::conj(c), z));
        EXPECT_LT(std::abs(w - std::conj(v)), 1e-13 * std::max(1.0, std::abs(v)));
    }
}

TEST(Hyp2F1, PoleInCRejected) {
    EXPECT_THROW(dsf::hyp2f1(params(1, 1, -2, 0.3)), dsf::PoleError);
    EXPECT_THROW(dsf::hyp2f1(params(1, 1, 0.5, 1.0)), dsf::PreconditionError);
    EXPECT_THROW(dsf::hyp2f1(params(1, 1, 0.5, -0.1)), dsf::PreconditionError);
}

TEST(Hyp2F1, TermCapExhaustionIsReported) {
    dsf::SeriesOptions opt;
    opt.max_terms = 10;
    EXPECT_THROW(dsf::hyp2f1_series(params({2, 1}, {2, -1}, 2, 0.99), opt), dsf::ConvergenceError);
}

TEST(Hyp2F1Regularized, TrivialValues) {
    EXPECT_NEAR(std::abs(dsf::hyp2f1_regularized(params({3, 1}, -2, 1, 0.0)) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(dsf::hyp2f1_regularized(params(-1, 1, 2, 0.5)) - 0.75), 0.0, 1e-15);
    EXPECT_EQ(dsf::hyp2f1_regularized(params(1, 1, 0, 0.0)), Complex(0.0, 0.0));
}

TEST(Hyp2F1Regularized, LimitAtNonPositiveIntegerC) {
    // F(a,b;c;z)/Gamma(c) is continuous in c; compare c = -1 with c = -1 + eps.
    const Complex a(0.7, 0.2), b(-1.3, 0.5);
    const double z = 0.4;
    const Complex at = dsf::hyp2f1_regularized(params(a, b, -1.0, z));
    const Complex near = dsf::hyp2f1_regularized(params(a, b, Complex(-1.0, 1e-7), z));
    EXPECT_LT(std::abs(at - near), 1e-5 * std::abs(at));
}

TEST(Hyp2F1Regularized, ConsistentWithUnregularized) {
    for (double z : {0.3, 0.7, 0.95}) {
        const auto p = params(-2.5, 2.5, {1.5, -2.0}, z);
        EXPECT_LT(rel_err(dsf::hyp2f1_regularized(p) * dsf::gamma(p.c), dsf::hyp2f1(p)), 1e-11);
    }
}

TEST(Hyp2F1Derivative, TrivialValues) {
    const Complex a(0.3, 1), b(2, -0.5), c(1.5, 0.2);
    EXPECT_LT(rel_err(dsf::hyp2f1_derivative(params(a, b, c, 0.0)), a * b / c), 1e-15);
    for (double z : {0.0, 0.4, 0.9}) EXPECT_NEAR(std::abs(dsf::hyp2f1_derivative(params(-1, 1, 2, z)) + 0.5), 0.0, 1e-15);
}

TEST(Hyp2F1Derivative, OracleValue) {
    EXPECT_LT(rel_err(dsf::hyp2f1_derivative(params(-1.5, 1.5, {0.5, 1.0}, 0.3)),
                      {-0.97895239335130809, 1.34243646905963}),
              1e-13);
}

TEST(Hyp2F1Derivative, MatchesCentralDifferences) {
    const double h = 1e-5;
    for (Complex c : {Complex(0.5, 1.0), Complex(0.5, -2.5), Complex(1.5, 0.25)}) {
        for (double l : {1.5, -3.5, 5.5}) {
            for (double z : {0.1, 0.3, 0.45, 0.6, 0.8, 0.95}) {
                const auto p = params(-l, l, c, z);
                const Complex d = dsf::hyp2f1_derivative(p);
                const Complex fd = (dsf::hyp2f1(params(-l, l, c, z + h)) - dsf::hyp2f1(params(-l, l, c, z - h))) / (2 * h);
                if (std::abs(d) > 1e-8) EXPECT_LT(rel_err(fd, d), 1e-6) << c << " " << l << " " << z;
            }
        }
    }
}
