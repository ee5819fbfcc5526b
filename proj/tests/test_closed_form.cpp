#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dsf/asymptotics.hpp"
#include "dsf/closed_form.hpp"
#include "dsf/complex_special.hpp"
#include "dsf/errors.hpp"

using dsf::Branch;
using dsf::Complex;
using dsf::ModeParams;
using dsf::SpinorAmplitude;
using dsf::spinor;

namespace {

const Complex kI(0.0, 1.0);
const double kPi = 3.14159265358979323846;

double dist(const SpinorAmplitude& a, const SpinorAmplitude& b) { return (a - b).norm(); }

ModeParams random_mode(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mass(0.1, 3.0);
    std::uniform_int_distribution<int> level(1, 9);
    std::bernoulli_distribution sign(0.5);
    const double lambda = (level(rng) + 0.5) * (sign(rng) ? 1.0 : -1.0);
    return ModeParams::closed(mass(rng), lambda);
}

}  // namespace

TEST(ClosedArgument, ComplementIsExact) {
    const auto a = dsf::closed_argument(0.0);
    EXPECT_EQ(a.z, 0.5);
    EXPECT_EQ(a.one_minus_z, 0.5);
    const auto far = dsf::closed_argument(-40.0);
    EXPECT_EQ(far.z, 1.0);
    EXPECT_NEAR(far.one_minus_z / std::exp(-80.0), 1.0, 1e-14);
    const auto late = dsf::closed_argument(40.0);
    EXPECT_NEAR(late.z / std::exp(-80.0), 1.0, 1e-14);
}

TEST(ExactSolution, HighPrecisionValues) {
    const auto p = ModeParams::closed(1.0, 1.5);
    struct Row {
        double T;
        Complex u1, u2;
    };
    const Row rows[] = {
        {0.0, {0.5143632652926038, 0.70636976719091916}, {-0.32467709460565392, -0.3620179105439514}},
        {-3.0, {0.12031014313076905, -0.99186738474993635}, {0.034766032247586158, -0.022713069606184689}},
        {2.5, {-0.78912346156658755, -0.60449148080814264}, {0.048665668325583088, 0.097498024400342018}},
    };
    for (const auto& r : rows) {
        const auto u = dsf::exact_u_plus(r.T, p);
        EXPECT_LT(std::abs(u(0) - r.u1), 1e-13) << "T=" << r.T;
        EXPECT_LT(std::abs(u(1) - r.u2), 1e-13) << "T=" << r.T;
    }
}

TEST(ExactSolution, SecondComponentCarriesTheCouplingFactor) {
    // u2 at T = 0 written directly through the series, including the factor lambda.
    const auto p = ModeParams::closed(1.0, 1.5);
    const Complex f = dsf::hyp2f1({Complex(-0.5), Complex(2.5), Complex(1.5, 1.0), 0.5, std::nullopt});
    const Complex expected = -2.0 * 1.5 / Complex(2.0, -1.0) * 0.5 * f;
    EXPECT_LT(std::abs(dsf::exact_u_plus(0.0, p)(1) - expected), 1e-14);
}

TEST(ExactSolution, FutureAsymptotics) {
    const auto p = ModeParams::closed(0.8, 2.5);
    for (double T : {10.0, 20.0, 35.0}) {
        const SpinorAmplitude plus = spinor(std::polar(1.0, -0.8 * T), 0.0);
        const SpinorAmplitude minus = spinor(0.0, std::polar(1.0, 0.8 * T));
        EXPECT_LT(dist(dsf::exact_u_plus(T, p), plus), 10.0 * std::exp(-T));
        EXPECT_LT(dist(dsf::exact_u_minus(T, p), minus), 10.0 * std::exp(-T));
    }
}

TEST(ExactSolution, OdeResidualOnGrid) {
    for (const auto& p : {ModeParams::closed(1.0, 1.5), ModeParams::closed(0.3, -4.5), ModeParams::closed(2.0, 7.5)}) {
        for (int i = 0; i <= 80; ++i) {
            const double T = -10.0 + 0.25 * i;
            EXPECT_LT(dsf::exact_solution_residual(Branch::Plus, T, p), 1e-9);
            EXPECT_LT(dsf::exact_solution_residual(Branch::Minus, T, p), 1e-9);
        }
    }
}

TEST(ExactSolution, AnalyticDerivativeMatchesDifferences) {
    const auto p = ModeParams::closed(1.0, 1.5);
    const double h = 1e-4;
    for (double T : {-2.0, 0.3, 1.7}) {
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const SpinorAmplitude fd =
                (dsf::exact_solution(b, T + h, p) - dsf::exact_solution(b, T - h, p)) / (2.0 * h);
            EXPECT_LT(dist(fd, dsf::exact_solution_derivative(b, T, p)), 1e-7);
        }
    }
}

TEST(ExactSolution, MinusBranchIsConjugateSwap) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_mode(rng);
        for (double T : {-6.0, -0.5, 0.0, 2.0, 9.0}) {
            const auto up = dsf::exact_u_plus(T, p);
            const SpinorAmplitude swapped = spinor(-std::conj(up(1)), std::conj(up(0)));
            EXPECT_LT(dist(dsf::exact_u_minus(T, p), swapped), 1e-12);
        }
    }
}

TEST(ExactSolution, NormDeterminantAndOrthogonality) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_mode(rng);
        for (int j = 0; j <= 16; ++j) {
            const double T = -20.0 + 2.5 * j;
            const auto up = dsf::exact_u_plus(T, p);
            const auto um = dsf::exact_u_minus(T, p);
            EXPECT_NEAR(up.norm(), 1.0, 1e-8);
            EXPECT_NEAR(um.norm(), 1.0, 1e-8);
            EXPECT_LT(std::abs(dsf::inner(up, um)), 1e-8);
            EXPECT_LT(std::abs(up(0) * um(1) - up(1) * um(0) - 1.0), 1e-8);
        }
    }
}

TEST(ExactSolution, RejectsFlatParameters) {
    EXPECT_THROW(dsf::exact_u_plus(0.0, ModeParams::flat_lambda(1.0, 1.0)), dsf::PreconditionError);
}

TEST(PastCoefficients, HighPrecisionValues) {
    const auto p = ModeParams::closed(1.0, 1.5);
    const auto c = dsf::past_coefficients_closed(Branch::Plus, p);
    EXPECT_LT(std::abs(c(0) - Complex(-0.26003043111192346, 0.96173916669383441)), 1e-13);
    EXPECT_LT(std::abs(c(1) - Complex(0.0, 0.086266738334054415)), 1e-14);
    const auto d = dsf::past_coefficients_closed(Branch::Minus, p);
    EXPECT_LT(std::abs(d(0) - c(1)), 1e-15);
    EXPECT_LT(std::abs(d(1) - std::conj(c(0))), 1e-15);
}

TEST(PastCoefficients, DirectGammaFormula) {
    const double m = 0.6, l = -2.5;
    const auto p = ModeParams::closed(m, l);
    const Complex h(0.5, m);
    const Complex a = kPi * dsf::gamma(h) /
                      (std::cosh(kPi * m) * dsf::gamma(std::conj(h)) * dsf::gamma(h - l) * dsf::gamma(h + l));
    const Complex b = -kI * std::sin(kPi * l) / std::cosh(kPi * m);
    const auto c = dsf::past_coefficients_closed(Branch::Plus, p);
    EXPECT_LT(std::abs(c(0) - a), 1e-13);
    EXPECT_LT(std::abs(c(1) - b), 1e-15);
}

TEST(PastCoefficients, ConnectionMatrixIsUnitary) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_mode(rng);
        dsf::Matrix2 c;
        c.col(0) = dsf::past_coefficients_closed(Branch::Plus, p);
        c.col(1) = dsf::past_coefficients_closed(Branch::Minus, p);
        EXPECT_LT((c.adjoint() * c - dsf::Matrix2::Identity()).cwiseAbs().maxCoeff(), 1e-12)
            << "m=" << p.m << " lambda=" << p.lambda;
    }
}

TEST(PastCoefficients, LargeMassStaysFinite) {
    const auto c = dsf::past_coefficients_closed(Branch::Plus, ModeParams::closed(60.0, 9.5));
    EXPECT_TRUE(dsf::all_finite(c));
    EXPECT_NEAR(c.norm(), 1.0, 1e-12);
}

TEST(ExactAsymptotics, FutureAndPastData) {
    const auto p = ModeParams::closed(1.0, 1.5);
    const auto plus = dsf::asymptotic_coeffs_closed_exact(p, Branch::Plus);
    ASSERT_TRUE(plus.f_plus && plus.f_minus);
    EXPECT_EQ(*plus.f_plus, spinor(1.0, 0.0));
    EXPECT_NEAR(plus.f_minus->squaredNorm(), 1.0, 1e-12);
    const auto minus = dsf::asymptotic_coeffs_closed_exact(p, Branch::Minus);
    EXPECT_EQ(*minus.f_plus, spinor(0.0, 1.0));
}

TEST(Extraction, ExactFutureCoefficients) {
    const auto p = ModeParams::closed(1.0, 1.5);
    const auto d = dsf::extract_asymptotics(dsf::Source::Exact, p, 30.0, dsf::Direction::Future);
    ASSERT_TRUE(d.f_plus);
    EXPECT_LT(dist(*d.f_plus, spinor(1.0, 0.0)), 1e-10);
    EXPECT_LT(d.error_estimate, 1e-10);
}

TEST(Extraction, ExactAndIntegratedPastCoefficients) {
    const auto p = ModeParams::closed(1.0, 1.5);
    const auto oracle = *dsf::asymptotic_coeffs_closed_exact(p, Branch::Plus).f_minus;
    const auto exact = dsf::extract_asymptotics(dsf::Source::Exact, p, -30.0, dsf::Direction::Past);
    ASSERT_TRUE(exact.f_minus);
    EXPECT_LT(dist(*exact.f_minus, oracle), 1e-7);
    dsf::ExtractionOptions opts;
    opts.integration = {1e-12, 1e-14};
    const auto integrated = dsf::extract_asymptotics(dsf::Source::Integrated, p, -30.0, dsf::Direction::Past, opts);
    EXPECT_LT(dist(*integrated.f_minus, oracle), 1e-7);
    EXPECT_NEAR(integrated.f_minus->norm(), 1.0, 1e-8);
}

TEST(Extraction, MinusBranchPast) {
    const auto p = ModeParams::closed(0.4, -3.5);
    dsf::ExtractionOptions opts;
    opts.branch = Branch::Minus;
    const auto d = dsf::extract_asymptotics(dsf::Source::Integrated, p, -30.0, dsf::Direction::Past, opts);
    EXPECT_LT(dist(*d.f_minus, dsf::past_coefficients_closed(Branch::Minus, p)), 1e-7);
}

TEST(Extraction, TooEarlyExtractionDoesNotConverge) {
    const auto p = ModeParams::closed(1.0, 1.5);
    dsf::ExtractionOptions opts;
    opts.tolerance = 1e-10;
    EXPECT_THROW(dsf::extract_asymptotics(dsf::Source::Exact, p, 2.0, dsf::Direction::Future, opts),
                 dsf::NotConvergedError);
}

TEST(Extraction, DefaultExtractionTime) {
    EXPECT_EQ(dsf::default_extraction_time(ModeParams::closed(1.0, 1.5), 1e-6), 25.0);
    const double t = dsf::default_extraction_time(ModeParams::closed(1.0, 1.5), 1e-14);
    EXPECT_NEAR(t, std::log(3.0 / 1e-14), 1e-12);
}
