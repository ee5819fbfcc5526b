#include "dsf/complex_special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

std::string describe(Complex z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

// log sin(pi z) without overflow for large |Im z| and without cancellation
// near the real zeros.
Complex log_sin_pi(Complex z) {
    const double n = std::round(z.real());
    const Complex w(z.real() - n, z.imag());
    const double y = w.imag();
    Complex result;
    if (std::abs(y) < 20.0) {
        result = std::log(std::sin(kPi * w));
    } else {
        // sin(pi w) = e^{-i pi w} (e^{2 i pi w} - 1) / (2i) for Im w > 0, and
        // the mirror image below the axis.
        const Complex iu(0.0, 1.0);
        if (y > 0) {
            result = -iu * kPi * w - std::log(Complex(0.0, 2.0)) +
                     std::log(std::exp(2.0 * iu * kPi * w) - 1.0);
        } else {
            result = iu * kPi * w - std::log(Complex(0.0, -2.0)) +
                     std::log(1.0 - std::exp(-2.0 * iu * kPi * w));
        }
    }
    if (std::fmod(std::abs(n), 2.0) == 1.0) result += Complex(0.0, kPi);
    return result;
}

Complex log_gamma_lanczos(Complex z) {
    z -= 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// Brings the imaginary part of a log into (-pi, pi].
Complex principal(Complex w) {
    double im = std::remainder(w.imag(), 2.0 * kPi);
    if (im <= -kPi) im += 2.0 * kPi;
    return {w.real(), im};
}

bool is_zero_or_negative_integer_within(Complex z, double tol) {
    return std::abs(z.imag()) <= tol && z.real() < 0.5 && std::abs(z.real() - std::round(z.real())) <= tol;
}

}  // namespace

bool near_integer(Complex z, double tol) {
    return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

bool near_nonpositive_integer(Complex z, double tol) { return is_zero_or_negative_integer_within(z, tol); }

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw PreconditionError("log_gamma: non-finite argument");
    if (near_nonpositive_integer(z, 1e-14)) throw PoleError("log_gamma: pole at z = " + describe(z));
    if (z.real() < 0.5) {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
        return principal(std::log(kPi) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z));
    }
    return principal(log_gamma_lanczos(z));
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex rgamma(Complex z) {
    if (near_nonpositive_integer(z, 1e-14)) return {0.0, 0.0};
    return std::exp(-log_gamma(z));
}

void Hyp2F1Params::validate() const {
    // With an exact complement, z may round to 1 while 1 - z stays positive.
    const double upper = one_minus_z ? 1.0 : std::nextafter(1.0, 0.0);
    if (!std::isfinite(z) || z < 0.0 || z > upper)
        throw PreconditionError("hyp2f1: z must satisfy 0 <= z < 1, got " + std::to_string(z));
    if (one_minus_z && !(*one_minus_z > 0.0 && *one_minus_z <= 1.0))
        throw PreconditionError("hyp2f1: complement 1 - z must lie in (0, 1]");
    if (near_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer " + describe(c));
}

Complex hyp2f1_series(const Hyp2F1Params& p, SeriesOptions options) {
    const double z = p.z;
    if (z == 0.0) return {1.0, 0.0};
    CompensatedSum sum;
    Complex term(1.0, 0.0);
    sum.add(term);
    for (std::size_t n = 0; n < options.max_terms; ++n) {
        const double nd = static_cast<double>(n);
        const Complex ratio = (p.a + nd) * (p.b + nd) / ((p.c + nd) * (nd + 1.0)) * z;
        term *= ratio;
        sum.add(term);
        if (term == Complex(0.0, 0.0)) return sum.value();
        const double r = std::abs(ratio);
        if (r < 1.0) {
            const double tail = std::abs(term) * r / (1.0 - r);
            if (tail <= options.tail_tolerance * std::abs(sum.value())) return sum.value();
        }
    }
    throw ConvergenceError("hyp2f1: term cap of " + std::to_string(options.max_terms) +
                           " exhausted at z = " + std::to_string(z));
}

namespace {

// Connection formula without argument checks; the caller guarantees
// c - a - b is not an integer. Returns 2F1 / Gamma(c).
Complex regularized_by_connection(const Hyp2F1Params& p) {
    const Complex s = p.c - p.a - p.b;
    const double w = p.complement();
    Hyp2F1Params first{p.a, p.b, 1.0 - s, w, p.z};
    Hyp2F1Params second{p.c - p.a, p.c - p.b, s + 1.0, w, p.z};
    const Complex t1 = rgamma(p.c - p.a) * rgamma(p.c - p.b) * rgamma(1.0 - s) * hyp2f1_series(first);
    const Complex t2 = std::exp(s * std::log(w)) * rgamma(p.a) * rgamma(p.b) * rgamma(s + 1.0) *
                       hyp2f1_series(second);
    return kPi / std::sin(kPi * s) * (t1 - t2);
}

// 2F1 through the connection formula, or by capped summation when that
// formula degenerates.
Complex hyp2f1_unchecked(const Hyp2F1Params& p) {
    // A polynomial (a or b a non-positive integer) is summed exactly.
    if (p.z <= 0.5 || near_nonpositive_integer(p.a) || near_nonpositive_integer(p.b)) return hyp2f1_series(p);
    if (near_integer(p.c - p.a - p.b)) {
        return hyp2f1_series(p, SeriesOptions{1'000'000, 1e-12});
    }
    return gamma(p.c) * regularized_by_connection(p);
}

}  // namespace

Complex hyp2f1(const Hyp2F1Params& p) {
    p.validate();
    return hyp2f1_unchecked(p);
}

Complex hyp2f1_regularized(const Hyp2F1Params& p) {
    if (!std::isfinite(p.z) || p.z < 0.0 || p.z > 1.0 || (p.z == 1.0 && !p.one_minus_z))
        throw PreconditionError("hyp2f1_regularized: z must satisfy 0 <= z < 1");
    if (near_nonpositive_integer(p.c)) {
        // c = -n: the first n + 1 terms vanish and
        // F/Gamma(c) = (a)_{n+1} (b)_{n+1} z^{n+1} 2F1(a+n+1, b+n+1; n+2; z) / (n+1)!.
        const int n = static_cast<int>(-std::round(p.c.real()));
        if (p.z == 0.0) return {0.0, 0.0};
        Complex coef(1.0, 0.0);
        for (int k = 0; k <= n; ++k) {
            coef *= (p.a + static_cast<double>(k)) * (p.b + static_cast<double>(k));
        }
        coef *= std::pow(p.z, n + 1);
        const double shift = n + 1;
        Hyp2F1Params q{p.a + shift, p.b + shift, Complex(n + 2, 0.0), p.z, p.one_minus_z};
        return coef * hyp2f1(q) / std::tgamma(static_cast<double>(n + 2));
    }
    p.validate();
    if (p.z > 0.5 && !near_integer(p.c - p.a - p.b)) return regularized_by_connection(p);
    return hyp2f1_unchecked(p) * rgamma(p.c);
}

Complex hyp2f1_near_one(const Hyp2F1Params& p) {
    p.validate();
    if (!(p.z > 0.5)) throw PreconditionError("hyp2f1_near_one: requires 0.5 < z < 1");
    if (near_integer(p.c - p.a - p.b))
        throw DegenerateConnectionError("hyp2f1_near_one: c - a - b is an integer");
    return gamma(p.c) * regularized_by_connection(p);
}

Complex hyp2f1_derivative(const Hyp2F1Params& p) {
    p.validate();
    Hyp2F1Params shifted{p.a + 1.0, p.b + 1.0, p.c + 1.0, p.z, p.one_minus_z};
    return p.a * p.b / p.c * hyp2f1_unchecked(shifted);
}

}  // namespace dsf
