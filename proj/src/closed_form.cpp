#include "dsf/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "dsf/complex_special.hpp"
#include "dsf/errors.hpp"

namespace dsf {

namespace {

const Complex kI(0.0, 1.0);

void require_closed(const ModeParams& p) {
    p.validate();
    if (p.slicing != Slicing::Closed) throw PreconditionError("exact solutions exist for closed slicing only");
}

// 1/(e^T + e^{-T}) without overflow.
double half_sech(double T) {
    const double e = std::exp(-2.0 * std::abs(T));
    return std::exp(-std::abs(T)) / (1.0 + e);
}

struct Pieces {
    Complex F1, F2;    // 2F1(-l, l; 1/2 +- im; z) and 2F1(1-l, 1+l; 3/2 +- im; z)
    Complex dF1, dF2;  // derivatives in z
};

// sign = +1 for u+ and -1 for u-.
Pieces hyper_pieces(double T, const ModeParams& p, double sign, bool with_derivatives) {
    const auto arg = closed_argument(T);
    const double l = p.lambda;
    const Hyp2F1Params q1{-l, l, Complex(0.5, sign * p.m), arg.z, arg.one_minus_z};
    const Hyp2F1Params q2{1.0 - l, 1.0 + l, Complex(1.5, sign * p.m), arg.z, arg.one_minus_z};
    Pieces out;
    out.F1 = hyp2f1(q1);
    out.F2 = hyp2f1(q2);
    if (with_derivatives) {
        out.dF1 = hyp2f1_derivative(q1);
        out.dF2 = hyp2f1_derivative(q2);
    }
    return out;
}

// Prefactor of the coupled component: -2l/(2m - i) for u+ and 2l/(2m + i)
// for u-.
Complex coupling_prefactor(const ModeParams& p, double sign) {
    return sign > 0 ? -2.0 * p.lambda / Complex(2.0 * p.m, -1.0) : 2.0 * p.lambda / Complex(2.0 * p.m, 1.0);
}

// log cosh(x) for x >= 0 without overflow.
double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

}  // namespace

ClosedArgument closed_argument(double T) {
    return {1.0 / (1.0 + std::exp(2.0 * T)), 1.0 / (1.0 + std::exp(-2.0 * T))};
}

SpinorAmplitude exact_u_plus(double T, const ModeParams& p) {
    require_closed(p);
    const auto pc = hyper_pieces(T, p, 1.0, false);
    const Complex phase = std::polar(1.0, -p.m * T);
    return spinor(phase * pc.F1, coupling_prefactor(p, 1.0) * phase * half_sech(T) * pc.F2);
}

SpinorAmplitude exact_u_minus(double T, const ModeParams& p) {
    require_closed(p);
    const auto pc = hyper_pieces(T, p, -1.0, false);
    const Complex phase = std::polar(1.0, p.m * T);
    return spinor(coupling_prefactor(p, -1.0) * phase * half_sech(T) * pc.F2, phase * pc.F1);
}

SpinorAmplitude exact_solution(Branch branch, double T, const ModeParams& p) {
    return branch == Branch::Plus ? exact_u_plus(T, p) : exact_u_minus(T, p);
}

SpinorAmplitude exact_u_plus_derivative(double T, const ModeParams& p) {
    require_closed(p);
    const auto pc = hyper_pieces(T, p, 1.0, true);
    const auto arg = closed_argument(T);
    const double dz = -2.0 * arg.z * arg.one_minus_z;
    const double q = half_sech(T);
    const Complex phase = std::polar(1.0, -p.m * T);
    const Complex d1 = phase * (-kI * p.m * pc.F1 + pc.dF1 * dz);
    const Complex d2 = coupling_prefactor(p, 1.0) * phase * q *
                       ((-kI * p.m - std::tanh(T)) * pc.F2 + pc.dF2 * dz);
    return spinor(d1, d2);
}

SpinorAmplitude exact_u_minus_derivative(double T, const ModeParams& p) {
    require_closed(p);
    const auto pc = hyper_pieces(T, p, -1.0, true);
    const auto arg = closed_argument(T);
    const double dz = -2.0 * arg.z * arg.one_minus_z;
    const double q = half_sech(T);
    const Complex phase = std::polar(1.0, p.m * T);
    const Complex d2 = phase * (kI * p.m * pc.F1 + pc.dF1 * dz);
    const Complex d1 = coupling_prefactor(p, -1.0) * phase * q *
                       ((kI * p.m - std::tanh(T)) * pc.F2 + pc.dF2 * dz);
    return spinor(d1, d2);
}

SpinorAmplitude exact_solution_derivative(Branch branch, double T, const ModeParams& p) {
    return branch == Branch::Plus ? exact_u_plus_derivative(T, p) : exact_u_minus_derivative(T, p);
}

double exact_solution_residual(Branch branch, double T, const ModeParams& p) {
    const SpinorAmplitude u = exact_solution(branch, T, p);
    const SpinorAmplitude du = exact_solution_derivative(branch, T, p);
    return (kI * du - closed_hamiltonian(T, p) * u).norm();
}

SpinorAmplitude past_coefficients_closed(Branch branch, const ModeParams& p) {
    require_closed(p);
    const double m = p.m, l = p.lambda;
    const double pi = std::numbers::pi;
    // pi Gamma(1/2 + im) / [cosh(pi m) Gamma(1/2 - im) Gamma(1/2 + im - l) Gamma(1/2 + im + l)]
    const Complex log_a = std::log(pi) + log_gamma(Complex(0.5, m)) - log_cosh(pi * m) -
                          log_gamma(Complex(0.5, -m)) - log_gamma(Complex(0.5 - l, m)) -
                          log_gamma(Complex(0.5 + l, m));
    const Complex a = std::exp(log_a);
    const Complex b = -kI * std::sin(pi * l) / std::cosh(pi * m);
    if (branch == Branch::Plus) return spinor(a, b);
    return spinor(b, std::conj(a));
}

}  // namespace dsf
