#pragma once

#include "dsf/linalg.hpp"
#include "dsf/mode_dynamics.hpp"

namespace dsf {

// The two fundamental closed-slicing solutions, normalized by their behaviour
// (e^{-imT}, 0) and (0, e^{imT}) as T -> +infinity.
enum class Branch { Plus, Minus };

// Argument of the hypergeometric factors, z(T) = 1/(1 + e^{2T}), together with
// its exact complement 1 - z(T) = 1/(1 + e^{-2T}).
struct ClosedArgument {
    double z;
    double one_minus_z;
};
ClosedArgument closed_argument(double T);

SpinorAmplitude exact_u_plus(double T, const ModeParams& p);
SpinorAmplitude exact_u_minus(double T, const ModeParams& p);
SpinorAmplitude exact_solution(Branch branch, double T, const ModeParams& p);

// Analytic T-derivative through the hypergeometric derivative rule.
SpinorAmplitude exact_u_plus_derivative(double T, const ModeParams& p);
SpinorAmplitude exact_u_minus_derivative(double T, const ModeParams& p);
SpinorAmplitude exact_solution_derivative(Branch branch, double T, const ModeParams& p);

// ||i du/dT - H(T) u|| for the exact solution.
double exact_solution_residual(Branch branch, double T, const ModeParams& p);

// Closed-form T -> -infinity coefficients (f1-, f2-) with
// u ~ (e^{-imT} f1-, e^{imT} f2-).
SpinorAmplitude past_coefficients_closed(Branch branch, const ModeParams& p);

}  // namespace dsf
