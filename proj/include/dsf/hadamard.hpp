#pragma once

#include <span>
#include <vector>

#include "dsf/complex_special.hpp"

namespace dsf {

// Hypergeometric parameters a = 2 + i m R, b = 2 - i m R.
struct HypergeometricAB {
    Complex a;
    Complex b;
};

HypergeometricAB ab_params(double m, double radius);

struct TwoPointScalars {
    double Z = 0.0;
    Complex f;
    Complex h;
    double m = 0.0;
    double radius = 0.0;
};

// Gamma(a) Gamma(b) = |Gamma(2 + i m R)|^2.
double gamma_product(double m, double radius);
// f at Z = 0: -i Gamma(a)Gamma(b) / (8 sqrt(2) pi^2 R^3).
Complex f_prefactor(double m, double radius);
Complex h_prefactor(double m, double radius);

// Scalar coefficients of the maximally symmetric two-point function at
// 0 <= Z < 1.
TwoPointScalars two_point_scalars(double Z, double m, double radius);

struct SingularityExponents {
    double p_f = 0.0;
    double p_h = 0.0;
    double residual_f = 0.0;  // rms residual of the log-log fit
    double residual_h = 0.0;
    double max_residual_f = 0.0;
    double max_residual_h = 0.0;
};

inline constexpr double kMaxFitResidual = 0.02;

// Default fitting grid: 16 points with 1 - Z geometric from 1e-2 to 1e-3.
std::vector<double> default_exponent_grid(int points = 16);

// Throws PreconditionError unless the grid has at least 8 points in [0.9, 0.999]
// and is geometric in 1 - Z.
void validate_exponent_grid(std::span<const double> z_grid);

// Slopes of log|f| and log|h| against log(1 - Z) on a grid accepted by
// validate_exponent_grid. FitQualityError when a fit residual exceeds
// kMaxFitResidual.
SingularityExponents singularity_exponents(double m, double radius, std::span<const double> z_grid);

}  // namespace dsf
