#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace dsf {

// Neumaier-compensated running sum, applied to real and imaginary parts
// separately.
class CompensatedSum {
public:
    void add(std::complex<double> x) {
        add_real(re_, cre_, x.real());
        add_real(im_, cim_, x.imag());
    }
    std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add_real(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo, double hi);

// Adaptive Simpson integration of a smooth function to absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth = 50);

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double max_residual = 0.0;
};

// Least-squares line through (log x_i, log y_i). Needs two or more points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// Grid helpers: inclusive endpoints.
std::vector<double> linspace(double start, double end, int count);
std::vector<double> geomspace(double start, double end, int count);

}  // namespace dsf
