#pragma once

#include <complex>
#include <cstddef>
#include <optional>

namespace dsf {

using Complex = std::complex<double>;

inline constexpr double kIntegerTolerance = 1e-10;

// True when z lies within `tol` of an integer on the real axis.
bool near_integer(Complex z, double tol = kIntegerTolerance);
bool near_nonpositive_integer(Complex z, double tol = kIntegerTolerance);

// Principal branch of log Gamma. Throws PoleError at non-positive integers.
Complex log_gamma(Complex z);
Complex gamma(Complex z);
// 1/Gamma(z), entire; returns exactly 0 at the poles of Gamma.
Complex rgamma(Complex z);

// Parameters of 2F1(a, b; c; z) on the real segment 0 <= z < 1.
//
// When z is close to 1 the caller may supply the complement 1 - z directly so
// that it carries full relative precision; otherwise it is formed as 1 - z.
struct Hyp2F1Params {
    Complex a;
    Complex b;
    Complex c;
    double z = 0.0;
    std::optional<double> one_minus_z;

    double complement() const { return one_minus_z ? *one_minus_z : 1.0 - z; }
    // Throws PreconditionError (PoleError for a bad c) on invalid input.
    void validate() const;
};

struct SeriesOptions {
    std::size_t max_terms = 1'000'000;
    // Summation stops once the geometric tail estimate falls below
    // tail_tolerance * |partial sum|.
    double tail_tolerance = 1e-17;
};

// Plain Gauss series with compensated summation. Valid for 0 <= z < 1.
Complex hyp2f1_series(const Hyp2F1Params& p, SeriesOptions options = {});

// 2F1 on [0, 1): direct series for z <= 0.5, the z -> 1 - z connection
// formula above that, and a capped slow direct sum when c - a - b is an
// integer.
Complex hyp2f1(const Hyp2F1Params& p);

// 2F1 / Gamma(c). Entire in c, so c may be a non-positive integer here.
Complex hyp2f1_regularized(const Hyp2F1Params& p);

// Connection-formula evaluation. Requires 0.5 < z < 1 and c - a - b
// non-integer (DegenerateConnectionError otherwise).
Complex hyp2f1_near_one(const Hyp2F1Params& p);

// d/dz 2F1 = (ab/c) 2F1(a+1, b+1; c+1; z).
Complex hyp2f1_derivative(const Hyp2F1Params& p);

}  // namespace dsf
