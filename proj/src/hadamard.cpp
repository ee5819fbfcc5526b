#include "dsf/hadamard.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mass_radius(double m, double radius) {
    if (!(m > 0.0) || !std::isfinite(m)) throw PreconditionError("hadamard: m must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionError("hadamard: radius must be positive");
}

}  // namespace

HypergeometricAB ab_params(double m, double radius) {
    check_mass_radius(m, radius);
    // Principal square root of m^2 R^2 with R^2 < 0.
    const Complex root = std::sqrt(Complex(-(m * radius) * (m * radius), 0.0));
    return {2.0 + root, 2.0 - root};
}

double gamma_product(double m, double radius) {
    const HypergeometricAB ab = ab_params(m, radius);
    return std::exp(log_gamma(ab.a) + log_gamma(ab.b)).real();
}

Complex f_prefactor(double m, double radius) {
    const double g = gamma_product(m, radius);
    return Complex(0.0, -g / (8.0 * std::sqrt(2.0) * kPi * kPi * radius * radius * radius));
}

Complex h_prefactor(double m, double radius) {
    const double g = gamma_product(m, radius);
    return Complex(-m * g / (32.0 * kPi * kPi * radius * radius), 0.0);
}

TwoPointScalars two_point_scalars(double Z, double m, double radius) {
    check_mass_radius(m, radius);
    if (!(Z >= 0.0 && Z < 1.0)) throw PreconditionError("two_point_scalars: Z must satisfy 0 <= Z < 1");
    const HypergeometricAB ab = ab_params(m, radius);
    TwoPointScalars out;
    out.Z = Z;
    out.m = m;
    out.radius = radius;
    const Complex F2 = hyp2f1({ab.a, ab.b, 2.0, Z, std::nullopt});
    const Complex F3 = hyp2f1({ab.a, ab.b, 3.0, Z, std::nullopt});
    out.f = f_prefactor(m, radius) * std::sqrt(1.0 - Z) * F2;
    out.h = Z == 0.0 ? Complex(0.0, 0.0) : h_prefactor(m, radius) * std::sqrt(Z) * F3;
    return out;
}

std::vector<double> default_exponent_grid(int points) {
    auto gaps = geomspace(1e-2, 1e-3, points);
    for (double& g : gaps) g = 1.0 - g;
    return gaps;
}

void validate_exponent_grid(std::span<const double> z_grid) {
    if (z_grid.size() < 8) throw PreconditionError("singularity_exponents: need at least 8 grid points");
    for (double z : z_grid) {
        if (!(z >= 0.9 && z <= 0.999 + 1e-15))
            throw PreconditionError("singularity_exponents: grid must lie in [0.9, 0.999]");
    }
    // Geometric in 1 - Z: constant successive ratio.
    const double r0 = (1.0 - z_grid[1]) / (1.0 - z_grid[0]);
    for (std::size_t i = 1; i < z_grid.size(); ++i) {
        const double r = (1.0 - z_grid[i]) / (1.0 - z_grid[i - 1]);
        if (std::abs(r - r0) > 1e-6 * std::abs(r0) || r0 == 1.0)
            throw PreconditionError("singularity_exponents: grid must be geometric in 1 - Z");
    }
}

SingularityExponents singularity_exponents(double m, double radius, std::span<const double> z_grid) {
    check_mass_radius(m, radius);
    validate_exponent_grid(z_grid);
    std::vector<double> gaps, af, ah;
    for (double z : z_grid) gaps.push_back(1.0 - z);
    for (double z : z_grid) {
        const TwoPointScalars s = two_point_scalars(z, m, radius);
        af.push_back(std::abs(s.f));
        ah.push_back(std::abs(s.h));
    }
    const PowerLawFit ff = fit_power_law(gaps, af);
    const PowerLawFit fh = fit_power_law(gaps, ah);
    SingularityExponents out{ff.exponent, fh.exponent, ff.rms_residual, fh.rms_residual, ff.max_residual,
                             fh.max_residual};
    if (ff.rms_residual > kMaxFitResidual || fh.rms_residual > kMaxFitResidual)
        throw FitQualityError("singularity_exponents: log-log fit residual " +
                              std::to_string(std::max(ff.rms_residual, fh.rms_residual)) + " exceeds " +
                              std::to_string(kMaxFitResidual));
    return out;
}

}  // namespace dsf
