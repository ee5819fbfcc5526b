#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dsf/asymptotics.hpp"
#include "dsf/linalg.hpp"
#include "dsf/mode_dynamics.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

enum class SignatureKind { SPlus, SMinus, STotal, FlatHalf };
std::string to_string(SignatureKind k);

// Matrix of the signature operator in a fundamental basis (u+, u-) for closed
// slicing or (u^{s,1}, u^{s,2}) for flat slicing. Row convention: the basis
// solution u_i is mapped to sum_j entries(i, j) u_j.
struct SignatureMatrix {
    Matrix2 entries = Matrix2::Zero();
    SignatureKind kind = SignatureKind::STotal;
    ModeParams mode{};
};

// Closed-form matrix of S_m = (S+ + S-)/2 in the (u+, u-) basis.
SignatureMatrix signature_closed_form(const ModeParams& p);

struct NumericSignature {
    SignatureMatrix s_plus;
    SignatureMatrix s_minus;
    SignatureMatrix s_total;
    // Asymptotic data of u+ and u- used for the assembly.
    AsymptoticData plus_future, plus_past, minus_future, minus_past;
};

// Integrates u+ and u- from T = t_extract (plane-wave data) down to
// -t_extract, reads the coefficients at both ends and assembles S+, S- and
// their mean.
NumericSignature signature_numeric(const ModeParams& p, double t_extract = 30.0,
                                   const Tolerances& tol = {});

// Row-convention matrix of the operator that flips the sign of the second
// asymptotic coefficient, given the coefficient columns of the two basis
// solutions.
Matrix2 flip_operator_matrix(const SpinorAmplitude& coeff_first, const SpinorAmplitude& coeff_second);

// diag(1/2, -1/2) in the (u^{s,1}, u^{s,2}) basis.
SignatureMatrix signature_flat(const ModeParams& p);

inline constexpr double kSpectralCutTolerance = 1e-10;

struct SpectralProjection {
    Matrix2 projector = Matrix2::Zero();
    std::array<double, 2> eigenvalues{};
    std::array<SpinorAmplitude, 2> eigenvectors{};
    // An eigenvalue lies within kSpectralCutTolerance of zero; it was left out
    // of the negative subspace.
    bool degenerate_spectrum = false;
};

// Orthogonal projector onto the eigenvectors with strictly negative
// eigenvalue. Requires Hermitian input (PreconditionError otherwise).
SpectralProjection project_negative(const SignatureMatrix& s);
SpectralProjection project_negative(const Matrix2& s);

struct BoundaryTerm {
    Complex value;
    std::optional<ModeParams> mode;
    std::optional<ModeParams> mode_tilde;
};

// conj(g1) g~1 + conj(g2) g~2.
BoundaryTerm boundary_term(const SpinorAmplitude& g, const SpinorAmplitude& g_tilde);

struct MassIdentityOptions {
    Tolerances integration{1e-12, 1e-14};
    // Spacing of the fourth-order central difference.
    double step = 2e-3;
};

struct MassIdentityReport {
    std::vector<double> times;
    std::vector<double> residuals;  // |lhs - rhs| per time
    std::vector<Complex> lhs;       // d/dt <u(m,t), u(m',t)>
    std::vector<Complex> rhs;       // i (m - m') <u(m,t), sigma3 u(m',t)>
    double max_residual = 0.0;
};

// Checks d/dt <u(m,t), u(m',t)> = i (m - m') <u(m,t), sigma3 u(m',t)> for the
// first fundamental solution u^{s,1} at the two masses.
MassIdentityReport verify_mass_identity(const ModeParams& p, double m_prime,
                                        std::span<const double> t_grid,
                                        const MassIdentityOptions& options = {});

struct MassInterval {
    double lo;
    double hi;
};

// C-infinity bump supported on (lo, hi): exp(-1/(1 - x^2)) in the rescaled
// variable x in (-1, 1).
std::function<double(double)> smooth_bump(MassInterval interval);

struct SmearOptions {
    int quadrature_n = 64;
    // Largest allowed gap between the n- and 2n-node results.
    double refinement_tolerance = 1e-8;
    Tolerances integration{1e-11, 1e-13};
    int fundamental_index = 1;
};

struct SmearResult {
    double t;
    SpinorAmplitude value;
    double refinement_gap;
};

// Gauss-Legendre approximation of int_I eta(m) u^{s,a}(m, t) dm at each time.
std::vector<SmearResult> mass_smear(double lambda, MassInterval interval,
                                    const std::function<double(double)>& weight,
                                    std::span<const double> times,
                                    const SmearOptions& options = {});
SmearResult mass_smear(double lambda, MassInterval interval,
                       const std::function<double(double)>& weight, double t,
                       const SmearOptions& options = {});

}  // namespace dsf
