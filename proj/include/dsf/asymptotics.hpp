#pragma once

#include <cmath>
#include <optional>

#include "dsf/closed_form.hpp"
#include "dsf/linalg.hpp"
#include "dsf/mode_dynamics.hpp"

namespace dsf {

enum class Direction { Future, Past };
enum class Source { Integrated, Exact };

// Constant coefficients read off at a temporal boundary.
//
// Closed slicing fills f_plus and f_minus. Flat slicing fills f_inf (future,
// u ~ (e^{-imt} f1, e^{imt} f2)) or g (past boundary in conformal time).
struct AsymptoticData {
    Slicing slicing = Slicing::Closed;
    Direction direction = Direction::Future;
    std::optional<SpinorAmplitude> f_plus;
    std::optional<SpinorAmplitude> f_minus;
    std::optional<SpinorAmplitude> f_inf;
    std::optional<SpinorAmplitude> g;
    // Time (T, t, or tau) at which the coefficients were read.
    double extraction_time = 0.0;
    // Difference between the readings at the extraction time and at a
    // companion time further out.
    double error_estimate = 0.0;
    double companion_time = 0.0;

    const SpinorAmplitude& coefficients() const;
};

// Closed-form asymptotic data of u+ or u-: f_plus is (1,0) or (0,1) and
// f_minus comes from the Gamma-function expressions.
AsymptoticData asymptotic_coeffs_closed_exact(const ModeParams& p, Branch branch);

// T_extract = max(25, ln(2|lambda|/tol)).
double default_extraction_time(const ModeParams& p, double tol);

struct ExtractionOptions {
    // Disagreement between the two readings above which NotConvergedError is
    // thrown.
    double tolerance = 1e-6;
    Tolerances integration{};
    Branch branch = Branch::Plus;  // closed slicing
    int fundamental_index = 1;     // flat slicing, a in {1, 2}
    // Defaults: |T| + 5 for closed and flat-future, 10 tau for the flat past.
    std::optional<double> companion_time;
};

// Reads the boundary coefficients of a fundamental solution. For closed
// slicing the solution is u+ or u- (exact or integrated from T = +30); for flat
// slicing it is the fundamental solution u^{s,a}, always integrated. The past
// boundary of the flat chart is addressed in conformal time (t_extract < 0 is
// then tau).
AsymptoticData extract_asymptotics(Source source, const ModeParams& p, double t_extract,
                                   Direction direction, const ExtractionOptions& options = {});

// Plane-wave coefficients: (e^{imt} u1, e^{-imt} u2).
SpinorAmplitude plane_wave_coefficients(double t, const SpinorAmplitude& u, double m);

// phi(tau) = |lambda| tau + int_{-inf}^{tau} (sqrt(lambda^2 + m^2/s^2) - |lambda|) ds
// via its antiderivative. The m = 0 limit is allowed here.
double phase_integral(double tau, double m, double lambda);
double phase_integral(double tau, const ModeParams& p);
// The integral term alone, evaluated by adaptive quadrature.
double phase_correction_quadrature(double tau, double m, double lambda, double tol = 1e-13);

// Rotation U(tau) diagonalising the conformal generator, angle
// alpha = -arctan(lambda tau / m)/2.
Matrix2 boundary_frame(double tau, const ModeParams& p);
// tau -> -infinity limit of boundary_frame.
Matrix2 boundary_frame_limit(const ModeParams& p);

// g(tau) = diag(e^{i phi}, e^{-i phi}) U(tau)^{-1} u(tau).
SpinorAmplitude boundary_coefficients(double tau, const SpinorAmplitude& u, const ModeParams& p);
// Same with the leading-order frame and phase, U_inf and |lambda| tau.
SpinorAmplitude boundary_coefficients_leading(double tau, const SpinorAmplitude& u,
                                              const ModeParams& p);

// Fundamental flat-slicing solutions u^{s,a}, a in {1, 2}, normalized by
// e^{imt} u1 -> 1 (a = 1) or e^{-imt} u2 -> 1 (a = 2) as t -> +infinity.
class FlatFundamentalSolution {
public:
    FlatFundamentalSolution(ModeParams p, int a, Tolerances tol = {});

    // Values at cosmological times; any order, results follow the input order.
    std::vector<SpinorAmplitude> at_times(std::span<const double> t) const;
    // Values at conformal times tau < 0; any order.
    std::vector<SpinorAmplitude> at_conformal(std::span<const double> tau) const;
    SpinorAmplitude at_time(double t) const;
    SpinorAmplitude at_conformal(double tau) const;

    // Plane-wave data imposed at the anchor time, where the coupling
    // lambda e^{-t} is below double precision.
    static SpinorAmplitude anchor_state(const ModeParams& p, int a, double t_anchor);
    static constexpr double kMinAnchorTime = 40.0;

    const ModeParams& params() const { return p_; }
    int index() const { return a_; }

private:
    ModeParams p_;
    int a_;
    Tolerances tol_;
};

}  // namespace dsf
