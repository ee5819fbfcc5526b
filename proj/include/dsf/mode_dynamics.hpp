#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsf/linalg.hpp"

namespace dsf {

enum class Slicing { Flat, Closed };

// Time variable and chart in which a mode equation is written.
enum class System {
    FlatCosmological,  // t, scale factor e^t
    FlatConformal,     // tau = -e^{-t} < 0
    Closed,            // T, scale factor cosh T
    FlatPhaseStripped  // f(t) with u = (e^{-imt} f1, e^{imt} f2)
};

std::string to_string(Slicing s);
std::string to_string(System s);

using Vec3 = std::array<double, 3>;

// Separation constants of a single Dirac mode.
struct ModeParams {
    Slicing slicing = Slicing::Closed;
    double m = 1.0;
    double lambda = 1.5;
    Vec3 k{0.0, 0.0, 0.0};  // flat slicing only
    int s = 1;               // flat slicing only
    // Admits lambda = 0 (k = 0 in flat slicing), where the components
    // decouple. Only meant for analytic test cases.
    bool allow_zero_lambda = false;

    static ModeParams closed(double m, double lambda);
    static ModeParams closed_decoupled(double m);
    static ModeParams flat_decoupled(double m);
    static ModeParams flat(double m, const Vec3& k, int s);
    // Flat mode with momentum along the first axis and lambda = s|k|.
    static ModeParams flat_lambda(double m, double lambda);

    // Throws PreconditionError naming the violated condition.
    void validate() const;
};

struct StepStatistics {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    double min_step = 0.0;
    double max_step = 0.0;
};

// Sampled solution. Times are strictly monotone (decreasing for backward
// integrations). `derivatives` holds du/dt at each sample and feeds the cubic
// Hermite interpolant.
struct Trajectory {
    System system = System::Closed;
    std::vector<double> times;
    std::vector<SpinorAmplitude> states;
    std::vector<SpinorAmplitude> derivatives;
    StepStatistics stats;

    std::size_t size() const { return times.size(); }
    const SpinorAmplitude& final_state() const { return states.back(); }
    // Dense output on the sampled range. Throws PreconditionError outside it.
    SpinorAmplitude interpolate(double t) const;
};

struct Tolerances {
    double rel = 1e-10;
    double abs = 1e-12;
    void validate() const;
};

// Right-hand sides du/dt of the three charts.
SpinorAmplitude rhs_flat_cosmological(double t, const SpinorAmplitude& u, const ModeParams& p);
SpinorAmplitude rhs_flat_conformal(double tau, const SpinorAmplitude& u, const ModeParams& p);
SpinorAmplitude rhs_closed(double T, const SpinorAmplitude& u, const ModeParams& p);
// Right-hand side of the phase-stripped flat equation.
SpinorAmplitude rhs_phase_stripped(double t, const SpinorAmplitude& f, const ModeParams& p);

// Hermitian generator H with i du/dT = H u in closed slicing.
Matrix2 closed_hamiltonian(double T, const ModeParams& p);

// Adaptive Dormand-Prince 5(4) integration from t0 to t1 (either direction).
//
// With an empty `output_times` every accepted step is recorded. Otherwise the
// trajectory holds t0, each requested time, and t1, and the integrator lands
// exactly on each of them. Requested times must lie in the closed interval and
// be ordered in the direction of integration.
Trajectory integrate(System system, const ModeParams& p, const SpinorAmplitude& u0, double t0,
                     double t1, const Tolerances& tol = {},
                     std::span<const double> output_times = {});

// Evolves the phase-stripped amplitude f in the flat cosmological chart.
// Requires t0 < t1.
Trajectory integrate_phase_stripped(const ModeParams& p, const SpinorAmplitude& f0, double t0,
                                    double t1, const Tolerances& tol = {},
                                    std::span<const double> output_times = {});

// u(t) = (e^{-imt} f1, e^{imt} f2).
SpinorAmplitude reconstruct_from_phase_stripped(double t, const SpinorAmplitude& f, double m);
SpinorAmplitude strip_phases(double t, const SpinorAmplitude& u, double m);

struct SpatialSpinor {
    std::array<Complex, 2> chi{};
    int s = 1;
    Vec3 k{};
};

struct SpatialSpinorPair {
    SpatialSpinor plus;   // (k.sigma) chi = +|k| chi
    SpatialSpinor minus;  // (k.sigma) chi = -|k| chi
    bool axis_fallback = false;
};

enum class AxisPolicy { Fallback, Throw };

// Unit eigenvectors of k.sigma. When k lies within an angle of 1e-12 of the
// 3-axis (sqrt(k1^2 + k2^2) < 1e-12 |k|) the sigma_3 eigenvectors are returned
// instead, or DegenerateAxisError is thrown under AxisPolicy::Throw.
SpatialSpinorPair build_spatial_spinors(const Vec3& k, AxisPolicy policy = AxisPolicy::Fallback);

// CSV with header t,re_u1,im_u1,re_u2,im_u2.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace dsf
