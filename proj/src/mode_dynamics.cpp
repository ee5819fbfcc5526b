#include "dsf/mode_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "dsf/errors.hpp"
#include "dsf/format.hpp"

namespace dsf {

namespace {

const Complex kI(0.0, 1.0);

bool is_half_odd_integer(double x) {
    const double twice = 2.0 * x;
    return std::abs(twice - std::round(twice)) <= 1e-10 && std::fmod(std::abs(std::round(twice)), 2.0) == 1.0;
}

double vec_norm(const Vec3& k) { return std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]); }

}  // namespace

std::string to_string(Slicing s) { return s == Slicing::Flat ? "flat" : "closed"; }

std::string to_string(System s) {
    switch (s) {
        case System::FlatCosmological: return "flat-cosmological";
        case System::FlatConformal: return "flat-conformal";
        case System::Closed: return "closed";
        case System::FlatPhaseStripped: return "flat-phase-stripped";
    }
    return "unknown";
}

ModeParams ModeParams::closed(double m, double lambda) {
    ModeParams p;
    p.slicing = Slicing::Closed;
    p.m = m;
    p.lambda = lambda;
    p.validate();
    return p;
}

ModeParams ModeParams::closed_decoupled(double m) {
    ModeParams p;
    p.slicing = Slicing::Closed;
    p.m = m;
    p.lambda = 0.0;
    p.allow_zero_lambda = true;
    p.validate();
    return p;
}

ModeParams ModeParams::flat_decoupled(double m) {
    ModeParams p;
    p.slicing = Slicing::Flat;
    p.m = m;
    p.lambda = 0.0;
    p.allow_zero_lambda = true;
    p.validate();
    return p;
}

ModeParams ModeParams::flat(double m, const Vec3& k, int s) {
    ModeParams p;
    p.slicing = Slicing::Flat;
    p.m = m;
    p.k = k;
    p.s = s;
    p.lambda = s * vec_norm(k);
    p.validate();
    return p;
}

ModeParams ModeParams::flat_lambda(double m, double lambda) {
    if (lambda == 0.0) throw PreconditionError("flat slicing requires lambda != 0");
    return flat(m, {std::abs(lambda), 0.0, 0.0}, lambda > 0 ? 1 : -1);
}

void ModeParams::validate() const {
    if (!std::isfinite(m) || !(m > 0.0)) throw PreconditionError("mode: mass m must be positive and finite");
    if (!std::isfinite(lambda)) throw PreconditionError("mode: lambda must be finite");
    if (slicing == Slicing::Closed) {
        if (lambda == 0.0 && allow_zero_lambda) return;
        if (!is_half_odd_integer(lambda) || std::abs(lambda) < 1.5 - 1e-10)
            throw PreconditionError("mode: closed slicing requires lambda in {+-3/2, +-5/2, ...}, got " +
                                    std::to_string(lambda));
        return;
    }
    if (s != 1 && s != -1) throw PreconditionError("mode: spin label s must be +1 or -1");
    const double kn = vec_norm(k);
    if (allow_zero_lambda && kn == 0.0 && lambda == 0.0) return;
    if (!(kn > 0.0) || !std::isfinite(kn)) throw PreconditionError("mode: flat slicing requires k != 0");
    if (std::abs(lambda - s * kn) > 1e-12 * kn)
        throw PreconditionError("mode: flat slicing requires lambda = s|k|");
}

void Tolerances::validate() const {
    auto ok = [](double x) { return std::isfinite(x) && x >= 1e-14 && x <= 1e-2; };
    if (!ok(rel) || !ok(abs)) throw PreconditionError("tolerances must lie in [1e-14, 1e-2]");
}

SpinorAmplitude rhs_flat_cosmological(double t, const SpinorAmplitude& u, const ModeParams& p) {
    const double c = p.lambda * std::exp(-t);
    return spinor(-kI * (p.m * u(0) - c * u(1)), -kI * (-c * u(0) - p.m * u(1)));
}

SpinorAmplitude rhs_flat_conformal(double tau, const SpinorAmplitude& u, const ModeParams& p) {
    if (tau >= -1e-300) throw SingularTimeError("conformal chart: tau must be negative");
    const double d = p.m / tau;
    return spinor(kI * (d * u(0) + p.lambda * u(1)), kI * (p.lambda * u(0) - d * u(1)));
}

SpinorAmplitude rhs_closed(double T, const SpinorAmplitude& u, const ModeParams& p) {
    const double c = p.lambda / std::cosh(T);
    return spinor(-kI * (p.m * u(0) - c * u(1)), -kI * (-c * u(0) - p.m * u(1)));
}

SpinorAmplitude rhs_phase_stripped(double t, const SpinorAmplitude& f, const ModeParams& p) {
    const double c = p.lambda * std::exp(-t);
    const Complex e = std::polar(1.0, 2.0 * p.m * t);
    return spinor(kI * c * e * f(1), kI * c * std::conj(e) * f(0));
}

Matrix2 closed_hamiltonian(double T, const ModeParams& p) {
    const double c = p.lambda / std::cosh(T);
    Matrix2 h;
    h << p.m, -c, -c, -p.m;
    return h;
}

SpinorAmplitude reconstruct_from_phase_stripped(double t, const SpinorAmplitude& f, double m) {
    return spinor(std::polar(1.0, -m * t) * f(0), std::polar(1.0, m * t) * f(1));
}

SpinorAmplitude strip_phases(double t, const SpinorAmplitude& u, double m) {
    return spinor(std::polar(1.0, m * t) * u(0), std::polar(1.0, -m * t) * u(1));
}

SpinorAmplitude Trajectory::interpolate(double t) const {
    if (times.empty()) throw PreconditionError("interpolate: empty trajectory");
    const bool forward = times.size() < 2 || times.back() > times.front();
    auto before = [&](double a, double b) { return forward ? a < b : a > b; };
    if (before(t, times.front()) || before(times.back(), t))
        throw PreconditionError("interpolate: time outside the sampled range");
    // Index of the first sample not before t.
    const auto it = std::lower_bound(times.begin(), times.end(), t,
                                     [&](double a, double b) { return before(a, b); });
    std::size_t j = static_cast<std::size_t>(it - times.begin());
    if (j < times.size() && times[j] == t) return states[j];
    const std::size_t i = j - 1;
    const double h = times[j] - times[i];
    const double x = (t - times[i]) / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    const double h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x);
    const double h11 = x * x * (x - 1);
    return h00 * states[i] + (h10 * h) * derivatives[i] + h01 * states[j] + (h11 * h) * derivatives[j];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr std::size_t kMaxSteps = 50'000'000;

double error_norm(const SpinorAmplitude& err, const SpinorAmplitude& y0, const SpinorAmplitude& y1,
                  const Tolerances& tol) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sc = tol.abs + tol.rel * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / 2.0);
}

// Forward integration in the variable s (s0 < s1) of dy/ds = f(s, y). The
// caller maps back to the physical time. Records (s, y, dy/ds).
template <class Rhs>
void dopri_forward(Rhs&& f, const SpinorAmplitude& y0, double s0, double s1, const Tolerances& tol,
                   const std::vector<double>& stops, std::vector<double>& s_out,
                   std::vector<SpinorAmplitude>& y_out, std::vector<SpinorAmplitude>& dy_out,
                   StepStatistics& stats) {
    double s = s0;
    SpinorAmplitude y = y0;
    SpinorAmplitude k1 = f(s, y);
    ++stats.rhs_evaluations;
    s_out.push_back(s);
    y_out.push_back(y);
    dy_out.push_back(k1);

    const bool record_all = stops.empty();
    std::size_t next_stop = 0;

    // Initial step from the scaled sizes of y and y'.
    const double span = s1 - s0;
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sc = tol.abs + tol.rel * std::abs(y(i));
        d0 = std::max(d0, std::abs(y(i)) / sc);
        d1 = std::max(d1, std::abs(k1(i)) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, 0.1});
    stats.min_step = std::numeric_limits<double>::infinity();

    std::size_t steps = 0;
    while (s < s1) {
        if (++steps > kMaxSteps) throw StepSizeUnderflow("integrator: step budget exhausted");
        double target = record_all ? s1 : stops[next_stop];
        bool hits_target = false;
        double hstep = h;
        if (s + hstep >= target || (target - s - hstep) < 1e-12 * std::max(1.0, std::abs(target))) {
            hstep = target - s;
            hits_target = true;
        }
        if (hstep < 1e-14 * std::max(1.0, std::abs(s)))
            throw StepSizeUnderflow("integrator: step size underflow at t = " + std::to_string(s));

        const SpinorAmplitude k2 = f(s + c2 * hstep, y + hstep * (a21 * k1));
        const SpinorAmplitude k3 = f(s + c3 * hstep, y + hstep * (a31 * k1 + a32 * k2));
        const SpinorAmplitude k4 = f(s + c4 * hstep, y + hstep * (a41 * k1 + a42 * k2 + a43 * k3));
        const SpinorAmplitude k5 =
            f(s + c5 * hstep, y + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double s_new = hits_target ? target : s + hstep;
        const SpinorAmplitude k6 =
            f(s_new, y + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const SpinorAmplitude y_new = y + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const SpinorAmplitude k7 = f(s_new, y_new);
        stats.rhs_evaluations += 6;
        const SpinorAmplitude err = hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, y_new, tol);

        if (!std::isfinite(en)) {
            ++stats.rejected;
            h = 0.2 * hstep;
            continue;
        }
        if (en <= 1.0) {
            ++stats.accepted;
            stats.min_step = std::min(stats.min_step, hstep);
            stats.max_step = std::max(stats.max_step, hstep);
            s = s_new;
            y = y_new;
            k1 = k7;
            if (record_all || hits_target) {
                s_out.push_back(s);
                y_out.push_back(y);
                dy_out.push_back(k1);
            }
            if (hits_target && !record_all) {
                ++next_stop;
                if (next_stop == stops.size()) break;
            }
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            double h_next = hstep * fac;
            // A step shortened to land on an output time says nothing about
            // the natural step length.
            if (hits_target && hstep < h) h_next = std::max(h_next, h);
            h = h_next;
        } else {
            ++stats.rejected;
            h = hstep * std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
    }
    if (stats.accepted == 0) stats.min_step = 0.0;
}

}  // namespace

Trajectory integrate(System system, const ModeParams& p, const SpinorAmplitude& u0, double t0,
                     double t1, const Tolerances& tol, std::span<const double> output_times) {
    p.validate();
    tol.validate();
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw PreconditionError("integrate: times must be finite");
    if (t0 == t1) throw PreconditionError("integrate: t0 must differ from t1 (empty interval)");
    if (!all_finite(u0)) throw PreconditionError("integrate: initial state must be finite");
    const bool flat = system == System::FlatCosmological || system == System::FlatConformal ||
                      system == System::FlatPhaseStripped;
    if (flat && p.slicing != Slicing::Flat) throw PreconditionError("integrate: flat chart needs a flat-slicing mode");
    if (system == System::Closed && p.slicing != Slicing::Closed)
        throw PreconditionError("integrate: closed chart needs a closed-slicing mode");
    if (system == System::FlatConformal && (t0 >= 0.0 || t1 >= 0.0))
        throw SingularTimeError("integrate: conformal chart requires tau0, tau1 < 0");

    const double dir = t1 > t0 ? 1.0 : -1.0;
    // Output times mapped to the forward variable s = dir * t.
    std::vector<double> stops;
    if (!output_times.empty()) {
        double prev = dir * t0;
        for (double t : output_times) {
            const double s = dir * t;
            if (!std::isfinite(t) || s < dir * t0 || s > dir * t1)
                throw PreconditionError("integrate: output time outside the integration interval");
            if (s < prev) throw PreconditionError("integrate: output times must follow the integration direction");
            if (s > prev) stops.push_back(s);
            prev = s;
        }
        if (stops.empty() || stops.back() != dir * t1) stops.push_back(dir * t1);
    }

    auto physical = [&](auto rhs) {
        // Time reversal: dy/ds = dir * F(dir * s, y).
        return [rhs, dir, &p](double s, const SpinorAmplitude& y) -> SpinorAmplitude {
            return dir * rhs(dir * s, y, p);
        };
    };

    Trajectory traj;
    traj.system = system;
    std::vector<double> s_out;
    std::vector<SpinorAmplitude> dy;
    switch (system) {
        case System::FlatCosmological:
            dopri_forward(physical(rhs_flat_cosmological), u0, dir * t0, dir * t1, tol, stops, s_out, traj.states, dy, traj.stats);
            break;
        case System::FlatConformal:
            dopri_forward(physical(rhs_flat_conformal), u0, dir * t0, dir * t1, tol, stops, s_out, traj.states, dy, traj.stats);
            break;
        case System::Closed:
            dopri_forward(physical(rhs_closed), u0, dir * t0, dir * t1, tol, stops, s_out, traj.states, dy, traj.stats);
            break;
        case System::FlatPhaseStripped:
            dopri_forward(physical(rhs_phase_stripped), u0, dir * t0, dir * t1, tol, stops, s_out, traj.states, dy, traj.stats);
            break;
    }
    traj.times.reserve(s_out.size());
    traj.derivatives.reserve(dy.size());
    for (std::size_t i = 0; i < s_out.size(); ++i) {
        traj.times.push_back(dir * s_out[i]);
        traj.derivatives.push_back(dir * dy[i]);
    }
    // Land exactly on the requested end points.
    traj.times.front() = t0;
    traj.times.back() = t1;
    return traj;
}

Trajectory integrate_phase_stripped(const ModeParams& p, const SpinorAmplitude& f0, double t0, double t1,
                                    const Tolerances& tol, std::span<const double> output_times) {
    if (p.slicing != Slicing::Flat) throw PreconditionError("integrate_phase_stripped: flat slicing only");
    if (!(t0 < t1)) throw PreconditionError("integrate_phase_stripped: requires t0 < t1");
    return integrate(System::FlatPhaseStripped, p, f0, t0, t1, tol, output_times);
}

SpatialSpinorPair build_spatial_spinors(const Vec3& k, AxisPolicy policy) {
    const double kn = vec_norm(k);
    if (!(kn > 0.0) || !std::isfinite(kn)) throw PreconditionError("spatial spinors: k must be nonzero");
    const double rho2 = k[0] * k[0] + k[1] * k[1];
    SpatialSpinorPair out;
    out.plus.s = 1;
    out.minus.s = -1;
    out.plus.k = out.minus.k = k;
    if (std::sqrt(rho2) < 1e-12 * kn) {
        if (policy == AxisPolicy::Throw)
            throw DegenerateAxisError("spatial spinors: k is (anti)parallel to the 3-axis");
        out.axis_fallback = true;
        const bool up = k[2] > 0.0;
        out.plus.chi = up ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
        out.minus.chi = up ? std::array<Complex, 2>{0.0, 1.0} : std::array<Complex, 2>{1.0, 0.0};
        return out;
    }
    // kp = |k| + k3 and km = |k| - k3 with kp km = k1^2 + k2^2.
    double kp, km;
    if (k[2] >= 0.0) {
        kp = kn + k[2];
        km = rho2 / kp;
    } else {
        km = kn - k[2];
        kp = rho2 / km;
    }
    const Complex kperp(k[0], k[1]);
    const double np = 1.0 / std::sqrt(2.0 * kn * kp);
    const double nm = 1.0 / std::sqrt(2.0 * kn * km);
    out.plus.chi = {np * kp, np * kperp};
    out.minus.chi = {-nm * km, nm * kperp};
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,re_u1,im_u1,re_u2,im_u2\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& u = traj.states[i];
        out << format_double(traj.times[i]) << ',' << format_double(u(0).real()) << ','
            << format_double(u(0).imag()) << ',' << format_double(u(1).real()) << ','
            << format_double(u(1).imag()) << '\n';
    }
}

}  // namespace dsf
