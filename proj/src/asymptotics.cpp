#include "dsf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsf/errors.hpp"
#include "dsf/numerics.hpp"

namespace dsf {

namespace {

void require_flat(const ModeParams& p) {
    p.validate();
    if (p.slicing != Slicing::Flat) throw PreconditionError("flat-slicing operation called with a closed mode");
}

double phase_correction_closed(double tau, double m, double lambda) {
    const double a = std::abs(lambda) * std::abs(tau);
    // |lambda||tau| - sqrt(lambda^2 tau^2 + m^2), written without cancellation.
    const double head = -m * m / (a + std::hypot(a, m));
    return head + m * std::asinh(m / a);
}

// Checks the antiderivative against quadrature once per process.
bool antiderivative_trusted() {
    static const bool trusted = [] {
        const double cases[][3] = {{-0.5, 1.0, 1.0}, {-5.0, 1.0, 1.0}, {-50.0, 2.0, 0.5}, {-2.0, 0.25, -3.0}};
        for (const auto& c : cases) {
            const double a = phase_correction_closed(c[0], c[1], c[2]);
            const double b = phase_correction_quadrature(c[0], c[1], c[2]);
            if (!(std::abs(a - b) <= 1e-10)) return false;
        }
        return true;
    }();
    return trusted;
}

}  // namespace

const SpinorAmplitude& AsymptoticData::coefficients() const {
    if (slicing == Slicing::Closed) {
        if (direction == Direction::Future && f_plus) return *f_plus;
        if (direction == Direction::Past && f_minus) return *f_minus;
    } else {
        if (direction == Direction::Future && f_inf) return *f_inf;
        if (direction == Direction::Past && g) return *g;
    }
    throw PreconditionError("asymptotic data holds no coefficients for this boundary");
}

SpinorAmplitude plane_wave_coefficients(double t, const SpinorAmplitude& u, double m) {
    return strip_phases(t, u, m);
}

AsymptoticData asymptotic_coeffs_closed_exact(const ModeParams& p, Branch branch) {
    AsymptoticData d;
    d.slicing = Slicing::Closed;
    d.direction = Direction::Past;
    d.f_plus = branch == Branch::Plus ? spinor(1.0, 0.0) : spinor(0.0, 1.0);
    d.f_minus = past_coefficients_closed(branch, p);
    d.extraction_time = -std::numeric_limits<double>::infinity();
    d.companion_time = d.extraction_time;
    d.error_estimate = 0.0;
    return d;
}

double default_extraction_time(const ModeParams& p, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("extraction tolerance must be positive");
    const double l = std::max(std::abs(p.lambda), 1e-300);
    return std::max(25.0, std::log(2.0 * l / tol));
}

double phase_correction_quadrature(double tau, double m, double lambda, double tol) {
    if (!(tau < 0.0)) throw SingularTimeError("phase integral: tau must be negative");
    const double l = std::abs(lambda);
    const double at = std::abs(tau);
    // sigma = tau / s maps s in (0, 1] onto (-inf, tau].
    auto integrand = [&](double s) {
        const double r = m * s / at;
        return (m * m / at) / (std::sqrt(l * l + r * r) + l);
    };
    return adaptive_simpson(integrand, 0.0, 1.0, tol);
}

double phase_integral(double tau, double m, double lambda) {
    if (tau == 0.0) throw SingularTimeError("phase integral: tau = 0 is the conformal boundary");
    if (!(tau < 0.0)) throw PreconditionError("phase integral: tau must be negative");
    if (lambda == 0.0) throw PreconditionError("phase integral: lambda must be nonzero");
    if (!(m >= 0.0)) throw PreconditionError("phase integral: m must be non-negative");
    const double head = std::abs(lambda) * tau;
    if (m == 0.0) return head;
    const double corr = antiderivative_trusted() ? phase_correction_closed(tau, m, lambda)
                                                 : phase_correction_quadrature(tau, m, lambda);
    return head + corr;
}

double phase_integral(double tau, const ModeParams& p) {
    require_flat(p);
    return phase_integral(tau, p.m, p.lambda);
}

Matrix2 boundary_frame(double tau, const ModeParams& p) {
    const double alpha = -0.5 * std::atan(p.lambda * tau / p.m);
    const double c = std::cos(alpha), s = std::sin(alpha);
    Matrix2 u;
    u << c, s, -s, c;
    return u;
}

Matrix2 boundary_frame_limit(const ModeParams& p) {
    const double s = p.lambda > 0 ? 1.0 : -1.0;
    const double r = 1.0 / std::sqrt(2.0);
    Matrix2 u;
    u << r, s * r, -s * r, r;
    return u;
}

SpinorAmplitude boundary_coefficients(double tau, const SpinorAmplitude& u, const ModeParams& p) {
    const Matrix2 frame = boundary_frame(tau, p);
    // The frame is a real rotation, so its inverse is the transpose.
    const SpinorAmplitude v = frame.transpose() * u;
    const double phi = phase_integral(tau, p);
    return spinor(std::polar(1.0, phi) * v(0), std::polar(1.0, -phi) * v(1));
}

SpinorAmplitude boundary_coefficients_leading(double tau, const SpinorAmplitude& u, const ModeParams& p) {
    const SpinorAmplitude v = boundary_frame_limit(p).transpose() * u;
    const double phi = std::abs(p.lambda) * tau;
    return spinor(std::polar(1.0, phi) * v(0), std::polar(1.0, -phi) * v(1));
}

FlatFundamentalSolution::FlatFundamentalSolution(ModeParams p, int a, Tolerances tol)
    : p_(p), a_(a), tol_(tol) {
    require_flat(p_);
    tol_.validate();
    if (a != 1 && a != 2) throw PreconditionError("fundamental solution index must be 1 or 2");
}

SpinorAmplitude FlatFundamentalSolution::anchor_state(const ModeParams& p, int a, double t_anchor) {
    return a == 1 ? spinor(std::polar(1.0, -p.m * t_anchor), 0.0) : spinor(0.0, std::polar(1.0, p.m * t_anchor));
}

namespace {

// Indices of `values` sorted so that the integration visits them in order
// (descending values).
std::vector<std::size_t> descending_order(std::span<const double> values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
    return idx;
}

// Integrates from `start` downwards through the sorted distinct values of
// `targets` (all <= start) and writes the states into out[order[k]].
void sweep_down(System system, const ModeParams& p, const SpinorAmplitude& u0, double start,
                std::span<const double> targets, const std::vector<std::size_t>& order,
                const Tolerances& tol, std::vector<SpinorAmplitude>& out, SpinorAmplitude* end_state,
                double end_time) {
    std::vector<double> stops;
    for (std::size_t k : order) {
        const double t = targets[k];
        if (stops.empty() || stops.back() != t) stops.push_back(t);
    }
    if (stops.empty() || stops.back() > end_time) stops.push_back(end_time);
    if (stops.front() == start) {
        // The first requested value coincides with the start.
        stops.erase(stops.begin());
    }
    if (stops.empty()) {
        for (std::size_t k : order) out[k] = u0;
        if (end_state) *end_state = u0;
        return;
    }
    const Trajectory tr = integrate(system, p, u0, start, stops.back(), tol, stops);
    // tr.times[0] is start; afterwards one sample per stop.
    for (std::size_t k : order) {
        const double t = targets[k];
        if (t == start) {
            out[k] = u0;
            continue;
        }
        const auto it = std::find(tr.times.begin(), tr.times.end(), t);
        out[k] = tr.states[static_cast<std::size_t>(it - tr.times.begin())];
    }
    if (end_state) *end_state = tr.final_state();
}

}  // namespace

std::vector<SpinorAmplitude> FlatFundamentalSolution::at_times(std::span<const double> t) const {
    std::vector<SpinorAmplitude> out(t.size());
    if (t.empty()) return out;
    for (double x : t)
        if (!std::isfinite(x)) throw PreconditionError("fundamental solution: times must be finite");
    const double t_max = *std::max_element(t.begin(), t.end());
    const double t_min = *std::min_element(t.begin(), t.end());
    const double anchor = std::max(kMinAnchorTime, t_max + 5.0);
    const auto order = descending_order(t);
    sweep_down(System::FlatCosmological, p_, anchor_state(p_, a_, anchor), anchor, t, order, tol_, out, nullptr,
               t_min);
    return out;
}

std::vector<SpinorAmplitude> FlatFundamentalSolution::at_conformal(std::span<const double> tau) const {
    std::vector<SpinorAmplitude> out(tau.size());
    if (tau.empty()) return out;
    std::vector<double> late_t;             // cosmological times of tau in (-1, 0)
    std::vector<std::size_t> late_idx, deep_idx;
    std::vector<double> deep_tau;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(tau[i] < 0.0) || !std::isfinite(tau[i]))
            throw SingularTimeError("fundamental solution: conformal time must be negative and finite");
        if (tau[i] > -1.0) {
            late_t.push_back(-std::log(-tau[i]));
            late_idx.push_back(i);
        } else {
            deep_tau.push_back(tau[i]);
            deep_idx.push_back(i);
        }
    }
    // Cosmological leg down to t = 0 (tau = -1).
    const double t_max = late_t.empty() ? 0.0 : *std::max_element(late_t.begin(), late_t.end());
    const double anchor = std::max(kMinAnchorTime, t_max + 5.0);
    std::vector<SpinorAmplitude> late_out(late_t.size());
    SpinorAmplitude at_zero;
    sweep_down(System::FlatCosmological, p_, anchor_state(p_, a_, anchor), anchor, late_t, descending_order(late_t),
               tol_, late_out, &at_zero, 0.0);
    for (std::size_t k = 0; k < late_idx.size(); ++k) out[late_idx[k]] = late_out[k];
    if (!deep_tau.empty()) {
        std::vector<SpinorAmplitude> deep_out(deep_tau.size());
        const double tau_min = *std::min_element(deep_tau.begin(), deep_tau.end());
        sweep_down(System::FlatConformal, p_, at_zero, -1.0, deep_tau, descending_order(deep_tau), tol_, deep_out,
                   nullptr, tau_min);
        for (std::size_t k = 0; k < deep_idx.size(); ++k) out[deep_idx[k]] = deep_out[k];
    }
    return out;
}

SpinorAmplitude FlatFundamentalSolution::at_time(double t) const {
    const double ts[] = {t};
    return at_times(ts)[0];
}

SpinorAmplitude FlatFundamentalSolution::at_conformal(double tau) const {
    const double ts[] = {tau};
    return at_conformal(std::span<const double>(ts))[0];
}

AsymptoticData extract_asymptotics(Source source, const ModeParams& p, double t_extract, Direction direction,
                                   const ExtractionOptions& options) {
    p.validate();
    if (!std::isfinite(t_extract)) throw PreconditionError("extraction time must be finite");
    AsymptoticData d;
    d.slicing = p.slicing;
    d.direction = direction;
    d.extraction_time = t_extract;

    SpinorAmplitude c_ex, c_co;
    if (p.slicing == Slicing::Closed) {
        if (direction == Direction::Future && !(t_extract > 0.0))
            throw PreconditionError("future extraction needs T_extract > 0");
        if (direction == Direction::Past && !(t_extract < 0.0))
            throw PreconditionError("past extraction needs T_extract < 0");
        const double companion =
            options.companion_time.value_or(direction == Direction::Future ? t_extract + 5.0 : t_extract - 5.0);
        d.companion_time = companion;
        SpinorAmplitude u_ex, u_co;
        if (source == Source::Exact) {
            u_ex = exact_solution(options.branch, t_extract, p);
            u_co = exact_solution(options.branch, companion, p);
        } else {
            // Plane-wave data far in the future, integrated to both times.
            const double seed = std::max({30.0, t_extract, companion});
            const SpinorAmplitude u0 = options.branch == Branch::Plus ? spinor(std::polar(1.0, -p.m * seed), 0.0)
                                                                      : spinor(0.0, std::polar(1.0, p.m * seed));
            const double targets[] = {t_extract, companion};
            std::vector<SpinorAmplitude> vals(2);
            sweep_down(System::Closed, p, u0, seed, targets, descending_order(targets), options.integration, vals,
                       nullptr, std::min(t_extract, companion));
            u_ex = vals[0];
            u_co = vals[1];
        }
        c_ex = plane_wave_coefficients(t_extract, u_ex, p.m);
        c_co = plane_wave_coefficients(companion, u_co, p.m);
        if (direction == Direction::Future) {
            d.f_plus = c_ex;
        } else {
            d.f_minus = c_ex;
        }
    } else {
        if (source == Source::Exact)
            throw PreconditionError("flat slicing has no closed-form solution; use the integrated source");
        const FlatFundamentalSolution sol(p, options.fundamental_index, options.integration);
        if (direction == Direction::Future) {
            if (!(t_extract > 0.0)) throw PreconditionError("future extraction needs t_extract > 0");
            const double companion = options.companion_time.value_or(t_extract + 5.0);
            d.companion_time = companion;
            const double ts[] = {t_extract, companion};
            const auto vals = sol.at_times(ts);
            c_ex = plane_wave_coefficients(t_extract, vals[0], p.m);
            c_co = plane_wave_coefficients(companion, vals[1], p.m);
            d.f_inf = c_ex;
        } else {
            if (!(t_extract < 0.0))
                throw PreconditionError("past boundary extraction is addressed in conformal time tau < 0");
            const double companion = options.companion_time.value_or(10.0 * t_extract);
            d.companion_time = companion;
            const double taus[] = {t_extract, companion};
            const auto vals = sol.at_conformal(std::span<const double>(taus));
            c_ex = boundary_coefficients(t_extract, vals[0], p);
            c_co = boundary_coefficients(companion, vals[1], p);
            d.g = c_ex;
        }
    }
    d.error_estimate = (c_ex - c_co).norm();
    if (!(d.error_estimate <= options.tolerance))
        throw NotConvergedError("asymptotic coefficients at the two extraction times differ by " +
                                std::to_string(d.error_estimate) + " (tolerance " +
                                std::to_string(options.tolerance) + ")");
    return d;
}

}  // namespace dsf
