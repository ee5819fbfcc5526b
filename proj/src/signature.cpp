#include "dsf/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dsf/complex_special.hpp"
#include "dsf/errors.hpp"

namespace dsf {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

}  // namespace

std::string to_string(SignatureKind k) {
    switch (k) {
        case SignatureKind::SPlus: return "S_plus";
        case SignatureKind::SMinus: return "S_minus";
        case SignatureKind::STotal: return "S_total";
        case SignatureKind::FlatHalf: return "flat_half";
    }
    return "unknown";
}

SignatureMatrix signature_closed_form(const ModeParams& p) {
    p.validate();
    if (p.slicing != Slicing::Closed) throw PreconditionError("signature_closed_form: closed slicing only");
    const double m = p.m, l = p.lambda;
    const double sech = std::exp(-log_cosh(kPi * m));
    const double th = std::tanh(kPi * m);
    // Past-boundary operator S-: diagonal (cos 2 pi l + sinh^2 pi m) / cosh^2 pi m.
    const double d = th * th + std::cos(2.0 * kPi * l) * sech * sech;
    const double sl = std::sin(kPi * l);
    const Complex up = std::exp(std::log(2.0 * kPi) + log_gamma(Complex(0.5, m)) - 2.0 * log_cosh(kPi * m) -
                                log_gamma(Complex(0.5, -m)) - log_gamma(Complex(0.5 + l, m)) -
                                log_gamma(Complex(0.5 - l, m)));
    const Complex lo = std::exp(std::log(2.0 * kPi) + log_gamma(Complex(0.5, -m)) - 2.0 * log_cosh(kPi * m) -
                                log_gamma(Complex(0.5, m)) - log_gamma(Complex(0.5 + l, -m)) -
                                log_gamma(Complex(0.5 - l, -m)));
    const Complex o12 = kI * sl * up;
    const Complex o21 = -kI * sl * lo;

    // S = (S+ + S-)/2 with S+ = diag(1, -1).
    SignatureMatrix s;
    s.kind = SignatureKind::STotal;
    s.mode = p;
    s.entries << 0.5 * (1.0 + d), 0.5 * o12, 0.5 * o21, -0.5 * (1.0 + d);
    const double defect = hermiticity_defect(s.entries);
    if (!(defect <= 1e-10))
        throw NumericalError("signature_closed_form: Hermiticity post-check failed, defect " + std::to_string(defect));
    return s;
}

Matrix2 flip_operator_matrix(const SpinorAmplitude& coeff_first, const SpinorAmplitude& coeff_second) {
    Matrix2 c;
    c.col(0) = coeff_first;
    c.col(1) = coeff_second;
    const Complex det = c.determinant();
    if (!(std::abs(det) > 1e-12)) throw NumericalError("asymptotic coefficient matrix is singular");
    // In coefficient space the flip is sigma3, so the column-convention
    // matrix is C^{-1} sigma3 C; the row convention is its transpose.
    return (c.inverse() * sigma3() * c).transpose();
}

NumericSignature signature_numeric(const ModeParams& p, double t_extract, const Tolerances& tol) {
    p.validate();
    if (p.slicing != Slicing::Closed) throw PreconditionError("signature_numeric: closed slicing only");
    if (!(t_extract > 0.0)) throw PreconditionError("signature_numeric: extraction time must be positive");
    ExtractionOptions opt;
    opt.integration = tol;
    NumericSignature out;
    opt.branch = Branch::Plus;
    out.plus_future = extract_asymptotics(Source::Integrated, p, t_extract, Direction::Future, opt);
    out.plus_past = extract_asymptotics(Source::Integrated, p, -t_extract, Direction::Past, opt);
    opt.branch = Branch::Minus;
    out.minus_future = extract_asymptotics(Source::Integrated, p, t_extract, Direction::Future, opt);
    out.minus_past = extract_asymptotics(Source::Integrated, p, -t_extract, Direction::Past, opt);

    out.s_plus = {flip_operator_matrix(*out.plus_future.f_plus, *out.minus_future.f_plus), SignatureKind::SPlus, p};
    out.s_minus = {flip_operator_matrix(*out.plus_past.f_minus, *out.minus_past.f_minus), SignatureKind::SMinus, p};
    out.s_total = {0.5 * (out.s_plus.entries + out.s_minus.entries), SignatureKind::STotal, p};
    return out;
}

SignatureMatrix signature_flat(const ModeParams& p) {
    p.validate();
    if (p.slicing != Slicing::Flat) throw PreconditionError("signature_flat: flat slicing only");
    SignatureMatrix s;
    s.kind = SignatureKind::FlatHalf;
    s.mode = p;
    s.entries << 0.5, 0.0, 0.0, -0.5;
    return s;
}

SpectralProjection project_negative(const SignatureMatrix& s) { return project_negative(s.entries); }

SpectralProjection project_negative(const Matrix2& s) {
    const double defect = hermiticity_defect(s);
    if (!(defect <= 1e-8))
        throw PreconditionError("project_negative: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    const HermitianEigen eig = eigen_hermitian(s);
    SpectralProjection out;
    out.eigenvalues = eig.values;
    out.eigenvectors = eig.vectors;
    for (int i = 0; i < 2; ++i) {
        const double v = eig.values[i];
        if (std::abs(v) <= kSpectralCutTolerance) {
            out.degenerate_spectrum = true;
        } else if (v < 0.0) {
            out.projector += eig.vectors[i] * eig.vectors[i].adjoint();
        }
    }
    return out;
}

BoundaryTerm boundary_term(const SpinorAmplitude& g, const SpinorAmplitude& g_tilde) {
    return {std::conj(g(0)) * g_tilde(0) + std::conj(g(1)) * g_tilde(1), std::nullopt, std::nullopt};
}

MassIdentityReport verify_mass_identity(const ModeParams& p, double m_prime, std::span<const double> t_grid,
                                        const MassIdentityOptions& options) {
    p.validate();
    if (p.slicing != Slicing::Flat) throw PreconditionError("verify_mass_identity: flat slicing only");
    if (!(m_prime > 0.0) || !std::isfinite(m_prime)) throw PreconditionError("verify_mass_identity: m' must be positive");
    if (!(options.step > 0.0)) throw PreconditionError("verify_mass_identity: step must be positive");
    ModeParams q = p;
    q.m = m_prime;

    // Stencil t + j h(t), j = -2..2, with the step shrunk where the local
    // frequency sqrt(lambda^2 e^{-2t} + m^2) is large.
    auto step_at = [&](double t) {
        const double mm = std::max(p.m, m_prime);
        const double w = std::hypot(p.lambda * std::exp(-t), mm);
        return options.step / std::max(1.0, w);
    };
    std::vector<double> all;
    all.reserve(5 * t_grid.size());
    for (double t : t_grid) {
        const double h = step_at(t);
        for (int j = -2; j <= 2; ++j) all.push_back(t + j * h);
    }
    const FlatFundamentalSolution a(p, 1, options.integration);
    const FlatFundamentalSolution b(q, 1, options.integration);
    const auto ua = a.at_times(all);
    const auto ub = b.at_times(all);

    MassIdentityReport rep;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double h = step_at(t_grid[i]);
        auto ip = [&](int j) { return inner(ua[5 * i + j + 2], ub[5 * i + j + 2]); };
        const Complex lhs = (-ip(2) + 8.0 * ip(1) - 8.0 * ip(-1) + ip(-2)) / (12.0 * h);
        const SpinorAmplitude& u0 = ua[5 * i + 2];
        const SpinorAmplitude& v0 = ub[5 * i + 2];
        const Complex rhs = kI * (p.m - m_prime) * inner(u0, sigma3() * v0);
        rep.times.push_back(t_grid[i]);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        rep.residuals.push_back(std::abs(lhs - rhs));
        rep.max_residual = std::max(rep.max_residual, rep.residuals.back());
    }
    return rep;
}

std::function<double(double)> smooth_bump(MassInterval interval) {
    const double mid = 0.5 * (interval.lo + interval.hi);
    const double half = 0.5 * (interval.hi - interval.lo);
    return [mid, half](double m) {
        const double x = (m - mid) / half;
        if (!(std::abs(x) < 1.0)) return 0.0;
        return std::exp(-1.0 / (1.0 - x * x));
    };
}

namespace {

std::vector<SpinorAmplitude> smear_with_rule(double lambda, MassInterval interval,
                                             const std::function<double(double)>& weight,
                                             std::span<const double> times, int n, const SmearOptions& options) {
    const QuadratureRule rule = gauss_legendre(n, interval.lo, interval.hi);
    std::vector<SpinorAmplitude> acc(times.size(), SpinorAmplitude::Zero());
    for (int j = 0; j < n; ++j) {
        const double w = rule.weights[j] * weight(rule.nodes[j]);
        if (w == 0.0) continue;
        const FlatFundamentalSolution sol(ModeParams::flat_lambda(rule.nodes[j], lambda), options.fundamental_index,
                                          options.integration);
        const auto vals = sol.at_times(times);
        for (std::size_t i = 0; i < times.size(); ++i) acc[i] += w * vals[i];
    }
    return acc;
}

}  // namespace

std::vector<SmearResult> mass_smear(double lambda, MassInterval interval, const std::function<double(double)>& weight,
                                    std::span<const double> times, const SmearOptions& options) {
    if (!(interval.lo > 0.0) || !std::isfinite(interval.hi))
        throw PreconditionError("mass_smear: interval must satisfy 0 < m_L");
    if (!(interval.lo < interval.hi))
        throw PreconditionError("mass_smear: a single-point mass interval is not supported (needs m_L < m_R)");
    if (lambda == 0.0) throw PreconditionError("mass_smear: lambda must be nonzero");
    if (!weight) throw PreconditionError("mass_smear: weight function is required");
    if (options.quadrature_n < 1) throw PreconditionError("mass_smear: quadrature_n must be positive");
    const auto coarse = smear_with_rule(lambda, interval, weight, times, options.quadrature_n, options);
    const auto fine = smear_with_rule(lambda, interval, weight, times, 2 * options.quadrature_n, options);
    std::vector<SmearResult> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double gap = (fine[i] - coarse[i]).norm();
        if (!(gap <= options.refinement_tolerance))
            throw QuadratureNotConverged("mass_smear: n vs 2n quadrature differ by " + std::to_string(gap) +
                                         " at t = " + std::to_string(times[i]));
        out.push_back({times[i], fine[i], gap});
    }
    return out;
}

SmearResult mass_smear(double lambda, MassInterval interval, const std::function<double(double)>& weight, double t,
                       const SmearOptions& options) {
    const double ts[] = {t};
    return mass_smear(lambda, interval, weight, std::span<const double>(ts), options)[0];
}

}  // namespace dsf
