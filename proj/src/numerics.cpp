#include "dsf/numerics.hpp"

#include <cmath>
#include <numbers>

#include "dsf/errors.hpp"

namespace dsf {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw PreconditionError("gauss_legendre: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    // Newton iteration on P_n from the Chebyshev-like initial guess; the roots
    // are symmetric so only half of them are computed.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Three-term recurrence: p1 = P_n(x), p0 = P_{n-1}(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol,
                        int max_depth) {
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, lo, hi, fa, fm, fb, whole, tol, max_depth);
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw PreconditionError("fit_power_law: need two or more matching points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_power_law: data must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nd = static_cast<double>(n);
    const double denom = nd * sxx - sx * sx;
    if (denom == 0.0) throw PreconditionError("fit_power_law: abscissae coincide");
    PowerLawFit fit;
    fit.exponent = (nd * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.exponent * sx) / nd;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(y[i]) - (fit.intercept + fit.exponent * std::log(x[i]));
        ss += r * r;
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
    }
    fit.rms_residual = std::sqrt(ss / nd);
    return fit;
}

std::vector<double> linspace(double start, double end, int count) {
    if (count < 1) throw PreconditionError("grid: count must be positive");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    for (int i = 0; i < count; ++i) v[i] = start + (end - start) * i / (count - 1);
    v.back() = end;
    return v;
}

std::vector<double> geomspace(double start, double end, int count) {
    if (count < 1) throw PreconditionError("grid: count must be positive");
    if (!(start > 0.0 && end > 0.0)) throw PreconditionError("grid: geometric endpoints must be positive");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double ls = std::log(start), le = std::log(end);
    for (int i = 0; i < count; ++i) v[i] = std::exp(ls + (le - ls) * i / (count - 1));
    v.front() = start;
    v.back() = end;
    return v;
}

}  // namespace dsf
