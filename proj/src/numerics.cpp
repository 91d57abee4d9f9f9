#include "pasym/numerics.hpp"

#include "pasym/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pasym::numerics {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

}  // namespace

QuadResult integrate(const ScalarFunction& f, double a, double b, const QuadTolerance& tol) {
    if (a == b) {
        return {};
    }
    // Boost's adaptive criterion is relative to the L1 norm, so a coarse pass supplies
    // the scale that turns the absolute tolerance into a relative one.
    double l1 = 0.0;
    double err = 0.0;
    Kronrod::integrate(f, a, b, 0, 0.0, &err, &l1);
    double rel = tol.relative;
    if (l1 > 0.0) {
        rel = std::max(rel, tol.absolute / l1);
    }
    rel = std::max(rel, 4.0 * std::numeric_limits<double>::epsilon());
    QuadResult out;
    out.value = Kronrod::integrate(f, a, b, tol.max_depth, rel, &out.error);
    return out;
}

QuadResult integrate_split(const ScalarFunction& f, double a, double b,
                           std::span<const double> breakpoints, const QuadTolerance& tol) {
    const double sign = a <= b ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    std::vector<double> cuts{lo};
    for (double p : breakpoints) {
        if (p > lo && p < hi) {
            cuts.push_back(p);
        }
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto piece = integrate(f, cuts[i], cuts[i + 1], tol);
        total.value += piece.value;
        total.error += piece.error;
    }
    total.value *= sign;
    return total;
}

double half_erfc(double z) {
    return 0.5 * std::erfc(z);
}

double log_erfc(double x) {
    if (x < 25.0) {
        return std::log(std::erfc(x));
    }
    // erfc(x) = exp(-x^2)/(x sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4) - 15/(8x^6) + 105/(16x^8))
    const double r = 1.0 / (2.0 * x * x);
    const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
    return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + std::log(series);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> geomspace(double lo, double hi, std::size_t n) {
    if (lo <= 0.0 || hi <= 0.0) {
        throw DomainError("geomspace: endpoints must be positive");
    }
    auto logs = linspace(std::log(lo), std::log(hi), n);
    for (auto& v : logs) {
        v = std::exp(v);
    }
    if (!logs.empty()) {
        logs.front() = lo;
        logs.back() = hi;
    }
    return logs;
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n) {
        throw UsageError("solve_tridiagonal: size mismatch");
    }
    if (n == 0) {
        return;
    }
    std::vector<double> c(n);
    double denom = diag[0];
    c[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

std::size_t bracket(std::span<const double> nodes, double x) {
    const std::size_t n = nodes.size();
    if (n < 2) {
        throw UsageError("bracket: need at least two nodes");
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(i, n - 2);
}

double interp_linear(std::span<const double> nodes, std::span<const double> values, double x) {
    if (nodes.size() == 1) {
        return values[0];
    }
    const std::size_t i = bracket(nodes, x);
    const double w = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
    return (1.0 - w) * values[i] + w * values[i + 1];
}

double interp_cubic(std::span<const double> nodes, std::span<const double> values, double x) {
    const std::size_t n = nodes.size();
    if (n < 4) {
        return interp_linear(nodes, values, x);
    }
    const std::size_t i = bracket(nodes, x);
    if (i == 0 || i + 2 >= n) {
        return interp_linear(nodes, values, x);
    }
    double result = 0.0;
    for (std::size_t j = i - 1; j <= i + 2; ++j) {
        double basis = 1.0;
        for (std::size_t k = i - 1; k <= i + 2; ++k) {
            if (k != j) {
                basis *= (x - nodes[k]) / (nodes[j] - nodes[k]);
            }
        }
        result += basis * values[j];
    }
    return result;
}

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) {
        throw UsageError("least_squares_line: need two or more paired samples");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw UsageError("least_squares_line: abscissae are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace pasym::numerics
