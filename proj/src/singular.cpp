#include "pasym/singular.hpp"

#include "pasym/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace pasym::singular {

namespace {

constexpr double kArgumentLimit = 1e6;
const double kLogDrop = std::log(1e-18);

double exponent(double z, double xi, double tau) {
    const double z2 = z * z;
    return -2.0 * z2 * z2 + tau * z2 + xi * z;
}

// Real roots of -8 z^3 + 2 tau z + xi = 0, i.e. z^3 + p z + q = 0 with p = -tau/4, q = -xi/8.
std::vector<double> critical_points(double xi, double tau) {
    const double p = -tau / 4.0;
    const double q = -xi / 8.0;
    std::vector<double> roots;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0 || p == 0.0) {
        const double s = std::sqrt(std::max(disc, 0.0));
        roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
    } else {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
        }
    }
    for (double& z : roots) {
        for (int it = 0; it < 3; ++it) {
            const double f = z * z * z + p * z + q;
            const double df = 3.0 * z * z + p;
            if (df != 0.0) {
                z -= f / df;
            }
        }
    }
    return roots;
}

// Point beyond `from` (in direction dir) where the exponent has dropped by |kLogDrop| below peak.
double cut_point(double from, double dir, double peak, double xi, double tau) {
    double step = 0.5;
    double inner = from;
    double outer = from + dir * step;
    while (exponent(outer, xi, tau) - peak > kLogDrop) {
        inner = outer;
        step *= 2.0;
        outer = from + dir * step;
    }
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (inner + outer);
        if (exponent(mid, xi, tau) - peak > kLogDrop) {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    return outer;
}

void check_arguments(double xi, double tau) {
    if (!std::isfinite(xi) || !std::isfinite(tau) || std::abs(xi) > kArgumentLimit || std::abs(tau) > kArgumentLimit) {
        std::ostringstream msg;
        msg << "Lambda: (xi, tau) = (" << xi << ", " << tau << ") outside |xi|, |tau| <= " << kArgumentLimit
            << "; rescale the arguments";
        throw RangeError(msg.str());
    }
}

double unscale(const ScaledMoment& m, const char* what, double xi, double tau) {
    if (m.log_scale > kMaxExponent) {
        std::ostringstream msg;
        msg << what << ": exp(" << m.log_scale << ") overflows at (xi, tau) = (" << xi << ", " << tau
            << "); use lambda_moment ratios or rescale";
        throw RangeError(msg.str());
    }
    return m.value * std::exp(m.log_scale);
}

}  // namespace

SingularCoords to_singular_coords(double x, double t, double epsilon, double rho) {
    if (!(epsilon > 0.0) || !(rho > 0.0)) {
        throw DomainError("to_singular_coords: epsilon and rho must be positive");
    }
    return {x * std::pow(epsilon, -0.75) * std::pow(rho, -0.25), (t - rho) / std::sqrt(epsilon * rho)};
}

ScaledMoment lambda_moment(int k, double xi, double tau) {
    check_arguments(xi, tau);
    if (k < 0) {
        throw IndexError("lambda_moment: k must be non-negative");
    }
    const auto crit = critical_points(xi, tau);
    double peak = -std::numeric_limits<double>::infinity();
    for (double z : crit) {
        peak = std::max(peak, exponent(z, xi, tau));
    }
    const double lo = cut_point(*std::min_element(crit.begin(), crit.end()), -1.0, peak, xi, tau);
    const double hi = cut_point(*std::max_element(crit.begin(), crit.end()), 1.0, peak, xi, tau);
    auto integrand = [&](double z) { return std::pow(z, k) * std::exp(exponent(z, xi, tau) - peak); };
    // The integrand is entire, so a high-order rule needs very few subdivisions.
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
    std::vector<double> cuts = crit;
    cuts.push_back(0.0);
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i] >= lo && cuts[i + 1] <= hi) {
            total += Kronrod::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-12);
        }
    }
    return {total, peak};
}

double lambda_eval(double xi, double tau) { return unscale(lambda_moment(0, xi, tau), "lambda_eval", xi, tau); }

double lambda_dxi(double xi, double tau) { return unscale(lambda_moment(1, xi, tau), "lambda_dxi", xi, tau); }

double w10_eval(double xi, double tau, double curvature) {
    if (curvature == 0.0) {
        throw DegenerateFluxError("w10_eval: phi''(0) = 0");
    }
    const auto m0 = lambda_moment(0, xi, tau);
    const auto m1 = lambda_moment(1, xi, tau);
    return -2.0 / curvature * (m1.value / m0.value);
}

}  // namespace pasym::singular
