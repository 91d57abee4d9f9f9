#include "pasym/shock_layer.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace pasym::shock_layer {

namespace {

void require_shock(const FluxModel& flux, double nu_minus0, double nu_plus0) {
    if (!(nu_minus0 > nu_plus0)) {
        throw DomainError("shock layer: need nu^-_0 > nu^+_0");
    }
    if (!is_convex_on(flux, nu_plus0, nu_minus0)) {
        throw DomainError("shock layer: flux '" + flux.name() + "' is not convex between the states");
    }
}

}  // namespace

double ShockLayerField::eval(double eta, double theta) const {
    const auto& thetas = field.time().nodes;
    if (theta < 0.0 || theta > thetas.back() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "shock layer: theta = " << theta << " outside [0, " << thetas.back() << "]";
        throw CoverageError(msg.str());
    }
    const double zeta = eta - speed * theta;
    const auto& zs = field.space().nodes;
    if (zeta <= zs.front()) {
        return nu_minus0;
    }
    if (zeta >= zs.back()) {
        return nu_plus0;
    }
    return field.interpolate(zeta, std::min(theta, thetas.back()));
}

ShockLayerField gamma_solve(const FluxModel& flux, double nu_minus0, double nu_plus0, double theta_max,
                            const ShockGridSpec& spec) {
    require_shock(flux, nu_minus0, nu_plus0);
    if (!(theta_max > 0.0)) {
        throw DomainError("gamma_solve: theta_max must be positive");
    }
    if (spec.n_theta < 2) {
        throw UsageError("gamma_solve: need at least two theta levels");
    }
    const double c = shock_speed(flux, nu_minus0, nu_plus0);
    const double width = nu_minus0 - nu_plus0;
    const double half = spec.half_width > 0.0 ? spec.half_width : std::max(50.0, 10.0 * std::sqrt(theta_max));
    const std::size_t n = spec.n_cells % 2 == 1 ? spec.n_cells : spec.n_cells + 1;

    std::vector<double> cells(n, nu_plus0);
    for (std::size_t i = 0; i < n / 2; ++i) {
        cells[i] = nu_minus0;
    }
    cells[n / 2] = 0.5 * (nu_minus0 + nu_plus0);

    fv::Conservation law;
    law.flux = [&flux, c](double u) { return flux.eval(u) - c * u; };
    law.flux_prime = [&flux, c](double u) { return flux.derivative(1, u) - c; };
    law.viscosity = 1.0;
    law.sonic_point = fv::find_sonic_point(law.flux_prime, nu_plus0 - 1.0, nu_minus0 + 1.0);
    fv::StepControl control;
    control.cfl = spec.cfl;
    control.flux = spec.scheme;
    control.neumann = spec.far_field == FarField::neumann;
    fv::FiniteVolumeSolver solver(
        std::move(law), -half, half, std::move(cells), [nu_minus0](double) { return nu_minus0; },
        [nu_plus0](double) { return nu_plus0; }, control);

    std::vector<double> levels = numerics::linspace(0.0, theta_max, spec.n_theta);
    for (double w : spec.extra_levels) {
        if (w < 0.0 || w > theta_max) {
            throw UsageError("gamma_solve: extra theta level outside [0, theta_max]");
        }
        levels.push_back(w);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const double slack = 1e-9 * width;
    std::vector<double> values;
    values.reserve(levels.size() * n);
    for (double theta : levels) {
        solver.advance_to(theta);
        const auto& u = solver.cells();
        const double drift = std::max(std::abs(u.front() - nu_minus0), std::abs(u.back() - nu_plus0));
        if (drift > spec.boundary_tolerance) {
            std::ostringstream msg;
            msg << "gamma_solve: boundary cells deviate by " << drift << " from the far-field states at theta = "
                << theta << "; enlarge the zeta domain (half width " << half << ")";
            throw DomainTooSmallError(msg.str());
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (u[i] > nu_minus0 + slack || u[i] < nu_plus0 - slack) {
                throw InternalConsistencyError("gamma_solve: maximum principle violated");
            }
            if (i > 0 && u[i] > u[i - 1] + slack) {
                throw InternalConsistencyError("gamma_solve: profile lost monotonicity");
            }
        }
        values.insert(values.end(), u.begin(), u.end());
    }
    ShockLayerField out{GridField(Axis{"zeta", solver.centres()}, Axis{"theta", levels}, std::move(values), "Gamma"),
                        nu_minus0, nu_plus0, c};
    return out;
}

std::vector<double> traveling_wave(const FluxModel& flux, double nu_minus0, double nu_plus0,
                                   const std::vector<double>& zeta) {
    namespace ode = boost::numeric::odeint;
    require_shock(flux, nu_minus0, nu_plus0);
    const double c = shock_speed(flux, nu_minus0, nu_plus0);
    const double shift = c * nu_plus0 - flux.eval(nu_plus0);
    using State = std::array<double, 1>;
    auto rhs = [&](const State& g, State& dg, double) { dg[0] = flux.eval(g[0]) - c * g[0] + shift; };
    const double mean = 0.5 * (nu_minus0 + nu_plus0);

    std::vector<double> out(zeta.size(), mean);
    std::vector<std::size_t> order(zeta.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return zeta[a] < zeta[b]; });

    auto march = [&](const std::vector<std::size_t>& idx, double direction) {
        if (idx.empty()) {
            return;
        }
        std::vector<double> times{0.0};
        for (std::size_t i : idx) {
            times.push_back(zeta[i]);
        }
        State g{mean};
        std::size_t k = 0;
        auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
        ode::integrate_times(stepper, rhs, g, times.begin(), times.end(), direction * 1e-3,
                             [&](const State& s, double) {
                                 if (k > 0) {
                                     out[idx[k - 1]] = s[0];
                                 }
                                 ++k;
                             });
    };
    std::vector<std::size_t> forward;
    std::vector<std::size_t> backward;
    for (std::size_t i : order) {
        if (zeta[i] > 0.0) {
            forward.push_back(i);
        } else if (zeta[i] < 0.0) {
            backward.insert(backward.begin(), i);
        }
    }
    march(forward, 1.0);
    march(backward, -1.0);

    const double width = nu_minus0 - nu_plus0;
    for (double g : out) {
        const bool interior = g > nu_plus0 + 1e-12 * width && g < nu_minus0 - 1e-12 * width;
        const double slope = flux.eval(g) - c * g + shift;
        if (!std::isfinite(g) || (interior && !(slope < 0.0)) || g > nu_minus0 + 1e-12 * width ||
            g < nu_plus0 - 1e-12 * width) {
            throw InternalConsistencyError("traveling_wave: profile does not connect the two states");
        }
    }
    return out;
}

double burgers_gamma_exact(double nu_minus0, double nu_plus0, double eta, double theta) {
    if (!(theta > 0.0)) {
        throw DomainError("burgers_gamma_exact: theta must be positive");
    }
    if (!(nu_minus0 > nu_plus0)) {
        throw DomainError("burgers_gamma_exact: need nu^-_0 > nu^+_0");
    }
    // Gamma = nu+ + (nu- - nu+) / (1 + B/A),
    // A = exp(alpha) erfc(p), B = exp(beta) erfc(-q) with the conventional erfc.
    const double root = 2.0 * std::sqrt(theta);
    const double alpha = -0.5 * nu_minus0 * eta + 0.25 * nu_minus0 * nu_minus0 * theta;
    const double beta = -0.5 * nu_plus0 * eta + 0.25 * nu_plus0 * nu_plus0 * theta;
    const double p = (eta - nu_minus0 * theta) / root;
    const double q = (eta - nu_plus0 * theta) / root;
    const double log_ratio = beta - alpha + numerics::log_erfc(-q) - numerics::log_erfc(p);
    const double d = nu_minus0 - nu_plus0;
    if (log_ratio > 0.0) {
        const double e = std::exp(-log_ratio);
        return nu_plus0 + d * e / (1.0 + e);
    }
    return nu_plus0 + d / (1.0 + std::exp(log_ratio));
}

}  // namespace pasym::shock_layer
