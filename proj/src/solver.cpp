#include "pasym/solver.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"
#include "pasym/outer.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace pasym::solver {

std::size_t SolveConfig::cells_for(double epsilon) const {
    if (n_x != 0) {
        return n_x;
    }
    return static_cast<std::size_t>(std::ceil((x_max - x_min) / (epsilon / 16.0)));
}

void SolveConfig::validate() const {
    if (!(x_min < 0.0 && 0.0 < x_max)) {
        throw UsageError("SolveConfig: need x_min < 0 < x_max");
    }
    if (n_x != 0 && n_x < 16) {
        throw UsageError("SolveConfig: need at least 16 cells");
    }
    if (!(t_end > 0.0)) {
        throw UsageError("SolveConfig: t_end must be positive");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw UsageError("SolveConfig: CFL factor must lie in (0, 1]");
    }
    for (double t : output_times) {
        if (t < 0.0 || t > t_end) {
            throw UsageError("SolveConfig: output times must lie in [0, t_end]");
        }
    }
    if (boundary_order < 0) {
        throw UsageError("SolveConfig: boundary_order must be non-negative");
    }
}

std::string to_string(fv::NumericalFlux scheme) {
    return scheme == fv::NumericalFlux::godunov ? "godunov" : "laxf";
}

fv::NumericalFlux parse_scheme(const std::string& text) {
    if (text == "godunov") {
        return fv::NumericalFlux::godunov;
    }
    if (text == "laxf") {
        return fv::NumericalFlux::lax_friedrichs;
    }
    throw UsageError("unknown scheme '" + text + "' (expected godunov or laxf)");
}

GridField fd_solve(const ProblemInstance& problem, const SolveConfig& config, std::vector<std::string>* warnings) {
    config.validate();
    if (const auto issues = validate_problem(problem); !issues.empty()) {
        std::string msg = "fd_solve: invalid problem:";
        for (const auto& issue : issues) {
            msg += " " + issue + ";";
        }
        throw DomainError(msg);
    }
    const FluxModel& flux = problem.flux();
    const TailInitialData& init = problem.init();
    const double eps = problem.epsilon();
    const double rho = problem.rho();
    const std::size_t n = config.cells_for(eps);
    const double dx = (config.x_max - config.x_min) / static_cast<double>(n);
    if (warnings && dx > eps / 4.0) {
        std::ostringstream msg;
        msg << "unresolved viscous layer: dx = " << dx << " > eps/4 = " << eps / 4.0;
        warnings->push_back(msg.str());
    }

    fv::Conservation law;
    law.flux = [&flux](double u) { return flux.eval(u); };
    law.flux_prime = [&flux](double u) { return flux.derivative(1, u); };
    law.viscosity = eps;
    law.sonic_point = fv::find_sonic_point(law.flux_prime, init.lower() - 1.0, init.upper() + 1.0);

    auto cells = fv::cell_averages([&](double x) { return rho * init.primitive(x / rho); }, config.x_min,
                                   config.x_max, n);

    fv::BoundaryFn left;
    fv::BoundaryFn right;
    if (config.boundary_order == 0) {
        const double lo = problem.nu_minus0();
        const double hi = problem.nu_plus0();
        left = [lo](double) { return lo; };
        right = [hi](double) { return hi; };
    } else {
        const int order = config.boundary_order;
        auto minus = std::make_shared<outer::OuterTable<double>>(outer::outer_data(problem, Side::minus, order), order);
        auto plus = std::make_shared<outer::OuterTable<double>>(outer::outer_data(problem, Side::plus, order), order);
        minus->populate(order);
        plus->populate(order);
        const double x_lo = config.x_min;
        const double x_hi = config.x_max;
        left = [minus, order, x_lo, eps, rho](double t) { return minus->partial_sum(order, x_lo, t, eps, rho); };
        right = [plus, order, x_hi, eps, rho](double t) { return plus->partial_sum(order, x_hi, t, eps, rho); };
    }

    fv::StepControl control;
    control.cfl = config.cfl;
    control.flux = config.scheme;
    control.second_order = config.second_order;
    fv::FiniteVolumeSolver solver(std::move(law), config.x_min, config.x_max, std::move(cells), left, right, control);

    std::vector<double> times = config.output_times.empty() ? std::vector<double>{config.t_end} : config.output_times;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<double> values;
    values.reserve(times.size() * n);
    for (double t : times) {
        solver.advance_to(t);
        values.insert(values.end(), solver.cells().begin(), solver.cells().end());
    }
    return GridField(Axis{"x", solver.centres()}, Axis{"t", times}, std::move(values), "u");
}

double burgers_exact(const TailInitialData& init, double x, double t, double epsilon, double rho) {
    if (!(t > 0.0)) {
        throw DomainError("burgers_exact: t must be positive");
    }
    if (!(epsilon > 0.0) || !(rho > 0.0)) {
        throw DomainError("burgers_exact: epsilon and rho must be positive");
    }
    const double spread = 12.0 * std::sqrt(epsilon * t);
    const double lo = x - t * init.upper() - spread;
    const double hi = x - t * init.lower() + spread;
    auto g = [&](double s) { return (x - s) * (x - s) / (2.0 * t) + rho * init.primitive(s / rho); };

    // Locate the minima of G on a sample grid; the integrand peaks there.
    constexpr std::size_t kSamples = 2001;
    const auto nodes = numerics::linspace(lo, hi, kSamples);
    std::vector<double> gs(kSamples);
    for (std::size_t i = 0; i < kSamples; ++i) {
        gs[i] = g(nodes[i]);
    }
    const double g_min = *std::min_element(gs.begin(), gs.end());
    std::vector<double> breaks{0.0, rho, -rho, 10.0 * rho, -10.0 * rho};
    for (double b : init.breakpoints()) {
        breaks.push_back(b * rho);
    }
    const double width = std::sqrt(epsilon * t);
    for (std::size_t i = 1; i + 1 < kSamples; ++i) {
        if (gs[i] <= gs[i - 1] && gs[i] <= gs[i + 1]) {
            breaks.push_back(nodes[i]);
            breaks.push_back(nodes[i] - 4.0 * width);
            breaks.push_back(nodes[i] + 4.0 * width);
        }
    }
    const double scale = 2.0 * epsilon;
    numerics::QuadTolerance tol;
    tol.absolute = 1e-14;
    tol.relative = 1e-13;
    const double den =
        numerics::integrate_split([&](double s) { return std::exp(-(g(s) - g_min) / scale); }, lo, hi, breaks, tol)
            .value;
    const double num = numerics::integrate_split(
                           [&](double s) { return (x - s) / t * std::exp(-(g(s) - g_min) / scale); }, lo, hi,
                           breaks, tol)
                           .value;
    return num / den;
}

namespace {

bool inside(const Window& w, double x, double t) {
    return x >= w.x_lo && x <= w.x_hi && t >= w.t_lo && t <= w.t_hi;
}

}  // namespace

double sup_error(const GridField& a, const std::function<double(double, double)>& b, const Window& window) {
    bool any = false;
    double worst = 0.0;
    for (std::size_t it = 0; it < a.time_size(); ++it) {
        const double t = a.time().nodes[it];
        for (std::size_t ix = 0; ix < a.space_size(); ++ix) {
            const double x = a.space().nodes[ix];
            if (!inside(window, x, t)) {
                continue;
            }
            any = true;
            worst = std::max(worst, std::abs(a.value(it, ix) - b(x, t)));
        }
    }
    if (!any) {
        throw UsageError("sup_error: the window contains no grid nodes");
    }
    return worst;
}

double sup_error(const GridField& a, const GridField& b, const Window& window) {
    if (a.same_axes(b)) {
        return sup_error(
            a,
            [&](double x, double t) {
                const std::size_t it = b.time_index(t);
                const auto& xs = b.space().nodes;
                const auto ix = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
                return b.value(it, ix);
            },
            window);
    }
    return sup_error(a, [&](double x, double t) { return b.interpolate(x, t); }, window);
}

}  // namespace pasym::solver
