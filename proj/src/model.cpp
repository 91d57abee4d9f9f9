#include "pasym/model.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace pasym {

std::string_view to_string(Side side) {
    return side == Side::minus ? "minus" : "plus";
}

Side parse_side(std::string_view text) {
    if (text == "minus" || text == "-") {
        return Side::minus;
    }
    if (text == "plus" || text == "+") {
        return Side::plus;
    }
    throw UsageError("unknown side '" + std::string(text) + "' (expected minus|plus)");
}

// ---------------------------------------------------------------------------
// FluxModel

FluxModel::FluxModel(std::string name, DerivativeFn derivative, int max_order, bool is_burgers)
    : name_(std::move(name)),
      derivative_(std::move(derivative)),
      max_order_(max_order),
      is_burgers_(is_burgers) {
    if (!derivative_) {
        throw UsageError("FluxModel: derivative callback is empty");
    }
    if (max_order_ < 2) {
        throw UsageError("FluxModel: at least phi, phi' and phi'' are required");
    }
}

double FluxModel::derivative(int order, double u) const {
    if (order < 0 || order > max_order_) {
        std::ostringstream msg;
        msg << "FluxModel '" << name_ << "': derivative of order " << order
            << " not available (max " << max_order_ << ")";
        throw IndexError(msg.str());
    }
    return derivative_(order, u);
}

FluxModel FluxModel::burgers() {
    return FluxModel(
        "burgers",
        [](int k, double u) {
            switch (k) {
                case 0: return 0.5 * u * u;
                case 1: return u;
                case 2: return 1.0;
                default: return 0.0;
            }
        },
        kAllOrders, true);
}

FluxModel FluxModel::cubic() {
    return FluxModel(
        "cubic",
        [](int k, double u) {
            switch (k) {
                case 0: return 0.5 * u * u + u * u * u / 6.0;
                case 1: return u + 0.5 * u * u;
                case 2: return 1.0 + u;
                case 3: return 1.0;
                default: return 0.0;
            }
        },
        kAllOrders);
}

FluxModel FluxModel::exponential() {
    return FluxModel("exponential", [](int, double u) { return std::exp(u); }, kAllOrders);
}

FluxModel FluxModel::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) {
        throw UsageError("FluxModel::polynomial: no coefficients");
    }
    auto derivative = [c = std::move(coeffs)](int k, double u) {
        // Horner on the k-th derivative: sum_{j>=k} c_j j!/(j-k)! u^{j-k}
        double acc = 0.0;
        for (int j = static_cast<int>(c.size()) - 1; j >= k; --j) {
            double falling = 1.0;
            for (int i = 0; i < k; ++i) {
                falling *= static_cast<double>(j - i);
            }
            acc = acc * u + c[static_cast<std::size_t>(j)] * falling;
        }
        return acc;
    };
    return FluxModel("polynomial", std::move(derivative), kAllOrders);
}

bool is_convex_on(const FluxModel& flux, double lo, double hi, int samples) {
    for (double u : numerics::linspace(lo, hi, static_cast<std::size_t>(samples))) {
        const double curvature = flux.derivative(2, u);
        if (!(curvature > 0.0)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// TailInitialData

namespace {

double tail_partial_sum(const std::vector<double>& coeffs, double sigma) {
    const double inv = 1.0 / sigma;
    double acc = 0.0;
    for (std::size_t m = coeffs.size(); m-- > 0;) {
        acc = acc * inv + coeffs[m];
    }
    return acc;
}

// int_{from}^{to} sum_m c_m r^{-m} dr for from, to of the same sign and nonzero.
double tail_integral(const std::vector<double>& coeffs, double from, double to) {
    double total = 0.0;
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        const double c = coeffs[m];
        if (c == 0.0) {
            continue;
        }
        if (m == 0) {
            total += c * (to - from);
        } else if (m == 1) {
            total += c * std::log(to / from);
        } else {
            const double e = 1.0 - static_cast<double>(m);
            total += c * (std::pow(to, e) - std::pow(from, e)) / e;
        }
    }
    return total;
}

}  // namespace

TailInitialData::TailInitialData(Parts parts) : parts_(std::move(parts)) {
    if (!parts_.eval) {
        throw UsageError("TailInitialData: eval callback is empty");
    }
    if (parts_.tail_minus.empty() || parts_.tail_plus.empty()) {
        throw UsageError("TailInitialData: at least nu^-_0 and nu^+_0 are required");
    }
    if (parts_.tail_minus.size() != parts_.tail_plus.size()) {
        throw UsageError("TailInitialData: tail expansions must have equal length");
    }
    if (parts_.lower > parts_.upper) {
        throw UsageError("TailInitialData: lower bound exceeds upper bound");
    }
    if (!parts_.primitive) {
        parts_.primitive = make_cumulative_primitive(parts_.eval, parts_.tail_minus,
                                                     parts_.tail_plus, parts_.breakpoints);
    }
}

double TailInitialData::eval_with_tail(double sigma) const {
    if (sigma > kTailCutoff) {
        return tail_sum(Side::plus, sigma);
    }
    if (sigma < -kTailCutoff) {
        return tail_sum(Side::minus, sigma);
    }
    return eval(sigma);
}

double TailInitialData::tail_coeff(Side side, int m) const {
    const auto& coeffs = side == Side::minus ? parts_.tail_minus : parts_.tail_plus;
    if (m < 0 || m >= static_cast<int>(coeffs.size())) {
        throw IndexError("TailInitialData: tail coefficient " + std::to_string(m) +
                         " not available (order " + std::to_string(coeffs.size()) + ")");
    }
    return coeffs[static_cast<std::size_t>(m)];
}

int TailInitialData::tail_order() const {
    return static_cast<int>(parts_.tail_plus.size());
}

double TailInitialData::tail_sum(Side side, double sigma) const {
    return tail_partial_sum(side == Side::minus ? parts_.tail_minus : parts_.tail_plus, sigma);
}

double TailInitialData::bound() const {
    return std::max(std::abs(parts_.lower), std::abs(parts_.upper));
}

TailInitialData TailInitialData::step(double nu_minus, double nu_plus) {
    Parts p;
    p.name = "step";
    p.eval = [=](double s) { return s < 0.0 ? nu_minus : nu_plus; };
    p.tail_minus.assign(16, 0.0);
    p.tail_plus.assign(16, 0.0);
    p.tail_minus[0] = nu_minus;
    p.tail_plus[0] = nu_plus;
    p.lower = std::min(nu_minus, nu_plus);
    p.upper = std::max(nu_minus, nu_plus);
    p.breakpoints = {0.0};
    p.primitive = [=](double s) { return s < 0.0 ? nu_minus * s : nu_plus * s; };
    return TailInitialData(std::move(p));
}

TailInitialData TailInitialData::smooth_step(double nu_minus, double nu_plus, int tail_order) {
    if (tail_order < 1) {
        throw UsageError("smooth_step: tail_order must be >= 1");
    }
    const double mean = 0.5 * (nu_minus + nu_plus);
    const double jump = nu_plus - nu_minus;
    const double scale = jump / std::numbers::pi;
    Parts p;
    p.name = "smoothstep";
    p.eval = [=](double s) { return mean + scale * std::atan(s); };
    // atan(s) = +/-pi/2 - 1/s + 1/(3s^3) - 1/(5s^5) + ...  as s -> +/-inf
    p.tail_minus.assign(static_cast<std::size_t>(tail_order), 0.0);
    p.tail_plus.assign(static_cast<std::size_t>(tail_order), 0.0);
    p.tail_minus[0] = nu_minus;
    p.tail_plus[0] = nu_plus;
    for (int k = 0; 2 * k + 1 < tail_order; ++k) {
        const double c = -scale * ((k % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(2 * k + 1);
        p.tail_minus[static_cast<std::size_t>(2 * k + 1)] = c;
        p.tail_plus[static_cast<std::size_t>(2 * k + 1)] = c;
    }
    p.lower = std::min(nu_minus, nu_plus);
    p.upper = std::max(nu_minus, nu_plus);
    p.primitive = [=](double s) {
        return mean * s + scale * (s * std::atan(s) - 0.5 * std::log1p(s * s));
    };
    return TailInitialData(std::move(p));
}

TailInitialData TailInitialData::constant(double value) {
    Parts p;
    p.name = "constant";
    p.eval = [=](double) { return value; };
    p.tail_minus.assign(16, 0.0);
    p.tail_plus.assign(16, 0.0);
    p.tail_minus[0] = value;
    p.tail_plus[0] = value;
    p.lower = value;
    p.upper = value;
    p.primitive = [=](double s) { return value * s; };
    return TailInitialData(std::move(p));
}

TailInitialData TailInitialData::tabulated(std::vector<double> sigma, std::vector<double> values,
                                           std::vector<double> tail_minus,
                                           std::vector<double> tail_plus) {
    if (sigma.size() < 2 || sigma.size() != values.size()) {
        throw UsageError("tabulated: need two or more (sigma, value) pairs");
    }
    for (std::size_t i = 1; i < sigma.size(); ++i) {
        if (!(sigma[i] > sigma[i - 1])) {
            throw UsageError("tabulated: sigma must be strictly increasing");
        }
    }
    if (tail_minus.empty() || tail_plus.empty()) {
        throw UsageError("tabulated: tail coefficients nu^-_0 and nu^+_0 are required");
    }
    const std::size_t order = std::max(tail_minus.size(), tail_plus.size());
    tail_minus.resize(order, 0.0);
    tail_plus.resize(order, 0.0);

    Parts p;
    p.name = "custom";
    p.lower = std::min({*std::min_element(values.begin(), values.end()), tail_minus[0], tail_plus[0]});
    p.upper = std::max({*std::max_element(values.begin(), values.end()), tail_minus[0], tail_plus[0]});
    p.breakpoints = {sigma.front(), sigma.back()};
    p.eval = [s = sigma, v = values, tm = tail_minus, tp = tail_plus](double x) {
        if (x < s.front()) {
            return tail_partial_sum(tm, x);
        }
        if (x > s.back()) {
            return tail_partial_sum(tp, x);
        }
        return numerics::interp_linear(s, v, x);
    };
    p.tail_minus = std::move(tail_minus);
    p.tail_plus = std::move(tail_plus);
    return TailInitialData(std::move(p));
}

TailInitialData::Fn make_cumulative_primitive(const TailInitialData::Fn& eval,
                                              std::vector<double> tail_minus,
                                              std::vector<double> tail_plus,
                                              std::vector<double> breakpoints) {
    constexpr int kCells = static_cast<int>(TailInitialData::kTailCutoff);
    const numerics::QuadTolerance tol{1e-14, 1e-14};

    struct Table {
        TailInitialData::Fn eval;
        std::vector<double> tail_minus;
        std::vector<double> tail_plus;
        std::vector<double> breakpoints;
        std::vector<double> nodes;  // P(k) for k = -kCells..kCells
    };
    auto table = std::make_shared<Table>();
    table->eval = eval;
    table->tail_minus = std::move(tail_minus);
    table->tail_plus = std::move(tail_plus);
    table->breakpoints = std::move(breakpoints);
    table->nodes.assign(2 * kCells + 1, 0.0);

    auto cell = [&](double a, double b) {
        return numerics::integrate_split(table->eval, a, b, table->breakpoints, tol).value;
    };
    for (int k = 0; k < kCells; ++k) {
        table->nodes[kCells + k + 1] = table->nodes[kCells + k] + cell(k, k + 1.0);
        table->nodes[kCells - k - 1] = table->nodes[kCells - k] - cell(-k - 1.0, -k);
    }

    return [table, tol](double s) {
        const double cutoff = static_cast<double>(kCells);
        if (s > cutoff) {
            return table->nodes.back() + tail_integral(table->tail_plus, cutoff, s);
        }
        if (s < -cutoff) {
            return table->nodes.front() - tail_integral(table->tail_minus, s, -cutoff);
        }
        const double k = std::clamp(std::floor(s), -cutoff, cutoff - 1.0);
        const double base = table->nodes[static_cast<std::size_t>(k + cutoff)];
        return base + numerics::integrate_split(table->eval, k, s, table->breakpoints, tol).value;
    };
}

// ---------------------------------------------------------------------------
// ProblemInstance and the limit problem

ProblemInstance::ProblemInstance(FluxModel flux, TailInitialData init, double epsilon, double rho)
    : flux_(std::move(flux)), init_(std::move(init)), epsilon_(epsilon), rho_(rho) {}

double shock_speed(const FluxModel& flux, double nu_minus0, double nu_plus0) {
    if (nu_minus0 == nu_plus0) {
        throw DegenerateShockError("shock_speed: equal states, no jump");
    }
    const double f_minus = flux.eval(nu_minus0);
    const double f_plus = flux.eval(nu_plus0);
    if (!std::isfinite(f_minus) || !std::isfinite(f_plus)) {
        throw DomainError("shock_speed: non-finite flux value");
    }
    const double c = (f_plus - f_minus) / (nu_plus0 - nu_minus0);
    if (nu_minus0 > nu_plus0) {
        // Lax entropy condition; guaranteed by strict convexity.
        const double lo = flux.derivative(1, nu_plus0);
        const double hi = flux.derivative(1, nu_minus0);
        if (!(lo < c && c < hi)) {
            throw InternalConsistencyError(
                "shock_speed: phi'(nu+) < c < phi'(nu-) violated; flux not convex between states");
        }
    }
    return c;
}

double limit_solution(const ProblemInstance& problem, double x, double t) {
    if (t < 0.0) {
        throw DomainError("limit_solution: t must be >= 0");
    }
    const double c = shock_speed(problem.flux(), problem.nu_minus0(), problem.nu_plus0());
    return x < c * t ? problem.nu_minus0() : problem.nu_plus0();
}

std::vector<std::string> validate_problem(const ProblemInstance& problem) {
    std::vector<std::string> issues;
    auto note = [&](std::string text) { issues.push_back(std::move(text)); };

    if (!(problem.epsilon() > 0.0)) {
        note("epsilon must be positive");
    }
    if (!(problem.rho() > 0.0)) {
        note("rho must be positive");
    }
    if (problem.epsilon() > 0.0 && problem.rho() > 0.0) {
        const double mu = problem.mu();
        if (!(mu > 0.0 && mu < 1.0)) {
            std::ostringstream msg;
            msg << "mu out of range (mu=" << mu << ", expected 0 < mu < 1)";
            note(msg.str());
        }
    }

    const double nm = problem.nu_minus0();
    const double np = problem.nu_plus0();
    if (!(nm > np)) {
        note("shock orientation violated (need nu^-_0 > nu^+_0)");
    }

    const auto& init = problem.init();
    try {
        const double lo = std::min({nm, np, init.lower()}) - 1.0;
        const double hi = std::max({nm, np, init.upper()}) + 1.0;
        if (!is_convex_on(problem.flux(), lo, hi)) {
            std::ostringstream msg;
            msg << "convexity violated: phi'' <= 0 somewhere on [" << lo << ", " << hi << "]";
            note(msg.str());
        }
    } catch (const std::exception& e) {
        note(std::string("convexity check failed: ") + e.what());
    }

    try {
        const double bound = init.bound();
        bool bounded = true;
        auto probe = [&](double s) {
            const double v = init.eval(s);
            if (!std::isfinite(v) || std::abs(v) > bound * (1.0 + 1e-12) + 1e-12) {
                bounded = false;
            }
        };
        probe(0.0);
        for (double s : numerics::geomspace(1e-3, 1e4, 200)) {
            probe(s);
            probe(-s);
        }
        if (!bounded) {
            note("boundedness violated: |nu| exceeds its stated bound");
        }

        const double cut = TailInitialData::kTailCutoff;
        const double tol = 1e-8 * std::max(1.0, bound);
        if (std::abs(init.eval(cut) - init.tail_sum(Side::plus, cut)) > tol ||
            std::abs(init.eval(-cut) - init.tail_sum(Side::minus, -cut)) > tol) {
            note("tail expansion mismatch at |sigma| = 1e3");
        }
    } catch (const std::exception& e) {
        note(std::string("initial data check failed: ") + e.what());
    }
    return issues;
}

}  // namespace pasym
