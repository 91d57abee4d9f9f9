// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any criterion fails.
// Every threshold below is the stated one; a criterion that cannot be met prints FAIL with
// the measured value.

#include "pasym/harness.hpp"
#include "pasym/inner.hpp"
#include "pasym/numerics.hpp"
#include "pasym/outer.hpp"
#include "pasym/shock_layer.hpp"
#include "pasym/singular.hpp"
#include "pasym/solver.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pasym;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

ProblemInstance smooth_burgers(double mu, double nm = 1.0, double np = 0.0) {
    return ProblemInstance(FluxModel::burgers(), TailInitialData::smooth_step(nm, np), 0.02, 0.02 * mu);
}

// 1. hand-derived u10, u21, u20
Outcome outer_exactness() {
    using outer::Rational;
    using outer::RationalSeries;
    const Rational nu0(1, 2);
    const Rational nu1(3, 7);
    const Rational nu2(-2, 5);
    outer::OuterTable<Rational> table(outer::burgers_rational_data(Side::plus, nu0, {nu1, nu2}), 2);
    RationalSeries u10(Side::plus);
    u10.add(0, 1, nu1);
    RationalSeries u21(Side::plus);
    u21.add(1, 3, 2 * nu1);
    RationalSeries u20(Side::plus);
    u20.add(0, 2, nu2);
    u20.add(1, 3, nu1 * nu1);  // phi'' = 1
    const bool exact = table.coefficient(1, 0) == u10 && table.coefficient(2, 1) == u21 && table.coefficient(2, 0) == u20;

    // float mode with a flux whose phi''(nu0) is not 1
    double worst = 0.0;
    for (Side side : {Side::minus, Side::plus}) {
        // only the tail coefficients enter; nu_2 != 0 on both sides
        const ProblemInstance p(FluxModel::cubic(),
                                TailInitialData::tabulated({-1.0, 1.0}, {1.5, 0.2}, {1.5, 0.3, -0.7}, {0.2, 0.4, 0.25}),
                                0.02, 0.002);
        outer::OuterTable<double> t(outer::outer_data(p, side), 2);
        const double n0 = p.far_state(side);
        const double n1 = p.init().tail_coeff(side, 1);
        const double n2 = p.init().tail_coeff(side, 2);
        const double curv = 1.0 + n0;  // phi'' of u^2/2 + u^3/6
        auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
        const auto& a = t.coefficient(1, 0);
        const auto& b = t.coefficient(2, 1);
        const auto& c = t.coefficient(2, 0);
        if (a.size() != 1 || b.size() != 1 || c.size() != 2) {
            return {false, "float mode produced extra terms"};
        }
        worst = std::max({worst, rel(a.coeff(0, 1), n1), rel(b.coeff(1, 3), 2 * n1), rel(c.coeff(0, 2), n2),
                          rel(c.coeff(1, 3), curv * n1 * n1)});
    }
    return {exact && worst < 1e-12,
            std::string("rational ") + (exact ? "exact" : "MISMATCH") + ", float max rel err " + fmt(worst)};
}

// 2. term structure and coefficient-equation residual up to m = 8
Outcome outer_structure() {
    static constexpr std::array<double, 4> w{4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    const double h = 1e-2;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> times(0.0, 1.0);
    std::uniform_real_distribution<double> offsets(0.1, 3.0);
    std::bernoulli_distribution coin;
    bool structure = true;
    double worst = 0.0;
    const std::vector<ProblemInstance> problems{
        smooth_burgers(0.1, 1.0, -0.5),
        ProblemInstance(FluxModel::cubic(), TailInitialData::smooth_step(1.5, 0.2), 0.02, 0.002)};
    for (const auto& problem : problems) {
        for (Side side : {Side::minus, Side::plus}) {
            outer::OuterTable<double> table(outer::outer_data(problem, side, 8), 8);
            table.populate(8);
            const double c = table.data().speed;
            for (int m = 1; m <= 8; ++m) {
                for (int n = 0; n < m; ++n) {
                    const auto& u = table.at(m, n);
                    for (const auto& [key, alpha] : u.terms()) {
                        structure = structure && key.s >= n && key.s <= m - 1 && key.k == m + key.s;
                    }
                    const auto f = table.forcing_term(m, n);
                    for (int i = 0; i < 100; ++i) {
                        const double t = times(rng);
                        const double x = c * t + (coin(rng) ? 1.0 : -1.0) * offsets(rng);
                        // u along x = x0 + c s is a polynomial of degree <= m - 1 in s: the
                        // 9-point derivative is exact up to rounding
                        double d = 0.0;
                        double sampled = 0.0;
                        for (int j = 1; j <= 4; ++j) {
                            const double up = u.evaluate(x + c * j * h, t + j * h, c);
                            const double dn = u.evaluate(x - c * j * h, t - j * h, c);
                            d += w[static_cast<std::size_t>(j - 1)] * (up - dn);
                            sampled = std::max({sampled, std::abs(up), std::abs(dn)});
                        }
                        d /= h;
                        const double rhs = f.evaluate(x, t, c);
                        const double scale = std::abs(d) + std::abs(rhs) + sampled / h;
                        worst = std::max(worst, std::abs(d - rhs) / scale);
                    }
                }
            }
        }
    }
    return {structure && worst < 1e-10,
            std::string("structure ") + (structure ? "ok" : "VIOLATED") + ", max scaled residual " + fmt(worst) +
                " over 2 fluxes x 2 sides x 36 coefficients x 100 points"};
}

// 3. grid h1, h2 against the Duhamel integrals, coarse and refined grids
Outcome inner_oracles() {
    const auto problem = smooth_burgers(0.1);
    const std::vector<double> levels{0.5, 1.0, 2.0, 4.0};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> sig(-4.0, 4.0);
    std::uniform_int_distribution<std::size_t> lev(0, levels.size() - 1);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 20; ++i) {
        const double s = sig(rng);
        pts.emplace_back(s, levels[lev(rng)]);
    }
    const auto e1 = inner::first_potential(problem);
    std::vector<double> h1_ref;
    for (auto [s, o] : pts) {
        h1_ref.push_back(inner::hn_duhamel_point(e1, s, o));
    }

    struct Study {
        std::array<double, 2> err1{};
        std::array<double, 2> err2{};
        double order1() const { return std::log2(err1[0] / err1[1]); }
        double order2() const { return std::log2(err2[0] / err2[1]); }
    };
    auto study = [&](inner::TimeScheme scheme) {
        Study out;
        for (int r = 0; r < 2; ++r) {
            auto spec = inner::InnerGridSpec::defaults(4.0);
            spec.scheme = scheme;
            spec.extra_levels = levels;
            // halve dsigma, the implicit step and the spacing of the stored levels together
            spec.n_sigma = r == 0 ? 2001 : 4001;
            spec.levels_per_decade = r == 0 ? 20 : 40;
            spec.substeps = 10;
            const auto fields = inner::solve_inner(problem, 2, spec);
            const GridField e2 = inner::En_assemble(std::span(fields).first(2), problem.flux(), 2);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto [s, o] = pts[i];
                out.err1[r] = std::max(out.err1[r], std::abs(fields[1].interpolate(s, o) - h1_ref[i]));
                out.err2[r] = std::max(out.err2[r], std::abs(fields[2].interpolate(s, o) - inner::hn_duhamel_point(e2, s, o)));
            }
        }
        return out;
    };
    // verdict on the trapezoidal variant; backward Euler is first order and sits at the threshold
    const Study trap = study(inner::TimeScheme::trapezoidal);
    const Study be = study(inner::TimeScheme::backward_euler);
    const bool pass = trap.err1[1] < 1e-3 && trap.err2[1] < 1e-3 && trap.order1() >= 1.0 && trap.order2() >= 1.0;
    return {pass, "trapezoidal h1 err " + fmt(trap.err1[0]) + " -> " + fmt(trap.err1[1]) + " (order " +
                      fmt(trap.order1()) + "), h2 err " + fmt(trap.err2[0]) + " -> " + fmt(trap.err2[1]) + " (order " +
                      fmt(trap.order2()) + "); backward Euler h1 " + fmt(be.err1[1]) + " (order " + fmt(be.order1()) +
                      "), h2 " + fmt(be.err2[1]) + " (order " + fmt(be.order2()) + ")"};
}

// 4. self-similar profile of h1 settles at least like omega^{-1/2} ln omega
Outcome inner_scaling() {
    const auto problem = smooth_burgers(0.1);
    auto spec = inner::InnerGridSpec::defaults(1600.0);
    spec.scheme = inner::TimeScheme::trapezoidal;
    spec.substeps = 5;
    spec.extra_levels = {100.0, 400.0};
    const auto fields = inner::solve_inner(problem, 1, spec);
    const auto p100 = inner::selfsimilar_extract(fields[1], 1, 100.0);
    const auto p400 = inner::selfsimilar_extract(fields[1], 1, 400.0);
    const auto p1600 = inner::selfsimilar_extract(fields[1], 1, 1600.0);
    double d1 = 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < p100.values.size(); ++i) {
        d1 = std::max(d1, std::abs(p400.values[i] - p100.values[i]));
        d2 = std::max(d2, std::abs(p1600.values[i] - p400.values[i]));
    }
    auto rate = [](double omega) { return std::log(omega) / std::sqrt(omega); };
    const double c = d1 / rate(100.0);
    const double bound = c * rate(400.0);
    return {d2 <= bound, "sup|P400 - P100| = " + fmt(d1) + ", C = " + fmt(c) + "; sup|P1600 - P400| = " + fmt(d2) +
                             " vs bound " + fmt(bound)};
}

// 5. shock layer against Cole-Hopf, the travelling wave and tanh
Outcome shock_layer_checks() {
    const auto flux = FluxModel::burgers();
    shock_layer::ShockGridSpec spec;
    spec.n_cells = 8001;
    const auto layer = shock_layer::gamma_solve(flux, 1.0, 0.0, 5.0, spec);
    double e_exact = 0.0;
    const auto& thetas = layer.field.time().nodes;
    for (double theta : thetas) {
        if (theta <= 0.0) {
            continue;  // the exact layer is the step itself there
        }
        for (double eta : numerics::linspace(-10.0, 10.0, 801)) {
            e_exact = std::max(e_exact, std::abs(layer.eval(eta, theta) -
                                                 shock_layer::burgers_gamma_exact(1.0, 0.0, eta, theta)));
        }
    }

    shock_layer::ShockGridSpec long_spec;
    long_spec.n_cells = 4001;
    const auto late = shock_layer::gamma_solve(flux, 1.0, 0.0, 50.0, long_spec);
    const auto& zeta = late.field.space().nodes;
    const auto wave = shock_layer::traveling_wave(flux, 1.0, 0.0, zeta);
    const auto row = late.field.row(late.field.time_index(50.0));
    double e_wave = 0.0;
    double e_exact_wave = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        e_wave = std::max(e_wave, std::abs(row[i] - wave[i]));
        e_exact_wave = std::max(e_exact_wave, std::abs(shock_layer::burgers_gamma_exact(1.0, 0.0, zeta[i] + 25.0, 50.0) - wave[i]));
    }

    const auto z = numerics::linspace(-40.0, 40.0, 801);
    const auto ode = shock_layer::traveling_wave(flux, 1.0, 0.0, z);
    double e_tanh = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        e_tanh = std::max(e_tanh, std::abs(ode[i] - (0.5 - 0.5 * std::tanh(z[i] / 4.0))));
    }
    const bool pass = e_exact < 1e-4 && e_wave < 1e-3 && e_tanh < 1e-8;
    return {pass, "vs Cole-Hopf " + fmt(e_exact) + " (< 1e-4), vs travelling wave at theta=50 " + fmt(e_wave) +
                      " (< 1e-3; exact layer itself is " + fmt(e_exact_wave) + " away), ODE vs tanh " + fmt(e_tanh) +
                      " (< 1e-8)"};
}

double round_sig(double v, int digits) {
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
    return std::round(v * scale) / scale;
}

// 6. Lambda at the origin, heat residual, w10 residual
Outcome singular_checks() {
    const double l00 = singular::lambda_eval(0.0, 0.0);
    const double closed = std::pow(2.0, -1.25) * std::tgamma(0.25);
    const bool five_digits = round_sig(l00, 5) == round_sig(1.52441, 5);
    const bool closed_ok = std::abs(l00 - closed) < 1e-12 * closed;

    const double h = 1e-2;
    auto d1 = [h](const std::function<double(double)>& f, double x) {
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    };
    auto d2 = [h](const std::function<double(double)>& f, double x) {
        return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
    };
    double heat = 0.0;
    for (double xi : numerics::linspace(-2.0, 2.0, 17)) {
        for (double tau : numerics::linspace(-2.0, 2.0, 17)) {
            const double lt = d1([&](double t) { return singular::lambda_eval(xi, t); }, tau);
            const double lxx = d2([&](double x) { return singular::lambda_eval(x, tau); }, xi);
            heat = std::max(heat, std::abs(lt - lxx));
        }
    }
    double burgers = 0.0;
    for (double a : {1.0, 2.5}) {
        for (double xi : numerics::linspace(-2.0, 2.0, 17)) {
            for (double tau : numerics::linspace(0.0, 2.0, 9)) {
                auto wx = [&](double x) { return singular::w10_eval(x, tau, a); };
                auto wt = [&](double t) { return singular::w10_eval(xi, t, a); };
                const double v = singular::w10_eval(xi, tau, a);
                burgers = std::max(burgers, std::abs(d1(wt, tau) + a * v * d1(wx, xi) - d2(wx, xi)));
            }
        }
    }
    char value[64];
    std::snprintf(value, sizeof value, "%.10f", l00);
    const bool pass = five_digits && closed_ok && heat < 1e-6 && burgers < 1e-5;
    return {pass, std::string("Lambda(0,0) = ") + value + " (5 digits vs 1.52441: " + (five_digits ? "match" : "NO") +
                      ", closed form " + (closed_ok ? "match" : "NO") + "), heat residual " + fmt(heat) +
                      ", w10 residual " + fmt(burgers)};
}

// 7. reference solver against Cole-Hopf, default resolution and one halving
Outcome reference_solver() {
    const auto p = smooth_burgers(0.5);
    auto err = [&](std::size_t cells) {
        solver::SolveConfig cfg;
        cfg.n_x = cells;
        const auto u = solver::fd_solve(p, cfg);
        return solver::sup_error(u, [&](double x, double t) { return solver::burgers_exact(p.init(), x, t, p.epsilon(), p.rho()); });
    };
    const std::size_t n = solver::SolveConfig{}.cells_for(p.epsilon());
    const double fine = err(n);
    const double coarse = err(n / 2);
    const double order = std::log2(coarse / fine);
    return {fine < 5e-4 && order >= 1.9,
            "sup error " + fmt(fine) + " at " + std::to_string(n) + " cells, observed order " + fmt(order)};
}

// 8. remainder order of the composite
Outcome remainder_order() {
    harness::SweepConfig cfg;
    cfg.mu_list = {0.2, 0.1, 0.05, 0.025};
    cfg.epsilon = 0.02;
    const auto report = harness::mu_sweep(FluxModel::burgers(), TailInitialData::smooth_step(1.0, 0.0), cfg);
    if (report.records.size() != cfg.mu_list.size() || !report.fit) {
        return {false, "sweep incomplete"};
    }
    bool decreasing = true;
    std::string errors;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        errors += (i ? ", " : "") + fmt(report.records[i].sup_error);
        if (i > 0 && !(report.records[i].sup_error < report.records[i - 1].sup_error)) {
            decreasing = false;
        }
    }
    const auto& f = *report.fit;
    const bool band = f.p >= 0.35 && f.p <= 0.65;
    const bool form = f.quality <= f.plain_quality;
    return {decreasing && band && form,
            "errors " + errors + (decreasing ? " (decreasing)" : " (NOT decreasing)") + "; p = " + fmt(f.p) +
                (band ? " in" : " outside") + " [0.35, 0.65]; rms residual mu^1/2|ln mu| fit " + fmt(f.quality) +
                " vs power fit " + fmt(f.plain_quality)};
}

// 9. composite at t = 1e-4 rho^2/eps reproduces the data
Outcome composite_start() {
    double worst = 0.0;
    for (double mu : {0.2, 0.1, 0.05, 0.025}) {
        const auto p = smooth_burgers(mu);
        const harness::CompositeApproximation comp(p, 1.0);
        const double t = 1e-4 * p.rho() * p.rho() / p.epsilon();
        auto xs = numerics::linspace(-1.25, 1.25, 5001);
        // resolve the width 2 sqrt(eps t) = 0.02 rho of the R000 and Gamma terms
        for (double s : numerics::linspace(-50.0, 50.0, 2001)) {
            xs.push_back(s * 0.02 * p.rho());
        }
        for (double x : xs) {
            worst = std::max(worst, std::abs(comp.eval(x, t) - p.init().eval(x / p.rho())));
        }
    }
    return {worst < 1e-3, "sup |composite - nu(x/rho)| = " + fmt(worst) + " over mu in {0.2, 0.1, 0.05, 0.025}"};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"outer recurrence exactness", 1.0, outer_exactness},
        {"outer term structure and residual", 30.0, outer_structure},
        {"inner grid vs Duhamel oracle", 300.0, inner_oracles},
        {"inner self-similar scaling", 300.0, inner_scaling},
        {"shock layer cross-validation", 120.0, shock_layer_checks},
        {"singular point identities", 60.0, singular_checks},
        {"reference solver certification", 120.0, reference_solver},
        {"remainder order reproduction", 900.0, remainder_order},
        {"composite t -> 0 consistency", 60.0, composite_start},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = out.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("criterion %zu %s: %s; %s; %.2f s (limit %.0f s%s)\n", i + 1, pass ? "PASS" : "FAIL", c.name,
                    out.detail.c_str(), secs, c.limit_s, in_time ? "" : ", EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
