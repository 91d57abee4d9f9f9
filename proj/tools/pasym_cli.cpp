#include "pasym/errors.hpp"
#include "pasym/grid_field.hpp"
#include "pasym/harness.hpp"
#include "pasym/inner.hpp"
#include "pasym/numerics.hpp"
#include "pasym/outer.hpp"
#include "pasym/shock_layer.hpp"
#include "pasym/singular.hpp"
#include "pasym/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace pasym;

namespace {

constexpr int kExitError = 1;
constexpr int kExitValidation = 2;

struct Globals {
    std::string flux = "burgers";
    std::vector<double> flux_coeffs;
    std::string init = "smoothstep";
    double nu_minus = 1.0;
    double nu_plus = 0.0;
    std::string init_file;
    std::vector<double> tail_minus;
    std::vector<double> tail_plus;
    double epsilon = 0.02;
    double mu = 0.1;
    std::string output = "-";
    std::string format = "csv";
};

FluxModel make_flux(const Globals& g) {
    if (g.flux == "burgers") {
        return FluxModel::burgers();
    }
    if (g.flux == "cubic") {
        return FluxModel::cubic();
    }
    if (g.flux == "custom") {
        if (g.flux_coeffs.empty()) {
            throw UsageError("--flux custom needs --flux-coeffs c0,c1,...");
        }
        return FluxModel::polynomial(g.flux_coeffs);
    }
    throw UsageError("unknown flux '" + g.flux + "'");
}

// Two columns sigma,value; a header line is skipped when it does not parse.
TailInitialData read_init_table(const Globals& g) {
    std::ifstream in(g.init_file);
    if (!in) {
        throw IoError("cannot open '" + g.init_file + "' for reading");
    }
    std::vector<double> sigma;
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double s = 0.0;
        double v = 0.0;
        if (row >> s >> v) {
            sigma.push_back(s);
            values.push_back(v);
        }
    }
    auto tail_minus = g.tail_minus;
    auto tail_plus = g.tail_plus;
    if (tail_minus.empty() && !values.empty()) {
        tail_minus = {values.front()};
    }
    if (tail_plus.empty() && !values.empty()) {
        tail_plus = {values.back()};
    }
    return TailInitialData::tabulated(std::move(sigma), std::move(values), std::move(tail_minus), std::move(tail_plus));
}

TailInitialData make_init(const Globals& g) {
    if (g.init == "step") {
        return TailInitialData::step(g.nu_minus, g.nu_plus);
    }
    if (g.init == "smoothstep") {
        return TailInitialData::smooth_step(g.nu_minus, g.nu_plus);
    }
    if (g.init == "custom") {
        if (g.init_file.empty()) {
            throw UsageError("--init custom needs --init-file <csv of sigma,value>");
        }
        return read_init_table(g);
    }
    throw UsageError("unknown init '" + g.init + "'");
}

ProblemInstance make_problem(const Globals& g) {
    return ProblemInstance(make_flux(g), make_init(g), g.epsilon, g.mu * g.epsilon);
}

void require_valid(const ProblemInstance& p) {
    const auto issues = validate_problem(p);
    if (!issues.empty()) {
        std::string text = "invalid problem:";
        for (const auto& issue : issues) {
            text += " " + issue + ";";
        }
        throw DomainError(text);
    }
}

class Sink {
public:
    explicit Sink(const std::string& path) : path_(path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw IoError("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }
    void finish() {
        out().flush();
        if (!out()) {
            throw IoError("write to '" + path_ + "' failed");
        }
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

void write_field(const GridField& f, const Globals& g) {
    Sink sink(g.output);
    if (g.format == "csv") {
        f.write_csv(sink.out());
    } else {
        nlohmann::ordered_json doc;
        doc["label"] = f.label();
        doc[f.space().name] = f.space().nodes;
        doc[f.time().name] = f.time().nodes;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t it = 0; it < f.time_size(); ++it) {
            const auto r = f.row(it);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        doc["values"] = std::move(rows);
        sink.out() << doc.dump(1) << '\n';
    }
    sink.finish();
}

int run_outer(const Globals& g, int max_order, const std::string& side_text) {
    const auto problem = make_problem(g);
    std::vector<Side> sides;
    if (side_text == "both") {
        sides = {Side::minus, Side::plus};
    } else {
        sides = {parse_side(side_text)};
    }
    Sink sink(g.output);
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    if (g.format == "csv") {
        sink.out() << "side,m,n,s,k,alpha\n";
    }
    for (Side side : sides) {
        outer::OuterTable<double> table(outer::outer_data(problem, side, max_order), max_order);
        table.populate(max_order);
        for (int m = 1; m <= max_order; ++m) {
            for (int n = 0; n < m; ++n) {
                for (const auto& [key, alpha] : table.at(m, n).terms()) {
                    if (g.format == "csv") {
                        sink.out() << to_string(side) << ',' << m << ',' << n << ',' << key.s << ',' << key.k << ','
                                   << format_real(alpha) << '\n';
                    } else {
                        doc.push_back({{"side", to_string(side)}, {"m", m}, {"n", n}, {"s", key.s}, {"k", key.k},
                                       {"alpha", alpha}});
                    }
                }
            }
        }
    }
    if (g.format == "json") {
        sink.out() << doc.dump(1) << '\n';
    }
    sink.finish();
    return 0;
}

int run_inner(const Globals& g, int n, double omega_max, const std::string& scheme) {
    const auto problem = make_problem(g);
    require_valid(problem);
    auto spec = inner::InnerGridSpec::defaults(omega_max);
    if (scheme == "trapezoidal") {
        spec.scheme = inner::TimeScheme::trapezoidal;
    }
    const auto fields = inner::solve_inner(problem, n, spec);
    write_field(fields.at(static_cast<std::size_t>(n)), g);
    return 0;
}

int run_gamma(const Globals& g, double theta_max, std::size_t cells) {
    const auto problem = make_problem(g);
    require_valid(problem);
    shock_layer::ShockGridSpec spec;
    spec.n_cells = cells;
    const auto layer = shock_layer::gamma_solve(problem.flux(), problem.nu_minus0(), problem.nu_plus0(), theta_max, spec);
    write_field(layer.field, g);
    return 0;
}

int run_lambda(const Globals& g, std::vector<double> xi, std::vector<double> tau, std::size_t n_xi, std::size_t n_tau) {
    const auto flux = make_flux(g);
    const double curvature = flux.derivative(2, 0.0);
    Sink sink(g.output);
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    if (g.format == "csv") {
        sink.out() << "xi,tau,lambda,w10\n";
    }
    for (double t : numerics::linspace(tau.at(0), tau.at(1), n_tau)) {
        for (double x : numerics::linspace(xi.at(0), xi.at(1), n_xi)) {
            const double l = singular::lambda_eval(x, t);
            const double w = singular::w10_eval(x, t, curvature) + 0.0;  // no -0 in the output
            if (g.format == "csv") {
                sink.out() << format_real(x) << ',' << format_real(t) << ',' << format_real(l) << ',' << format_real(w)
                           << '\n';
            } else {
                doc.push_back({{"xi", x}, {"tau", t}, {"lambda", l}, {"w10", w}});
            }
        }
    }
    if (g.format == "json") {
        sink.out() << doc.dump(1) << '\n';
    }
    sink.finish();
    return 0;
}

int run_solve(const Globals& g, solver::SolveConfig cfg, const std::string& scheme) {
    const auto problem = make_problem(g);
    cfg.scheme = solver::parse_scheme(scheme);
    std::vector<std::string> warnings;
    const auto u = solver::fd_solve(problem, cfg, &warnings);
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    write_field(u, g);
    return 0;
}

int run_validate(const Globals& g, harness::SweepConfig cfg, std::vector<double> p_band) {
    cfg.epsilon = g.epsilon;
    const auto report = harness::mu_sweep(make_flux(g), make_init(g), cfg);
    Sink sink(g.output);
    harness::write_report(report, sink.out(), harness::parse_format(g.format));
    sink.finish();

    bool ok = report.failures.empty() && report.fit.has_value();
    for (const auto& f : report.failures) {
        std::cerr << "mu = " << f.mu << ": " << f.message << '\n';
    }
    int violations = 0;
    for (std::size_t i = 1; i < report.records.size(); ++i) {
        if (!(report.records[i].sup_error < report.records[i - 1].sup_error)) {
            // one violation is tolerated, and only at the coarsest mu
            violations += i == 1 ? 1 : 2;
        }
    }
    ok = ok && violations <= 1;
    if (report.fit) {
        const auto& f = *report.fit;
        std::cerr << "fitted exponent p = " << f.p << " (band [" << p_band.at(0) << ", " << p_band.at(1)
                  << "]), rms residual " << f.plain_quality << "; C mu^1/2 |ln mu| fit residual " << f.quality << '\n';
        ok = ok && f.p >= p_band.at(0) && f.p <= p_band.at(1);
    }
    return ok ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic and reference solutions of u_t + phi(u)_x = eps u_xx with data nu(x/rho)"};
    app.set_config("--config", "", "key = value file mirroring the command-line flags");
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--flux", g.flux, "burgers | cubic | custom")
        ->check(CLI::IsMember({"burgers", "cubic", "custom"}))
        ->capture_default_str();
    app.add_option("--flux-coeffs", g.flux_coeffs, "polynomial coefficients c0,c1,... of a custom flux")->delimiter(',');
    app.add_option("--init", g.init, "step | smoothstep | custom")
        ->check(CLI::IsMember({"step", "smoothstep", "custom"}))
        ->capture_default_str();
    app.add_option("--nu-minus", g.nu_minus, "left state")->capture_default_str();
    app.add_option("--nu-plus", g.nu_plus, "right state")->capture_default_str();
    app.add_option("--init-file", g.init_file, "CSV of sigma,value for --init custom");
    app.add_option("--tail-minus", g.tail_minus, "nu^-_0,nu^-_1,... for --init custom")->delimiter(',');
    app.add_option("--tail-plus", g.tail_plus, "nu^+_0,nu^+_1,... for --init custom")->delimiter(',');
    app.add_option("--epsilon", g.epsilon, "viscosity")->capture_default_str();
    app.add_option("--mu", g.mu, "rho / epsilon")->capture_default_str();
    app.add_option("--output", g.output, "output path, - for stdout")->capture_default_str();
    app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    int max_order = 4;
    std::string side = "both";
    auto* outer_cmd = app.add_subcommand("outer", "outer coefficients u_{m,n} as t^s / (x - c t)^k terms");
    outer_cmd->add_option("--max-order", max_order, "highest m")->check(CLI::Range(1, 12))->capture_default_str();
    outer_cmd->add_option("--side", side, "minus | plus | both")
        ->check(CLI::IsMember({"minus", "plus", "both"}))
        ->capture_default_str();

    int n_inner = 1;
    double omega_max = 100.0;
    std::string time_scheme = "trapezoidal";
    auto* inner_cmd = app.add_subcommand("inner", "inner field h_n on a (sigma, omega) grid");
    inner_cmd->add_option("--n", n_inner, "order of h_n")->check(CLI::Range(0, 6))->capture_default_str();
    inner_cmd->add_option("--omega-max", omega_max, "last heat time")->check(CLI::PositiveNumber)->capture_default_str();
    inner_cmd->add_option("--time-scheme", time_scheme, "backward-euler | trapezoidal")
        ->check(CLI::IsMember({"backward-euler", "trapezoidal"}))
        ->capture_default_str();

    double theta_max = 5.0;
    std::size_t gamma_cells = 2001;
    auto* gamma_cmd = app.add_subcommand("gamma", "shock layer Gamma in the co-moving frame");
    gamma_cmd->add_option("--theta-max", theta_max, "last layer time")->check(CLI::PositiveNumber)->capture_default_str();
    gamma_cmd->add_option("--cells", gamma_cells, "zeta cells")->capture_default_str();

    std::vector<double> xi_range{-2.0, 2.0};
    std::vector<double> tau_range{-2.0, 2.0};
    std::size_t n_xi = 41;
    std::size_t n_tau = 41;
    auto* lambda_cmd = app.add_subcommand("lambda", "Lambda and w_{1,0} on a (xi, tau) grid");
    lambda_cmd->add_option("--xi", xi_range, "xi range lo,hi")->delimiter(',')->expected(2)->capture_default_str();
    lambda_cmd->add_option("--tau", tau_range, "tau range lo,hi")->delimiter(',')->expected(2)->capture_default_str();
    lambda_cmd->add_option("--n-xi", n_xi, "xi samples")->check(CLI::Range(2, 100000))->capture_default_str();
    lambda_cmd->add_option("--n-tau", n_tau, "tau samples")->check(CLI::Range(2, 100000))->capture_default_str();

    solver::SolveConfig solve_cfg;
    std::string scheme = "godunov";
    auto* solve_cmd = app.add_subcommand("solve", "finite-volume reference solution");
    solve_cmd->add_option("--scheme", scheme, "godunov | laxf")
        ->check(CLI::IsMember({"godunov", "laxf"}))
        ->capture_default_str();
    solve_cmd->add_option("--t-end", solve_cfg.t_end, "final time")->capture_default_str();
    solve_cmd->add_option("--output-times", solve_cfg.output_times, "snapshot times")->delimiter(',');
    solve_cmd->add_option("--n-x", solve_cfg.n_x, "cells, 0 picks dx = eps/16")->capture_default_str();
    solve_cmd->add_option("--x-min", solve_cfg.x_min)->capture_default_str();
    solve_cmd->add_option("--x-max", solve_cfg.x_max)->capture_default_str();
    solve_cmd->add_option("--cfl", solve_cfg.cfl)->capture_default_str();
    solve_cmd->add_option("--boundary-order", solve_cfg.boundary_order, "outer order of the Dirichlet data")
        ->capture_default_str();

    harness::SweepConfig sweep;
    std::vector<double> p_band{0.35, 0.65};
    bool deterministic = false;
    std::string schedule = "fixed-epsilon";
    auto* validate_cmd = app.add_subcommand("validate", "mu sweep of the composite against the reference, with rate fit");
    validate_cmd->add_option("--mu-list", sweep.mu_list, "strictly decreasing mu values")
        ->delimiter(',')
        ->capture_default_str();
    validate_cmd->add_option("--t-eval", sweep.t_eval)->capture_default_str();
    validate_cmd->add_option("--schedule", schedule, "fixed-epsilon | fixed-rho")
        ->check(CLI::IsMember({"fixed-epsilon", "fixed-rho"}))
        ->capture_default_str();
    validate_cmd->add_option("--rho", sweep.rho, "rho held by the fixed-rho schedule")->capture_default_str();
    validate_cmd->add_option("--window", sweep.layer_half_width, "layer half width in units of eps")
        ->capture_default_str();
    validate_cmd->add_option("--samples-per-epsilon", sweep.samples_per_epsilon)->capture_default_str();
    validate_cmd->add_option("--p-band", p_band, "accepted range of the fitted exponent")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    validate_cmd->add_flag("--deterministic", deterministic, "write runtime 0 so reports are byte-identical");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*outer_cmd) {
            return run_outer(g, max_order, side);
        }
        if (*inner_cmd) {
            return run_inner(g, n_inner, omega_max, time_scheme);
        }
        if (*gamma_cmd) {
            return run_gamma(g, theta_max, gamma_cells);
        }
        if (*lambda_cmd) {
            return run_lambda(g, xi_range, tau_range, n_xi, n_tau);
        }
        if (*solve_cmd) {
            return run_solve(g, solve_cfg, scheme);
        }
        if (*validate_cmd) {
            sweep.schedule = harness::parse_schedule(schedule);
            sweep.record_runtime = !deterministic;
            return run_validate(g, sweep, p_band);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
