#include "pasym/harness.hpp"

#include "pasym/errors.hpp"
#include "pasym/grid_field.hpp"
#include "pasym/inner.hpp"
#include "pasym/numerics.hpp"
#include "pasym/solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace pasym::harness {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCsvHeader = "mu,epsilon,rho,t_eval,sup_error,runtime_s,sup_error_global";

void require_positive_time(double t) {
    if (!(t > 0.0)) {
        throw DomainError("composite: t must be positive");
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream in(line);
    std::string item;
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    return out;
}

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw UsageError("report: '" + text + "' is not a number");
    }
    return value;
}

}  // namespace

CompositeApproximation::CompositeApproximation(ProblemInstance problem, double t_max,
                                               const shock_layer::ShockGridSpec& spec)
    : problem_(std::move(problem)), t_max_(t_max) {
    const double mu = problem_.mu();
    if (!(mu > 0.0 && mu < 1.0)) {
        throw DomainError("composite: mu must lie in (0, 1)");
    }
    require_positive_time(t_max);
    if (!problem_.flux().is_burgers()) {
        auto grid = spec;
        layer_ = shock_layer::gamma_solve(problem_.flux(), problem_.nu_minus0(), problem_.nu_plus0(),
                                          t_max / problem_.epsilon(), grid);
    }
}

double CompositeApproximation::h0(double x, double t) const {
    require_positive_time(t);
    const double rho = problem_.rho();
    return inner::h0_eval(problem_.init(), x / rho, problem_.epsilon() * t / (rho * rho));
}

double CompositeApproximation::r000(double x, double t) const {
    require_positive_time(t);
    return inner::r000_eval(problem_.nu_minus0(), problem_.nu_plus0(), x / (2.0 * std::sqrt(problem_.epsilon() * t)));
}

double CompositeApproximation::gamma(double x, double t) const {
    require_positive_time(t);
    const double eta = x / problem_.epsilon();
    const double theta = t / problem_.epsilon();
    if (layer_) {
        return layer_->eval(eta, theta);
    }
    return shock_layer::burgers_gamma_exact(problem_.nu_minus0(), problem_.nu_plus0(), eta, theta);
}

double CompositeApproximation::eval(double x, double t) const { return h0(x, t) - r000(x, t) + gamma(x, t); }

double composite_eval(const CompositeApproximation& comp, double x, double t) { return comp.eval(x, t); }

std::string to_string(Schedule schedule) {
    return schedule == Schedule::fixed_epsilon ? "fixed-epsilon" : "fixed-rho";
}

Schedule parse_schedule(const std::string& text) {
    if (text == "fixed-epsilon") {
        return Schedule::fixed_epsilon;
    }
    if (text == "fixed-rho") {
        return Schedule::fixed_rho;
    }
    throw UsageError("unknown schedule '" + text + "' (expected fixed-epsilon or fixed-rho)");
}

void SweepConfig::validate() const {
    if (mu_list.empty()) {
        throw UsageError("sweep: empty mu list");
    }
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        if (!(mu_list[i] > 0.0 && mu_list[i] < 1.0)) {
            throw UsageError("sweep: every mu must lie in (0, 1)");
        }
        if (i > 0 && !(mu_list[i] < mu_list[i - 1])) {
            throw UsageError("sweep: mu values must be strictly decreasing");
        }
    }
    if (!(epsilon > 0.0) || !(rho > 0.0)) {
        throw UsageError("sweep: epsilon and rho must be positive");
    }
    if (!(t_eval > 0.0)) {
        throw UsageError("sweep: t_eval must be positive");
    }
    if (!(layer_half_width > 0.0) || !(samples_per_epsilon >= 1.0)) {
        throw UsageError("sweep: layer window and sampling density must be positive");
    }
    if (!(x_max - x_min > 2.0 * margin) || margin < 0.0) {
        throw UsageError("sweep: global window is empty");
    }
}

ProblemInstance sweep_instance(const FluxModel& flux, const TailInitialData& init, double mu,
                               const SweepConfig& config) {
    if (config.schedule == Schedule::fixed_epsilon) {
        return ProblemInstance(flux, init, config.epsilon, mu * config.epsilon);
    }
    return ProblemInstance(flux, init, config.rho / mu, config.rho);
}

SweepReport mu_sweep(const FluxModel& flux, const TailInitialData& init, const SweepConfig& config) {
    config.validate();
    SweepReport report;
    for (double mu : config.mu_list) {
        const auto start = std::chrono::steady_clock::now();
        try {
            const ProblemInstance problem = sweep_instance(flux, init, mu, config);
            const auto issues = validate_problem(problem);
            if (!issues.empty()) {
                std::string text = "invalid instance:";
                for (const auto& issue : issues) {
                    text += " " + issue + ";";
                }
                throw DomainError(text);
            }
            const double eps = problem.epsilon();
            const double t = config.t_eval;
            const CompositeApproximation comp(problem, t);
            const double centre = shock_speed(flux, problem.nu_minus0(), problem.nu_plus0()) * t;
            const double dx = eps / config.samples_per_epsilon;

            std::function<double(double)> reference;
            std::optional<GridField> fd;
            if (flux.is_burgers()) {
                reference = [&](double x) { return solver::burgers_exact(init, x, t, eps, problem.rho()); };
            } else {
                solver::SolveConfig sc;
                sc.x_min = config.x_min;
                sc.x_max = config.x_max;
                sc.t_end = t;
                fd = solver::fd_solve(problem, sc);
                reference = [&](double x) { return fd->interpolate(x, t); };
            }
            auto sup_over = [&](double lo, double hi) {
                const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / dx)) + 1;
                double worst = 0.0;
                for (double x : numerics::linspace(lo, hi, n)) {
                    worst = std::max(worst, std::abs(comp.eval(x, t) - reference(x)));
                }
                return worst;
            };
            const double w = config.layer_half_width * eps;
            SweepRecord rec;
            rec.mu = mu;
            rec.epsilon = eps;
            rec.rho = problem.rho();
            rec.t_eval = t;
            rec.sup_error = sup_over(centre - w, centre + w);
            rec.sup_error_global = sup_over(config.x_min + config.margin, config.x_max - config.margin);
            if (config.record_runtime) {
                rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
            report.records.push_back(rec);
        } catch (const Error& e) {
            report.failures.push_back({mu, e.what()});
        }
    }
    if (report.records.size() >= 3) {
        try {
            report.fit = fit_rate(report);
        } catch (const UsageError& e) {
            report.failures.push_back({0.0, std::string("fit: ") + e.what()});
        }
    }

    auto echo = [&](std::string key, std::string value) { report.config.emplace_back(std::move(key), std::move(value)); };
    echo("flux", flux.name());
    echo("init", init.name());
    std::string mus;
    for (double mu : config.mu_list) {
        mus += (mus.empty() ? "" : ",") + format_real(mu);
    }
    echo("mu_list", mus);
    echo("schedule", to_string(config.schedule));
    echo("epsilon", format_real(config.epsilon));
    echo("rho", format_real(config.rho));
    echo("t_eval", format_real(config.t_eval));
    echo("layer_half_width", format_real(config.layer_half_width));
    echo("x_min", format_real(config.x_min));
    echo("x_max", format_real(config.x_max));
    echo("margin", format_real(config.margin));
    echo("samples_per_epsilon", format_real(config.samples_per_epsilon));
    echo("record_runtime", config.record_runtime ? "true" : "false");
    return report;
}

FitResult fit_rate(const std::vector<double>& mu, const std::vector<double>& error) {
    if (mu.size() != error.size() || mu.size() < 3) {
        throw UsageError("fit_rate: need at least three records");
    }
    std::vector<double> lm;
    std::vector<double> le;
    std::vector<double> lg;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > 0.0 && mu[i] < 1.0) || !(error[i] > 0.0)) {
            throw UsageError("fit_rate: need 0 < mu < 1 and positive errors");
        }
        lm.push_back(std::log(mu[i]));
        le.push_back(std::log(error[i]));
        lg.push_back(0.5 * lm.back() + std::log(-lm.back()));
    }
    const auto plain = numerics::least_squares_line(lm, le);
    FitResult fit;
    fit.p = plain.slope;
    fit.intercept = plain.intercept;
    fit.plain_quality = plain.rms_residual;
    // E = C mu^{1/2} |ln mu|: only the constant is free
    double shift = 0.0;
    for (std::size_t i = 0; i < le.size(); ++i) {
        shift += le[i] - lg[i];
    }
    shift /= static_cast<double>(le.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < le.size(); ++i) {
        const double r = le[i] - lg[i] - shift;
        ss += r * r;
    }
    fit.log_law_constant = std::exp(shift);
    fit.quality = std::sqrt(ss / static_cast<double>(le.size()));
    return fit;
}

FitResult fit_rate(const SweepReport& report) {
    std::vector<double> mu;
    std::vector<double> error;
    for (const auto& r : report.records) {
        mu.push_back(r.mu);
        error.push_back(r.sup_error);
    }
    return fit_rate(mu, error);
}

ReportFormat parse_format(const std::string& text) {
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "json") {
        return ReportFormat::json;
    }
    throw UsageError("unknown format '" + text + "' (expected csv or json)");
}

void write_report(const SweepReport& report, std::ostream& out, ReportFormat format) {
    if (format == ReportFormat::csv) {
        out << kCsvHeader << '\n';
        for (const auto& r : report.records) {
            out << format_real(r.mu) << ',' << format_real(r.epsilon) << ',' << format_real(r.rho) << ','
                << format_real(r.t_eval) << ',' << format_real(r.sup_error) << ',' << format_real(r.runtime_s) << ','
                << format_real(r.sup_error_global) << '\n';
        }
        return;
    }
    Json doc;
    doc["records"] = Json::array();
    for (const auto& r : report.records) {
        doc["records"].push_back({{"mu", r.mu},
                                  {"epsilon", r.epsilon},
                                  {"rho", r.rho},
                                  {"t_eval", r.t_eval},
                                  {"sup_error", r.sup_error},
                                  {"runtime_s", r.runtime_s},
                                  {"sup_error_global", r.sup_error_global}});
    }
    if (report.fit) {
        const auto& f = *report.fit;
        doc["fit"] = {{"p", f.p},
                      {"quality", f.quality},
                      {"intercept", f.intercept},
                      {"plain_quality", f.plain_quality},
                      {"log_law_constant", f.log_law_constant}};
    } else {
        doc["fit"] = nullptr;
    }
    doc["config"] = Json::object();
    for (const auto& [key, value] : report.config) {
        doc["config"][key] = value;
    }
    doc["failures"] = Json::array();
    for (const auto& f : report.failures) {
        doc["failures"].push_back({{"mu", f.mu}, {"message", f.message}});
    }
    out << doc.dump(2) << '\n';
}

void emit_report(const SweepReport& report, const std::string& path, ReportFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_report(report, out, format);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

SweepReport read_report(std::istream& in, ReportFormat format) {
    SweepReport report;
    if (format == ReportFormat::csv) {
        std::string line;
        if (!std::getline(in, line)) {
            throw UsageError("report: missing CSV header");
        }
        const auto head = split(line, ',');
        if (head.size() < 6 || line.rfind("mu,epsilon,rho,t_eval,sup_error,runtime_s", 0) != 0) {
            throw UsageError("report: unexpected CSV header '" + line + "'");
        }
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const auto cells = split(line, ',');
            if (cells.size() != head.size()) {
                throw UsageError("report: row '" + line + "' has the wrong number of fields");
            }
            SweepRecord r;
            r.mu = parse_real(cells[0]);
            r.epsilon = parse_real(cells[1]);
            r.rho = parse_real(cells[2]);
            r.t_eval = parse_real(cells[3]);
            r.sup_error = parse_real(cells[4]);
            r.runtime_s = parse_real(cells[5]);
            if (cells.size() > 6) {
                r.sup_error_global = parse_real(cells[6]);
            }
            report.records.push_back(r);
        }
        return report;
    }
    Json doc;
    try {
        doc = Json::parse(in);
        for (const auto& j : doc.at("records")) {
            SweepRecord r;
            r.mu = j.at("mu").get<double>();
            r.epsilon = j.at("epsilon").get<double>();
            r.rho = j.at("rho").get<double>();
            r.t_eval = j.at("t_eval").get<double>();
            r.sup_error = j.at("sup_error").get<double>();
            r.runtime_s = j.at("runtime_s").get<double>();
            r.sup_error_global = j.value("sup_error_global", 0.0);
            report.records.push_back(r);
        }
        if (doc.contains("fit") && !doc["fit"].is_null()) {
            const auto& j = doc["fit"];
            FitResult f;
            f.p = j.at("p").get<double>();
            f.quality = j.at("quality").get<double>();
            f.intercept = j.value("intercept", 0.0);
            f.plain_quality = j.value("plain_quality", 0.0);
            f.log_law_constant = j.value("log_law_constant", 0.0);
            report.fit = f;
        }
        if (doc.contains("config")) {
            for (const auto& [key, value] : doc["config"].items()) {
                report.config.emplace_back(key, value.get<std::string>());
            }
        }
        if (doc.contains("failures")) {
            for (const auto& j : doc["failures"]) {
                report.failures.push_back({j.at("mu").get<double>(), j.at("message").get<std::string>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("report: malformed JSON: ") + e.what());
    }
    return report;
}

SweepReport load_report(const std::string& path, ReportFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    return read_report(in, format);
}

}  // namespace pasym::harness
