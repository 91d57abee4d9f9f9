#pragma once

#include "pasym/model.hpp"
#include "pasym/shock_layer.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pasym::harness {

/**
 * h0(x/rho, eps t/rho^2) - R000(x / (2 sqrt(eps t))) + Gamma(x/eps, t/eps).
 *
 * Gamma is the exact Cole-Hopf layer for Burgers and a gamma_solve field otherwise, in
 * which case it only covers t <= t_max.
 */
class CompositeApproximation {
public:
    CompositeApproximation(ProblemInstance problem, double t_max, const shock_layer::ShockGridSpec& spec = {});

    const ProblemInstance& problem() const { return problem_; }
    double t_max() const { return t_max_; }
    bool exact_layer() const { return !layer_.has_value(); }

    double h0(double x, double t) const;
    double r000(double x, double t) const;
    double gamma(double x, double t) const;
    double eval(double x, double t) const;

private:
    ProblemInstance problem_;
    double t_max_;
    std::optional<shock_layer::ShockLayerField> layer_;
};

double composite_eval(const CompositeApproximation& comp, double x, double t);

enum class Schedule { fixed_epsilon, fixed_rho };

std::string to_string(Schedule schedule);
Schedule parse_schedule(const std::string& text);  // "fixed-epsilon" | "fixed-rho"

struct SweepConfig {
    std::vector<double> mu_list{0.2, 0.1, 0.05, 0.025};
    Schedule schedule = Schedule::fixed_epsilon;
    double epsilon = 0.02;  // held when schedule is fixed_epsilon
    double rho = 0.002;     // held when schedule is fixed_rho
    double t_eval = 0.5;
    double layer_half_width = 10.0;  // in units of eps, around x = c t_eval
    double x_min = -1.5;
    double x_max = 1.5;
    double margin = 0.25;            // global window is [x_min + margin, x_max - margin]
    double samples_per_epsilon = 40.0;
    bool record_runtime = true;      // false writes runtime 0 so reports are byte-identical

    void validate() const;
};

struct SweepRecord {
    double mu = 0.0;
    double epsilon = 0.0;
    double rho = 0.0;
    double t_eval = 0.0;
    double sup_error = 0.0;         // layer window
    double sup_error_global = 0.0;  // global window
    double runtime_s = 0.0;
};

struct SweepFailure {
    double mu = 0.0;
    std::string message;
};

struct FitResult {
    double p = 0.0;              // slope of log E against log mu
    double intercept = 0.0;
    double plain_quality = 0.0;  // rms residual of the power fit
    double log_law_constant = 0.0; // C in E = C mu^{1/2} |ln mu|
    double quality = 0.0;        // rms residual of that fit
};

struct SweepReport {
    std::vector<SweepRecord> records;
    std::vector<SweepFailure> failures;
    std::optional<FitResult> fit;
    std::vector<std::pair<std::string, std::string>> config;  // echoed in insertion order
};

// Builds the instance for one mu under the schedule.
ProblemInstance sweep_instance(const FluxModel& flux, const TailInitialData& init, double mu,
                               const SweepConfig& config);

/**
 * For each mu: composite vs reference at t_eval, sup over the layer window |x - c t| <= W eps
 * and over the global window. The reference is burgers_exact for Burgers and fd_solve
 * otherwise. A failing mu is listed in `failures` and the sweep goes on.
 */
SweepReport mu_sweep(const FluxModel& flux, const TailInitialData& init, const SweepConfig& config);

// Needs at least three records with positive errors; UsageError otherwise.
FitResult fit_rate(const SweepReport& report);
FitResult fit_rate(const std::vector<double>& mu, const std::vector<double>& error);

enum class ReportFormat { csv, json };

ReportFormat parse_format(const std::string& text);

/**
 * CSV: header mu,epsilon,rho,t_eval,sup_error,runtime_s,sup_error_global and one row per record.
 * JSON: {"records": [...], "fit": {...}, "config": {...}, "failures": [...]}.
 * Reals carry 17 significant digits in CSV and the shortest exact form in JSON.
 */
void write_report(const SweepReport& report, std::ostream& out, ReportFormat format);
void emit_report(const SweepReport& report, const std::string& path, ReportFormat format);

SweepReport read_report(std::istream& in, ReportFormat format);
SweepReport load_report(const std::string& path, ReportFormat format);

}  // namespace pasym::harness
