#include "pasym/inner.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pasym::inner {

namespace {

constexpr double kGaussCut = 6.0;

double inv_sqrt_pi() { return 1.0 / std::sqrt(std::numbers::pi); }

}  // namespace

double r000_eval(double nu_minus0, double nu_plus0, double z) {
    return nu_minus0 * numerics::half_erfc(z) + nu_plus0 * numerics::half_erfc(-z);
}

double h0_eval(const TailInitialData& init, double sigma, double omega) {
    if (!(omega > 0.0)) {
        throw DomainError("h0_eval: omega must be positive");
    }
    const double width = 2.0 * std::sqrt(omega);
    // y-coordinates of the points where nu is rough, plus the origin where the data lives.
    std::vector<double> breaks;
    auto add_break = [&](double s) {
        const double y = (s - sigma) / width;
        if (std::abs(y) < kGaussCut) {
            breaks.push_back(y);
        }
    };
    for (double b : init.breakpoints()) {
        add_break(b);
    }
    add_break(0.0);
    add_break(-TailInitialData::kTailCutoff);
    add_break(TailInitialData::kTailCutoff);

    auto integrand = [&](double y) {
        return init.eval_with_tail(sigma + width * y) * std::exp(-y * y);
    };
    numerics::QuadTolerance tol;
    tol.absolute = 1e-11 * std::max(1.0, init.bound());
    const double core = numerics::integrate_split(integrand, -kGaussCut, kGaussCut, breaks, tol).value;
    const double tails = numerics::half_erfc(kGaussCut) *
                         (init.eval_with_tail(sigma - width * kGaussCut) + init.eval_with_tail(sigma + width * kGaussCut));
    return core * inv_sqrt_pi() + tails;
}

double forcing_potential(const FluxModel& flux, std::span<const double> h, int n) {
    if (n < 1 || h.size() < static_cast<std::size_t>(n)) {
        throw IndexError("forcing_potential: need h_0..h_{n-1} for n >= 1");
    }
    if (n == 1) {
        return flux.eval(h[0]);
    }
    const int total = n - 1;
    // power[m] = sum over ordered q-tuples of indices >= 1 summing to m of prod h_j
    std::vector<double> power(total + 1, 0.0);
    std::vector<double> next(total + 1, 0.0);
    power[0] = 1.0;
    double result = 0.0;
    double factorial = 1.0;
    for (int q = 1; q <= total; ++q) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int m = q; m <= total; ++m) {
            double acc = 0.0;
            for (int j = 1; j <= m - (q - 1); ++j) {
                acc += h[j] * power[m - j];
            }
            next[m] = acc;
        }
        power.swap(next);
        factorial *= q;
        if (power[total] != 0.0) {
            result += flux.derivative(q, h[0]) / factorial * power[total];
        }
    }
    return result;
}

GridField En_assemble(std::span<const GridField> h_fields, const FluxModel& flux, int n) {
    if (n < 1 || h_fields.size() < static_cast<std::size_t>(n)) {
        throw IndexError("En_assemble: need h_0..h_{n-1}");
    }
    for (int j = 1; j < n; ++j) {
        if (!h_fields[j].same_axes(h_fields[0])) {
            throw UsageError("En_assemble: fields are on different grids");
        }
    }
    const GridField& base = h_fields[0];
    std::vector<double> values(base.values().size());
    std::vector<double> sample(n);
    for (std::size_t k = 0; k < values.size(); ++k) {
        for (int j = 0; j < n; ++j) {
            sample[j] = h_fields[j].values()[k];
        }
        values[k] = forcing_potential(flux, sample, n);
    }
    return GridField(base.space(), base.time(), std::move(values), "E" + std::to_string(n));
}

InnerGridSpec InnerGridSpec::defaults(double omega_max) {
    InnerGridSpec spec;
    spec.omega_max = omega_max;
    spec.half_width = std::max(40.0, 10.0 * std::sqrt(omega_max));
    spec.n_sigma = 4001;
    spec.omega_min = std::min(1e-2, omega_max);
    return spec;
}

std::vector<double> InnerGridSpec::output_levels() const {
    if (!(omega_min > 0.0) || omega_max < omega_min) {
        throw UsageError("InnerGridSpec: need 0 < omega_min <= omega_max");
    }
    std::vector<double> levels{0.0};
    const double decades = std::log10(omega_max / omega_min);
    const auto count = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(levels_per_decade))) + 1;
    if (count <= 1 || omega_max == omega_min) {
        levels.push_back(omega_min);
    } else {
        for (double w : numerics::geomspace(omega_min, omega_max, count)) {
            levels.push_back(w);
        }
    }
    for (double w : extra_levels) {
        if (!(w > 0.0) || w > omega_max) {
            throw UsageError("InnerGridSpec: extra level outside (0, omega_max]");
        }
        levels.push_back(w);
    }
    std::sort(levels.begin(), levels.end());
    std::vector<double> unique;
    for (double w : levels) {
        if (unique.empty() || w - unique.back() > 1e-12 * std::max(1.0, w)) {
            unique.push_back(w);
        } else if (w != unique.back() && std::find(extra_levels.begin(), extra_levels.end(), w) != extra_levels.end()) {
            unique.back() = w;  // keep requested levels bit-exact
        }
    }
    return unique;
}

namespace {

class InnerMarcher {
public:
    InnerMarcher(const ProblemInstance& problem, int n_max, const InnerGridSpec& spec)
        : problem_(problem), n_max_(n_max), spec_(spec),
          sigma_(numerics::linspace(-spec.half_width, spec.half_width, spec.n_sigma)),
          dsigma_(sigma_[1] - sigma_[0]) {
        if (spec.n_sigma < 5 || !(spec.half_width > 0.0) || spec.substeps == 0) {
            throw UsageError("InnerGridSpec: need n_sigma >= 5, half_width > 0 and substeps >= 1");
        }
        state_.assign(n_max + 1, std::vector<double>(sigma_.size(), 0.0));
        forcing_.assign(n_max + 1, std::vector<double>(sigma_.size(), 0.0));
    }

    std::vector<GridField> run() {
        const std::vector<double> levels = spec_.output_levels();
        std::vector<std::vector<double>> stored(n_max_ + 1);
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            state_[0][i] = problem_.init().eval_with_tail(sigma_[i]);
        }
        store(stored);
        double omega = 0.0;
        bool first = true;
        for (std::size_t level = 1; level < levels.size(); ++level) {
            const double target = levels[level];
            const std::size_t k = spec_.substeps;
            for (std::size_t j = 1; j <= k; ++j) {
                double next;
                if (j == k) {
                    next = target;
                } else if (omega == 0.0 || level == 1) {
                    // graded towards omega = 0 where h_n ~ omega^(n/2)
                    const double r = static_cast<double>(j) / static_cast<double>(k);
                    next = levels[level - 1] + (target - levels[level - 1]) * r * r;
                } else {
                    next = levels[level - 1] * std::pow(target / levels[level - 1],
                                                        static_cast<double>(j) / static_cast<double>(k));
                }
                step(omega, next, first);
                first = false;
                omega = next;
            }
            store(stored);
        }
        std::vector<GridField> out;
        for (int n = 0; n <= n_max_; ++n) {
            out.emplace_back(Axis{"sigma", sigma_}, Axis{"omega", levels}, std::move(stored[n]),
                             "h" + std::to_string(n));
        }
        return out;
    }

private:
    void store(std::vector<std::vector<double>>& stored) const {
        for (int n = 0; n <= n_max_; ++n) {
            stored[n].insert(stored[n].end(), state_[n].begin(), state_[n].end());
        }
    }

    // f = -dE_n/dsigma from the current state of h_0..h_{n-1}; zero in the boundary cells.
    void compute_forcing(int n, std::vector<double>& f) const {
        const std::size_t size = sigma_.size();
        std::vector<double> e(size);
        std::vector<double> sample(n);
        for (std::size_t i = 0; i < size; ++i) {
            for (int j = 0; j < n; ++j) {
                sample[j] = state_[j][i];
            }
            e[i] = forcing_potential(problem_.flux(), sample, n);
        }
        f[0] = 0.0;
        f[size - 1] = 0.0;
        for (std::size_t i = 1; i + 1 < size; ++i) {
            f[i] = -(e[i + 1] - e[i - 1]) / (2.0 * dsigma_);
        }
    }

    void apply_laplacian(const std::vector<double>& h, std::vector<double>& out) const {
        const std::size_t size = h.size();
        const double inv = 1.0 / (dsigma_ * dsigma_);
        out[0] = 2.0 * (h[1] - h[0]) * inv;
        out[size - 1] = 2.0 * (h[size - 2] - h[size - 1]) * inv;
        for (std::size_t i = 1; i + 1 < size; ++i) {
            out[i] = (h[i + 1] - 2.0 * h[i] + h[i - 1]) * inv;
        }
    }

    // (I - theta dw D) x = rhs with Neumann ghost rows.
    void implicit_solve(double theta_dw, std::vector<double>& rhs) const {
        const std::size_t size = rhs.size();
        const double a = theta_dw / (dsigma_ * dsigma_);
        std::vector<double> lower(size, -a), diag(size, 1.0 + 2.0 * a), upper(size, -a);
        upper[0] = -2.0 * a;
        lower[size - 1] = -2.0 * a;
        numerics::solve_tridiagonal(lower, diag, upper, rhs);
    }

    void step(double omega, double next, bool backward_euler) {
        const double dw = next - omega;
        const bool trapezoid = !backward_euler && spec_.scheme == TimeScheme::trapezoidal;
        const std::size_t size = sigma_.size();

        std::vector<std::vector<double>> old_forcing;
        std::vector<std::vector<double>> old_state;
        if (trapezoid) {
            old_forcing.resize(n_max_ + 1);
            for (int n = 1; n <= n_max_; ++n) {
                old_forcing[n].resize(size);
                compute_forcing(n, old_forcing[n]);
            }
            old_state = state_;
        }

        for (std::size_t i = 0; i < size; ++i) {
            state_[0][i] = h0_eval(problem_.init(), sigma_[i], next);
        }
        std::vector<double> lap(size);
        for (int n = 1; n <= n_max_; ++n) {
            std::vector<double>& f = forcing_[n];
            compute_forcing(n, f);
            std::vector<double> rhs(size);
            if (trapezoid) {
                apply_laplacian(old_state[n], lap);
                for (std::size_t i = 0; i < size; ++i) {
                    rhs[i] = old_state[n][i] + 0.5 * dw * (lap[i] + old_forcing[n][i] + f[i]);
                }
                implicit_solve(0.5 * dw, rhs);
            } else {
                for (std::size_t i = 0; i < size; ++i) {
                    rhs[i] = state_[n][i] + dw * f[i];
                }
                implicit_solve(dw, rhs);
            }
            const double limit = 1e8 * std::pow(1.0 + std::sqrt(next), n);
            for (double v : rhs) {
                if (!std::isfinite(v) || std::abs(v) > limit) {
                    std::ostringstream msg;
                    msg << "inner solve: h" << n << " blew up at omega = " << next;
                    throw InstabilityError(msg.str());
                }
            }
            state_[n] = std::move(rhs);
        }
    }

    const ProblemInstance& problem_;
    int n_max_;
    InnerGridSpec spec_;
    std::vector<double> sigma_;
    double dsigma_;
    std::vector<std::vector<double>> state_;
    std::vector<std::vector<double>> forcing_;
};

}  // namespace

std::vector<GridField> solve_inner(const ProblemInstance& problem, int n_max, const InnerGridSpec& spec) {
    if (n_max < 0) {
        throw IndexError("solve_inner: n_max must be non-negative");
    }
    return InnerMarcher(problem, n_max, spec).run();
}

GridField hn_solve_grid(const ProblemInstance& problem, int n, const InnerGridSpec& spec) {
    auto fields = solve_inner(problem, n, spec);
    return std::move(fields[n]);
}

double hn_duhamel_point(const FieldFn& potential, double sigma, double omega, const DuhamelOptions& options) {
    if (!(omega > 0.0)) {
        throw DomainError("hn_duhamel_point: omega must be positive");
    }
    const double cut = options.y_cut;
    numerics::QuadTolerance inner_tol;
    inner_tol.absolute = 0.1 * options.tolerance;
    inner_tol.relative = 1e-12;
    inner_tol.max_depth = options.max_depth;
    numerics::QuadTolerance outer_tol;
    outer_tol.max_depth = options.max_depth;
    outer_tol.absolute = options.tolerance;
    outer_tol.relative = 1e-12;

    auto inner = [&](double w) {
        if (w == 0.0) {
            return 0.0;
        }
        const double v = omega - w * w;
        auto integrand = [&](double y) {
            return y * std::exp(-y * y) * potential(sigma - 2.0 * w * y, std::max(v, 0.0));
        };
        // potential(., 0) may jump at the origin
        const double y0 = sigma / (2.0 * w);
        std::vector<double> breaks;
        if (std::abs(y0) < cut) {
            breaks.push_back(y0);
        }
        return numerics::integrate_split(integrand, -cut, cut, breaks, inner_tol).value;
    };
    const double value = numerics::integrate(inner, 0.0, std::sqrt(omega), outer_tol).value;
    return 2.0 * inv_sqrt_pi() * value;
}

double hn_duhamel_point(const GridField& potential, double sigma, double omega, const DuhamelOptions& options) {
    const auto& xs = potential.space().nodes;
    const auto& ts = potential.time().nodes;
    const double reach = 2.0 * options.y_cut * std::sqrt(omega);
    if (sigma - reach < xs.front() || sigma + reach > xs.back() || omega > ts.back() || ts.front() > 0.0) {
        std::ostringstream msg;
        msg << "hn_duhamel_point: field '" << potential.label() << "' does not cover sigma = " << sigma
            << " +/- " << reach << " for omega in [0, " << omega << "]";
        throw CoverageError(msg.str());
    }
    FieldFn fn = [&potential](double s, double w) { return potential.interpolate(s, w); };
    DuhamelOptions coarse = options;
    coarse.tolerance = std::max(options.tolerance, 1e-6);
    coarse.max_depth = std::min(options.max_depth, 10u);
    return hn_duhamel_point(fn, sigma, omega, coarse);
}

FieldFn first_potential(const ProblemInstance& problem) {
    return [&problem](double sigma, double omega) {
        if (omega <= 0.0) {
            return problem.flux().eval(problem.init().eval_with_tail(sigma));
        }
        return problem.flux().eval(h0_eval(problem.init(), sigma, omega));
    };
}

SelfSimilarProfile selfsimilar_extract(const GridField& field, int n, double omega_level, double z_max,
                                       std::size_t n_z) {
    if (!(omega_level > 0.0) || n_z < 2 || !(z_max > 0.0)) {
        throw UsageError("selfsimilar_extract: need omega > 0, z_max > 0 and n_z >= 2");
    }
    const std::size_t it = field.time_index(omega_level);
    const double root = std::sqrt(field.time().nodes[it]);
    const auto& xs = field.space().nodes;
    if (-2.0 * z_max * root < xs.front() || 2.0 * z_max * root > xs.back()) {
        throw CoverageError("selfsimilar_extract: sigma window exceeds the grid");
    }
    SelfSimilarProfile profile;
    profile.n = n;
    profile.omega_used = field.time().nodes[it];
    profile.z = numerics::linspace(-z_max, z_max, n_z);
    const double scale = std::pow(profile.omega_used, 0.5 * n);
    for (double z : profile.z) {
        profile.values.push_back(numerics::interp_cubic(xs, field.row(it), 2.0 * z * root) / scale);
    }
    return profile;
}

}  // namespace pasym::inner
