#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pasym {

// Which side of the shock line x = ct a quantity belongs to.
enum class Side { minus, plus };

std::string_view to_string(Side side);
Side parse_side(std::string_view text);

/**
 * Flux phi(u) of the conservation law u_t + phi(u)_x = eps u_xx.
 *
 * Derivatives are supplied exactly by the caller: the outer recurrence multiplies
 * phi^(q)(nu0)/q! into every coefficient, so a finite-difference fallback would
 * contaminate all of them. derivative(0, u) is phi itself.
 */
class FluxModel {
public:
    using DerivativeFn = std::function<double(int order, double u)>;

    static constexpr int kAllOrders = std::numeric_limits<int>::max();

    FluxModel(std::string name, DerivativeFn derivative, int max_order, bool is_burgers = false);

    double eval(double u) const { return derivative(0, u); }
    double derivative(int order, double u) const;
    int max_order() const { return max_order_; }
    const std::string& name() const { return name_; }
    bool is_burgers() const { return is_burgers_; }

    // phi(u) = u^2/2
    static FluxModel burgers();
    // phi(u) = u^2/2 + u^3/6, convex for u > -1
    static FluxModel cubic();
    // phi(u) = exp(u)
    static FluxModel exponential();
    // phi(u) = sum_k coeffs[k] u^k
    static FluxModel polynomial(std::vector<double> coeffs);

private:
    std::string name_;
    DerivativeFn derivative_;
    int max_order_;
    bool is_burgers_;
};

// True when phi'' > 0 at `samples` uniformly spaced points of [lo, hi].
bool is_convex_on(const FluxModel& flux, double lo, double hi, int samples = 256);

/**
 * Bounded initial profile nu(sigma) together with its one-sided expansions
 * nu(sigma) ~ sum_n nu^{+/-}_n sigma^{-n} as sigma -> +/-inf.
 */
class TailInitialData {
public:
    using Fn = std::function<double(double)>;

    struct Parts {
        std::string name;
        Fn eval;
        std::vector<double> tail_minus;  // nu^-_0, nu^-_1, ...
        std::vector<double> tail_plus;   // nu^+_0, nu^+_1, ...
        double lower = 0.0;              // inf nu
        double upper = 0.0;              // sup nu
        std::vector<double> breakpoints; // points where nu is not smooth
        Fn primitive;                    // int_0^sigma nu; built by quadrature when empty
    };

    // Beyond this |sigma| the quadrature routines use the tail partial sum.
    static constexpr double kTailCutoff = 1e3;

    explicit TailInitialData(Parts parts);

    double eval(double sigma) const { return parts_.eval(sigma); }
    // eval for |sigma| <= kTailCutoff, tail partial sum beyond.
    double eval_with_tail(double sigma) const;
    double tail_coeff(Side side, int m) const;
    int tail_order() const;
    double tail_sum(Side side, double sigma) const;
    double far_state(Side side) const { return tail_coeff(side, 0); }

    double bound() const;
    double lower() const { return parts_.lower; }
    double upper() const { return parts_.upper; }
    std::span<const double> breakpoints() const { return parts_.breakpoints; }
    const std::string& name() const { return parts_.name; }

    // int_0^sigma nu(r) dr
    double primitive(double sigma) const { return parts_.primitive(sigma); }

    static TailInitialData step(double nu_minus, double nu_plus);
    // (nu+ + nu-)/2 + (nu+ - nu-) atan(sigma)/pi
    static TailInitialData smooth_step(double nu_minus, double nu_plus, int tail_order = 16);
    static TailInitialData constant(double value);
    // Piecewise-linear table inside [sigma.front(), sigma.back()], tail sums outside.
    static TailInitialData tabulated(std::vector<double> sigma, std::vector<double> values,
                                     std::vector<double> tail_minus, std::vector<double> tail_plus);

private:
    Parts parts_;
};

// int_0^sigma nu by cumulative Gauss-Kronrod on unit cells, closed-form tail integrals beyond
// kTailCutoff.
TailInitialData::Fn make_cumulative_primitive(const TailInitialData::Fn& eval,
                                              std::vector<double> tail_minus,
                                              std::vector<double> tail_plus,
                                              std::vector<double> breakpoints);

/// Flux, initial data and the two small parameters. mu = rho/eps.
class ProblemInstance {
public:
    ProblemInstance(FluxModel flux, TailInitialData init, double epsilon, double rho);

    const FluxModel& flux() const { return flux_; }
    const TailInitialData& init() const { return init_; }
    double epsilon() const { return epsilon_; }
    double rho() const { return rho_; }
    double mu() const { return rho_ / epsilon_; }
    double nu_minus0() const { return init_.far_state(Side::minus); }
    double nu_plus0() const { return init_.far_state(Side::plus); }
    double far_state(Side side) const { return init_.far_state(side); }

private:
    FluxModel flux_;
    TailInitialData init_;
    double epsilon_;
    double rho_;
};

// Rankine-Hugoniot speed (phi(nu+) - phi(nu-))/(nu+ - nu-).
double shock_speed(const FluxModel& flux, double nu_minus0, double nu_plus0);

// Entropy solution of the inviscid step problem. On x = ct the right state is returned.
double limit_solution(const ProblemInstance& problem, double x, double t);

// Violated invariants of the instance, empty when valid. Never throws.
std::vector<std::string> validate_problem(const ProblemInstance& problem);

}  // namespace pasym
