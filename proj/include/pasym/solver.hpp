#pragma once

#include "pasym/fv_scheme.hpp"
#include "pasym/grid_field.hpp"
#include "pasym/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pasym::solver {

struct SolveConfig {
    double x_min = -1.5;
    double x_max = 1.5;
    std::size_t n_x = 0;  // 0: choose dx close to epsilon / 16
    double t_end = 0.5;
    std::vector<double> output_times;  // empty: {t_end}
    fv::NumericalFlux scheme = fv::NumericalFlux::godunov;
    double cfl = 0.45;
    bool second_order = true;
    // Dirichlet data from the outer partial sum of this order; 0 gives nu^-_0 and nu^+_0 exactly.
    // Algebraic tails make order 0 an O(rho/|x|) boundary error that never refines away.
    int boundary_order = 2;

    std::size_t cells_for(double epsilon) const;
    void validate() const;
};

std::string to_string(fv::NumericalFlux scheme);
fv::NumericalFlux parse_scheme(const std::string& text);  // "godunov" | "laxf"

/**
 * Conservative finite-volume solution of u_t + phi(u)_x = eps u_xx with u(x, 0) = nu(x/rho).
 * Cell averages at the requested output times; axes named x (cell centres) and t.
 * `warnings` receives an unresolved-layer note when dx > eps/4.
 */
GridField fd_solve(const ProblemInstance& problem, const SolveConfig& config,
                   std::vector<std::string>* warnings = nullptr);

/**
 * Burgers solution by the Cole-Hopf formula
 *   u = int ((x-s)/t) exp(-G/(2 eps)) ds / int exp(-G/(2 eps)) ds,
 *   G(s) = (x-s)^2/(2t) + rho N(s/rho),  N the primitive of nu.
 */
double burgers_exact(const TailInitialData& init, double x, double t, double epsilon, double rho);

struct Window {
    double x_lo = -1e300;
    double x_hi = 1e300;
    double t_lo = -1e300;
    double t_hi = 1e300;
};

// max |a - b| over nodes of `a` inside the window; b interpolated when its axes differ.
double sup_error(const GridField& a, const GridField& b, const Window& window = {});
double sup_error(const GridField& a, const std::function<double(double x, double t)>& b, const Window& window = {});

}  // namespace pasym::solver
