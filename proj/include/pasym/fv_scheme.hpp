#pragma once

#include <functional>
#include <optional>
#include <vector>

// Finite-volume core for u_t + f(u)_x = nu u_xx on a uniform cell grid with Dirichlet far-field
// states. Convection: MUSCL (MC limiter) + SSPRK2 with a Godunov or Rusanov flux. Diffusion:
// TR-BDF2 (L-stable, second order), Strang-split around the convection step.
namespace pasym::fv {

enum class NumericalFlux { godunov, lax_friedrichs };

struct Conservation {
    std::function<double(double)> flux;
    std::function<double(double)> flux_prime;
    double viscosity = 0.0;
    // Where f' changes sign, if anywhere; the Godunov flux needs it. Convex flux assumed.
    std::optional<double> sonic_point;
};

// Finds f'(u*) = 0 on [lo, hi] by bisection for increasing f'; nullopt when f' keeps its sign.
std::optional<double> find_sonic_point(const std::function<double(double)>& flux_prime, double lo, double hi);

struct StepControl {
    double cfl = 0.45;
    NumericalFlux flux = NumericalFlux::godunov;
    bool limiter = true;     // MC-limited slopes; false gives unlimited central slopes
    bool second_order = true;
    bool neumann = false;    // zero-gradient ghosts instead of the Dirichlet boundary functions
};

using BoundaryFn = std::function<double(double t)>;

class FiniteVolumeSolver {
public:
    FiniteVolumeSolver(Conservation law, double x_min, double x_max, std::vector<double> cells, BoundaryFn left,
                       BoundaryFn right, StepControl control = {});

    // Marches to exactly t_target (>= current time).
    void advance_to(double t_target);

    double time() const { return time_; }
    double dx() const { return dx_; }
    std::size_t steps() const { return steps_; }
    const std::vector<double>& cells() const { return u_; }
    std::vector<double> centres() const;

    // sum u dx
    double mass() const;
    // Net boundary transport accumulated so far: int (F_left - F_right) dt including viscous fluxes.
    double boundary_inflow() const { return inflow_; }

private:
    double numerical_flux(double a, double b) const;
    double max_speed() const;
    void convect(double dt);
    void diffuse(double dt);
    void check_finite(double dt) const;

    Conservation law_;
    double x_min_;
    double x_max_;
    double dx_;
    std::vector<double> u_;
    BoundaryFn left_;
    BoundaryFn right_;
    StepControl control_;
    double time_ = 0.0;
    std::size_t steps_ = 0;
    double inflow_ = 0.0;
};

// Cell averages of a function with known primitive P on n cells of [x_min, x_max].
std::vector<double> cell_averages(const std::function<double(double)>& primitive, double x_min, double x_max,
                                  std::size_t n);

}  // namespace pasym::fv
