#pragma once

#include "pasym/fv_scheme.hpp"
#include "pasym/grid_field.hpp"
#include "pasym/model.hpp"

#include <vector>

// Unit-viscosity shock layer Gamma_theta + phi(Gamma)_eta = Gamma_eta_eta with step data
// nu^-_0 (eta < 0), nu^+_0 (eta >= 0), solved in the co-moving coordinate zeta = eta - c theta.
namespace pasym::shock_layer {

struct ShockLayerField {
    GridField field;  // axes zeta, theta
    double nu_minus0 = 0.0;
    double nu_plus0 = 0.0;
    double speed = 0.0;

    // Gamma at (eta, theta); far-field states outside the zeta range, CoverageError past theta_max.
    double eval(double eta, double theta) const;
};

enum class FarField { dirichlet, neumann };

struct ShockGridSpec {
    double half_width = 0.0;      // 0: max(50, 10 sqrt(theta_max))
    std::size_t n_cells = 2001;   // forced odd so the centre cell straddles zeta = 0
    std::size_t n_theta = 51;     // stored levels, uniform in [0, theta_max]
    std::vector<double> extra_levels;
    double cfl = 0.45;
    fv::NumericalFlux scheme = fv::NumericalFlux::godunov;
    FarField far_field = FarField::dirichlet;
    double boundary_tolerance = 1e-6;
};

/**
 * Finite-volume solve in the co-moving frame with flux phi(u) - c u and unit viscosity.
 * The step is regularized over the centre cell (its average is the mean state).
 * Throws DomainTooSmallError when a boundary cell drifts more than boundary_tolerance from its
 * far-field state, InternalConsistencyError when the maximum principle or monotonicity fails.
 */
ShockLayerField gamma_solve(const FluxModel& flux, double nu_minus0, double nu_plus0, double theta_max,
                            const ShockGridSpec& spec = {});

/**
 * Travelling profile g' = phi(g) - c g + (c nu^+_0 - phi(nu^+_0)), g(0) = mean, integrated
 * from 0 towards each requested zeta with an adaptive Dormand-Prince stepper.
 */
std::vector<double> traveling_wave(const FluxModel& flux, double nu_minus0, double nu_plus0,
                                   const std::vector<double>& zeta);

// Exact Burgers layer from the Cole-Hopf transform of the step, evaluated in log space.
double burgers_gamma_exact(double nu_minus0, double nu_plus0, double eta, double theta);

}  // namespace pasym::shock_layer
