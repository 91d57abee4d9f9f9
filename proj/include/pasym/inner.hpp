#pragma once

#include "pasym/grid_field.hpp"
#include "pasym/model.hpp"

#include <functional>
#include <span>
#include <vector>

// Inner expansion H = sum_n mu^n h_n(sigma, omega) in the stretched variables
// sigma = x/rho, omega = eps t/rho^2, where h_0 solves the heat equation with data nu and
// each h_n, n >= 1, solves it with forcing -d/dsigma E_n and zero data.
namespace pasym::inner {

// nu- erfc(z) + nu+ erfc(-z) with erfc(z) = (1/sqrt(pi)) int_z^inf exp(-y^2) dy.
double r000_eval(double nu_minus0, double nu_plus0, double z);

// Gaussian convolution of nu at heat time omega > 0.
double h0_eval(const TailInitialData& init, double sigma, double omega);

/**
 * Pointwise E_n from the samples h[0..n-1] at one (sigma, omega).
 *
 * n == 1 gives phi(h_0). For n >= 2,
 *   E_n = sum_{q=1}^{n-1} phi^(q)(h_0)/q! * sum_{n_1+...+n_q = n-1, n_p >= 1} prod_p h_{n_p}.
 */
double forcing_potential(const FluxModel& flux, std::span<const double> h, int n);

// E_n on the common grid of h_0..h_{n-1}. n >= 2.
GridField En_assemble(std::span<const GridField> h_fields, const FluxModel& flux, int n);

enum class TimeScheme { backward_euler, trapezoidal };

struct InnerGridSpec {
    double half_width = 40.0;        // sigma in [-L, L]
    std::size_t n_sigma = 4001;
    double omega_min = 1e-2;         // first stored level after omega = 0
    double omega_max = 1.0;
    std::size_t levels_per_decade = 20;
    std::size_t substeps = 20;       // implicit steps between stored levels
    std::vector<double> extra_levels;  // stored exactly, e.g. profile extraction levels
    TimeScheme scheme = TimeScheme::backward_euler;

    // L = max(40, 10 sqrt(omega_max)), N = 4001.
    static InnerGridSpec defaults(double omega_max);

    std::vector<double> output_levels() const;  // 0, then stored levels in increasing order
};

// h_0, ..., h_{n_max} on the grid of `spec`; h_0 is sampled from h0_eval.
std::vector<GridField> solve_inner(const ProblemInstance& problem, int n_max, const InnerGridSpec& spec);

// h_n alone (computes h_1..h_{n-1} along the way).
GridField hn_solve_grid(const ProblemInstance& problem, int n, const InnerGridSpec& spec);

using FieldFn = std::function<double(double sigma, double omega)>;

struct DuhamelOptions {
    double tolerance = 1e-8;
    double y_cut = 6.0;  // Gaussian variable truncation
    unsigned max_depth = 18;
};

/**
 * h_n(sigma, omega) = - int_0^omega int K(sigma - s, omega - v) dE_n/ds ds dv,
 * with the s-derivative moved onto the heat kernel and v = omega - w^2, which leaves
 *   2 int_0^sqrt(omega) int y exp(-y^2)/sqrt(pi) E_n(sigma - 2 w y, omega - w^2) dy dw.
 */
double hn_duhamel_point(const FieldFn& potential, double sigma, double omega,
                        const DuhamelOptions& options = {});

// Same, with E_n bilinearly interpolated from a sampled field; CoverageError when the field
// does not contain sigma +/- 2 y_cut sqrt(omega) or omega. The interpolant has kinks at every
// node, so the tolerance is floored at 1e-6 and the recursion depth capped at 10.
double hn_duhamel_point(const GridField& potential, double sigma, double omega,
                        const DuhamelOptions& options = {});

// phi(h_0(sigma, omega)) evaluated by quadrature, phi(nu(sigma)) at omega <= 0.
FieldFn first_potential(const ProblemInstance& problem);

struct SelfSimilarProfile {
    std::vector<double> z;
    std::vector<double> values;
    int n = 0;
    double omega_used = 0.0;
};

// z -> h_n(2 z sqrt(omega), omega) / omega^(n/2) on z in [-z_max, z_max].
SelfSimilarProfile selfsimilar_extract(const GridField& field, int n, double omega_level,
                                       double z_max = 2.0, std::size_t n_z = 201);

}  // namespace pasym::inner
